//! Goodness-of-fit tests for the baseline distribution.

mod conditional;
mod quad;
mod statistics;
mod variance;

pub use conditional::{
    conditional_gof_test, conditional_p_values, conditional_sample, gof_p_value_draws, gof_power, ConditionalPValues,
    GofPower, GofReport, GofStatistic, GofTestSpec, TieHandling,
};
pub use statistics::{
    estimated_cdf, evaluate, event_hazards, gof_statistics, ks_statistic, weighted_ks_statistic,
    z_statistic, GofStatistics, StatisticOptions, WEIGHT_CLAMP,
};
pub use variance::{b_coeffs, expected_gamma_at_risk, g_variance, weight_k, VarianceFunction};
