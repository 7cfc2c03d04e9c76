//! Exact Monte Carlo tests of a simple hypothesis on the stage rates.
//!
//! Both statistics are functions of the ranks only, so their null law does
//! not depend on the baseline and is simulated under a uniform one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baseline::BaselineCdf;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::estimate::{fit_profile_likelihood, profile_loglik, Degeneracy, PLFitResult};
use crate::mc::{self, critical_value_for_p, mc_p_value, McPlan, QuantileEstimate, Replicate};
use crate::model::{check_positive, static_gamma};
use crate::ranks::{RankStructure, TiePolicy};
use crate::sampling::sample_with_gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamStatistic {
    Lr,
    Wald,
}

impl fmt::Display for ParamStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamStatistic::Lr => "LR",
            ParamStatistic::Wald => "W",
        })
    }
}

impl FromStr for ParamStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lr" => Ok(ParamStatistic::Lr),
            "w" | "wald" => Ok(ParamStatistic::Wald),
            other => Err(Error::Config(format!("unknown statistic '{other}' (lr|wald)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamTestSpec {
    /// Hypothesized rates; the first entry must equal `n`.
    pub gamma0: Vec<f64>,
    pub statistic: ParamStatistic,
    pub level: f64,
    pub replications: usize,
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ParamTestSpec {
    pub fn new(gamma0: Vec<f64>, statistic: ParamStatistic) -> Self {
        Self {
            gamma0,
            statistic,
            level: 0.05,
            replications: 10_000,
            seed: 1,
            threads: None,
        }
    }

    pub fn level(mut self, level: f64) -> Self {
        self.level = level;
        self
    }

    pub fn replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidParams(format!("level {} not in (0,1)", self.level)));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParams("replications must be positive".into()));
        }
        check_positive("gamma0", &self.gamma0)?;
        if (self.gamma0[0] - n as f64).abs() > 1e-12 * n as f64 {
            return Err(Error::InvalidParams(format!(
                "gamma0[1] = {} must equal n = {n}",
                self.gamma0[0]
            )));
        }
        if self.gamma0.len() > n {
            return Err(Error::InvalidParams(format!(
                "gamma0 has {} entries but n = {n}",
                self.gamma0.len()
            )));
        }
        Ok(())
    }

    fn plan(&self) -> McPlan {
        McPlan::new(self.seed, self.replications).threads(self.threads)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Reject,
    Retain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestReport {
    pub statistic_name: String,
    pub statistic: f64,
    /// Rejection threshold consistent with the p-value rule:
    /// `statistic > critical_value` iff `p_value <= level`.
    pub critical_value: f64,
    pub p_value: f64,
    /// Standard error of the simulated `1 - level` quantile.
    pub mc_se: f64,
    pub p_value_se: f64,
    pub level: f64,
    pub decision: Decision,
    pub replications: usize,
    pub seed: u64,
    /// Null replicates with a degenerate profile fit.
    pub degenerate_replicates: usize,
}

impl TestReport {
    pub(crate) fn from_null(
        name: String,
        observed: f64,
        null: &[f64],
        level: f64,
        seed: u64,
        degenerate_replicates: usize,
    ) -> Result<Self> {
        let critical_value = critical_value_for_p(null, level);
        let p_value = mc_p_value(null, observed);
        let r = null.len() as f64;
        Ok(Self {
            statistic_name: name,
            statistic: observed,
            critical_value,
            p_value,
            mc_se: mc::quantile(null, 1.0 - level)?.se,
            p_value_se: (p_value * (1.0 - p_value) / r).sqrt(),
            level,
            decision: if observed > critical_value {
                Decision::Reject
            } else {
                Decision::Retain
            },
            replications: null.len(),
            seed,
            degenerate_replicates,
        })
    }
}

/// `ln L(gamma_hat) - ln L(gamma0)`, where a degenerate fit contributes the
/// supremum approached in the limit.
pub fn lr_statistic(ranks: &RankStructure, gamma0: &[f64], fit: &PLFitResult) -> Result<f64> {
    if fit.gamma_hat.len() != gamma0.len() {
        return Err(Error::InvalidParams("fit and gamma0 have different lengths".into()));
    }
    Ok((fit.log_likelihood - profile_loglik(gamma0, ranks)?).max(0.0))
}

/// `sum_j (gamma_hat_j / gamma0_j - 1)^2`; a vanishing rate adds 1 and a
/// diverging one makes the statistic infinite.
pub fn wald_statistic(fit: &PLFitResult, gamma0: &[f64]) -> f64 {
    fit.gamma_hat
        .iter()
        .zip(&fit.degeneracy)
        .zip(gamma0)
        .map(|((g, d), g0)| match d {
            Degeneracy::Diverging => f64::INFINITY,
            _ => (g / g0 - 1.0).powi(2),
        })
        .sum()
}

/// Both statistics from one fit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ParamStatistics {
    pub lr: f64,
    pub wald: f64,
}

impl ParamStatistics {
    pub fn get(&self, kind: ParamStatistic) -> f64 {
        match kind {
            ParamStatistic::Lr => self.lr,
            ParamStatistic::Wald => self.wald,
        }
    }
}

pub fn param_statistics(ranks: &RankStructure, n: usize, gamma0: &[f64]) -> Result<(ParamStatistics, PLFitResult)> {
    let fit = fit_profile_likelihood(ranks, n)?;
    let stats = ParamStatistics {
        lr: lr_statistic(ranks, gamma0, &fit)?,
        wald: wald_statistic(&fit, gamma0),
    };
    Ok((stats, fit))
}

/// Simulated law of both statistics for samples of `m` systems drawn with
/// rates `gamma` (the null law when `gamma = gamma0`).
pub fn simulate_statistics(
    gamma: &[f64],
    gamma0: &[f64],
    n: usize,
    m: usize,
    plan: &McPlan,
) -> Result<mc::McResult<ParamStatistics>> {
    check_positive("gamma", gamma)?;
    check_positive("gamma0", gamma0)?;
    if m < 2 {
        return Err(Error::InvalidParams("M >= 2 required".into()));
    }
    let result = mc::run(plan, |_, rng| {
        let d = sample_with_gamma(gamma, m, &BaselineCdf::Uniform, rng);
        let ranks = RankStructure::new(&d).expect("continuous samples have no ties");
        let (stats, fit) = param_statistics(&ranks, n, gamma0).expect("valid simulated fit");
        Replicate {
            value: stats,
            flagged: fit.is_degenerate(),
        }
    });
    if result.panicked > 0 {
        return Err(Error::Degenerate(format!(
            "{} simulated replicates failed",
            result.panicked
        )));
    }
    Ok(result)
}

/// The simulated `1 - level` quantile of the null law for `m` systems.
pub fn exact_critical_value(spec: &ParamTestSpec, n: usize, m: usize) -> Result<QuantileEstimate> {
    spec.validate(n)?;
    let null = simulate_statistics(&spec.gamma0, &spec.gamma0, n, m, &spec.plan())?;
    let values: Vec<f64> = null.values.iter().map(|s| s.get(spec.statistic)).collect();
    mc::quantile(&values, 1.0 - spec.level)
}

/// Tests `gamma = spec.gamma0` for the observed data.
pub fn test_parameter(data: &DataMatrix, n: usize, spec: &ParamTestSpec, ties: TiePolicy) -> Result<TestReport> {
    spec.validate(n)?;
    if spec.gamma0.len() != data.r() {
        return Err(Error::InvalidParams(format!(
            "gamma0 has {} entries, data have r={}",
            spec.gamma0.len(),
            data.r()
        )));
    }
    let ranks = RankStructure::with_policy(data, ties)?;
    let (observed, _) = param_statistics(&ranks, n, &spec.gamma0)?;
    let null = simulate_statistics(&spec.gamma0, &spec.gamma0, n, data.m(), &spec.plan())?;
    let values: Vec<f64> = null.values.iter().map(|s| s.get(spec.statistic)).collect();
    TestReport::from_null(
        spec.statistic.to_string(),
        observed.get(spec.statistic),
        &values,
        spec.level,
        spec.seed,
        null.flagged,
    )
}

/// Tests for static intensities, `gamma0 = (n, n-1, ..., n-r+1)`.
pub fn test_static_intensities(
    data: &DataMatrix,
    n: usize,
    statistic: ParamStatistic,
    level: f64,
    replications: usize,
    seed: u64,
    ties: TiePolicy,
) -> Result<TestReport> {
    let spec = ParamTestSpec::new(static_gamma(n, data.r()), statistic)
        .level(level)
        .replications(replications)
        .seed(seed);
    test_parameter(data, n, &spec, ties)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerPoint {
    pub level: f64,
    pub lr: f64,
    pub wald: f64,
}

/// Rejection rates of both tests at every level for data with rates
/// `gamma_alt`. Critical values come from `spec.replications` null draws;
/// `outer` alternative samples are drawn under a derived seed.
pub fn power_curve(
    gamma_alt: &[f64],
    n: usize,
    m: usize,
    spec: &ParamTestSpec,
    outer: usize,
    levels: &[f64],
) -> Result<Vec<PowerPoint>> {
    spec.validate(n)?;
    let null = simulate_statistics(&spec.gamma0, &spec.gamma0, n, m, &spec.plan())?;
    let alt_plan = McPlan::new(mc::derive_seed(spec.seed, 0), outer).threads(spec.threads);
    let alt = simulate_statistics(gamma_alt, &spec.gamma0, n, m, &alt_plan)?;
    let null_lr: Vec<f64> = null.values.iter().map(|s| s.lr).collect();
    let null_w: Vec<f64> = null.values.iter().map(|s| s.wald).collect();
    let rate = |crit: f64, pick: fn(&ParamStatistics) -> f64| -> f64 {
        alt.values.iter().filter(|s| pick(s) > crit).count() as f64 / outer as f64
    };
    levels
        .iter()
        .map(|&level| {
            if !(level > 0.0 && level < 1.0) {
                return Err(Error::InvalidParams(format!("level {level} not in (0,1)")));
            }
            Ok(PowerPoint {
                level,
                lr: rate(critical_value_for_p(&null_lr, level), |s| s.lr),
                wald: rate(critical_value_for_p(&null_w, level), |s| s.wald),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream;
    use crate::model::ModelParams;
    use crate::sampling::sample;

    fn ranks(rows: &[Vec<f64>]) -> RankStructure {
        RankStructure::new(&DataMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn statistics_vanish_at_the_estimate() {
        let rs = ranks(&[vec![1.0, 4.0], vec![2.0, 3.0], vec![3.5, 5.0]]);
        let fit = fit_profile_likelihood(&rs, 2).unwrap();
        assert!(lr_statistic(&rs, &fit.gamma_hat, &fit).unwrap().abs() < 1e-12);
        assert!(wald_statistic(&fit, &fit.gamma_hat) < 1e-24);
        assert!(lr_statistic(&rs, &[2.0, 1.0], &fit).unwrap() > 0.0);
    }

    #[test]
    fn vanishing_rate_contributes_one_to_wald() {
        let rs = ranks(&[vec![1.0, 3.0], vec![2.0, 4.0]]);
        let fit = fit_profile_likelihood(&rs, 2).unwrap();
        assert_eq!(wald_statistic(&fit, &[2.0, 1.0]), 1.0);
        let rs = ranks(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let fit = fit_profile_likelihood(&rs, 2).unwrap();
        assert!(wald_statistic(&fit, &[2.0, 1.0]).is_infinite());
    }

    #[test]
    fn statistics_are_nonnegative() {
        let params = ModelParams::from_alpha(3, 3, 4, &[1.0, 1.3, 0.7]).unwrap();
        for k in 0..200 {
            let d = sample(&params, &BaselineCdf::Uniform, &mut stream(4, k));
            let rs = RankStructure::new(&d).unwrap();
            let (s, _) = param_statistics(&rs, 3, &[3.0, 2.0, 1.0]).unwrap();
            assert!(s.lr >= 0.0 && s.wald >= 0.0);
        }
    }

    #[test]
    fn critical_values_decrease_in_level() {
        let spec = ParamTestSpec::new(vec![3.0, 2.0, 1.0], ParamStatistic::Lr).replications(2000);
        let c5 = exact_critical_value(&spec.clone().level(0.05), 3, 5).unwrap();
        let c10 = exact_critical_value(&spec.level(0.10), 3, 5).unwrap();
        assert!(c5.value >= c10.value);
        assert!(c5.se > 0.0);
    }

    #[test]
    fn report_decision_matches_p_value() {
        let params = ModelParams::from_alpha(3, 2, 8, &[1.0, 3.0]).unwrap();
        let d = sample(&params, &BaselineCdf::Uniform, &mut stream(9, 0));
        for stat in [ParamStatistic::Lr, ParamStatistic::Wald] {
            let rep = test_static_intensities(&d, 3, stat, 0.05, 999, 3, TiePolicy::Reject).unwrap();
            assert_eq!(rep.decision == Decision::Reject, rep.p_value <= 0.05);
            assert!(rep.p_value > 0.0 && rep.p_value <= 1.0);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let d = DataMatrix::from_rows(&[vec![1.0, 2.0], vec![1.5, 3.0]]).unwrap();
        let spec = ParamTestSpec::new(vec![3.0, 1.0], ParamStatistic::Lr);
        assert!(test_parameter(&d, 2, &spec, TiePolicy::Reject).is_err());
        let spec = ParamTestSpec::new(vec![2.0, 1.0], ParamStatistic::Lr).level(1.5);
        assert!(test_parameter(&d, 2, &spec, TiePolicy::Reject).is_err());
        assert!("score".parse::<ParamStatistic>().is_err());
        assert_eq!("Wald".parse::<ParamStatistic>().unwrap(), ParamStatistic::Wald);
    }

    #[test]
    fn power_is_monotone_in_level() {
        let spec = ParamTestSpec::new(vec![3.0, 2.0, 1.0], ParamStatistic::Lr).replications(1000);
        let curve = power_curve(&[3.0, 4.0, 4.0], 3, 10, &spec, 400, &[0.01, 0.05, 0.1, 0.2]).unwrap();
        for w in curve.windows(2) {
            assert!(w[0].lr <= w[1].lr && w[0].wald <= w[1].wald);
        }
        assert!(curve[3].lr > 0.2);
    }
}
