//! Point estimators: the known-baseline MLE, the rank-based profile
//! likelihood estimator and the Nelson-Aalen-type baseline estimator.

mod mle;
mod nelson_aalen;
mod profile;

pub use mle::{mle_known_baseline, MlEstimate};
pub use nelson_aalen::{nelson_aalen, NelsonAalen};
pub use profile::{
    fit_profile_likelihood, fit_profile_likelihood_with, profile_loglik, Degeneracy, FitOptions,
    PLFitResult,
};
