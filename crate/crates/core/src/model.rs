//! Model parameters of sequential order statistics.
//!
//! A system of `n` components records `r` failures. While `j - 1` components
//! have failed, the surviving pool fails at total rate `gamma[j-1]` times the
//! baseline hazard, with `gamma_j = (n - j + 1) * alpha_j`. Identifiability in
//! the semiparametric model is fixed by `alpha_1 = 1`, i.e. `gamma_1 = n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions of an experiment: `n` components per system, `r` recorded
/// failures per system and `m` independent systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub n: usize,
    pub r: usize,
    pub m: usize,
}

impl Shape {
    pub fn new(n: usize, r: usize, m: usize) -> Result<Self> {
        if n == 0 || r == 0 || m == 0 {
            return Err(Error::InvalidParams(format!(
                "n, r and M must be positive (got n={n}, r={r}, M={m})"
            )));
        }
        if r > n {
            return Err(Error::InvalidParams(format!("r={r} exceeds n={n}")));
        }
        Ok(Self { n, r, m })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    shape: Shape,
    gamma: Vec<f64>,
}

impl ModelParams {
    /// Builds parameters from load-sharing factors; `alpha[0]` must be 1.
    pub fn from_alpha(n: usize, r: usize, m: usize, alpha: &[f64]) -> Result<Self> {
        let shape = Shape::new(n, r, m)?;
        if alpha.len() != r {
            return Err(Error::InvalidParams(format!(
                "alpha has {} entries, expected r={r}",
                alpha.len()
            )));
        }
        check_positive("alpha", alpha)?;
        if alpha[0] != 1.0 {
            return Err(Error::InvalidParams(format!(
                "alpha_1 must equal 1 (got {})",
                alpha[0]
            )));
        }
        Ok(Self {
            shape,
            gamma: alpha_to_gamma(n, alpha),
        })
    }

    /// Builds parameters from stage rates; `gamma[0]` must equal `n`.
    pub fn from_gamma(n: usize, r: usize, m: usize, gamma: &[f64]) -> Result<Self> {
        let shape = Shape::new(n, r, m)?;
        if gamma.len() != r {
            return Err(Error::InvalidParams(format!(
                "gamma has {} entries, expected r={r}",
                gamma.len()
            )));
        }
        check_positive("gamma", gamma)?;
        if (gamma[0] - n as f64).abs() > 1e-12 * n as f64 {
            return Err(Error::InvalidParams(format!(
                "gamma_1 must equal n={n} (got {})",
                gamma[0]
            )));
        }
        let mut gamma = gamma.to_vec();
        gamma[0] = n as f64;
        Ok(Self { shape, gamma })
    }

    /// Ordinary order statistics: `gamma = (n, n-1, ..., n-r+1)`.
    pub fn static_intensities(n: usize, r: usize, m: usize) -> Result<Self> {
        Self::from_alpha(n, r, m, &vec![1.0; r])
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn r(&self) -> usize {
        self.shape.r
    }

    pub fn m(&self) -> usize {
        self.shape.m
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn alpha(&self) -> Vec<f64> {
        gamma_to_alpha(self.shape.n, &self.gamma)
    }

    pub fn with_m(&self, m: usize) -> Result<Self> {
        Ok(Self {
            shape: Shape::new(self.shape.n, self.shape.r, m)?,
            gamma: self.gamma.clone(),
        })
    }
}

/// `gamma_j = (n - j + 1) * alpha_j`.
pub fn alpha_to_gamma(n: usize, alpha: &[f64]) -> Vec<f64> {
    alpha
        .iter()
        .enumerate()
        .map(|(j, a)| (n - j) as f64 * a)
        .collect()
}

pub fn gamma_to_alpha(n: usize, gamma: &[f64]) -> Vec<f64> {
    gamma
        .iter()
        .enumerate()
        .map(|(j, g)| g / (n - j) as f64)
        .collect()
}

/// `(n, n-1, ..., n-r+1)`.
pub fn static_gamma(n: usize, r: usize) -> Vec<f64> {
    (0..r).map(|j| (n - j) as f64).collect()
}

/// Stage rates of progressively type-II censored order statistics.
///
/// `total` units are put on test, `scheme.len()` failures are observed and
/// `scheme[k]` survivors are withdrawn at the `k`-th failure. The result is
/// `gamma_j = n - j + 1 + sum_{k >= j} R_k`; note that `gamma_1 = total`, so
/// these vectors do not follow the `gamma_1 = n` convention of [`ModelParams`].
pub fn gamma_from_censoring_scheme(total: usize, scheme: &[usize]) -> Result<Vec<f64>> {
    let n = scheme.len();
    if n == 0 {
        return Err(Error::InvalidParams("empty censoring scheme".into()));
    }
    let removed: usize = scheme.iter().sum();
    if total < n || removed != total - n {
        return Err(Error::InvalidParams(format!(
            "censoring scheme removes {removed} units, expected N - n = {}",
            total as i64 - n as i64
        )));
    }
    let mut gamma = vec![0.0; n];
    let mut tail = 0usize;
    for j in (0..n).rev() {
        tail += scheme[j];
        gamma[j] = (n - j + tail) as f64;
    }
    Ok(gamma)
}

pub(crate) fn check_positive(name: &str, v: &[f64]) -> Result<()> {
    if let Some((j, x)) = v.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::InvalidParams(format!(
            "{name}_{} = {x} is not a positive finite number",
            j + 1
        )));
    }
    Ok(())
}
