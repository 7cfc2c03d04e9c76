//! Right-continuous step functions.

use serde::Serialize;

use crate::error::{Error, Result};

/// Piecewise-constant function with jumps at strictly increasing locations.
///
/// `eval(t)` returns the value after the last jump at or before `t`
/// (right-continuous); `left_limit(t)` the value just before `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunction {
    initial: f64,
    locations: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(initial: f64, locations: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if locations.len() != values.len() {
            return Err(Error::InvalidParams(
                "step function needs one value per jump location".into(),
            ));
        }
        if locations.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParams(
                "step function locations must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            initial,
            locations,
            values,
        })
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    /// Values right after each jump.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = self.locations.partition_point(|&x| x <= t);
        if k == 0 {
            self.initial
        } else {
            self.values[k - 1]
        }
    }

    pub fn left_limit(&self, t: f64) -> f64 {
        let k = self.locations.partition_point(|&x| x < t);
        if k == 0 {
            self.initial
        } else {
            self.values[k - 1]
        }
    }

    /// Value just before jump `k`.
    pub fn before_jump(&self, k: usize) -> f64 {
        if k == 0 {
            self.initial
        } else {
            self.values[k - 1]
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        let mut prev = self.initial;
        self.values.iter().all(|&v| {
            let ok = v >= prev;
            prev = v;
            ok
        })
    }
}
