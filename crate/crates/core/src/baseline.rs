//! Baseline lifetime distributions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{Error, Result};

/// An absolutely continuous lifetime distribution with `F(0) = 0`.
///
/// All variants expose the cdf, survival function, quantile, hazard and
/// cumulative hazard `-ln(1 - F)`. Sampling and spacing computations go
/// through the cumulative hazard, which stays accurate far into the upper
/// tail where `1 - F` would round to zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum BaselineCdf {
    /// Standard uniform on `[0, 1]`.
    Uniform,
    /// `F(t) = 1 - exp(-(t - location) / scale)` for `t >= location`.
    Exponential { location: f64, scale: f64 },
    /// `F(t) = 1 - exp(-(t / scale)^shape)`.
    Weibull { shape: f64, scale: f64 },
    /// Gamma with shape `shape` and scale `scale`.
    Gamma { shape: f64, scale: f64 },
}

impl BaselineCdf {
    pub fn standard_exponential() -> Self {
        BaselineCdf::Exponential {
            location: 0.0,
            scale: 1.0,
        }
    }

    pub fn exponential(location: f64, scale: f64) -> Result<Self> {
        BaselineCdf::Exponential { location, scale }.validated()
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        BaselineCdf::Weibull { shape, scale }.validated()
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        BaselineCdf::Gamma { shape, scale }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            BaselineCdf::Uniform => true,
            BaselineCdf::Exponential { location, scale } => {
                location.is_finite() && location >= 0.0 && scale.is_finite() && scale > 0.0
            }
            BaselineCdf::Weibull { shape, scale } | BaselineCdf::Gamma { shape, scale } => {
                shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0
            }
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidParams(format!("invalid baseline {self}")))
        }
    }

    /// Cumulative hazard `-ln(1 - F(t))`; zero below the support.
    pub fn cum_hazard(&self, t: f64) -> f64 {
        match *self {
            BaselineCdf::Uniform => {
                if t <= 0.0 {
                    0.0
                } else if t >= 1.0 {
                    f64::INFINITY
                } else {
                    -(-t).ln_1p()
                }
            }
            BaselineCdf::Exponential { location, scale } => ((t - location) / scale).max(0.0),
            BaselineCdf::Weibull { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    (t / scale).powf(shape)
                }
            }
            BaselineCdf::Gamma { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -gamma_ur(shape, t / scale).ln()
                }
            }
        }
    }

    /// Inverse of the cumulative hazard: the `t` with `-ln(1 - F(t)) = h`.
    pub fn inv_cum_hazard(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return self.lower_support();
        }
        match *self {
            BaselineCdf::Uniform => -(-h).exp_m1(),
            BaselineCdf::Exponential { location, scale } => location + scale * h,
            BaselineCdf::Weibull { shape, scale } => scale * h.powf(1.0 / shape),
            BaselineCdf::Gamma { .. } => self.solve_cum_hazard(h),
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            BaselineCdf::Uniform => t.clamp(0.0, 1.0),
            BaselineCdf::Gamma { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    gamma_lr(shape, t / scale)
                }
            }
            _ => -(-self.cum_hazard(t)).exp_m1(),
        }
    }

    pub fn sf(&self, t: f64) -> f64 {
        match *self {
            BaselineCdf::Uniform => 1.0 - t.clamp(0.0, 1.0),
            BaselineCdf::Gamma { shape, scale } => {
                if t <= 0.0 {
                    1.0
                } else {
                    gamma_ur(shape, t / scale)
                }
            }
            _ => (-self.cum_hazard(t)).exp(),
        }
    }

    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.lower_support();
        }
        if u >= 1.0 {
            return self.upper_support();
        }
        match *self {
            BaselineCdf::Uniform => u,
            _ => self.inv_cum_hazard(-(-u).ln_1p()),
        }
    }

    /// Hazard rate `f / (1 - F)`.
    pub fn hazard(&self, t: f64) -> f64 {
        match *self {
            BaselineCdf::Uniform => {
                if (0.0..1.0).contains(&t) {
                    1.0 / (1.0 - t)
                } else {
                    0.0
                }
            }
            BaselineCdf::Exponential { location, scale } => {
                if t >= location {
                    1.0 / scale
                } else {
                    0.0
                }
            }
            BaselineCdf::Weibull { shape, scale } => {
                if t <= 0.0 {
                    0.0
                } else {
                    shape / scale * (t / scale).powf(shape - 1.0)
                }
            }
            BaselineCdf::Gamma { shape, scale } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let x = t / scale;
                let log_pdf = (shape - 1.0) * x.ln() - x - ln_gamma(shape) - scale.ln();
                (log_pdf - gamma_ur(shape, x).ln()).exp()
            }
        }
    }

    /// `F^{-1}(0+)`.
    pub fn lower_support(&self) -> f64 {
        match *self {
            BaselineCdf::Exponential { location, .. } => location,
            _ => 0.0,
        }
    }

    pub fn upper_support(&self) -> f64 {
        match *self {
            BaselineCdf::Uniform => 1.0,
            _ => f64::INFINITY,
        }
    }

    fn solve_cum_hazard(&self, h: f64) -> f64 {
        // Newton on the cumulative hazard, safeguarded by a bracket.
        let mut lo = 0.0_f64;
        let mut hi = match *self {
            BaselineCdf::Gamma { shape, scale } => scale * (shape + 1.0).max(1.0),
            _ => 1.0,
        };
        while self.cum_hazard(hi) < h {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = self.cum_hazard(x) - h;
            if f == 0.0 {
                return x;
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.hazard(x);
            let mut next = if d > 0.0 && d.is_finite() { x - f / d } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = (next - x).abs();
            x = next;
            if step <= 1e-13 * x.max(1.0) || hi - lo <= 1e-13 * x.max(1.0) {
                break;
            }
        }
        x
    }
}

impl fmt::Display for BaselineCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaselineCdf::Uniform => write!(f, "uniform"),
            BaselineCdf::Exponential { location, scale } => write!(f, "exp:{location},{scale}"),
            BaselineCdf::Weibull { shape, scale } => write!(f, "weibull:{shape},{scale}"),
            BaselineCdf::Gamma { shape, scale } => write!(f, "gamma:{shape},{scale}"),
        }
    }
}

/// Parses `name:param,param`, e.g. `uniform`, `exp:50,300`, `weibull:1.5,1`,
/// `gamma:2,1`. A bare `exp` is the standard exponential.
impl FromStr for BaselineCdf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = match s.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b)),
            None => (s, None),
        };
        let params: Vec<f64> = match rest {
            Some(b) => b
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad baseline parameter '{x}' in '{s}'")))
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let two = |params: &[f64]| -> Result<(f64, f64)> {
            match params {
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::Config(format!(
                    "baseline '{s}' expects two parameters"
                ))),
            }
        };
        let b = match name.to_ascii_lowercase().as_str() {
            "uniform" | "unif" if params.is_empty() => BaselineCdf::Uniform,
            "exp" | "exponential" if params.is_empty() => BaselineCdf::standard_exponential(),
            "exp" | "exponential" => {
                let (location, scale) = two(&params)?;
                BaselineCdf::Exponential { location, scale }
            }
            "weibull" => {
                let (shape, scale) = two(&params)?;
                BaselineCdf::Weibull { shape, scale }
            }
            "gamma" => {
                let (shape, scale) = two(&params)?;
                BaselineCdf::Gamma { shape, scale }
            }
            _ => return Err(Error::Config(format!("unknown baseline '{s}'"))),
        };
        b.validated().map_err(|e| Error::Config(e.to_string()))
    }
}
