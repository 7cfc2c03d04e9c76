//! The variance function `g` and the weight `k` of the weighted
//! Kolmogorov-Smirnov statistic.
//!
//! With `N(s)` the number of failures up to `s` in one system on the uniform
//! scale, `g(p) = int_0^p ds / ((1 - s) E(gamma_{N(s)+1}))`. On the
//! exponential scale `u = -ln(1 - s)` the stage process is a pure-birth chain
//! with rates `gamma_1, ..., gamma_r` and `dg/du = 1 / E(u)`.

use crate::error::{Error, Result};
use crate::model::check_positive;

use super::quad::integrate;

/// `b_{j,k} = prod_{l<=k} gamma_l / prod_{i<=k, i!=j} (gamma_i - gamma_j)`.
///
/// Row `k` (zero-based) holds `b_{1,k+1}, ..., b_{k+1,k+1}`.
pub fn b_coeffs(gamma: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_positive("gamma", gamma)?;
    check_distinct(gamma)?;
    let r = gamma.len();
    let mut rows = Vec::with_capacity(r);
    let mut prod = 1.0;
    for k in 0..r {
        prod *= gamma[k];
        rows.push(
            (0..=k)
                .map(|j| {
                    let den: f64 = (0..=k)
                        .filter(|&i| i != j)
                        .map(|i| gamma[i] - gamma[j])
                        .product();
                    prod / den
                })
                .collect(),
        );
    }
    Ok(rows)
}

fn check_distinct(gamma: &[f64]) -> Result<()> {
    let max = gamma.iter().cloned().fold(0.0, f64::max);
    for i in 0..gamma.len() {
        for j in 0..i {
            if (gamma[i] - gamma[j]).abs() <= 1e-9 * max {
                return Err(Error::InvalidParams(format!(
                    "gamma_{} and gamma_{} are (nearly) tied; use VarianceFunction",
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

/// `B_j = sum_{k>=j} b_{j,k}`, so that `E(u) = sum_j B_j exp(-gamma_j u)`.
fn tail_sums(gamma: &[f64]) -> Result<Vec<f64>> {
    let b = b_coeffs(gamma)?;
    Ok((0..gamma.len())
        .map(|j| b[j..].iter().map(|row| row[j]).sum())
        .collect())
}

/// `E(gamma_{N(s)+1})` for a system observed up to its `r`-th failure
/// (a finished system contributes zero).
pub fn expected_gamma_at_risk(gamma: &[f64], s: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidParams(format!("s = {s} not in [0,1)")));
    }
    let u = -(-s).ln_1p();
    match tail_sums(gamma) {
        Ok(big_b) => Ok(gamma
            .iter()
            .zip(&big_b)
            .map(|(g, b)| b * (-g * u).exp())
            .sum()),
        Err(_) => Ok(VarianceFunction::new(gamma)?.expected_rate(u)),
    }
}

/// `g(p)` by adaptive quadrature of the closed-form integrand (relative
/// tolerance 1e-9), falling back to [`VarianceFunction`] for tied rates.
pub fn g_variance(gamma: &[f64], p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParams(format!("p = {p} not in (0,1)")));
    }
    let u_end = -(-p).ln_1p();
    match tail_sums(gamma) {
        Ok(big_b) => {
            // E(u) >= gamma_min exp(-gamma_min u) > 0; factor out the slowest term
            let integrand = |u: f64| {
                1.0 / gamma
                    .iter()
                    .zip(&big_b)
                    .map(|(g, b)| b * (-g * u).exp())
                    .sum::<f64>()
            };
            Ok(integrate(integrand, 0.0, u_end, 1e-11))
        }
        Err(_) => Ok(VarianceFunction::new(gamma)?.g(p)),
    }
}

/// `k(p) = (1 - p) sqrt(g(p) (1 + |ln g(p)|))`.
pub fn weight_k(gamma: &[f64], p: f64) -> Result<f64> {
    let g = g_variance(gamma, p)?;
    Ok((1.0 - p) * (g * (1.0 + g.ln().abs())).sqrt())
}

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Tabulated evaluator of `g` and `k` for one rate vector, valid for tied
/// rates and stable for `p` up to `1 - 2^-53`.
///
/// The stage distribution of the pure-birth chain is propagated on a grid in
/// `u` by Taylor steps of the bidiagonal generator (nonnegative, no
/// cancellation), normalized at every node; `ln g` is accumulated with 8-point
/// Gauss-Legendre rules per step.
#[derive(Clone, Debug)]
pub struct VarianceFunction {
    gamma: Vec<f64>,
    step: f64,
    /// Normalized stage probabilities at each node, node-major.
    states: Vec<f64>,
    /// Log of the normalizing constant at each node.
    log_scale: Vec<f64>,
    /// `ln g` at each node.
    ln_g: Vec<f64>,
}

const U_MAX: f64 = 37.5;

impl VarianceFunction {
    pub fn new(gamma: &[f64]) -> Result<Self> {
        check_positive("gamma", gamma)?;
        let r = gamma.len();
        let gmax = gamma.iter().cloned().fold(0.0, f64::max);
        let step = (0.25 / gmax).min(0.1);
        let nodes = (U_MAX / step).ceil() as usize + 1;
        let mut vf = Self {
            gamma: gamma.to_vec(),
            step,
            states: Vec::with_capacity(nodes * r),
            log_scale: Vec::with_capacity(nodes),
            ln_g: Vec::with_capacity(nodes),
        };
        let mut state = vec![0.0; r];
        state[0] = 1.0;
        let (mut scale, mut ln_g) = (0.0, f64::NEG_INFINITY);
        let mut next = vec![0.0; r];
        for _ in 0..nodes {
            vf.states.extend_from_slice(&state);
            vf.log_scale.push(scale);
            vf.ln_g.push(ln_g);
            let part = vf.partial(&state, step);
            ln_g = log_add_exp(ln_g, part.ln() - scale);
            vf.propagate(&state, step, &mut next);
            let total: f64 = next.iter().sum();
            scale += total.ln();
            for (s, n) in state.iter_mut().zip(&next) {
                *s = n / total;
            }
        }
        Ok(vf)
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// Spacing of the tabulation grid in `u = -ln(1 - p)`.
    pub fn grid_step(&self) -> f64 {
        self.step
    }

    /// `ln k` at grid node `i` (`u = i * grid_step()`), for `i >= 1`.
    pub fn ln_weight_node(&self, i: usize) -> f64 {
        let ln_g = self.ln_g[i];
        -(i as f64 * self.step) + 0.5 * (ln_g + ln_g.abs().ln_1p())
    }

    pub fn node_count(&self) -> usize {
        self.ln_g.len()
    }

    /// `out = exp(Q t) state` for the chain generator `Q`, `t <= step`.
    fn propagate(&self, state: &[f64], t: f64, out: &mut [f64]) {
        let r = state.len();
        let mut term = state.to_vec();
        out.copy_from_slice(state);
        for order in 1..60 {
            let c = t / order as f64;
            let mut carry = 0.0;
            let mut size = 0.0f64;
            for k in 0..r {
                let flow = self.gamma[k] * term[k];
                term[k] = c * (carry - flow);
                carry = flow;
                out[k] += term[k];
                size = size.max(term[k].abs());
            }
            if size < 1e-18 {
                break;
            }
        }
        for v in out.iter_mut() {
            *v = v.max(0.0);
        }
    }

    fn rate(&self, state: &[f64]) -> f64 {
        state.iter().zip(&self.gamma).map(|(p, g)| p * g).sum()
    }

    /// `int_0^t d tau / E(tau)` for the normalized start `state`.
    fn partial(&self, state: &[f64], t: f64) -> f64 {
        let mut buf = vec![0.0; state.len()];
        let half = 0.5 * t;
        let mut sum = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            for tau in [half * (1.0 - x), half * (1.0 + x)] {
                self.propagate(state, tau, &mut buf);
                sum += w / self.rate(&buf);
            }
        }
        sum * half
    }

    fn locate(&self, u: f64) -> (usize, f64) {
        let i = ((u / self.step) as usize).min(self.log_scale.len() - 1);
        (i, u - i as f64 * self.step)
    }

    fn node(&self, i: usize) -> &[f64] {
        let r = self.gamma.len();
        &self.states[i * r..(i + 1) * r]
    }

    /// `E(gamma_{N+1})` at exponential time `u`.
    pub fn expected_rate(&self, u: f64) -> f64 {
        let (i, t) = self.locate(u);
        let mut buf = vec![0.0; self.gamma.len()];
        self.propagate(self.node(i), t, &mut buf);
        self.rate(&buf) * self.log_scale[i].exp()
    }

    /// `ln g` at exponential time `u`.
    pub fn ln_g_at(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (i, t) = self.locate(u);
        if t == 0.0 {
            return self.ln_g[i];
        }
        let part = self.partial(self.node(i), t);
        log_add_exp(self.ln_g[i], part.ln() - self.log_scale[i])
    }

    pub fn g(&self, p: f64) -> f64 {
        self.ln_g_at(-(-p).ln_1p()).exp()
    }

    /// `ln k(p)`; finite for `p` in (0,1).
    pub fn ln_weight(&self, p: f64) -> f64 {
        let ln_g = self.ln_g_at(-(-p).ln_1p());
        (-p).ln_1p() + 0.5 * (ln_g + ln_g.abs().ln_1p())
    }

    pub fn weight(&self, p: f64) -> f64 {
        self.ln_weight(p).exp()
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
