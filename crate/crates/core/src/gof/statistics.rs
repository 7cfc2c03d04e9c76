//! Supremum statistics comparing the baseline estimate with a null cdf.
//!
//! Everything is evaluated on the cumulative-hazard scale `w = Lambda^F(t)`
//! of the null, where `F(t) = 1 - exp(-w)`. Between events the estimate is
//! constant and the null cdf monotone, so suprema are attained at event
//! times (both sides) or at the end of the range.

use serde::Serialize;

use crate::baseline::BaselineCdf;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::estimate::nelson_aalen;
use crate::model::check_positive;
use crate::ranks::{RankStructure, TiePolicy};
use crate::step::StepFunction;

use super::variance::VarianceFunction;

/// Edge clamp for `p` inside the weight `k(p)`.
pub const WEIGHT_CLAMP: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct GofStatistics {
    pub k: f64,
    pub k_weighted: f64,
    pub z: f64,
}

/// `sup |F_hat - F|` over `F^{-1}(0+) < t < F^{-1}(q)`.
pub fn ks_statistic(f_hat: &StepFunction, baseline: &BaselineCdf, q: f64) -> Result<f64> {
    check_q(q)?;
    let mut sup: f64 = 0.0;
    let mut last = f_hat.initial();
    for (k, (&x, &after)) in f_hat.locations().iter().zip(f_hat.values()).enumerate() {
        let p = baseline.cdf(x);
        if p >= q {
            break;
        }
        sup = sup.max((f_hat.before_jump(k) - p).abs()).max((after - p).abs());
        last = after;
    }
    Ok(sup.max((last - q).abs()))
}

/// `sup |F_hat - F| / k(F)` with `F` clamped to `[WEIGHT_CLAMP, 1 - WEIGHT_CLAMP]`,
/// over the jump points (both sides) and the weight grid between them.
pub fn weighted_ks_statistic(f_hat: &StepFunction, baseline: &BaselineCdf, gamma: &[f64], q: f64) -> Result<f64> {
    check_q(q)?;
    let weight = VarianceFunction::new(gamma)?;
    let w_q = if q < 1.0 { -(-q).ln_1p() } else { f64::INFINITY };
    let mut grid = WeightGrid::new(&weight, w_q);
    let mut sup: f64 = 0.0;
    let mut last = f_hat.initial();
    for (k, (&x, &after)) in f_hat.locations().iter().zip(f_hat.values()).enumerate() {
        let p = baseline.cdf(x);
        if p >= q {
            break;
        }
        sup = sup.max(grid.scan(baseline.cum_hazard(x), f_hat.before_jump(k)));
        let kw = weight.weight(p.clamp(WEIGHT_CLAMP, 1.0 - WEIGHT_CLAMP));
        sup = sup.max((f_hat.before_jump(k) - p).abs() / kw).max((after - p).abs() / kw);
        last = after;
    }
    Ok(sup.max(grid.scan(f64::INFINITY, last)))
}

/// `sup |z^rho|` of the weighted martingale-residual process.
pub fn z_statistic(
    data: &DataMatrix,
    gamma: &[f64],
    baseline: &BaselineCdf,
    rho: f64,
    q: f64,
    ties: TiePolicy,
) -> Result<f64> {
    let ranks = RankStructure::with_policy(data, ties)?;
    let w = event_hazards(&ranks, baseline)?;
    Ok(evaluate(&ranks, gamma, &w, &StatisticOptions::new(rho, q)?, None)?.z)
}

/// Rho and truncation shared by a batch of evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatisticOptions {
    pub rho: f64,
    pub q: f64,
}

impl StatisticOptions {
    pub fn new(rho: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParams(format!("rho = {rho} not in [0,1]")));
        }
        check_q(q)?;
        Ok(Self { rho, q })
    }
}

impl Default for StatisticOptions {
    fn default() -> Self {
        Self { rho: 0.5, q: 1.0 }
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParams(format!("q = {q} not in (0,1]")));
    }
    Ok(())
}

/// Null cumulative hazard at every event, in event order.
pub fn event_hazards(ranks: &RankStructure, baseline: &BaselineCdf) -> Result<Vec<f64>> {
    ranks
        .events()
        .iter()
        .map(|ev| {
            let h = baseline.cum_hazard(ev.time);
            if h > 0.0 && h.is_finite() {
                Ok(h)
            } else {
                Err(Error::OutsideSupport {
                    row: ev.system,
                    col: ev.stage,
                    value: ev.time,
                })
            }
        })
        .collect()
}

/// All three statistics in one pass. `w` holds the null cumulative hazard of
/// each event; `weight` (built for `gamma`) is needed for the weighted KS
/// statistic, which is reported as NaN without it.
pub fn evaluate(
    ranks: &RankStructure,
    gamma: &[f64],
    w: &[f64],
    opts: &StatisticOptions,
    weight: Option<&VarianceFunction>,
) -> Result<GofStatistics> {
    if gamma.len() != ranks.r() || w.len() != ranks.len() {
        return Err(Error::InvalidParams("gamma or hazards do not match the data".into()));
    }
    check_positive("gamma", gamma)?;
    let rho = opts.rho;
    let w_q = if opts.q < 1.0 { -(-opts.q).ln_1p() } else { f64::INFINITY };
    let drift = |a: f64, b: f64| -> f64 {
        if rho == 0.0 {
            b - a
        } else {
            ((-rho * a).exp() - (-rho * b).exp()) / rho
        }
    };

    let mut stats = GofStatistics {
        k_weighted: if weight.is_some() { 0.0 } else { f64::NAN },
        ..Default::default()
    };
    let (mut survival, mut z, mut w_prev) = (1.0, 0.0, 0.0);
    let mut grid = weight.map(|vf| WeightGrid::new(vf, w_q));
    let mut risk = ranks.risk(0, gamma);
    let events = ranks.events();
    let mut e = 0;
    while e < events.len() {
        let wg = w[e];
        if wg >= w_q {
            break;
        }
        let mut end = e + 1;
        while end < events.len() && events[end].time == events[e].time {
            end += 1;
        }
        if let Some(g) = grid.as_mut() {
            stats.k_weighted = stats.k_weighted.max(g.scan(wg, 1.0 - survival));
        }
        z -= risk * drift(w_prev, wg);
        stats.z = stats.z.max(z.abs());
        let p = -(-wg).exp_m1();
        let before = 1.0 - survival;
        for j in e..end {
            survival *= (1.0 - 1.0 / ranks.risk(j, gamma)).max(0.0);
            z += (-rho * wg).exp();
        }
        let after = 1.0 - survival;
        let gap = (before - p).abs().max((after - p).abs());
        stats.k = stats.k.max(gap);
        if let Some(vf) = weight {
            let kw = vf.weight(p.clamp(WEIGHT_CLAMP, 1.0 - WEIGHT_CLAMP));
            stats.k_weighted = stats.k_weighted.max(gap / kw);
        }
        stats.z = stats.z.max(z.abs());
        risk = ranks.risk_after(end - 1, gamma);
        w_prev = wg;
        e = end;
    }
    if let Some(g) = grid.as_mut() {
        stats.k_weighted = stats.k_weighted.max(g.scan(f64::INFINITY, 1.0 - survival));
    }
    if w_q.is_finite() {
        z -= risk * drift(w_prev, w_q);
        stats.z = stats.z.max(z.abs());
    }
    stats.k = stats.k.max((1.0 - survival - opts.q).abs());
    Ok(stats)
}

/// Weighted deviations between jumps, on the grid of the weight function
/// and at the upper clamp edge, so that the weighted supremum covers the
/// whole range `WEIGHT_CLAMP <= p <= 1 - WEIGHT_CLAMP` (and `p < q`).
struct WeightGrid<'a> {
    vf: &'a VarianceFunction,
    next: usize,
    end: usize,
    edge: Option<(f64, f64)>,
}

impl<'a> WeightGrid<'a> {
    fn new(vf: &'a VarianceFunction, w_q: f64) -> Self {
        let u_clamp = -WEIGHT_CLAMP.ln();
        let u_end = u_clamp.min(w_q);
        let mut end = ((u_end / vf.grid_step()).ceil() as usize).min(vf.node_count());
        while end > 1 && (end - 1) as f64 * vf.grid_step() >= u_end {
            end -= 1;
        }
        let edge = (w_q > u_clamp).then(|| (u_clamp, vf.ln_weight(1.0 - WEIGHT_CLAMP)));
        Self { vf, next: 1, end, edge }
    }

    /// Largest `|level - p| / k(p)` over grid points with `u < until`.
    fn scan(&mut self, until: f64, level: f64) -> f64 {
        let mut sup: f64 = 0.0;
        let h = self.vf.grid_step();
        while self.next < self.end && (self.next as f64 * h) < until {
            let u = self.next as f64 * h;
            let p = -(-u).exp_m1();
            sup = sup.max((level - p).abs() / self.vf.ln_weight_node(self.next).exp());
            self.next += 1;
        }
        if let Some((u, ln_k)) = self.edge {
            if u < until {
                sup = sup.max((level + (-u).exp_m1()).abs() / ln_k.exp());
                self.edge = None;
            }
        }
        sup
    }
}

/// Convenience wrapper: statistics of `data` against `baseline` with rates
/// `gamma` (builds the weight function).
pub fn gof_statistics(
    data: &DataMatrix,
    gamma: &[f64],
    baseline: &BaselineCdf,
    opts: &StatisticOptions,
    ties: TiePolicy,
) -> Result<GofStatistics> {
    let ranks = RankStructure::with_policy(data, ties)?;
    let w = event_hazards(&ranks, baseline)?;
    let vf = VarianceFunction::new(gamma)?;
    evaluate(&ranks, gamma, &w, opts, Some(&vf))
}

/// The baseline estimate as a step function (for plotting and the
/// step-function forms of the statistics).
pub fn estimated_cdf(data: &DataMatrix, gamma: &[f64], ties: TiePolicy) -> Result<StepFunction> {
    Ok(nelson_aalen(&RankStructure::with_policy(data, ties)?, gamma)?.cdf)
}
