//! Profile likelihood estimation of the stage rates.
//!
//! With the baseline profiled out, the likelihood of the rates is
//!
//! ```text
//! L(gamma) = prod_e gamma_{j(e)} / sum_k c_{e,k} gamma_k
//! ```
//!
//! over all events `e`, where `j(e)` is the event's stage and `c_e` the stage
//! counts of the risk set. Each event is a "choice" of one stage among the
//! stages at risk, so the log-likelihood is concave in `ln gamma` and the
//! minorize-maximize update `gamma_j <- M / sum_e c_{e,j} / (c_e . gamma)` is
//! monotone.
//!
//! The maximum is interior only when the stage comparison graph (an edge
//! `k -> j` whenever stage `j` fails while stage `k` is at risk) is strongly
//! connected. Otherwise the supremum is approached by sending the rates of
//! some strongly connected components to zero or infinity relative to the
//! component of stage 1; it equals the sum of the suprema of the
//! within-component likelihoods, which are fitted separately.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::gamma_to_alpha;
use crate::ranks::RankStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Degeneracy {
    None,
    /// The rate tends to zero relative to `gamma_1` (reported as 0).
    Vanishing,
    /// The rate tends to infinity relative to `gamma_1` (reported as +inf).
    Diverging,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PLFitResult {
    pub gamma_hat: Vec<f64>,
    pub alpha_hat: Vec<f64>,
    /// Supremum of the profile log-likelihood.
    #[serde(rename = "loglik")]
    pub log_likelihood: f64,
    pub degenerate: Vec<bool>,
    pub degeneracy: Vec<Degeneracy>,
    pub iterations: usize,
    pub converged: bool,
}

impl PLFitResult {
    pub fn is_degenerate(&self) -> bool {
        self.degenerate.iter().any(|&d| d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Stop when the largest relative change of a rate falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100_000,
        }
    }
}

/// `ln L(gamma)` for the ordering in `ranks`.
pub fn profile_loglik(gamma: &[f64], ranks: &RankStructure) -> Result<f64> {
    if gamma.len() != ranks.r() {
        return Err(Error::InvalidParams(format!(
            "gamma has {} entries, data have r={}",
            gamma.len(),
            ranks.r()
        )));
    }
    if gamma.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::InvalidParams(
            "profile likelihood needs positive finite rates".into(),
        ));
    }
    Ok(loglik_unchecked(gamma, ranks))
}

pub(crate) fn loglik_unchecked(gamma: &[f64], ranks: &RankStructure) -> f64 {
    let ln_gamma: Vec<f64> = gamma.iter().map(|g| g.ln()).collect();
    ranks
        .events()
        .iter()
        .enumerate()
        .map(|(e, ev)| ln_gamma[ev.stage] - ranks.risk(e, gamma).ln())
        .sum()
}

pub fn fit_profile_likelihood(ranks: &RankStructure, n: usize) -> Result<PLFitResult> {
    fit_profile_likelihood_with(ranks, n, &FitOptions::default())
}

pub fn fit_profile_likelihood_with(
    ranks: &RankStructure,
    n: usize,
    options: &FitOptions,
) -> Result<PLFitResult> {
    let (m, r) = (ranks.m(), ranks.r());
    if m < 2 {
        return Err(Error::InvalidData(
            "M >= 2 required: the profile likelihood is flat for a single system".into(),
        ));
    }
    if r > n {
        return Err(Error::InvalidParams(format!("r={r} exceeds n={n}")));
    }

    let reach = reachability(ranks);
    let component: Vec<usize> = (0..r)
        .map(|j| (0..r).find(|&i| reach[i * r + j] && reach[j * r + i]).unwrap_or(j))
        .collect();

    let mut gamma_hat = vec![0.0; r];
    let mut degeneracy = vec![Degeneracy::None; r];
    let mut log_likelihood = 0.0;
    let mut iterations = 0;
    let mut converged = true;

    let mut roots: Vec<usize> = component.clone();
    roots.sort_unstable();
    roots.dedup();
    for root in roots {
        let members: Vec<usize> = (0..r).filter(|&j| component[j] == root).collect();
        let fit = fit_component(ranks, &members, n, options);
        log_likelihood += fit.log_likelihood;
        iterations += fit.iterations;
        converged &= fit.converged;
        let kind = if root == 0 {
            Degeneracy::None
        } else if reach[root] {
            // reachable from stage 1: these stages beat stage 1
            Degeneracy::Diverging
        } else {
            Degeneracy::Vanishing
        };
        for (local, &j) in members.iter().enumerate() {
            degeneracy[j] = kind;
            gamma_hat[j] = match kind {
                Degeneracy::None => fit.gamma[local],
                Degeneracy::Vanishing => 0.0,
                Degeneracy::Diverging => f64::INFINITY,
            };
        }
    }

    Ok(PLFitResult {
        alpha_hat: gamma_to_alpha(n, &gamma_hat),
        gamma_hat,
        log_likelihood,
        degenerate: degeneracy.iter().map(|d| *d != Degeneracy::None).collect(),
        degeneracy,
        iterations,
        converged,
    })
}

/// Reflexive-transitive closure of the stage comparison graph, row-major:
/// `reach[k * r + j]` iff there is a path `k -> ... -> j`.
fn reachability(ranks: &RankStructure) -> Vec<bool> {
    let r = ranks.r();
    let mut reach = vec![false; r * r];
    for j in 0..r {
        reach[j * r + j] = true;
    }
    for (e, ev) in ranks.events().iter().enumerate() {
        for (k, &c) in ranks.counts(e).iter().enumerate() {
            if c > 0 {
                reach[k * r + ev.stage] = true;
            }
        }
    }
    for via in 0..r {
        for a in 0..r {
            if reach[a * r + via] {
                for b in 0..r {
                    if reach[via * r + b] {
                        reach[a * r + b] = true;
                    }
                }
            }
        }
    }
    reach
}

struct ComponentFit {
    gamma: Vec<f64>,
    log_likelihood: f64,
    iterations: usize,
    converged: bool,
}

/// Maximizes the likelihood restricted to the events won by `members`, with
/// risk sets restricted to `members`. The component of stage 1 is pinned at
/// `gamma_1 = n`; other components are normalized to a unit first rate.
fn fit_component(ranks: &RankStructure, members: &[usize], n: usize, options: &FitOptions) -> ComponentFit {
    let size = members.len();
    let m = ranks.m() as f64;
    let pinned = members[0] == 0;

    let mut winners = Vec::new();
    let mut counts = Vec::new();
    for (e, ev) in ranks.events().iter().enumerate() {
        if let Some(local) = members.iter().position(|&j| j == ev.stage) {
            winners.push(local);
            let c = ranks.counts(e);
            counts.extend(members.iter().map(|&j| c[j] as f64));
        }
    }
    let loglik = |g: &[f64]| -> f64 {
        winners
            .iter()
            .zip(counts.chunks_exact(size))
            .map(|(&w, c)| g[w].ln() - c.iter().zip(g).map(|(a, b)| a * b).sum::<f64>().ln())
            .sum()
    };

    let mut gamma: Vec<f64> = if pinned {
        members.iter().map(|&j| (n - j) as f64).collect()
    } else {
        vec![1.0; size]
    };
    if size == 1 {
        return ComponentFit {
            log_likelihood: loglik(&gamma),
            gamma,
            iterations: 0,
            converged: true,
        };
    }

    let mut denom = vec![0.0; size];
    let mut iterations = 0;
    let mut converged = false;
    #[cfg(debug_assertions)]
    let mut last = loglik(&gamma);
    while iterations < options.max_iterations {
        iterations += 1;
        denom.iter_mut().for_each(|d| *d = 0.0);
        for c in counts.chunks_exact(size) {
            let risk: f64 = c.iter().zip(&gamma).map(|(a, b)| a * b).sum();
            let inv = 1.0 / risk;
            for (d, &ck) in denom.iter_mut().zip(c) {
                *d += ck * inv;
            }
        }
        let mut change: f64 = 0.0;
        for k in 0..size {
            if pinned && k == 0 {
                continue;
            }
            let next = m / denom[k];
            change = change.max(((next - gamma[k]) / gamma[k]).abs());
            gamma[k] = next;
        }
        if !pinned {
            let s = gamma[0];
            gamma.iter_mut().for_each(|g| *g /= s);
        }
        #[cfg(debug_assertions)]
        {
            let now = loglik(&gamma);
            debug_assert!(
                now >= last - 1e-9 * last.abs().max(1.0),
                "profile likelihood decreased: {last} -> {now}"
            );
            last = now;
        }
        if change < options.tolerance {
            converged = true;
            break;
        }
    }
    ComponentFit {
        log_likelihood: loglik(&gamma),
        gamma,
        iterations,
        converged,
    }
}
