//! Exact conditional goodness-of-fit tests with unknown stage rates.
//!
//! Under the null the data are mapped to the standard exponential scale,
//! where the known-baseline MLE of the rates is sufficient. Given the MLE,
//! the data are distributed as
//! `(V_1, ..., V_r) diag(1/n, M/gamma_2, ..., M/gamma_r) A`
//! with `V_1` iid standard exponential, `V_j` flat Dirichlet and `A` the
//! upper triangular matrix of ones, so the conditional null law of any
//! statistic is simulated directly.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::baseline::BaselineCdf;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::estimate::mle_known_baseline;
use crate::mc::{self, mc_p_value, McPlan, Replicate, Stream};
use crate::model::{check_positive, ModelParams};
use crate::param_test::Decision;
use crate::ranks::{RankStructure, TiePolicy};
use crate::sampling::{sample, to_exponential_scale};

use super::statistics::{evaluate, GofStatistics, StatisticOptions};
use super::variance::VarianceFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GofStatistic {
    #[serde(rename = "K")]
    K,
    #[serde(rename = "K-weighted")]
    KWeighted,
    #[serde(rename = "Z")]
    Z,
}

impl GofStatistic {
    pub const ALL: [GofStatistic; 3] = [GofStatistic::K, GofStatistic::KWeighted, GofStatistic::Z];

    pub fn pick(self, s: &GofStatistics) -> f64 {
        match self {
            GofStatistic::K => s.k,
            GofStatistic::KWeighted => s.k_weighted,
            GofStatistic::Z => s.z,
        }
    }
}

impl fmt::Display for GofStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GofStatistic::K => "K",
            GofStatistic::KWeighted => "K-weighted",
            GofStatistic::Z => "Z",
        })
    }
}

impl FromStr for GofStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k" | "ks" => Ok(GofStatistic::K),
            "k-weighted" | "kw" | "weighted" | "ktilde" => Ok(GofStatistic::KWeighted),
            "z" => Ok(GofStatistic::Z),
            other => Err(Error::Config(format!(
                "unknown statistic '{other}' (k|k-weighted|z)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GofTestSpec {
    pub baseline: BaselineCdf,
    pub statistic: GofStatistic,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_q")]
    pub q: f64,
    pub inner_replications: usize,
    pub level: f64,
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub ties: TieHandling,
}

fn default_rho() -> f64 {
    0.5
}

fn default_q() -> f64 {
    1.0
}

/// Serializable mirror of [`TiePolicy`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieHandling {
    #[default]
    Reject,
    SharedRiskSet,
}

impl From<TieHandling> for TiePolicy {
    fn from(t: TieHandling) -> Self {
        match t {
            TieHandling::Reject => TiePolicy::Reject,
            TieHandling::SharedRiskSet => TiePolicy::SharedRiskSet,
        }
    }
}

impl GofTestSpec {
    pub fn new(baseline: BaselineCdf, statistic: GofStatistic) -> Self {
        Self {
            baseline,
            statistic,
            rho: default_rho(),
            q: default_q(),
            inner_replications: 100,
            level: 0.05,
            seed: 1,
            threads: None,
            ties: TieHandling::Reject,
        }
    }

    fn options(&self) -> Result<StatisticOptions> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidParams(format!("level {} not in (0,1)", self.level)));
        }
        if self.inner_replications == 0 {
            return Err(Error::InvalidParams("inner replications must be positive".into()));
        }
        StatisticOptions::new(self.rho, self.q)
    }
}

/// One draw of the data given the known-baseline MLE `gamma_hat`
/// (`gamma_hat[0] = n`), on the standard exponential scale.
pub fn conditional_sample<R: Rng + ?Sized>(gamma_hat: &[f64], m: usize, rng: &mut R) -> Result<DataMatrix> {
    check_positive("gamma_hat", gamma_hat)?;
    if m == 0 {
        return Err(Error::InvalidParams("M must be positive".into()));
    }
    Ok(draw_conditional(gamma_hat, m, rng))
}

fn draw_conditional<R: Rng + ?Sized>(gamma_hat: &[f64], m: usize, rng: &mut R) -> DataMatrix {
    let r = gamma_hat.len();
    let mut values = vec![0.0; m * r];
    for i in 0..m {
        values[i * r] = rng.sample::<f64, _>(Exp1) / gamma_hat[0];
    }
    let mut column = vec![0.0; m];
    for j in 1..r {
        for c in column.iter_mut() {
            *c = rng.sample(Exp1);
        }
        let total: f64 = column.iter().sum();
        let scale = m as f64 / (gamma_hat[j] * total);
        for (i, c) in column.iter().enumerate() {
            values[i * r + j] = values[i * r + j - 1] + c * scale;
        }
    }
    DataMatrix::from_trusted(m, r, values)
}

/// Observed statistics and conditioning statistic for data on the
/// exponential scale.
struct Prepared {
    gamma_hat: Vec<f64>,
    weight: VarianceFunction,
    observed: GofStatistics,
}

fn prepare(w_data: &DataMatrix, n: usize, opts: &StatisticOptions, ties: TiePolicy) -> Result<Prepared> {
    let gamma_hat = mle_known_baseline(w_data, &BaselineCdf::standard_exponential(), n)?.conditioning_gamma();
    let weight = VarianceFunction::new(&gamma_hat)?;
    let ranks = RankStructure::with_policy(w_data, ties)?;
    let hazards: Vec<f64> = ranks.events().iter().map(|e| e.time).collect();
    let observed = evaluate(&ranks, &gamma_hat, &hazards, opts, Some(&weight))?;
    Ok(Prepared {
        gamma_hat,
        weight,
        observed,
    })
}

fn inner_statistics(prep: &Prepared, m: usize, opts: &StatisticOptions, rng: &mut Stream) -> GofStatistics {
    let d = draw_conditional(&prep.gamma_hat, m, rng);
    let ranks = RankStructure::new(&d).expect("conditional samples are continuous");
    let hazards: Vec<f64> = ranks.events().iter().map(|e| e.time).collect();
    evaluate(&ranks, &prep.gamma_hat, &hazards, opts, Some(&prep.weight)).expect("valid inner sample")
}

/// p-values of all three conditional tests for one data set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalPValues {
    pub gamma_hat_ml: Vec<f64>,
    pub observed: GofStatistics,
    pub p_k: f64,
    pub p_k_weighted: f64,
    pub p_z: f64,
}

impl ConditionalPValues {
    pub fn get(&self, s: GofStatistic) -> f64 {
        match s {
            GofStatistic::K => self.p_k,
            GofStatistic::KWeighted => self.p_k_weighted,
            GofStatistic::Z => self.p_z,
        }
    }
}

fn p_values(prep: Prepared, null: &[GofStatistics]) -> ConditionalPValues {
    let col = |s: GofStatistic| -> f64 {
        let v: Vec<f64> = null.iter().map(|x| s.pick(x)).collect();
        mc_p_value(&v, s.pick(&prep.observed))
    };
    ConditionalPValues {
        p_k: col(GofStatistic::K),
        p_k_weighted: col(GofStatistic::KWeighted),
        p_z: col(GofStatistic::Z),
        gamma_hat_ml: prep.gamma_hat,
        observed: prep.observed,
    }
}

/// Runs the three conditional tests of `H0: F = baseline`. Inner replicate
/// `k` uses stream `k` of `seed`; `threads = Some(1)` or `None` as in
/// [`McPlan`].
#[allow(clippy::too_many_arguments)]
pub fn conditional_p_values(
    data: &DataMatrix,
    n: usize,
    baseline: &BaselineCdf,
    opts: &StatisticOptions,
    inner: usize,
    seed: u64,
    threads: Option<usize>,
    ties: TiePolicy,
) -> Result<ConditionalPValues> {
    if data.r() > n {
        return Err(Error::InvalidParams(format!("r={} exceeds n={n}", data.r())));
    }
    let w_data = to_exponential_scale(data, baseline)?;
    let prep = prepare(&w_data, n, opts, ties)?;
    let plan = McPlan::new(seed, inner).threads(threads);
    let null = mc::run(&plan, |_, rng| Replicate {
        value: inner_statistics(&prep, data.m(), opts, rng),
        flagged: false,
    });
    Ok(p_values(prep, &null.values))
}

/// Same as [`conditional_p_values`] with the inner loop run sequentially on
/// streams of `seed` (for use inside an outer parallel loop).
fn conditional_p_values_serial(
    w_data: &DataMatrix,
    n: usize,
    opts: &StatisticOptions,
    inner: usize,
    seed: u64,
) -> Result<ConditionalPValues> {
    let prep = prepare(w_data, n, opts, TiePolicy::Reject)?;
    let null: Vec<GofStatistics> = (0..inner)
        .map(|k| inner_statistics(&prep, w_data.m(), opts, &mut mc::stream(seed, k as u64)))
        .collect();
    Ok(p_values(prep, &null))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GofReport {
    pub statistic: f64,
    pub kind: GofStatistic,
    pub rho: f64,
    pub q: f64,
    pub gamma_hat_ml: Vec<f64>,
    pub p_value: f64,
    pub inner_reps: usize,
    pub level: f64,
    pub decision: Decision,
    pub seed: u64,
}

pub fn conditional_gof_test(data: &DataMatrix, n: usize, spec: &GofTestSpec) -> Result<GofReport> {
    let opts = spec.options()?;
    let all = conditional_p_values(
        data,
        n,
        &spec.baseline,
        &opts,
        spec.inner_replications,
        spec.seed,
        spec.threads,
        spec.ties.into(),
    )?;
    let p_value = all.get(spec.statistic);
    Ok(GofReport {
        statistic: spec.statistic.pick(&all.observed),
        kind: spec.statistic,
        rho: spec.rho,
        q: spec.q,
        gamma_hat_ml: all.gamma_hat_ml,
        p_value,
        inner_reps: spec.inner_replications,
        level: spec.level,
        decision: if p_value <= spec.level {
            Decision::Reject
        } else {
            Decision::Retain
        },
        seed: spec.seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GofPower {
    pub level: f64,
    pub k: f64,
    pub k_weighted: f64,
    pub z: f64,
    pub outer: usize,
    pub inner: usize,
}

/// p-values `[K, Kw, Z]` of the conditional tests of `H0: F = null` for
/// `outer` data sets drawn with rates `params` and baseline `truth`. Outer
/// replicate `o` draws its data from stream `o` of `seed` and its inner
/// samples from streams of `derive_seed(seed, o)`. Data outside the support
/// of `null` get p-value 0.
#[allow(clippy::too_many_arguments)]
pub fn gof_p_value_draws(
    params: &ModelParams,
    truth: &BaselineCdf,
    null: &BaselineCdf,
    opts: &StatisticOptions,
    outer: usize,
    inner: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<[f64; 3]>> {
    if inner == 0 {
        return Err(Error::InvalidParams("inner replications must be positive".into()));
    }
    let plan = McPlan::new(seed, outer).threads(threads);
    let res = mc::run(&plan, |o, rng| {
        let x = sample(params, truth, rng);
        let p = to_exponential_scale(&x, null)
            .and_then(|w| conditional_p_values_serial(&w, params.n(), opts, inner, mc::derive_seed(seed, o as u64)));
        match p {
            Ok(p) => Replicate {
                value: [p.p_k, p.p_k_weighted, p.p_z],
                flagged: false,
            },
            Err(Error::OutsideSupport { .. }) => Replicate {
                value: [0.0; 3],
                flagged: true,
            },
            Err(e) => panic!("{e}"),
        }
    });
    if res.panicked > 0 {
        return Err(Error::Degenerate(format!("{} outer replicates failed", res.panicked)));
    }
    Ok(res.values)
}

/// Rejection rates of the three conditional tests at `level`; see
/// [`gof_p_value_draws`].
#[allow(clippy::too_many_arguments)]
pub fn gof_power(
    params: &ModelParams,
    truth: &BaselineCdf,
    null: &BaselineCdf,
    opts: &StatisticOptions,
    level: f64,
    outer: usize,
    inner: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<GofPower> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParams(format!("level {level} not in (0,1)")));
    }
    let draws = gof_p_value_draws(params, truth, null, opts, outer, inner, seed, threads)?;
    let rate = |i: usize| draws.iter().filter(|p| p[i] <= level).count() as f64 / outer as f64;
    Ok(GofPower {
        level,
        k: rate(0),
        k_weighted: rate(1),
        z: rate(2),
        outer,
        inner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream;

    #[test]
    fn conditional_samples_recover_the_estimate() {
        let gamma = [4.0, 4.2, 3.6];
        let exp = BaselineCdf::standard_exponential();
        let mut rng = stream(21, 0);
        for _ in 0..500 {
            let d = conditional_sample(&gamma, 10, &mut rng).unwrap();
            assert!(d.rows().all(|row| row.windows(2).all(|w| w[0] < w[1])));
            let est = mle_known_baseline(&d, &exp, 4).unwrap().conditioning_gamma();
            for (a, b) in est.iter().zip(gamma) {
                assert!((a - b).abs() < 1e-12 * b);
            }
        }
        assert!(conditional_sample(&[4.0, 0.0], 3, &mut rng).is_err());
    }

    #[test]
    fn p_values_in_unit_interval_and_thread_independent() {
        let params = ModelParams::from_alpha(4, 3, 10, &[1.0, 1.4, 1.8]).unwrap();
        let d = sample(&params, &BaselineCdf::standard_exponential(), &mut stream(2, 2));
        let opts = StatisticOptions::default();
        let exp = BaselineCdf::standard_exponential();
        let a = conditional_p_values(&d, 4, &exp, &opts, 199, 5, Some(1), TiePolicy::Reject).unwrap();
        let b = conditional_p_values(&d, 4, &exp, &opts, 199, 5, Some(3), TiePolicy::Reject).unwrap();
        assert_eq!(a, b);
        for s in GofStatistic::ALL {
            assert!(a.get(s) > 0.0 && a.get(s) <= 1.0);
        }
        let w = to_exponential_scale(&d, &exp).unwrap();
        assert_eq!(conditional_p_values_serial(&w, 4, &opts, 199, 5).unwrap(), a);
    }

    #[test]
    fn gross_misspecification_is_rejected() {
        let params = ModelParams::from_alpha(3, 3, 20, &[1.0, 1.0, 1.0]).unwrap();
        let d = sample(&params, &BaselineCdf::weibull(4.0, 1.0).unwrap(), &mut stream(3, 0));
        let spec = GofTestSpec {
            inner_replications: 199,
            ..GofTestSpec::new(BaselineCdf::standard_exponential(), GofStatistic::K)
        };
        let rep = conditional_gof_test(&d, 3, &spec).unwrap();
        assert_eq!(rep.decision, Decision::Reject);
        assert_eq!(rep.gamma_hat_ml[0], 3.0);
    }

    #[test]
    fn statistic_names_parse() {
        assert_eq!("kw".parse::<GofStatistic>().unwrap(), GofStatistic::KWeighted);
        assert_eq!("Z".parse::<GofStatistic>().unwrap(), GofStatistic::Z);
        assert!("ad".parse::<GofStatistic>().is_err());
        let json = serde_json::to_string(&GofStatistic::KWeighted).unwrap();
        assert_eq!(json, "\"K-weighted\"");
    }
}
