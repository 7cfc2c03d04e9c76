//! Seeded, parallel Monte Carlo replication.
//!
//! Replicate `k` of a plan with master seed `s` draws from the ChaCha8 stream
//! `k` keyed by `s`, so its random input is fixed by `(s, k)` alone. Results
//! are collected in replicate order and do not depend on the number of
//! worker threads.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Stream = ChaCha8Rng;

/// Independent random stream number `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives a child master seed, for nested plans (e.g. inner conditional
/// replications of outer replicate `index`).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over a keyed counter
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub type ProgressFn = Arc<dyn Fn(usize, usize) + Send + Sync>;

#[derive(Clone)]
pub struct McPlan {
    pub seed: u64,
    pub replications: usize,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    progress: Option<(usize, ProgressFn)>,
}

impl std::fmt::Debug for McPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("McPlan")
            .field("seed", &self.seed)
            .field("replications", &self.replications)
            .field("threads", &self.threads)
            .finish()
    }
}

impl McPlan {
    pub fn new(seed: u64, replications: usize) -> Self {
        Self {
            seed,
            replications,
            threads: None,
            progress: None,
        }
    }

    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    /// Calls `hook(done, total)` every `every` completed replicates.
    pub fn with_progress(mut self, every: usize, hook: ProgressFn) -> Self {
        self.progress = Some((every.max(1), hook));
        self
    }
}

/// Output of one replicate; `flagged` marks e.g. degenerate fits, which are
/// kept in the results.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Replicate<T> {
    pub value: T,
    pub flagged: bool,
}

impl From<f64> for Replicate<f64> {
    fn from(value: f64) -> Self {
        Replicate {
            value,
            flagged: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct McResult<T = f64> {
    pub values: Vec<T>,
    pub seed: u64,
    pub replications: usize,
    #[serde(skip)]
    pub elapsed: Duration,
    /// Replicates reported as flagged by the task.
    pub flagged: usize,
    /// Replicates whose task panicked; their value is `T::default()`.
    pub panicked: usize,
}

/// Runs `task(k, stream(seed, k))` for every replicate `k`.
pub fn run<T, F>(plan: &McPlan, task: F) -> McResult<T>
where
    T: Send + Default,
    F: Fn(usize, &mut Stream) -> Replicate<T> + Sync,
{
    let start = Instant::now();
    let done = AtomicUsize::new(0);
    let body = |k: usize| -> (T, bool, bool) {
        let mut rng = stream(plan.seed, k as u64);
        let out = catch_unwind(AssertUnwindSafe(|| task(k, &mut rng)));
        if let Some((every, hook)) = &plan.progress {
            let d = done.fetch_add(1, Ordering::Relaxed) + 1;
            if d % every == 0 || d == plan.replications {
                hook(d, plan.replications);
            }
        }
        match out {
            Ok(rep) => (rep.value, rep.flagged, false),
            Err(_) => (T::default(), false, true),
        }
    };
    let collect = || -> Vec<(T, bool, bool)> {
        (0..plan.replications).into_par_iter().map(body).collect()
    };
    let raw = match plan.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(collect),
            Err(_) => collect(),
        },
        None => collect(),
    };
    let mut values = Vec::with_capacity(raw.len());
    let (mut flagged, mut panicked) = (0, 0);
    for (v, f, p) in raw {
        values.push(v);
        flagged += f as usize;
        panicked += p as usize;
    }
    McResult {
        values,
        seed: plan.seed,
        replications: plan.replications,
        elapsed: start.elapsed(),
        flagged,
        panicked,
    }
}

impl McResult<f64> {
    pub fn quantile(&self, level: f64) -> Result<QuantileEstimate> {
        quantile(&self.values, level)
    }

    pub fn p_value(&self, observed: f64) -> f64 {
        mc_p_value(&self.values, observed)
    }

    /// Writes `replicate,value` lines for audit.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "replicate,value")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(w, "{k},{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuantileEstimate {
    pub value: f64,
    /// Half-width of the +-1 sd binomial order-statistic interval.
    pub se: f64,
}

fn sorted_finite_or_inf(values: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Empirical `level`-quantile: the order statistic of rank `ceil(level * R)`.
///
/// The standard error is half the distance between the order statistics at
/// ranks `k -+ sqrt(R level (1 - level))`. NaN values are ignored.
pub fn quantile(values: &[f64], level: f64) -> Result<QuantileEstimate> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParams(format!("quantile level {level} not in (0,1)")));
    }
    let v = sorted_finite_or_inf(values);
    if v.is_empty() {
        return Err(Error::InvalidParams("quantile of an empty sample".into()));
    }
    Ok(quantile_sorted(&v, level))
}

pub(crate) fn quantile_sorted(v: &[f64], level: f64) -> QuantileEstimate {
    let r = v.len();
    let k = ((level * r as f64).ceil() as usize).clamp(1, r);
    let d = (r as f64 * level * (1.0 - level)).sqrt().ceil() as usize;
    let lo = k.saturating_sub(d).max(1);
    let hi = (k + d).min(r);
    let se = if v[hi - 1].is_finite() && v[lo - 1].is_finite() {
        0.5 * (v[hi - 1] - v[lo - 1])
    } else {
        f64::INFINITY
    };
    QuantileEstimate {
        value: v[k - 1],
        se,
    }
}

/// Monte Carlo p-value `(1 + #{values >= observed}) / (R + 1)`.
pub fn mc_p_value(values: &[f64], observed: f64) -> f64 {
    let r = values.len();
    let exceed = values.iter().filter(|&&v| v >= observed).count();
    (1 + exceed) as f64 / (r + 1) as f64
}

/// Critical value matching the p-value rule: with `m = floor(level (R+1)) - 1`
/// exceedances allowed, `observed > crit` holds exactly when
/// `mc_p_value(values, observed) <= level`. Infinite when `m < 0`.
pub fn critical_value_for_p(values: &[f64], level: f64) -> f64 {
    let v = sorted_finite_or_inf(values);
    let r = v.len();
    let allowed = (level * (r + 1) as f64 + 1e-9).floor() as i64 - 1;
    if allowed < 0 || r == 0 {
        return f64::INFINITY;
    }
    let allowed = (allowed as usize).min(r);
    if allowed == r {
        return f64::NEG_INFINITY;
    }
    v[r - 1 - allowed]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn quantile_of_one_to_hundred() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(quantile(&v, 0.95).unwrap().value, 95.0);
        assert_eq!(quantile(&v, 0.9).unwrap().value, 90.0);
        assert!(quantile(&v, 0.0).is_err());
        assert!(quantile(&[], 0.5).is_err());
    }

    #[test]
    fn p_value_edges() {
        let v: Vec<f64> = (1..=99).map(f64::from).collect();
        assert_eq!(mc_p_value(&v, 1000.0), 1.0 / 100.0);
        assert_eq!(mc_p_value(&v, 1.0), 1.0);
        assert_eq!(mc_p_value(&v, -3.0), 1.0);
        assert_eq!(mc_p_value(&v, 50.0), 0.51);
    }

    #[test]
    fn critical_value_agrees_with_p_value_rule() {
        let mut rng = stream(5, 0);
        let v: Vec<f64> = (0..100).map(|_| rng.random::<f64>()).collect();
        for level in [0.01, 0.05, 0.1, 0.2] {
            let c = critical_value_for_p(&v, level);
            for _ in 0..2000 {
                let t: f64 = rng.random();
                assert_eq!(t > c, mc_p_value(&v, t) <= level, "level {level} t {t} c {c}");
            }
        }
        assert_eq!(critical_value_for_p(&v[..10], 0.05), f64::INFINITY);
    }

    #[test]
    fn single_replicate_equals_direct_call() {
        let plan = McPlan::new(42, 1);
        let res = run(&plan, |_, rng| Replicate::from(rng.random::<f64>()));
        let direct: f64 = stream(42, 0).random();
        assert_eq!(res.values, vec![direct]);
    }

    #[test]
    fn deterministic_across_runs_and_threads() {
        let task = |k: usize, rng: &mut Stream| -> Replicate<f64> {
            let x: f64 = rng.sample(StandardNormal);
            Replicate {
                value: x + k as f64,
                flagged: k % 7 == 0,
            }
        };
        let a = run(&McPlan::new(9, 500), task);
        let b = run(&McPlan::new(9, 500), task);
        let c = run(&McPlan::new(9, 500).threads(Some(1)), task);
        let d = run(&McPlan::new(9, 500).threads(Some(8)), task);
        assert_eq!(a.values, b.values);
        assert_eq!(a.values, c.values);
        assert_eq!(a.values, d.values);
        assert_eq!(a.flagged, 72);
    }

    #[test]
    fn panics_are_isolated() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let res = run(&McPlan::new(1, 10), |k, _| {
            if k == 3 {
                panic!("boom");
            }
            Replicate::from(k as f64)
        });
        std::panic::set_hook(prev);
        assert_eq!(res.panicked, 1);
        assert_eq!(res.values.len(), 10);
        assert_eq!(res.values[4], 4.0);
    }

    #[test]
    fn normal_quantile_oracle() {
        let res = run(&McPlan::new(2024, 100_000), |_, rng| {
            Replicate::from(rng.sample::<f64, _>(StandardNormal))
        });
        let q = res.quantile(0.95).unwrap();
        assert!((q.value - 1.6449).abs() < 0.02, "{q:?}");
        assert!(q.se > 0.0 && q.se < 0.02);
        let q90 = res.quantile(0.90).unwrap();
        assert!(q90.value <= q.value);
    }

    #[test]
    fn streams_are_uncorrelated() {
        let r = 20_000;
        let res = run(&McPlan::new(77, r), |_, rng| Replicate::from(rng.random::<f64>()));
        let v = &res.values;
        let mean = v.iter().sum::<f64>() / r as f64;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / r as f64;
        for lag in 1..5 {
            let cov = (0..r - lag)
                .map(|k| (v[k] - mean) * (v[k + lag] - mean))
                .sum::<f64>()
                / r as f64;
            assert!((cov / var).abs() < 3.0 / (r as f64).sqrt(), "lag {lag}");
        }
    }

    #[test]
    fn progress_hook_fires() {
        let count = Arc::new(AtomicUsize::new(0));
        let c2 = count.clone();
        let plan = McPlan::new(1, 100).with_progress(
            10,
            Arc::new(move |_, _| {
                c2.fetch_add(1, Ordering::Relaxed);
            }),
        );
        run(&plan, |_, _| Replicate::from(0.0));
        assert_eq!(count.load(Ordering::Relaxed), 10);
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(1, 0);
        let b = derive_seed(1, 1);
        let c = derive_seed(2, 0);
        assert!(a != b && a != c && b != c);
    }
}
