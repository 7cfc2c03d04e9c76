use loadshare::estimate::{fit_profile_likelihood, mle_known_baseline, nelson_aalen};
use loadshare::gof::{conditional_p_values, gof_statistics, StatisticOptions};
use loadshare::mc::{self, stream, McPlan, Replicate};
use loadshare::model::static_gamma;
use loadshare::param_test::{exact_critical_value, param_statistics, test_parameter, ParamStatistic, ParamTestSpec};
use loadshare::sampling::sample;
use loadshare::{BaselineCdf, ModelParams, RankStructure, TiePolicy};
use proptest::prelude::*;

fn baseline_strategy() -> impl Strategy<Value = BaselineCdf> {
    prop_oneof![
        (0.3..3.0f64, 0.1..10.0f64).prop_map(|(k, s)| BaselineCdf::weibull(k, s).unwrap()),
        (0.3..4.0f64, 0.1..10.0f64).prop_map(|(k, s)| BaselineCdf::gamma(k, s).unwrap()),
        (0.0..100.0f64, 0.1..500.0f64).prop_map(|(l, s)| BaselineCdf::exponential(l, s).unwrap()),
    ]
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn statistics_do_not_depend_on_the_baseline(seed in 0u64..10_000, b in baseline_strategy(), m in 2usize..12) {
        let params = ModelParams::from_alpha(4, 3, m, &[1.0, 1.3, 0.8]).unwrap();
        let u = sample(&params, &BaselineCdf::Uniform, &mut stream(seed, 0));
        let x = sample(&params, &b, &mut stream(seed, 0));
        let ru = RankStructure::new(&u).unwrap();
        let rx = RankStructure::new(&x).unwrap();
        let g0 = static_gamma(4, 3);
        let (pu, fu) = param_statistics(&ru, 4, &g0).unwrap();
        let (px, fx) = param_statistics(&rx, 4, &g0).unwrap();
        prop_assert_eq!(fu.gamma_hat, fx.gamma_hat);
        prop_assert_eq!((pu.lr, pu.wald), (px.lr, px.wald));

        let opts = StatisticOptions::default();
        let gu = mle_known_baseline(&u, &BaselineCdf::Uniform, 4).unwrap().conditioning_gamma();
        let gx = mle_known_baseline(&x, &b, 4).unwrap().conditioning_gamma();
        for (a, c) in gu.iter().zip(&gx) {
            prop_assert!(close(*a, *c));
        }
        let su = gof_statistics(&u, &gu, &BaselineCdf::Uniform, &opts, TiePolicy::Reject).unwrap();
        let sx = gof_statistics(&x, &gx, &b, &opts, TiePolicy::Reject).unwrap();
        prop_assert!(close(su.k, sx.k) && close(su.k_weighted, sx.k_weighted) && close(su.z, sx.z), "{:?} {:?}", su, sx);
    }

    #[test]
    fn estimated_cdf_is_a_valid_distribution(seed in 0u64..10_000, m in 1usize..15) {
        let params = ModelParams::from_alpha(3, 3, m, &[1.0, 2.0, 0.5]).unwrap();
        let x = sample(&params, &BaselineCdf::standard_exponential(), &mut stream(seed, 1));
        let ranks = RankStructure::new(&x).unwrap();
        let est = nelson_aalen(&ranks, params.gamma()).unwrap();
        prop_assert!(est.cdf.is_nondecreasing());
        prop_assert!(est.cdf.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}

#[test]
fn wald_critical_value_with_censored_stages() {
    let spec = ParamTestSpec::new(static_gamma(4, 3), ParamStatistic::Wald)
        .level(0.1)
        .replications(20_000)
        .seed(5);
    let c = exact_critical_value(&spec, 4, 10).unwrap().value;
    assert!((c - 2.14).abs() < 0.1, "{c}");
}

#[test]
fn consistency_of_the_profile_estimate() {
    let (n, r, m) = (4, 3, 10_000);
    let params = ModelParams::static_intensities(n, r, m).unwrap();
    let fits = |seed: u64| {
        let x = sample(&params, &BaselineCdf::gamma(2.0, 1.0).unwrap(), &mut stream(seed, 0));
        fit_profile_likelihood(&RankStructure::new(&x).unwrap(), n).unwrap().gamma_hat
    };
    let reps: Vec<Vec<f64>> = (0..20).map(|k| fits(100 + k)).collect();
    let target = fits(7);
    for j in 1..r {
        let v: Vec<f64> = reps.iter().map(|g| g[j]).collect();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt();
        assert!((target[j] - params.gamma()[j]).abs() < 3.0 * sd, "stage {j}: {} sd {sd}", target[j]);
    }
}

#[test]
fn true_null_is_retained_at_the_nominal_rate() {
    let params = ModelParams::from_alpha(3, 3, 8, &[1.0, 1.5, 0.7]).unwrap();
    let runs = 200;
    let retained = (0..runs)
        .filter(|&k| {
            let x = sample(&params, &BaselineCdf::weibull(2.0, 1.0).unwrap(), &mut stream(9, k));
            let spec = ParamTestSpec::new(params.gamma().to_vec(), ParamStatistic::Lr)
                .replications(199)
                .seed(1000 + k);
            test_parameter(&x, 3, &spec, TiePolicy::Reject).unwrap().decision == loadshare::param_test::Decision::Retain
        })
        .count();
    let rate = retained as f64 / runs as f64;
    // 3 binomial SE around 0.95
    assert!((rate - 0.95).abs() < 3.0 * (0.95f64 * 0.05 / runs as f64).sqrt(), "{rate}");
}

#[test]
fn conditional_p_values_are_uniform_on_the_grid() {
    let params = ModelParams::from_alpha(3, 2, 6, &[1.0, 1.8]).unwrap();
    let inner = 19;
    let null = BaselineCdf::gamma(1.5, 2.0).unwrap();
    let outer = 2000;
    let res = mc::run(&McPlan::new(17, outer), |k, rng| {
        let x = sample(&params, &null, rng);
        let p = conditional_p_values(&x, 3, &null, &StatisticOptions::default(), inner, k as u64, Some(1), TiePolicy::Reject)
            .unwrap();
        Replicate::from(p.p_z)
    });
    // p takes values j/20; each of the 20 cells has probability 1/20
    let mut counts = [0usize; 20];
    for p in &res.values {
        counts[((p * 20.0).round() as usize) - 1] += 1;
    }
    let e = outer as f64 / 20.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    // 99.9% point of chi-square with 19 degrees of freedom
    assert!(chi2 < 43.8, "{counts:?}");
}
