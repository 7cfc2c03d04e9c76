use serde::Serialize;

use crate::baseline::BaselineCdf;
use crate::data::DataMatrix;
use crate::error::Result;
use crate::model::gamma_to_alpha;
use crate::sampling::spacing_statistics;

/// Maximum likelihood estimate of the load-sharing parameters for a known
/// baseline: `alpha_j = M / sum_i S_i^(j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MlEstimate {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl MlEstimate {
    /// The rate vector with the first entry pinned to `n`, the form used as
    /// conditioning statistic by the goodness-of-fit tests.
    pub fn conditioning_gamma(&self) -> Vec<f64> {
        let mut g = self.gamma.clone();
        g[0] = self.n as f64;
        g
    }

    pub fn conditioning_alpha(&self) -> Vec<f64> {
        gamma_to_alpha(self.n, &self.conditioning_gamma())
    }
}

pub fn mle_known_baseline(data: &DataMatrix, baseline: &BaselineCdf, n: usize) -> Result<MlEstimate> {
    let s = spacing_statistics(data, baseline, n)?;
    let (m, r) = (data.m(), data.r());
    let mut totals = vec![0.0; r];
    for row in &s {
        for (t, v) in totals.iter_mut().zip(row) {
            *t += v;
        }
    }
    let alpha: Vec<f64> = totals.iter().map(|t| m as f64 / t).collect();
    let gamma = alpha
        .iter()
        .enumerate()
        .map(|(j, a)| (n - j) as f64 * a)
        .collect();
    Ok(MlEstimate { n, alpha, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::stream;
    use crate::model::ModelParams;
    use crate::sampling::sample;

    #[test]
    fn unit_spacings_give_unit_alpha() {
        // n = 3, exponential baseline: S^(j) = (n-j+1) * spacing = 1
        let d = DataMatrix::from_rows(&[vec![1.0 / 3.0, 1.0 / 3.0 + 0.5, 1.0 / 3.0 + 0.5 + 1.0]])
            .unwrap();
        let est = mle_known_baseline(&d, &BaselineCdf::standard_exponential(), 3).unwrap();
        for a in &est.alpha {
            assert!((a - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exponential_baseline_closed_form() {
        let d = DataMatrix::from_rows(&[vec![0.2, 0.9, 1.0], vec![0.4, 0.5, 2.5]]).unwrap();
        let est = mle_known_baseline(&d, &BaselineCdf::standard_exponential(), 5).unwrap();
        let expect = [2.0 / 0.6, 2.0 / (0.7 + 0.1), 2.0 / (0.1 + 2.0)];
        for (g, e) in est.gamma.iter().zip(expect) {
            assert!((g - e).abs() < 1e-12, "{g} vs {e}");
        }
        assert_eq!(est.conditioning_gamma()[0], 5.0);
    }

    #[test]
    fn consistent_for_large_m() {
        let m = 10_000;
        let params = ModelParams::from_alpha(4, 3, m, &[1.0, 1.4, 1.8]).unwrap();
        let b = BaselineCdf::Weibull {
            shape: 2.0,
            scale: 1.0,
        };
        let d = sample(&params, &b, &mut stream(31, 0));
        let est = mle_known_baseline(&d, &b, 4).unwrap();
        for (a, t) in est.alpha.iter().zip(params.alpha()) {
            let se = t / (m as f64).sqrt();
            assert!((a - t).abs() < 3.0 * se, "{a} vs {t}");
        }
    }
}
