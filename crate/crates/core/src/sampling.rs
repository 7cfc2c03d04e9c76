//! Exact samplers and spacing statistics.

use rand::Rng;
use rand_distr::Exp1;

use crate::baseline::BaselineCdf;
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Draws `M` iid systems of sequential order statistics.
///
/// Row `i` is built from iid standard exponentials `E_{i,l}` as
/// `X_i^(j) = F^{-1}(1 - exp(-sum_{l<=j} E_{i,l} / gamma_l))`, evaluated
/// through the inverse cumulative hazard. Draws are consumed row by row.
pub fn sample<R: Rng + ?Sized>(params: &ModelParams, baseline: &BaselineCdf, rng: &mut R) -> DataMatrix {
    sample_with_gamma(params.gamma(), params.m(), baseline, rng)
}

/// As [`sample`] for an arbitrary positive rate vector (e.g. progressive
/// censoring schemes, where `gamma_1 != n`).
pub fn sample_with_gamma<R: Rng + ?Sized>(
    gamma: &[f64],
    m: usize,
    baseline: &BaselineCdf,
    rng: &mut R,
) -> DataMatrix {
    let r = gamma.len();
    let mut values = Vec::with_capacity(m * r);
    for _ in 0..m {
        let mut h = 0.0;
        for g in gamma {
            let e: f64 = rng.sample(Exp1);
            h += e / g;
            values.push(baseline.inv_cum_hazard(h));
        }
    }
    DataMatrix::from_trusted(m, r, values)
}

/// Cumulative-hazard transform `Lambda^F(X)` of every entry, checking that
/// each observation lies strictly inside the support of `baseline`.
pub fn to_exponential_scale(data: &DataMatrix, baseline: &BaselineCdf) -> Result<DataMatrix> {
    let r = data.r();
    let mut values = Vec::with_capacity(data.values().len());
    for (k, &x) in data.values().iter().enumerate() {
        let h = baseline.cum_hazard(x);
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::OutsideSupport {
                row: k / r,
                col: k % r,
                value: x,
            });
        }
        values.push(h);
    }
    // strictly increasing maps can still collapse neighbours numerically
    DataMatrix::from_row_major(data.m(), r, values)
}

/// Normalized spacings `S_i^(j) = (n - j + 1) * (Lambda(X^(j)) - Lambda(X^(j-1)))`.
///
/// Under the model `alpha_j * S_i^(j)` are iid standard exponential. Returns
/// the `M x r` matrix row-major.
pub fn spacing_statistics(data: &DataMatrix, baseline: &BaselineCdf, n: usize) -> Result<Vec<Vec<f64>>> {
    if data.r() > n {
        return Err(Error::InvalidParams(format!(
            "data has r={} columns but n={n}",
            data.r()
        )));
    }
    let w = to_exponential_scale(data, baseline)?;
    Ok(w.rows()
        .map(|row| {
            let mut prev = 0.0;
            row.iter()
                .enumerate()
                .map(|(j, &h)| {
                    let s = (n - j) as f64 * (h - prev);
                    prev = h;
                    s
                })
                .collect()
        })
        .collect())
}
