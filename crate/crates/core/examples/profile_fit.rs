//! Estimate load-sharing parameters without knowing the baseline.

use loadshare::estimate::{fit_profile_likelihood, profile_loglik};
use loadshare::mc::stream;
use loadshare::sampling::sample;
use loadshare::{BaselineCdf, DataMatrix, ModelParams, RankStructure};

fn main() -> loadshare::Result<()> {
    let params = ModelParams::from_alpha(3, 3, 200, &[1.0, 2.0, 3.0])?;
    let data = sample(&params, &BaselineCdf::gamma(2.0, 1.0)?, &mut stream(3, 0));
    let ranks = RankStructure::new(&data)?;
    let fit = fit_profile_likelihood(&ranks, 3)?;
    println!("alpha_hat = {:.3?} ({} iterations)", fit.alpha_hat, fit.iterations);
    println!("loglik at the truth {:.3}, at the fit {:.3}", profile_loglik(params.gamma(), &ranks)?, fit.log_likelihood);

    // every first failure precedes every second one: the second rate has
    // no finite maximizer and is reported in the limit
    let data = DataMatrix::from_rows(&[vec![1.0, 3.0], vec![2.0, 4.0]])?;
    let fit = fit_profile_likelihood(&RankStructure::new(&data)?, 2)?;
    println!("degenerate fit: gamma_hat = {:?}, {:?}", fit.gamma_hat, fit.degeneracy);
    Ok(())
}
