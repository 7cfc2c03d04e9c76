//! Sampling the data given the known-baseline estimate of the rates.

use loadshare::estimate::mle_known_baseline;
use loadshare::gof::conditional_sample;
use loadshare::mc::stream;
use loadshare::BaselineCdf;

fn main() -> loadshare::Result<()> {
    let gamma_hat = [4.0, 4.2, 3.6];
    let exp = BaselineCdf::standard_exponential();
    let mut rng = stream(9, 0);
    for _ in 0..3 {
        let x = conditional_sample(&gamma_hat, 6, &mut rng)?;
        let est = mle_known_baseline(&x, &exp, 4)?;
        println!("first row {:.3?} -> estimate {:.12?}", x.row(0), est.conditioning_gamma());
    }
    Ok(())
}
