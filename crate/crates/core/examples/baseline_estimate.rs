//! Nelson-Aalen type estimate of the component lifetime distribution.

use loadshare::estimate::{fit_profile_likelihood, nelson_aalen};
use loadshare::mc::stream;
use loadshare::sampling::sample;
use loadshare::{BaselineCdf, ModelParams, RankStructure};

fn main() -> loadshare::Result<()> {
    let truth = BaselineCdf::exponential(0.0, 2.0)?;
    let params = ModelParams::from_alpha(3, 3, 100, &[1.0, 1.5, 2.0])?;
    let data = sample(&params, &truth, &mut stream(5, 0));
    let ranks = RankStructure::new(&data)?;
    let fit = fit_profile_likelihood(&ranks, 3)?;
    let est = nelson_aalen(&ranks, &fit.gamma_hat)?;
    println!("{:>6} {:>8} {:>8}", "t", "F_hat", "F");
    for t in [0.5, 1.0, 2.0, 4.0] {
        println!("{t:>6} {:>8.3} {:>8.3}", est.cdf.eval(t), truth.cdf(t));
    }
    Ok(())
}
