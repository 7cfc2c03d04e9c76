//! Draw failure times of parallel load-sharing systems.

use loadshare::mc::stream;
use loadshare::model::{alpha_to_gamma, gamma_from_censoring_scheme};
use loadshare::sampling::sample;
use loadshare::{BaselineCdf, ModelParams};

fn main() -> loadshare::Result<()> {
    // four components, load share grows after each failure
    let params = ModelParams::from_alpha(4, 4, 5, &[1.0, 1.4, 1.8, 2.2])?;
    println!("gamma = {:?}", params.gamma());
    assert_eq!(params.gamma(), alpha_to_gamma(4, &params.alpha()).as_slice());

    let weibull = BaselineCdf::weibull(1.5, 1.0)?;
    let data = sample(&params, &weibull, &mut stream(7, 0));
    for row in data.rows() {
        println!("{row:?}");
    }

    // progressive type-II censoring is a special rate vector
    println!("censoring (1,0,2) of 6 -> {:?}", gamma_from_censoring_scheme(6, &[1, 0, 2])?);
    Ok(())
}
