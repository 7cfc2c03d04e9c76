//! Power of the conditional tests against Weibull baselines.

use loadshare::gof::{gof_power, StatisticOptions};
use loadshare::{BaselineCdf, ModelParams};

fn main() -> loadshare::Result<()> {
    let exp = BaselineCdf::standard_exponential();
    let opts = StatisticOptions::default();
    println!("shape  M    K     Kw    Z");
    for shape in [0.8, 1.0, 1.5] {
        for m in [5, 10] {
            let params = ModelParams::from_alpha(4, 4, m, &[1.0, 1.4, 1.8, 2.2])?;
            let p = gof_power(&params, &BaselineCdf::weibull(shape, 1.0)?, &exp, &opts, 0.05, 1000, 100, 1, None)?;
            println!("{shape:<5} {m:>2} {:.3} {:.3} {:.3}", p.k, p.k_weighted, p.z);
        }
    }
    Ok(())
}
