//! Power of the LR and Wald tests as a function of the level.

use loadshare::model::{static_gamma, ModelParams};
use loadshare::param_test::{power_curve, ParamStatistic, ParamTestSpec};

fn main() -> loadshare::Result<()> {
    let (n, m) = (4, 10);
    let spec = ParamTestSpec::new(static_gamma(n, n), ParamStatistic::Lr).replications(10_000);
    for alpha in [[1.0, 1.4, 1.8, 2.2], [1.0, 2.0, 2.0, 2.0]] {
        let alt = ModelParams::from_alpha(n, n, m, &alpha)?;
        println!("alpha = {alpha:?}");
        for p in power_curve(alt.gamma(), n, m, &spec, 5000, &[0.01, 0.05, 0.1])? {
            println!("  level {:>4}: LR {:.3}  W {:.3}", p.level, p.lr, p.wald);
        }
    }
    Ok(())
}
