//! Exact tests of "no load-sharing effect" (ordinary order statistics).

use loadshare::mc::stream;
use loadshare::param_test::{test_parameter, test_static_intensities, ParamStatistic, ParamTestSpec};
use loadshare::sampling::sample;
use loadshare::{BaselineCdf, ModelParams, TiePolicy};

fn main() -> loadshare::Result<()> {
    let params = ModelParams::from_alpha(4, 4, 10, &[1.0, 1.4, 1.8, 2.2])?;
    let data = sample(&params, &BaselineCdf::weibull(2.0, 10.0)?, &mut stream(11, 0));
    for s in [ParamStatistic::Lr, ParamStatistic::Wald] {
        let rep = test_static_intensities(&data, 4, s, 0.05, 4999, 1, TiePolicy::Reject)?;
        println!(
            "{:>2}: statistic {:.3}, critical value {:.3}, p = {:.4} -> {:?}",
            rep.statistic_name, rep.statistic, rep.critical_value, rep.p_value, rep.decision
        );
    }

    // any other hypothesized rate vector, first entry n
    let spec = ParamTestSpec::new(params.gamma().to_vec(), ParamStatistic::Lr).replications(4999);
    let rep = test_parameter(&data, 4, &spec, TiePolicy::Reject)?;
    println!("true rates: p = {:.4}", rep.p_value);
    Ok(())
}
