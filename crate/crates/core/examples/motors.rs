//! Two-motor systems: load-share estimate, static-intensity tests and a
//! sweep of exponential null hypotheses.

use loadshare::cli::reliasoft_sweep;
use loadshare::estimate::fit_profile_likelihood;
use loadshare::param_test::{test_static_intensities, ParamStatistic};
use loadshare::reliasoft::{motor_data, N};
use loadshare::{RankStructure, TiePolicy};

fn main() -> loadshare::Result<()> {
    let data = motor_data();
    let ties = TiePolicy::SharedRiskSet;
    let fit = fit_profile_likelihood(&RankStructure::with_policy(&data, ties)?, N)?;
    println!("alpha_hat = {:.3?}", fit.alpha_hat);
    for s in [ParamStatistic::Lr, ParamStatistic::Wald] {
        let rep = test_static_intensities(&data, N, s, 0.05, 9999, 1, ties)?;
        println!("{}: {:.3}, p = {:.4}", rep.statistic_name, rep.statistic, rep.p_value);
    }
    println!("sigma   p(K)   p(Kw)  p(Z)");
    for row in reliasoft_sweep(999, 1, None)? {
        println!("{:>5} {:.3} {:.3} {:.3}", row.sigma, row.p_k, row.p_k_weighted, row.p_z);
    }
    Ok(())
}
