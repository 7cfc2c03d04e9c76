//! The asymptotic variance function g and the weight k of the weighted KS
//! statistic.

use loadshare::gof::{expected_gamma_at_risk, g_variance, weight_k, VarianceFunction};

fn main() -> loadshare::Result<()> {
    let gamma = [2.0, 1.0];
    for p in [0.1, 0.5, 0.9, 0.999] {
        println!(
            "p {p:<6} E {:.4}  g {:.6} (closed form {:.6})  k {:.4}",
            expected_gamma_at_risk(&gamma, p)?,
            g_variance(&gamma, p)?,
            p / (2.0 * (1.0 - p)),
            weight_k(&gamma, p)?
        );
    }
    // tied rates go through the tabulated evaluator
    let vf = VarianceFunction::new(&[3.0, 3.0, 3.0])?;
    println!("tied rates: g(0.5) = {:.6}, k(0.5) = {:.6}", vf.g(0.5), vf.weight(0.5));
    Ok(())
}
