//! Simulated critical values of the LR and Wald statistics.

use loadshare::cli::critical_value_table;
use loadshare::mc::McPlan;
use loadshare::param_test::ParamStatistic;

fn main() -> loadshare::Result<()> {
    let plan = McPlan::new(1, 20_000);
    let rows = critical_value_table(
        &[3, 4],
        &[3, 4],
        &[5, 10],
        &[ParamStatistic::Lr, ParamStatistic::Wald],
        &[0.1, 0.05],
        &plan,
    )?;
    println!("n r  M level stat  crit   (se)");
    for r in rows {
        println!(
            "{} {} {:>2} {:>5} {:>4} {:>6.2} ({:.2})",
            r.n, r.r, r.m, r.level, r.statistic, r.critical_value, r.mc_se
        );
    }
    Ok(())
}
