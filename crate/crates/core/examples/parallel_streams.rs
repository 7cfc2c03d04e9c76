//! Reproducible Monte Carlo: replicate k always sees stream k of the seed.

use loadshare::mc::{self, McPlan, Replicate};
use rand::Rng;

fn main() {
    let task = |_k: usize, rng: &mut mc::Stream| Replicate::from(rng.random::<f64>());
    let one = mc::run(&McPlan::new(42, 10_000).threads(Some(1)), task);
    let many = mc::run(&McPlan::new(42, 10_000).threads(Some(4)), task);
    assert_eq!(one.values, many.values);
    let q = mc::quantile(&one.values, 0.95).unwrap();
    println!("0.95 quantile of U(0,1): {:.4} (se {:.4})", q.value, q.se);
    println!("p-value of 0.99: {:.4}", mc::mc_p_value(&one.values, 0.99));
}
