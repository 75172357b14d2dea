//! The simulated null-quantile table behind the robust correlation test.
//!
//! Under Gaussian independence the robust statistic is pivotal, so its
//! null quantiles depend only on n. Below n = 130 they come from a seeded
//! 100000-replicate Monte Carlo table (built lazily, persisted under
//! ROBUSTEST_CACHE); from n = 130 on, Student t(n-2) quantiles are used.
//!
//! Run with: cargo run --example null_quantiles
//! (first run generates the n = 20 table; later runs load it from disk)

use robustest::dist::{pearson_null_pvalue, pearson_null_quantile, t_quantile};

fn main() -> robustest::Result<()> {
    let n = 20;
    println!("null quantiles of the robust correlation statistic, n = {n}:");
    for p in [0.5, 0.9, 0.95, 0.975, 0.995] {
        let q_mc = pearson_null_quantile(n, p)?;
        let q_t = t_quantile(p, (n - 2) as f64)?;
        println!("  p = {p:<6} table = {q_mc:>7.4}   t({}) = {q_t:>7.4}", n - 2);
    }

    println!("\nfrom n = 130 on the Student quantiles take over exactly:");
    let q = pearson_null_quantile(200, 0.975)?;
    println!("  n = 200, p = 0.975 -> {q:.4} (= t(198) quantile)");

    println!("\ntwo-sided p-values for an observed statistic of 2.1:");
    for n in [20, 60, 200] {
        println!("  n = {n:<4} p = {:.4}", pearson_null_pvalue(2.1, n)?);
    }
    Ok(())
}
