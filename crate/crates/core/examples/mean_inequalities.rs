//! Stable AM-GM defects, the root-ratio inequality, the passage from
//! Brunn-Minkowski on boxes to AM-GM, and the randomised suite.
//!
//! Run with `cargo run --release --example mean_inequalities`.

use wulff_lab::meanineq::{amgm_suite, bm_to_amgm_limit, root_ratio_check, stable_amgm, SuiteConfig};

fn main() -> wulff_lab::Result<()> {
    let d = stable_amgm(&[4.0, 1.0, 9.0])?;
    println!("A = {:.6}, G = {:.6}", d.arith_mean, d.geo_mean);
    println!("A - G = {:.6}", d.arith_mean - d.geo_mean);
    println!("  lower bounds: sqrt-gm {:.6}, ratio {:.6}, pairwise {:.6}", d.defect_sqrt_gm, d.defect_ratio, d.defect_pairwise);

    let sharp = stable_amgm(&[1.0, 0.0, 0.0, 0.0])?;
    println!("(1,0,0,0): A - G = {}, sqrt-gm bound = {}", sharp.arith_mean - sharp.geo_mean, sharp.defect_sqrt_gm);

    let rr = root_ratio_check(&[0.1, 0.4, 0.25])?;
    println!("root ratio: {:.6} >= {:.6}", rr.lhs, rr.rhs);

    let limit = bm_to_amgm_limit(&[4.0, 1.0], &[1e-1, 1e-2, 1e-3, 1e-4])?;
    for row in &limit.rows {
        println!("eps {:>7.0e}: residual / eps = {:.6}", row.epsilon, row.residual_over_epsilon);
    }
    println!("first-order coefficient {:.6}", limit.first_order_coefficient);

    let report = amgm_suite(&SuiteConfig { count: 100_000, n: None, seed: 1, tolerance: 1e-10 });
    println!("suite: {} tuples, {} violations", report.tuples, report.violations);
    Ok(())
}
