//! The chain of mean inequalities behind the transport argument, on one
//! eigenvalue tuple and on a random suite.
//!
//! Run with `cargo run --release --example mean_chain`.

use wulff_lab::transport::{chain_evaluate, chain_suite, ChainSample, ChainSuiteConfig};

fn main() -> wulff_lab::Result<()> {
    let sample = ChainSample::from_eigenvalues(vec![2.0, 0.5], 0.2)?;
    let report = chain_evaluate(&sample);
    println!("U = {:.4}, V = {:.4}, W = {:.4}", sample.big_u, sample.big_v, sample.big_w);
    for (name, c) in report.displayed() {
        println!("{name:<28} {:>10.6} <= {:>10.6}  {}", c.lesser, c.greater, if c.holds { "ok" } else { "FAILS" });
    }

    let suite = chain_suite(&ChainSuiteConfig { count: 20_000, ..ChainSuiteConfig::default() })?;
    for t in &suite.tallies {
        println!("{:<28} {:>5} violations, worst margin {:.2e}", t.name, t.violations, t.worst_margin);
    }
    Ok(())
}
