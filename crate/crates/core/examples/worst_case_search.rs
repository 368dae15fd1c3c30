//! Random search for pairs that force a large Brunn-Minkowski constant.
//!
//! Run with `cargo run --release --example worst_case_search`.

use wulff_lab::functionals::OverlapOptions;
use wulff_lab::lab::worst_case_search;

fn main() -> wulff_lab::Result<()> {
    let report = worst_case_search(2, 3000, 7, &OverlapOptions::default())?;
    println!("{} pairs scored, {} skipped as near-equality", report.evaluated, report.skipped);
    for e in &report.best {
        println!("{:>6} {:<16?} param {:>9.3e}  c >= {:>8.3}  ({:.2e} of the proven constant)", e.index, e.family, e.parameter, e.c_lower, e.fraction_of_bound);
    }
    Ok(())
}
