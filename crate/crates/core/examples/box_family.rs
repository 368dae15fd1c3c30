//! Lower bounds on the best Brunn-Minkowski constant from nearly equal
//! boxes, extrapolated to `ε = 0` and fitted against the dimension.
//!
//! Run with `cargo run --example box_family`.

use wulff_lab::lab::box_conjecture_experiment;

fn main() -> wulff_lab::Result<()> {
    let dims: Vec<usize> = (2..=10).collect();
    let table = box_conjecture_experiment(&dims, &[0.02, 0.01, 0.005])?;
    println!("{:>3} {:>12} {:>12} {:>10}", "n", "extrapolated", "exact limit", "A/(n eps)");
    for d in &table.dims {
        println!("{:>3} {:>12.4} {:>12.1} {:>10.4}", d.n, d.extrapolated, d.exact_limit, d.asymmetry_over_n_eps);
    }
    if let Some(fit) = table.fit {
        println!("c(n) ~ n^{:.3}, band {:?}", fit.exponent, fit.band);
    }
    Ok(())
}
