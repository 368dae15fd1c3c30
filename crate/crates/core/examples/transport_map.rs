//! Discrete Brenier map from the unit square onto `[0,2] × [0,1/2]`, its
//! global affine fit, local Jacobians and the asymmetry bound they give.
//!
//! Run with `cargo run --release --example transport_map`.

use wulff_lab::functionals::OverlapOptions;
use wulff_lab::geom::{ConvexBody, RngSeed};
use wulff_lab::transport::{asymmetry_gradient_bound_check, default_neighbors, discrete_brenier, local_jacobians};

fn main() -> wulff_lab::Result<()> {
    let k = ConvexBody::cube(2, 0.0, 1.0)?;
    let l = ConvexBody::axis_box(&[0.0, 0.0], &[2.0, 0.5], "flat box")?;
    let map = discrete_brenier(&k, &l, 1024, RngSeed::new(3, 0))?;
    println!("mean squared displacement {:.5}, best pair swap gain {:.2e}", map.cost, map.best_swap_gain());

    let fit = map.affine_fit()?;
    println!("fitted linear part:\n{:.4}", fit.matrix);

    let jac = local_jacobians(&map, default_neighbors(2))?;
    println!(
        "{} local fits, median det {:.4}, eigenvalues in [{:.3}, {:.3}]",
        jac.jacobians.len(),
        jac.median_determinant,
        jac.min_eigenvalue,
        jac.max_eigenvalue
    );

    let bound = asymmetry_gradient_bound_check(&k, &l, &map, &OverlapOptions::default())?;
    println!("A = {:.4} <= {:.4}: {}", bound.asymmetry, bound.bound, bound.holds);
    Ok(())
}
