//! The planar trace inequality for piecewise-linear functions.
//!
//! Run with `cargo run --release --example trace_inequality`.

use wulff_lab::geom::ConvexBody;
use wulff_lab::transport::{trace_inequality_for, trace_suite, TRACE_CONSTANT};

fn main() -> wulff_lab::Result<()> {
    let hexagon = ConvexBody::regular_polygon(6, 1.0)?;
    let c = trace_inequality_for(&hexagon, |[x, y]| (3.0 * x - y).tanh())?;
    println!("C0 = {TRACE_CONSTANT:.4}");
    println!("boundary term {:.5} <= gradient term {:.5} (median {:.4}, r {:.3}, R {:.3})", c.rhs, c.lhs, c.median, c.r, c.big_r);

    let suite = trace_suite(200, 1)?;
    println!("{} random instances, {} violations, smallest gradient/boundary ratio {:.3}", suite.instances, suite.violations, suite.min_ratio);
    Ok(())
}
