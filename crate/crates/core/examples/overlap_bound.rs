//! Lower bound on `|K+L|` through the largest overlap of `K` with a
//! translate of `L`; proven in the plane.
//!
//! Run with `cargo run --release --example overlap_bound`.

use wulff_lab::functionals::{dar_overlap, OverlapOptions};
use wulff_lab::geom::ConvexBody;
use wulff_lab::lab::{corpus_pair, verify_dar, VerifyOptions};

fn main() -> wulff_lab::Result<()> {
    let k = ConvexBody::standard_simplex(2)?;
    let l = ConvexBody::cube(2, 0.0, 1.0)?;
    let m = dar_overlap(&k, &l, &OverlapOptions::default())?;
    println!("max overlap {:.6} at shift {:?}", m.max_overlap, m.shift.as_slice());
    let r = verify_dar(&k, &l, &VerifyOptions::default())?;
    println!("|K+L|^(1/2) = {:.6} >= {:.6}", r.lhs, r.rhs);

    let mut slack = f64::INFINITY;
    for i in 0..50 {
        let (k, l) = corpus_pair(2, 9, i)?;
        let r = verify_dar(&k, &l, &VerifyOptions::default())?;
        slack = slack.min(r.lhs - r.rhs);
    }
    println!("50 random planar pairs, smallest slack {slack:.4}");
    Ok(())
}
