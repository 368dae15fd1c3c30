//! The stable anisotropic isoperimetric inequality in its three constant
//! modes, on a square with a polygonal disc as Wulff shape and on random pairs.
//!
//! Run with `cargo run --release --example isoperimetric`.

use wulff_lab::lab::{corpus_pair, verify_isoperimetric, ConstantMode, VerifyOptions};
use wulff_lab::geom::ConvexBody;

fn main() -> wulff_lab::Result<()> {
    let opts = VerifyOptions::default();
    let square = ConvexBody::cube(2, -1.0, 1.0)?;
    let disc = ConvexBody::regular_polygon(256, 1.0)?;
    for mode in [ConstantMode::BodySpecific, ConstantMode::General, ConstantMode::Symmetric] {
        let r = verify_isoperimetric(&square, &disc, mode, &opts)?;
        println!(
            "{mode:?}: P = {:.6}, rhs = {:.6}, delta = {:.5}, A = {:.5}, C = {:.1}, A^2/(C delta) = {:.3e}",
            r.lhs, r.rhs, r.deficit, r.asymmetry, r.constant_used, r.ratio
        );
    }

    let mut worst = 0.0f64;
    for i in 0..20 {
        let (k, l) = corpus_pair(3, 5, i)?;
        let r = verify_isoperimetric(&k, &l, ConstantMode::BodySpecific, &opts)?;
        assert!(r.pass);
        worst = worst.max(r.ratio);
    }
    println!("20 random pairs in R^3: largest A^2/(C delta) = {worst:.3e}");
    Ok(())
}
