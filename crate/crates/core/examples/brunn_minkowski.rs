//! Classical and stable Brunn-Minkowski, and the derivation of the stable
//! form from the stable Wulff inequality applied to `K + L`.
//!
//! Run with `cargo run --release --example brunn_minkowski`.

use wulff_lab::geom::ConvexBody;
use wulff_lab::lab::{derive_bm_from_iso, verify_bm, verify_classical, VerifyOptions};

fn main() -> wulff_lab::Result<()> {
    let opts = VerifyOptions::default();
    let k = ConvexBody::standard_simplex(2)?;
    let l = ConvexBody::regular_polygon(6, 0.8)?;

    for r in verify_classical(&k, &l, &opts)? {
        println!("{:?}: {:.6} >= {:.6}", r.name, r.lhs, r.rhs);
    }
    let r = verify_bm(&k, &l, &opts)?;
    println!("stable: beta = {:.5} >= A^2/(C sigma^(1/n)) = {:.3e} (A = {:.4}, sigma = {:.4})", r.lhs, r.rhs, r.asymmetry, r.sigma);

    let d = derive_bm_from_iso(&k, &l, &opts)?;
    println!("perimeter additivity residual {:.1e}", d.additivity_residual);
    println!("deficit identity residual {:.1e}", d.deficit_identity_residual);
    println!("A(K,L) = {:.4} <= A(M,K) + A(M,L) = {:.4}", d.asymmetry_kl, d.asymmetry_mk + d.asymmetry_ml);
    println!("beta = {:.5} >= weighted bound {:.3e} >= final bound {:.3e}", d.final_bound.lhs, d.weighted_bound, d.final_bound.rhs);
    Ok(())
}
