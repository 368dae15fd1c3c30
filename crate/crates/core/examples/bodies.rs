//! Building polytopes, their volumes, Minkowski sums, balls and roundness.
//!
//! Run with `cargo run --example bodies`.

use wulff_lab::functionals::inverse_roundness;
use wulff_lab::geom::{
    body_from_json, body_to_json, chebyshev_ball, enclosing_ball, minkowski_sum, random_body, ConvexBody, RngSeed,
};

fn main() -> wulff_lab::Result<()> {
    let square = ConvexBody::cube(2, -1.0, 1.0)?;
    let triangle = ConvexBody::standard_simplex(2)?;
    let sum = minkowski_sum(&square, &triangle)?;
    println!("|square| = {}, |triangle| = {}, |square + triangle| = {}", square.volume()?, triangle.volume()?, sum.volume()?);
    println!("square + triangle has {} vertices and {} facets", sum.vertex_count(), sum.facets()?.len());

    let k = random_body(3, 12, false, RngSeed::new(42, 0))?;
    let inner = chebyshev_ball(&k)?;
    let outer = enclosing_ball(&k)?;
    println!("{}: volume {:.4}, inradius {:.4}, circumradius {:.4}", k.label(), k.volume()?, inner.radius, outer.radius);

    for body in [ConvexBody::cube(3, 0.0, 1.0)?, ConvexBody::standard_simplex(3)?, k.clone()] {
        let q = inverse_roundness(&body, body.is_centrally_symmetric())?;
        println!("q_upper({}) = {:.4}", body.label(), q.q_upper);
    }

    let text = body_to_json(&triangle);
    println!("triangle as JSON:\n{text}");
    assert_eq!(body_from_json(&text)?.vertex_count(), 3);
    Ok(())
}
