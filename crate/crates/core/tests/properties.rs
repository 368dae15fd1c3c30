use nalgebra::DMatrix;
use proptest::prelude::*;

use wulff_lab::functionals::{
    anisotropic_perimeter, bm_quantities, inverse_roundness, isoperimetric_deficit, relative_asymmetry, wulff_minimum,
    OverlapOptions,
};
use wulff_lab::geom::{
    apply_affine, body_from_json, body_to_json, chebyshev_ball, enclosing_ball, minkowski_sum, random_body, AffineMap,
    ConvexBody, RngSeed,
};
use wulff_lab::lab::{verify_dar, VerifyOptions};

fn body(n: usize, points: usize, symmetric: bool, seed: u64, stream: u64) -> ConvexBody {
    random_body(n, points, symmetric, RngSeed::new(seed, stream)).expect("random body")
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn volume_is_translation_invariant_and_homogeneous(
        n in 2usize..=4, extra in 0usize..6, seed in any::<u64>(), t in 0.2f64..5.0,
    ) {
        let k = body(n, n + 1 + extra, false, seed, 0);
        let v = k.volume().unwrap();
        let shift: Vec<f64> = (0..n).map(|i| 3.0 - i as f64).collect();
        prop_assert!(close(k.translated(&shift).volume().unwrap(), v, 1e-10));
        prop_assert!(close(k.scaled(t).volume().unwrap(), t.powi(n as i32) * v, 1e-10));
    }

    #[test]
    fn support_functions_add_under_minkowski_sum(n in 2usize..=3, seed in any::<u64>(), dir in prop::collection::vec(-1.0f64..1.0, 3)) {
        let k = body(n, n + 3, false, seed, 0);
        let l = body(n, n + 2, false, seed, 1);
        let m = minkowski_sum(&k, &l).unwrap();
        let u = &dir[..n];
        prop_assume!(u.iter().map(|x| x * x).sum::<f64>() > 1e-3);
        let lhs = m.support(u).unwrap();
        let rhs = k.support(u).unwrap() + l.support(u).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn classical_inequalities_hold(n in 2usize..=3, seed in any::<u64>()) {
        let k = body(n, n + 4, false, seed, 0);
        let l = body(n, n + 3, false, seed, 1);
        let bm = bm_quantities(&k, &l).unwrap();
        prop_assert!(bm.beta >= -1e-12);
        let p = anisotropic_perimeter(&k, &l).unwrap();
        prop_assert!(p >= wulff_minimum(&k, &l).unwrap() * (1.0 - 1e-12));
    }

    #[test]
    fn self_perimeter_is_n_times_volume(n in 2usize..=4, seed in any::<u64>()) {
        let k = body(n, n + 5, false, seed, 0);
        let nf = n as f64;
        prop_assert!(close(anisotropic_perimeter(&k, &k).unwrap(), nf * k.volume().unwrap(), 1e-10));
    }

    #[test]
    fn perimeter_is_additive_in_the_weight(n in 2usize..=3, seed in any::<u64>()) {
        let k = body(n, n + 3, false, seed, 0);
        let l = body(n, n + 3, false, seed, 1);
        let e = body(n, n + 4, false, seed, 2);
        let m = minkowski_sum(&k, &l).unwrap();
        let sum = anisotropic_perimeter(&e, &k).unwrap() + anisotropic_perimeter(&e, &l).unwrap();
        prop_assert!(close(anisotropic_perimeter(&e, &m).unwrap(), sum, 1e-9));
    }

    #[test]
    fn balls_bracket_the_body(n in 2usize..=4, seed in any::<u64>()) {
        let k = body(n, n + 4, false, seed, 0);
        let inner = chebyshev_ball(&k).unwrap();
        let outer = enclosing_ball(&k).unwrap();
        prop_assert!(inner.radius > 0.0 && inner.radius <= outer.radius);
        prop_assert!(k.slack(inner.center.as_slice()).unwrap() >= inner.radius * (1.0 - 1e-7));
        for v in k.vertices() {
            prop_assert!(outer.contains(v, 1e-9 * (1.0 + outer.radius)));
        }
    }

    #[test]
    fn roundness_respects_john_bounds(n in 2usize..=4, seed in any::<u64>(), symmetric in any::<bool>()) {
        let k = body(n, n + 3, symmetric, seed, 0);
        let q = inverse_roundness(&k, symmetric).unwrap().q_upper;
        let cap = if symmetric { (n as f64).sqrt() } else { n as f64 };
        prop_assert!((1.0 - 1e-9..=cap).contains(&q), "q = {q}, cap = {cap}");
    }

    #[test]
    fn json_roundtrip_keeps_the_body(n in 2usize..=4, seed in any::<u64>()) {
        let k = body(n, n + 3, false, seed, 0);
        let back = body_from_json(&body_to_json(&k)).unwrap();
        prop_assert_eq!(back.vertex_count(), k.vertex_count());
        prop_assert!(close(back.volume().unwrap(), k.volume().unwrap(), 1e-14));
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn functionals_are_affine_invariant(seed in any::<u64>(), a in -1.0f64..1.0, b in 0.3f64..2.0, c in -1.0f64..1.0) {
        let k = body(2, 6, false, seed, 0);
        let l = body(2, 5, false, seed, 1);
        let t = AffineMap { matrix: DMatrix::from_row_slice(2, 2, &[b, a, c, 1.0]), shift: vec![0.5, -2.0].into() };
        prop_assume!(!t.is_singular() && (b - a * c).abs() > 0.1);
        let (tk, tl) = (apply_affine(&k, &t).unwrap(), apply_affine(&l, &t).unwrap());
        let opts = OverlapOptions::default();
        let a0 = relative_asymmetry(&k, &l, &opts).unwrap().value;
        let a1 = relative_asymmetry(&tk, &tl, &opts).unwrap().value;
        prop_assert!((a0 - a1).abs() < 1e-5, "{a0} vs {a1}");
        let (b0, b1) = (bm_quantities(&k, &l).unwrap().beta, bm_quantities(&tk, &tl).unwrap().beta);
        prop_assert!((b0 - b1).abs() < 1e-10);
        let (d0, d1) = (isoperimetric_deficit(&k, &l).unwrap(), isoperimetric_deficit(&tk, &tl).unwrap());
        prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0));
    }

    #[test]
    fn asymmetry_is_symmetric_and_bounded(seed in any::<u64>()) {
        let k = body(2, 7, false, seed, 0);
        let l = body(2, 4, false, seed, 1);
        let opts = OverlapOptions::default();
        let kl = relative_asymmetry(&k, &l, &opts).unwrap().value;
        let lk = relative_asymmetry(&l, &k, &opts).unwrap().value;
        prop_assert!((0.0..=2.0).contains(&kl));
        prop_assert!((kl - lk).abs() < 1e-5, "{kl} vs {lk}");
    }

    #[test]
    fn planar_overlap_bound_holds(seed in any::<u64>(), extra in 0usize..8) {
        let k = body(2, 3 + extra, false, seed, 0);
        let l = body(2, 3 + (extra + 3) % 8, false, seed, 1);
        prop_assert!(verify_dar(&k, &l, &VerifyOptions::default()).unwrap().pass);
    }
}
