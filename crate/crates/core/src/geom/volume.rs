use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::balls::enclosing_ball;
use super::body::ConvexBody;
use super::linalg::dot;
use super::lp;
use super::rng::RngSeed;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolumeMethod {
    /// Cone decomposition of the boundary triangulation.
    Exact,
    /// Rejection sampling from the enclosing ball.
    MonteCarlo { samples: usize, seed: RngSeed },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Volume of a unit ball in `R^n`.
pub(crate) fn unit_ball_volume(n: usize) -> f64 {
    let (mut v, mut k) = if n.is_multiple_of(2) { (1.0, 0) } else { (2.0, 1) };
    while k < n {
        k += 2;
        v *= 2.0 * std::f64::consts::PI / k as f64;
    }
    v
}

/// Uniform point in the unit ball of `R^n`.
pub(crate) fn sample_unit_ball<R: Rng>(rng: &mut R, n: usize, out: &mut [f64]) {
    let mut s = 0.0;
    for x in out.iter_mut() {
        *x = rng.sample(StandardNormal);
        s += *x * *x;
    }
    let u: f64 = rng.random();
    let scale = u.powf(1.0 / n as f64) / s.sqrt();
    out.iter_mut().for_each(|x| *x *= scale);
}

pub fn volume(body: &ConvexBody, method: VolumeMethod) -> Result<VolumeEstimate> {
    match method {
        VolumeMethod::Exact => {
            if body.dim() > body.exact_cap() {
                return Err(Error::MethodUnavailable { what: "exact volume", dim: body.dim() });
            }
            Ok(VolumeEstimate { value: body.boundary()?.volume, std_error: 0.0 })
        }
        VolumeMethod::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidArgument("Monte-Carlo volume needs at least one sample".into()));
            }
            let n = body.dim();
            let ball = enclosing_ball(body)?;
            let facets = body.facets().ok();
            let tol = body.tolerance();
            let mut rng = seed.rng();
            let mut p = vec![0.0; n];
            let mut hits = 0usize;
            for _ in 0..samples {
                sample_unit_ball(&mut rng, n, &mut p);
                for (x, c) in p.iter_mut().zip(ball.center.iter()) {
                    *x = c + ball.radius * *x;
                }
                let inside = match facets {
                    Some(fs) => fs.iter().all(|f| dot(f.normal.as_slice(), &p) <= f.offset + tol),
                    None => lp::hull_contains(body.flat(), n, &p, tol),
                };
                if inside {
                    hits += 1;
                }
            }
            let frac = hits as f64 / samples as f64;
            let ball_vol = unit_ball_volume(n) * ball.radius.powi(n as i32);
            Ok(VolumeEstimate {
                value: frac * ball_vol,
                std_error: ball_vol * (frac * (1.0 - frac) / samples as f64).sqrt(),
            })
        }
    }
}

impl ConvexBody {
    /// Exact volume; fails above the exact dimension cap.
    pub fn volume(&self) -> Result<f64> {
        volume(self, VolumeMethod::Exact).map(|v| v.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn exact_volumes() {
        for n in 2..=6 {
            assert!((ConvexBody::cube(n, 0.0, 1.0).unwrap().volume().unwrap() - 1.0).abs() < 1e-12);
        }
        let s = ConvexBody::standard_simplex(4).unwrap();
        assert!((s.volume().unwrap() - 1.0 / 24.0).abs() < 1e-14);
        let b = ConvexBody::axis_box(&[0.0, 0.0], &[2.0, 2.1], "b").unwrap();
        assert!((b.volume().unwrap() - 4.2).abs() < 1e-12);
    }

    #[test]
    fn exact_unavailable_above_cap() {
        let c = ConvexBody::from_flat_with_cap(3, ConvexBody::cube(3, 0.0, 1.0).unwrap().flat(), "c", 2).unwrap();
        assert!(matches!(c.volume(), Err(Error::MethodUnavailable { .. })));
        let mc = volume(&c, VolumeMethod::MonteCarlo { samples: 4000, seed: RngSeed::new(1, 0) }).unwrap();
        assert!((mc.value - 1.0).abs() < 4.0 * mc.std_error);
    }
}
