use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use nalgebra::Vector3;

use super::fn1::inverse_increasing;
use super::{real_fn, RealFn};
use crate::glstar::{GlStar, Meridian};
use crate::{Error, Result};

/// A symmetric gl pencil of the unit circle in the meridian plane, given by
/// the arc map `μ` from `A` (angles `[0, π/2]`) onto `−A` (angles
/// `[π, 3π/2]`). Its involution `σ₁` is `μ` on `A`, `μ⁻¹` on `−A`, and the
/// conjugates by the reflection `ρ: φ ↦ π − φ` in the `z`-axis on the two
/// remaining arcs.
#[derive(Clone)]
pub struct GlPencil {
    mu: Arc<dyn RealFn>,
}

impl std::fmt::Debug for GlPencil {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GlPencil").finish_non_exhaustive()
    }
}

const GRID: usize = 1024;
const ENDPOINT_TOL: f64 = 1e-12;

/// Builds a pencil from the angle map `μ: [0, π/2] → [π, 3π/2]`, which must
/// fix the endpoints `μ(0) = π`, `μ(π/2) = 3π/2` and increase strictly.
pub fn pencil_from_mu<M: RealFn + 'static>(mu: M) -> Result<GlPencil> {
    for (x, want) in [(0.0, PI), (FRAC_PI_2, 1.5 * PI)] {
        let got = mu.eval(x);
        if !((got - want).abs() <= ENDPOINT_TOL) {
            return Err(Error::condition("μ maps the ends of A to the ends of −A", &[x, got]));
        }
    }
    let grid: Vec<f64> = (0..GRID).map(|i| FRAC_PI_2 * i as f64 / (GRID - 1) as f64).collect();
    if let Some(w) = grid.windows(2).find(|w| !(mu.eval(w[1]) > mu.eval(w[0]))) {
        return Err(Error::condition("μ strictly increasing", &[w[0], w[1]]));
    }
    Ok(GlPencil { mu: Arc::new(mu) })
}

impl GlPencil {
    /// The pencil of diameters, `μ(θ) = π + θ`.
    pub fn diameters() -> GlPencil {
        GlPencil {
            mu: Arc::new(super::Fn1::Affine { a: 1.0, b: PI }),
        }
    }

    /// A pencil from a reparametrisation `m` of `[0, 1]` fixing the ends:
    /// `μ(θ) = π + (π/2)·m(2θ/π)`.
    pub fn from_reparametrization<M: RealFn + 'static>(m: M) -> Result<GlPencil> {
        pencil_from_mu(real_fn(move |theta| PI + FRAC_PI_2 * m.eval(theta / FRAC_PI_2)))
    }

    /// `μ(θ)` for `θ ∈ [0, π/2]`.
    pub fn mu(&self, theta: f64) -> f64 {
        self.mu.eval(theta)
    }

    /// `μ⁻¹(φ)` for `φ ∈ [π, 3π/2]`.
    pub fn mu_inverse(&self, phi: f64) -> f64 {
        inverse_increasing(self.mu.as_ref(), phi, 0.0, FRAC_PI_2)
    }

    /// The involution `σ₁` on angles, result in `[0, 2π[`.
    pub fn sigma1(&self, phi: f64) -> f64 {
        let phi = phi.rem_euclid(TAU);
        let r = if phi <= FRAC_PI_2 {
            self.mu(phi)
        } else if phi < PI {
            PI - self.mu(PI - phi)
        } else if phi <= 1.5 * PI {
            self.mu_inverse(phi)
        } else {
            PI - self.mu_inverse(3.0 * PI - phi)
        };
        r.rem_euclid(TAU)
    }
}

/// The latitudinal star swept by rotating the pencil about `Z`; every line
/// meets the axis.
pub fn latitudinal(pencil: GlPencil) -> GlStar {
    GlStar::from_meridian("latitudinal", LatitudinalMeridian { pencil })
}

struct LatitudinalMeridian {
    pencil: GlPencil,
}

impl Meridian for LatitudinalMeridian {
    fn image(&self, t: f64) -> Result<Vector3<f64>> {
        let t = t.clamp(0.0, 1.0);
        let theta = t.atan2(((1.0 - t) * (1.0 + t)).sqrt());
        let (s, c) = self.pencil.mu(theta).sin_cos();
        Ok(Vector3::new(c, 0.0, s))
    }

    fn parameter_for_height(&self, z: f64) -> Result<f64> {
        let phi = PI - z.clamp(-1.0, 0.0).asin();
        Ok(self.pencil.mu_inverse(phi).sin().clamp(0.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Fn1;
    use crate::glstar::meridian_point;

    #[test]
    fn diameters_give_antipodal_involution() {
        let p = GlPencil::diameters();
        for phi in [0.1, 1.0, 2.0, 3.5, 5.0] {
            let s = p.sigma1(phi);
            assert!(((s - phi).rem_euclid(TAU) - PI).abs() < 1e-12);
        }
        let star = latitudinal(p);
        let q = meridian_point(0.3);
        assert!((star.sigma(&q).unwrap() + q).norm() < 1e-12);
    }

    #[test]
    fn reparametrized_pencil_is_involutive_and_reflection_symmetric() {
        let p = GlPencil::from_reparametrization(Fn1::Power { p: 2.0 }).unwrap();
        for k in 0..50 {
            let phi = TAU * (k as f64 + 0.5) / 50.0;
            let s = p.sigma1(phi);
            assert!((p.sigma1(s) - phi).abs() < 1e-10, "φ={phi}");
            let rho = |x: f64| (PI - x).rem_euclid(TAU);
            assert!((p.sigma1(rho(phi)) - rho(s)).abs() < 1e-10);
        }
    }

    #[test]
    fn orientation_reversing_mu_rejected() {
        let e = pencil_from_mu(real_fn(|theta| 1.5 * PI - theta)).unwrap_err();
        assert!(matches!(e, Error::ConditionFailed { .. }));
    }

    #[test]
    fn meridian_lines_lie_in_the_meridian_plane() {
        let star = latitudinal(GlPencil::from_reparametrization(Fn1::Power { p: 2.0 }).unwrap());
        let s = star.sigma(&meridian_point(0.6)).unwrap();
        assert_eq!(s.y, 0.0);
    }
}
