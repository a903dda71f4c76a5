use nalgebra::Vector3;

use super::validation::{first_failure, one_minus_sq, sqrt_difference, HandSchedule, Validation};
use super::RealFn;
use crate::glstar::{meridian_point, GlStar, Meridian, SurfaceEntry};
use crate::projgeom::second_sphere_point;
use crate::{Error, Result};

/// A symmetric star (`z(σ(p_t)) = −t`) from its cone/hyperboloid slopes
/// `a(t)`, with the default right reguli.
pub fn symmetric_star<A: RealFn + 'static>(a: A) -> Result<GlStar> {
    symmetric_star_with(a, HandSchedule::default(), &Validation::default())
}

/// [`symmetric_star`] with an explicit regulus schedule and sampling.
///
/// Hypotheses, checked on the `t`-grid: `a` is an increasing bijection
/// `[0, 1[ → [0, ∞[`; `t² ≤ a²/(1 + a²)`; `t²(1 + a²)/a² → 1` as `t → 0`;
/// reguli switch only at cones.
pub fn symmetric_star_with<A: RealFn + 'static>(a: A, hand: HandSchedule, v: &Validation) -> Result<GlStar> {
    validate(&a, &hand, v)?;
    Ok(GlStar::from_meridian("symmetric", SymmetricMeridian { a, hand }))
}

/// `c(t)` of the hyperbola `a²x² − z² = c²` through `p_t`.
fn c_of(a: f64, t: f64) -> f64 {
    sqrt_difference(a * a * one_minus_sq(t), t * t)
}

fn validate<A: RealFn>(a: &A, hand: &HandSchedule, v: &Validation) -> Result<()> {
    let a0 = a.eval(0.0);
    if !(a0.abs() <= 1e-12) {
        return Err(Error::condition("a(0) = 0", &[0.0, a0]));
    }
    let grid = v.t_grid();
    let inner = &grid[1..grid.len() - 1];
    if let Some(t) = first_failure(inner, |t| {
        let at = a.eval(t);
        at.is_finite() && at > 0.0
    }) {
        return Err(Error::condition("a(t) positive and finite on ]0,1[", &[t, a.eval(t)]));
    }
    if let Some(w) = grid[..grid.len() - 1].windows(2).find(|w| a.eval(w[1]) <= a.eval(w[0])) {
        return Err(Error::condition("a strictly increasing", &[w[0], w[1]]));
    }
    let near_one = 1.0 - 1e-9;
    if !(a.eval(near_one) >= 1e3) {
        return Err(Error::condition(
            "a(t) unbounded as t → 1",
            &[near_one, a.eval(near_one)],
        ));
    }
    if let Some(t) = first_failure(inner, |t| {
        let at = a.eval(t);
        let lhs = at * at * one_minus_sq(t);
        lhs - t * t >= -1e-14 * lhs.max(t * t)
    }) {
        return Err(Error::condition("t² ≤ a(t)²/(1 + a(t)²)", &[t]));
    }
    v.check_limit("t²(1 + a(t)²)/a(t)² → 1 as t → 0", 1.0, |t| {
        let at = a.eval(t);
        t * t * (1.0 + at * at) / (at * at)
    })?;
    hand.validate_at_cones(|t| c_of(a.eval(t), t))
}

struct SymmetricMeridian<A> {
    a: A,
    hand: HandSchedule,
}

impl<A: RealFn> SymmetricMeridian<A> {
    fn entry_at(&self, t: f64) -> Result<SurfaceEntry> {
        let a = self.a.eval(t);
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::EvalError(format!("slope a({t}) = {a}")));
        }
        Ok(SurfaceEntry::conic(a, 0.0, c_of(a, t), self.hand.at(t)))
    }
}

impl<A: RealFn> Meridian for SymmetricMeridian<A> {
    fn image(&self, t: f64) -> Result<Vector3<f64>> {
        if t <= 0.0 {
            return Ok(Vector3::new(-1.0, 0.0, 0.0));
        }
        if t >= 1.0 {
            return Ok(Vector3::new(0.0, 0.0, -1.0));
        }
        let e = self.entry_at(t)?;
        let p = meridian_point(t);
        Ok(second_sphere_point(&p, &e.ruling_direction(p.x, t)))
    }

    fn parameter_for_height(&self, z: f64) -> Result<f64> {
        Ok((-z).clamp(0.0, 1.0))
    }

    fn entry(&self, t: f64) -> Option<Result<SurfaceEntry>> {
        Some(self.entry_at(t))
    }
}
