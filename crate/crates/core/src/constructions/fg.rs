use nalgebra::Vector3;

use super::fn1::inverse_increasing;
use super::validation::{first_failure, one_minus_sq, sqrt_difference, HandSchedule, Validation};
use super::RealFn;
use crate::glstar::GlStar;
use crate::glstar::Meridian;
use crate::{Error, Result};

/// The star with `σ(p_t) = (g(t), ε(t)√(1 − f(t)² − g(t)²), −f(t))`, where
/// `ε = −1` on right reguli; see [`fg_star_with`].
pub fn fg_star<F, G>(f: F, g: G) -> Result<GlStar>
where
    F: RealFn + 'static,
    G: RealFn + 'static,
{
    fg_star_with(f, g, HandSchedule::default(), &Validation::default())
}

/// Hypotheses, checked on the `t`-grid: `f` is an increasing bijection of
/// `[0, 1]`; `g` is non-decreasing with `g(0) = −1`, `g(1) = 0` and
/// `−√(1 − f²) ≤ g ≤ 0`. The sign `ε` may only change inside an interval of
/// positive length on which `g = −√(1 − f²)`: each switch point and its
/// grid neighbours must satisfy the equality.
pub fn fg_star_with<F, G>(f: F, g: G, hand: HandSchedule, v: &Validation) -> Result<GlStar>
where
    F: RealFn + 'static,
    G: RealFn + 'static,
{
    validate(&f, &g, &hand, v)?;
    Ok(GlStar::from_meridian("fg", FgMeridian { f, g, hand }))
}

const BOUNDARY_TOL: f64 = 1e-12;

fn validate(f: &impl RealFn, g: &impl RealFn, hand: &HandSchedule, v: &Validation) -> Result<()> {
    for (name, x, want, got) in [
        ("f(0) = 0", 0.0, 0.0, f.eval(0.0)),
        ("f(1) = 1", 1.0, 1.0, f.eval(1.0)),
        ("g(0) = −1", 0.0, -1.0, g.eval(0.0)),
        ("g(1) = 0", 1.0, 0.0, g.eval(1.0)),
    ] {
        if !((got - want).abs() <= BOUNDARY_TOL) {
            return Err(Error::condition(name, &[x, got]));
        }
    }
    let grid = v.t_grid();
    if let Some(w) = grid.windows(2).find(|w| f.eval(w[1]) <= f.eval(w[0])) {
        return Err(Error::condition("f strictly increasing", &[w[0], w[1]]));
    }
    if let Some(w) = grid.windows(2).find(|w| g.eval(w[1]) < g.eval(w[0]) - 1e-15) {
        return Err(Error::condition("g non-decreasing", &[w[0], w[1]]));
    }
    if let Some(t) = first_failure(&grid, |t| {
        let (ft, gt) = (f.eval(t), g.eval(t));
        gt <= BOUNDARY_TOL && gt * gt <= one_minus_sq(ft) + BOUNDARY_TOL
    }) {
        return Err(Error::condition("−√(1 − f²) ≤ g ≤ 0", &[t, g.eval(t)]));
    }
    let delta = 1.0 / (grid.len() - 1) as f64;
    for &s in hand.switches() {
        let on_boundary = |t: f64| {
            let (ft, gt) = (f.eval(t), g.eval(t));
            (one_minus_sq(ft) - gt * gt).abs() <= BOUNDARY_TOL
        };
        if !(on_boundary(s - delta) && on_boundary(s) && on_boundary(s + delta)) {
            return Err(Error::condition(
                "ε changes only where g = −√(1 − f²) on an interval",
                &[s],
            ));
        }
    }
    Ok(())
}

struct FgMeridian<F, G> {
    f: F,
    g: G,
    hand: HandSchedule,
}

impl<F: RealFn, G: RealFn> Meridian for FgMeridian<F, G> {
    fn image(&self, t: f64) -> Result<Vector3<f64>> {
        let (ft, gt) = (self.f.eval(t), self.g.eval(t));
        let y = self.hand.at(t).epsilon() * sqrt_difference(one_minus_sq(ft), gt * gt);
        Ok(Vector3::new(gt, y, -ft))
    }

    fn parameter_for_height(&self, z: f64) -> Result<f64> {
        Ok(inverse_increasing(&self.f, -z, 0.0, 1.0))
    }
}
