use std::sync::OnceLock;

use nalgebra::Vector3;
use rayon::prelude::*;

use super::validation::{HandSchedule, Validation};
use super::{Fn1, RealFn};
use crate::glstar::{meridian_point, GlStar, Meridian, SurfaceEntry};
use crate::projgeom::second_sphere_point;
use crate::verify::{default_root_grid, positive_root_count};
use crate::{Error, Result};

/// A family of meridian hyperbolas (or line pairs)
/// `H_a: a²x² − (z − b(a))² = c(a)²`, `a > 0`, `c ≥ 0`.
pub trait HyperbolaFamily: Send + Sync {
    fn b(&self, a: f64) -> f64;

    fn c(&self, a: f64) -> f64;

    /// Heights `(t(a), s(a))` of the points `p_t` and `p_{−s}` where `H_a`
    /// meets the right half of the unit circle.
    fn heights(&self, a: f64) -> (f64, f64) {
        heights_from_coefficients(a, self.b(a), self.c(a))
    }

    /// The slope `a` with `t(a) = t`.
    fn a_for_t(&self, t: f64) -> f64 {
        solve_log_increasing(|a| self.heights(a).0, t)
    }

    /// The slope `a` with `s(a) = s`.
    fn a_for_s(&self, s: f64) -> f64 {
        solve_log_increasing(|a| self.heights(a).1, s)
    }
}

/// Roots of `(a² + 1)z² − 2bz + b² + c² − a² = 0`, the heights where `H_a`
/// meets the circle, returned as `(t, s)` with the lower root `−s`.
///
/// The root of larger magnitude is computed directly and the other from the
/// product `t·s = (a² − b² − c²)/(a² + 1)`.
pub fn heights_from_coefficients(a: f64, b: f64, c: f64) -> (f64, f64) {
    let a2p1 = a * a + 1.0;
    let k = a * a - b * b - c * c;
    let root = (b * b + a2p1 * k).max(0.0).sqrt();
    if b >= 0.0 {
        let t = (b + root) / a2p1;
        (t, if root + b > 0.0 { k / (b + root) } else { 0.0 })
    } else {
        let s = (root - b) / a2p1;
        (k / (root - b), s)
    }
}

const LOG_SLOPE_RANGE: f64 = 60.0;

/// Solves `h(a) = target` for an increasing `h` in `u = ln a`: bisection
/// until the bracket is shorter than 1, then the Illinois variant of
/// regula falsi, which keeps the bracket and converges superlinearly.
fn solve_log_increasing<H: Fn(f64) -> f64>(h: H, target: f64) -> f64 {
    let g = |u: f64| h(u.exp()) - target;
    let (mut lo, mut hi) = (-LOG_SLOPE_RANGE, LOG_SLOPE_RANGE);
    let (mut glo, mut ghi) = (g(lo), g(hi));
    if glo >= 0.0 {
        return lo.exp();
    }
    if ghi <= 0.0 {
        return hi.exp();
    }
    while hi - lo > 1.0 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm < 0.0 {
            (lo, glo) = (mid, gm);
        } else {
            (hi, ghi) = (mid, gm);
        }
    }
    // end of the bracket replaced in the previous step (−1 low, 1 high)
    let mut moved = 0i8;
    for _ in 0..100 {
        // ln a to 1e-15 is a to relative precision 1e-15
        if hi - lo < 1e-15 {
            break;
        }
        let mut u = (lo * ghi - hi * glo) / (ghi - glo);
        if !(u > lo && u < hi) {
            u = 0.5 * (lo + hi);
        }
        let gu = g(u);
        if gu == 0.0 {
            return u.exp();
        }
        if gu < 0.0 {
            (lo, glo) = (u, gu);
            if moved == -1 {
                ghi *= 0.5;
            }
            moved = -1;
        } else {
            (hi, ghi) = (u, gu);
            if moved == 1 {
                glo *= 0.5;
            }
            moved = 1;
        }
    }
    (if -glo < ghi { lo } else { hi }).exp()
}

/// Family given by its coefficient functions `b(a)` and `c(a)`.
pub struct CoefficientFamily<B, C> {
    b: B,
    c: C,
}

impl<B: RealFn, C: RealFn> HyperbolaFamily for CoefficientFamily<B, C> {
    fn b(&self, a: f64) -> f64 {
        self.b.eval(a)
    }

    fn c(&self, a: f64) -> f64 {
        self.c.eval(a).abs()
    }
}

/// Family given by its circle heights `t(a)` and `s(a)`.
pub struct HeightFamily<T, S> {
    t: T,
    s: S,
}

impl<T: RealFn, S: RealFn> HeightFamily<T, S> {
    pub fn new(t: T, s: S) -> Self {
        HeightFamily { t, s }
    }

    /// `t(a) − s(a)`, from the complements once both are near 1.
    fn difference(&self, a: f64) -> f64 {
        let (t, s) = (self.t.eval(a), self.s.eval(a));
        if t + s <= 1.0 {
            t - s
        } else {
            self.s.complement(a) - self.t.complement(a)
        }
    }

    /// `c(a)²`; the complement form avoids cancellation for large `a`.
    fn c_squared(&self, a: f64) -> f64 {
        let (t, s) = (self.t.eval(a), self.s.eval(a));
        let a2 = a * a;
        let c2 = if t + s <= 1.0 {
            let b = (a2 + 1.0) * (t - s) / 2.0;
            a2 - b * b - (a2 + 1.0) * t * s
        } else {
            let (tc, sc) = (self.t.complement(a), self.s.complement(a));
            let (sum, diff) = (tc + sc, tc - sc);
            -1.0 + (a2 + 1.0) * (sum - sum * sum / 4.0 - a2 * diff * diff / 4.0)
        };
        if c2 <= 1e-14 * a2.max(1.0) {
            0.0
        } else {
            c2
        }
    }

    /// `h_{x,z}(a) = a²(x² + z² − 1) + (a² + 1)(t(a) − z)(s(a) + z)`; its
    /// zeros are the slopes of the hyperbolas through `(x, 0, z)`.
    pub fn h(&self, x: f64, z: f64, a: f64) -> f64 {
        a * a * (x * x + z * z - 1.0) + (a * a + 1.0) * (self.t.eval(a) - z) * (self.s.eval(a) + z)
    }

    /// `p_z(a) = (a² + 1)/a² · (z − t(a))(z + s(a))`.
    pub fn p(&self, z: f64, a: f64) -> f64 {
        (a * a + 1.0) / (a * a) * (z - self.t.eval(a)) * (z + self.s.eval(a))
    }

    pub fn t_fn(&self) -> &T {
        &self.t
    }

    pub fn s_fn(&self) -> &S {
        &self.s
    }
}

impl<T: RealFn, S: RealFn> HyperbolaFamily for HeightFamily<T, S> {
    fn b(&self, a: f64) -> f64 {
        (a * a + 1.0) * self.difference(a) / 2.0
    }

    fn c(&self, a: f64) -> f64 {
        self.c_squared(a).sqrt()
    }

    fn heights(&self, a: f64) -> (f64, f64) {
        (self.t.eval(a), self.s.eval(a))
    }

    fn a_for_t(&self, t: f64) -> f64 {
        match self.t.inverse(t) {
            Some(a) => a,
            None => solve_log_increasing(|a| self.t.eval(a), t),
        }
    }

    fn a_for_s(&self, s: f64) -> f64 {
        match self.s.inverse(s) {
            Some(a) => a,
            None => solve_log_increasing(|a| self.s.eval(a), s),
        }
    }
}

/// The star with orbit surfaces `H_a: a²x² − (z − b(a))² = c(a)²`.
pub fn eqn_star<B, C>(b: B, c: C) -> Result<GlStar>
where
    B: RealFn + 'static,
    C: RealFn + 'static,
{
    eqn_star_with(b, c, HandSchedule::default(), &Validation::default())
}

/// [`eqn_star`] with an explicit regulus schedule (in the meridian
/// parameter `t`) and sampling; see [`hyperbola_star`] for the checks.
pub fn eqn_star_with<B, C>(b: B, c: C, hand: HandSchedule, v: &Validation) -> Result<GlStar>
where
    B: RealFn + 'static,
    C: RealFn + 'static,
{
    hyperbola_star("eqn", CoefficientFamily { b, c }, hand, v)
}

/// The star of any hyperbola family, after checking on samples that
///
/// * `b² + c² < a²` on the slope grid;
/// * `b(a) → 0` and `c(a)/a → 0` as `a → 0`;
/// * every `p_τ`, `0 ≠ τ ∈ ]−1, 1[`, lies on exactly one `H_a`;
/// * every `(x, 0, z)` with `x > 0`, `z ≠ 0`, `x² + z² ≥ 1` lies on at most
///   one `H_a`;
/// * reguli switch only at cones.
pub fn hyperbola_star<F>(label: &str, family: F, hand: HandSchedule, v: &Validation) -> Result<GlStar>
where
    F: HyperbolaFamily + 'static,
{
    validate_family(&family, &hand, v)?;
    Ok(GlStar::from_meridian(label, FamilyMeridian { family, hand }))
}

fn validate_family(f: &impl HyperbolaFamily, hand: &HandSchedule, v: &Validation) -> Result<()> {
    for a in v.a_grid() {
        let (b, c) = (f.b(a), f.c(a));
        if !(b * b + c * c < a * a) {
            return Err(Error::condition("b(a)² + c(a)² < a²", &[a, b, c]));
        }
    }
    v.check_limit("b(a) → 0 as a → 0", 0.0, |a| f.b(a))?;
    v.check_limit("c(a)/a → 0 as a → 0", 0.0, |a| f.c(a) / a)?;

    let roots = default_root_grid();
    let taus: Vec<f64> = (1..64).flat_map(|k| [k as f64 / 64.0, -(k as f64) / 64.0]).collect();
    let on_circle: Vec<(f64, usize)> = taus
        .par_iter()
        .map(|&tau| {
            let g = |a: f64| {
                let (b, c) = (f.b(a), f.c(a));
                a * a * (1.0 - tau) * (1.0 + tau) - (tau - b).powi(2) - c * c
            };
            (tau, positive_root_count(g, &roots).count)
        })
        .collect();
    if let Some((tau, n)) = on_circle.into_iter().find(|(_, n)| *n != 1) {
        return Err(Error::condition("p_τ lies on exactly one H_a", &[tau, n as f64]));
    }
    check_at_most_one(v, &roots, |x, z, a| {
        let (b, c) = (f.b(a), f.c(a));
        a * a * x * x - (z - b).powi(2) - c * c
    })
    .map_err(|w| Error::condition("exterior points lie on at most one H_a", &w))?;
    hand.validate_at_cones(|t| f.c(f.a_for_t(t)))
}

/// Checks that `g(x, z, ·)` has at most one positive root on the exterior
/// `(x, z)` grid; the error carries `(x, z, root count)`.
fn check_at_most_one<G>(v: &Validation, roots: &[f64], g: G) -> std::result::Result<(), Vec<f64>>
where
    G: Fn(f64, f64, f64) -> f64 + Sync,
{
    let counts: Vec<(f64, f64, usize)> = v
        .exterior_xz_grid()
        .par_iter()
        .map(|&(x, z)| (x, z, positive_root_count(|a| g(x, z, a), roots).count))
        .collect();
    match counts.into_iter().find(|(_, _, n)| *n > 1) {
        Some((x, z, n)) => Err(vec![x, z, n as f64]),
        None => Ok(()),
    }
}

struct FamilyMeridian<F> {
    family: F,
    hand: HandSchedule,
}

impl<F: HyperbolaFamily> FamilyMeridian<F> {
    fn entry_at(&self, t: f64) -> Result<SurfaceEntry> {
        let a = self.family.a_for_t(t);
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::EvalError(format!("no hyperbola through p_{t}")));
        }
        Ok(SurfaceEntry::conic(
            a,
            self.family.b(a),
            self.family.c(a),
            self.hand.at(t),
        ))
    }
}

impl<F: HyperbolaFamily> Meridian for FamilyMeridian<F> {
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
        let s = -z;
        if s <= 0.0 {
            return Ok(0.0);
        }
        if s >= 1.0 {
            return Ok(1.0);
        }
        Ok(self.family.heights(self.family.a_for_s(s)).0)
    }

    fn entry(&self, t: f64) -> Option<Result<SurfaceEntry>> {
        Some(self.entry_at(t))
    }
}

/// The star with circle heights `t(a)`, `s(a)`; see [`param_star_with`].
pub fn param_star<T, S>(t: T, s: S) -> Result<GlStar>
where
    T: RealFn + 'static,
    S: RealFn + 'static,
{
    param_star_with(t, s, HandSchedule::default(), &Validation::default())
}

/// Hypotheses, checked on samples: `t`, `s` are increasing bijections
/// `[0, ∞[ → [0, 1[`; `(t + s)/2a → 1` as `a → 0`;
/// `a²/(a² + 1) − ts ≥ (a² + 1)((t − s)/2)²`; `h_{x,z}` has at most one
/// positive root on the exterior grid. The resulting coefficients
/// `b = (a² + 1)(t − s)/2` and `c` are then passed through the checks of
/// [`hyperbola_star`].
pub fn param_star_with<T, S>(t: T, s: S, hand: HandSchedule, v: &Validation) -> Result<GlStar>
where
    T: RealFn + 'static,
    S: RealFn + 'static,
{
    let family = HeightFamily::new(t, s);
    validate_heights(&family, v)?;
    hyperbola_star("param", family, hand, v)
}

fn validate_heights<T: RealFn, S: RealFn>(f: &HeightFamily<T, S>, v: &Validation) -> Result<()> {
    let grid = v.a_grid();
    for (name, g) in [("t", &f.t as &dyn RealFn), ("s", &f.s as &dyn RealFn)] {
        let g0 = g.eval(0.0);
        if !(g0.abs() <= 1e-12) {
            return Err(Error::condition(format!("{name}(0) = 0"), &[0.0, g0]));
        }
        if let Some(w) = grid.windows(2).find(|w| !(g.eval(w[1]) > g.eval(w[0]))) {
            return Err(Error::condition(format!("{name} strictly increasing"), &[w[0], w[1]]));
        }
        let far = 1e8;
        let gf = g.eval(far);
        if !(gf < 1.0 && gf > 1.0 - 1e-3) {
            return Err(Error::condition(format!("{name}(a) → 1 as a → ∞"), &[far, gf]));
        }
    }
    v.check_limit("(t(a) + s(a))/2a → 1 as a → 0", 1.0, |a| {
        (f.t.eval(a) + f.s.eval(a)) / (2.0 * a)
    })?;
    if let Some(&a) = grid.iter().find(|&&a| {
        let raw = raw_c_squared(f, a);
        raw < -1e-12 * (a * a).max(1.0)
    }) {
        return Err(Error::condition("a²/(a² + 1) − ts ≥ (a² + 1)((t − s)/2)²", &[a]));
    }
    check_at_most_one(v, &default_root_grid(), |x, z, a| f.h(x, z, a))
        .map_err(|w| Error::condition("h_{x,z} has at most one positive root", &w))
}

/// `c²` before clamping, for the nonnegativity check.
fn raw_c_squared<T: RealFn, S: RealFn>(f: &HeightFamily<T, S>, a: f64) -> f64 {
    let (t, s) = (f.t.eval(a), f.s.eval(a));
    let a2 = a * a;
    if t + s <= 1.0 {
        let b = (a2 + 1.0) * (t - s) / 2.0;
        a2 - b * b - (a2 + 1.0) * t * s
    } else {
        let (tc, sc) = (f.t.complement(a), f.s.complement(a));
        let (sum, diff) = (tc + sc, tc - sc);
        -1.0 + (a2 + 1.0) * (sum - sum * sum / 4.0 - a2 * diff * diff / 4.0)
    }
}

/// The parameters of the built-in example: `t = φ_{3/2}`, `s = φ_2`.
pub fn builtin_heights() -> (Fn1, Fn1) {
    (Fn1::phi(1.5), Fn1::phi(2.0))
}

/// The built-in rotational star with circle heights `t = φ_{3/2}` and
/// `s = φ_2`, right reguli throughout. Built once and shared.
pub fn builtin_example() -> GlStar {
    static STAR: OnceLock<GlStar> = OnceLock::new();
    STAR.get_or_init(|| {
        let (t, s) = builtin_heights();
        param_star(t, s)
            .expect("the built-in heights satisfy the construction hypotheses")
            .with_label("builtin")
    })
    .clone()
}

/// The height family of the built-in example.
pub fn builtin_family() -> HeightFamily<Fn1, Fn1> {
    let (t, s) = builtin_heights();
    HeightFamily::new(t, s)
}

/// Coefficients, in descending powers of `a`, of the numerator `l(a)` of
/// `h_{x,z}` for the built-in example:
/// `h_{x,z}(a) = l(a) / ((2a² + 3a + 3)(a² + 2a + 2))`.
pub fn builtin_l_coefficients(x: f64, z: f64) -> [f64; 7] {
    let (x2, z2) = (x * x, z * z);
    [
        2.0 * x2,
        7.0 * x2,
        13.0 * x2 - 2.0 * z2 + z - 5.0,
        12.0 * x2 - 7.0 * z2 - 5.0,
        6.0 * x2 - 13.0 * z2 + z,
        -12.0 * z2,
        -6.0 * z2,
    ]
}

/// `t⁻¹` on `[0, ∞[` for an increasing height function, closed form when
/// available.
pub fn height_inverse(h: &dyn RealFn, y: f64) -> f64 {
    match h.inverse(y) {
        Some(a) => a,
        None => solve_log_increasing(|a| h.eval(a), y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{horner, polynomial_root_count};

    #[test]
    fn builtin_coefficients_at_one() {
        let f = builtin_family();
        let (t, s) = f.heights(1.0);
        assert!((t - 0.625).abs() < 1e-15 && (s - 0.6).abs() < 1e-15);
        assert!((f.b(1.0) - 0.025).abs() < 1e-15);
        assert!((f.c(1.0).powi(2) - 0.249375).abs() < 1e-14);
        // a²/(a²+1) − ts against (a²+1)((t−s)/2)²
        assert!((0.5 - t * s - 0.125).abs() < 1e-15);
    }

    #[test]
    fn h_matches_l_over_denominator() {
        let f = builtin_family();
        let l = builtin_l_coefficients(1.0, 0.5);
        assert_eq!(l, [2.0, 7.0, 8.0, 5.25, 3.25, -3.0, -1.5]);
        assert!((f.h(1.0, 0.5, 1.0) - 0.525).abs() < 1e-15);
        assert!((horner(&l, 1.0) / 40.0 - 0.525).abs() < 1e-15);
        let rc = polynomial_root_count(&l, &default_root_grid());
        assert_eq!((rc.count, rc.descartes_bound), (1, Some(1)));
    }

    #[test]
    fn heights_round_trip_through_coefficients() {
        let f = builtin_family();
        for a in [1e-3, 0.1, 1.0, 10.0, 1e3] {
            let (t, s) = f.heights(a);
            let (t2, s2) = heights_from_coefficients(a, f.b(a), f.c(a));
            assert!((t - t2).abs() < 1e-12 * t.max(1e-3), "a={a}: {t} vs {t2}");
            assert!((s - s2).abs() < 1e-12 * s.max(1e-3), "a={a}: {s} vs {s2}");
        }
    }

    #[test]
    fn builtin_is_valid_and_skew() {
        let star = builtin_example();
        let p = meridian_point(0.5);
        let q = star.sigma(&p).unwrap();
        assert!(q.y < 0.0);
        assert!((star.sigma(&q).unwrap() - p).norm() < 1e-12);
    }

    #[test]
    fn equal_heights_are_symmetric() {
        let star = param_star(Fn1::phi(1.5), Fn1::phi(1.5)).unwrap();
        for t in [0.1, 0.4, 0.8] {
            let z = star.sigma(&meridian_point(t)).unwrap().z;
            assert!((z + t).abs() < 1e-12);
        }
    }

    #[test]
    fn half_slope_coefficients_rejected() {
        let half = || Fn1::Affine { a: 0.5, b: 0.0 };
        // c(a)/a = 1/2 does not tend to 0
        let e = eqn_star(half(), half()).unwrap_err();
        assert!(matches!(e, Error::ConditionFailed { ref condition, .. } if condition.contains("c(a)/a")));
        // with the limit check disabled the root counts still reject it
        let loose = Validation {
            limit_band: f64::INFINITY,
            ..Validation::default()
        };
        let e = eqn_star_with(half(), half(), HandSchedule::default(), &loose).unwrap_err();
        match e {
            Error::ConditionFailed { condition, .. } => assert!(condition.contains("H_a"), "{condition}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
