//! The Klein lift of a gl star.
//!
//! `(P³, sphere form)` is embedded isometrically into `(P⁵, g)` as the
//! 3-space `U`; the sphere polars of the star lines become lines of `U`, the
//! *hfd line set* `H`. Every line `h ∈ H` is a 0-secant of the Klein quadric
//! and its polar 3-space `W` meets the quadric in an elliptic subquadric: a
//! regular spread of `P³`. These spreads are the parallel classes. The class
//! of a line `L` is found by searching `H` for the unique member inside the
//! tangent hyperplane of `klein(L)`.

mod class;
mod embed;
mod hfd;

pub use class::{class_from_hfd_line, spread_line_through, ParallelClass};
pub use embed::{canonical_basis, embed_star, klein_matrix, sphere_polar, EmbeddedStar, HLine};
pub use hfd::{
    check_zero_secants, dim_parallelism, dimension_estimate, meridian_height, star_to_hfd, DimensionEstimate,
    HfdLineSet, HfdSolution, DIM_CUTOFF, HFD_CLUSTER_RADIUS, HFD_GRID, HFD_SEAM_OVERLAP, HFD_ZERO_TOL,
};

use nalgebra::{Matrix6, Vector4, Vector6};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::glstar::GlStar;
use crate::projgeom::{klein_form, klein_form_normalized, PLine};
use crate::verify::{rng, CheckReport, DEFAULT_SEED};
use crate::{Error, HPoint4, Result};
use hfd::{plane_rotation, torus_angles};

/// A residual together with the sample it was seen at.
type Witnessed = (f64, Vec<f64>);

/// Incidence tolerance below which a query point counts as lying on the
/// query line.
const ON_LINE_TOL: f64 = 1e-12;

/// A regular parallelism: an embedded star together with its hfd line set.
#[derive(Debug, Clone)]
pub struct Parallelism {
    es: EmbeddedStar,
    hfd: HfdLineSet,
}

impl Parallelism {
    /// The parallelism induced by a gl star.
    pub fn new(star: GlStar) -> Parallelism {
        let es = embed_star(star);
        let hfd = star_to_hfd(&es);
        Parallelism { es, hfd }
    }

    /// A parallelism from an explicit line set, e.g. to test the hfd check
    /// against sets that are not hfd.
    pub fn from_parts(es: EmbeddedStar, hfd: HfdLineSet) -> Parallelism {
        Parallelism { es, hfd }
    }

    pub fn embedded(&self) -> &EmbeddedStar {
        &self.es
    }

    pub fn hfd(&self) -> &HfdLineSet {
        &self.hfd
    }

    pub fn class_of(&self, line: &PLine) -> Result<ParallelClass> {
        parallel_class_of(self, line)
    }

    pub fn parallel_through(&self, p: &HPoint4, line: &PLine) -> Result<PLine> {
        parallel_through(self, p, line)
    }
}

/// The distinct members of `H` inside the tangent hyperplane of `klein(L)`.
fn class_solutions(par: &Parallelism, line: &PLine) -> Vec<HfdSolution> {
    par.hfd.solutions_in_tangent_hyperplane(&line.klein())
}

/// The parallel class containing `line`.
pub fn parallel_class_of(par: &Parallelism, line: &PLine) -> Result<ParallelClass> {
    match class_solutions(par, line).as_slice() {
        [] => Err(Error::SearchFailed),
        [one] => class_from_hfd_line(&one.line),
        many => Err(Error::HfdViolation { clusters: many.len() }),
    }
}

/// The unique line parallel to `line` through `p`; `line` itself when `p`
/// lies on it.
pub fn parallel_through(par: &Parallelism, p: &HPoint4, line: &PLine) -> Result<PLine> {
    if line.incidence_residual(p) < ON_LINE_TOL {
        return Ok(*line);
    }
    parallel_class_of(par, line)?.spread_line_through(p)
}

/// A line through two independent random points of `[−1, 1]⁴`.
pub(crate) fn random_line(r: &mut ChaCha8Rng) -> PLine {
    loop {
        let a = random_point(r);
        let b = random_point(r);
        if let Ok(l) = PLine::join(&a, &b) {
            return l;
        }
    }
}

pub(crate) fn random_point(r: &mut ChaCha8Rng) -> HPoint4 {
    loop {
        let v = Vector4::from_fn(|_, _| r.gen_range(-1.0..1.0));
        if let Ok(p) = HPoint4::new(v) {
            return p;
        }
    }
}

fn plucker_coords(l: &PLine) -> Vec<f64> {
    l.plucker().iter().copied().collect()
}

/// Worst sample of `probes` by figure, largest first; ties keep the earlier.
fn worst(probes: Vec<Witnessed>) -> Option<Witnessed> {
    probes
        .into_iter()
        .reduce(|a, b| if b.0.is_nan() || b.0 > a.0 { b } else { a })
}

/// The hfd property on `n` random lines (seed [`DEFAULT_SEED`]).
pub fn check_hfd(par: &Parallelism, n: usize) -> CheckReport {
    check_hfd_seeded(par, n, DEFAULT_SEED)
}

/// The hfd property: for each of `n` random lines `L` exactly one member of
/// `H` lies in the tangent hyperplane of `klein(L)`. The figure is the
/// largest solution residual; a sample with a wrong number of solutions
/// fails and is reported as its Plücker coordinates followed by the count.
pub fn check_hfd_seeded(par: &Parallelism, n: usize, seed: u64) -> CheckReport {
    let mut r = rng(seed);
    let lines: Vec<PLine> = (0..n).map(|_| random_line(&mut r)).collect();
    let outcomes: Vec<(usize, f64, Vec<f64>)> = lines
        .par_iter()
        .map(|l| {
            let sols = class_solutions(par, l);
            let residual = sols.iter().map(|s| s.residual).fold(0.0, f64::max);
            let mut w = plucker_coords(l);
            w.push(sols.len() as f64);
            (sols.len(), residual, w)
        })
        .collect();
    let figure = outcomes.iter().map(|o| o.1).fold(0.0, f64::max);
    let failure = outcomes.into_iter().find(|o| o.0 != 1);
    let passed = failure.is_none();
    CheckReport::new("hfd", passed, figure, failure.map(|o| o.2), n)
}

/// Parallel classes of `n` sampled H-lines, with their parameters.
fn sampled_classes(par: &Parallelism, n: usize, seed: u64) -> Vec<((f64, f64), Result<ParallelClass>)> {
    par.hfd
        .sample(n, seed)
        .into_iter()
        .map(|(param, h)| (param, h.and_then(|h| class_from_hfd_line(&h))))
        .collect()
}

/// Every sampled class 3-space `W` carries an elliptic subquadric. The
/// figure is the number of classes that fail; the witness is the first
/// failing H-line parameter.
pub fn check_class_signatures(par: &Parallelism, n: usize, seed: u64) -> CheckReport {
    let bad: Vec<Vec<f64>> = sampled_classes(par, n, seed)
        .into_iter()
        .filter(|(_, c)| !c.as_ref().is_ok_and(ParallelClass::is_elliptic))
        .map(|((t, th), _)| vec![t, th])
        .collect();
    CheckReport::new(
        "class_signature",
        bad.is_empty(),
        bad.len() as f64,
        bad.into_iter().next(),
        n,
    )
}

/// Pairwise disjointness of spread lines: in each of `n_classes` sampled
/// classes, the spread lines through `pairs` random point pairs are either
/// identical or skew. The figure is the smallest normalized Klein pairing
/// of distinct lines; passes iff it exceeds `tol`.
pub fn check_spread_disjoint(par: &Parallelism, n_classes: usize, pairs: usize, tol: f64, seed: u64) -> CheckReport {
    let classes = sampled_classes(par, n_classes, seed);
    let mut r = rng(seed.wrapping_add(1));
    let mut worst_pair: Option<Witnessed> = None;
    let mut samples = 0;
    for ((t, th), cls) in classes {
        let Ok(cls) = cls else {
            worst_pair = Some((f64::NAN, vec![t, th]));
            break;
        };
        for _ in 0..pairs {
            let (p, q) = (random_point(&mut r), random_point(&mut r));
            samples += 1;
            let (lp, lq) = match (cls.spread_line_through(&p), cls.spread_line_through(&q)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    worst_pair = Some((f64::NAN, vec![t, th]));
                    break;
                }
            };
            if lp.proj_sine(&lq) < 1e-9 {
                continue;
            }
            let v = klein_form_normalized(&lp.klein(), &lq.klein()).abs();
            if worst_pair.as_ref().is_none_or(|w| v < w.0) {
                let mut w = vec![t, th];
                w.extend(p.coords().iter().chain(q.coords().iter()));
                worst_pair = Some((v, w));
            }
        }
    }
    match worst_pair {
        None => CheckReport::new("spread_disjoint", true, f64::INFINITY, None, samples),
        Some((v, w)) => {
            let passed = v > tol;
            CheckReport::new("spread_disjoint", passed, v, (!passed).then_some(w), samples)
        }
    }
}

/// The torus of the embedded star: rotations in the plane of `C`, identity
/// on `U`.
pub fn torus_rotation(es: &EmbeddedStar, theta: f64) -> Matrix6<f64> {
    plane_rotation(&es.c_orthonormal(), theta)
}

/// [`check_torus_action`] for the torus acting on `C`.
pub fn check_torus_fixes_classes(es: &EmbeddedStar, n: usize) -> CheckReport {
    check_torus_action(es, n, |th| torus_rotation(es, th))
}

/// The maps `torus(θ)` for 16 angles `θ ∈ [0, 2π)` are `g`-isometries
/// (residual < 1e−12 on random vector pairs) fixing each of `n` sampled
/// H-lines (residual < 1e−9). The figure is the largest line residual; the
/// witness is `(θ, t, θ_H)` of the worst line, or `θ` for a failed isometry.
pub fn check_torus_action<F>(es: &EmbeddedStar, n: usize, torus: F) -> CheckReport
where
    F: Fn(f64) -> Matrix6<f64> + Sync,
{
    const ISOMETRY_TOL: f64 = 1e-12;
    const FIX_TOL: f64 = 1e-9;
    let lines = star_to_hfd(es).sample(n, DEFAULT_SEED);
    let mut r = rng(DEFAULT_SEED);
    let vectors: Vec<(Vector6<f64>, Vector6<f64>)> = (0..n.max(10))
        .map(|_| {
            let mut v = || Vector6::from_fn(|_, _| r.gen_range(-1.0..1.0));
            (v(), v())
        })
        .collect();
    // per angle: the worst isometry residual and the worst line-fix failure
    let per_angle: Vec<(f64, Option<Witnessed>)> = torus_angles()
        .into_par_iter()
        .map(|th| {
            let m = torus(th);
            let iso = vectors
                .iter()
                .map(|(u, v)| (klein_form(&(m * u), &(m * v)) - klein_form(u, v)).abs())
                .fold(0.0, f64::max);
            let fix = worst(
                lines
                    .iter()
                    .map(|((t, t2), h)| {
                        let d = h
                            .as_ref()
                            .map_err(Clone::clone)
                            .and_then(|h| h.transform(&m).map(|img| img.distance(h)))
                            .unwrap_or(f64::INFINITY);
                        (d, vec![th, *t, *t2])
                    })
                    .collect(),
            );
            (iso, fix)
        })
        .collect();
    let samples = per_angle.len() * lines.len();
    let mut figure: f64 = 0.0;
    let mut witness = None;
    let mut passed = true;
    for (th, (iso, fix)) in torus_angles().into_iter().zip(per_angle) {
        if !(iso < ISOMETRY_TOL) {
            passed = false;
            witness.get_or_insert(vec![th]);
        }
        if let Some((d, w)) = fix {
            if d.is_nan() || d > figure {
                figure = d;
            }
            if !(d < FIX_TOL) {
                passed = false;
                witness.get_or_insert(w);
            }
        }
    }
    CheckReport::new("torus_fixes_classes", passed, figure, witness, samples)
}

/// Parallel queries on `n` random `(p, L)`: the result contains `p`
/// (residual < 1e−8) and lies in the class of `L` (residual < 1e−8), `L` is
/// returned for a point of `L`, and perturbing `p` and `L` by 1e−6 moves the
/// result by less than 1e−4. The figure is the largest of the incidence
/// and membership residuals and the scaled motion `motion · 1e−4`.
pub fn check_parallel_queries(par: &Parallelism, n: usize, seed: u64) -> CheckReport {
    const RES_TOL: f64 = 1e-8;
    const DELTA: f64 = 1e-6;
    const MOTION_TOL: f64 = 1e-4;
    let mut r = rng(seed);
    let cases: Vec<_> = (0..n)
        .map(|_| {
            let (a, b, p) = (random_point(&mut r), random_point(&mut r), random_point(&mut r));
            let jitter: Vec<Vector4<f64>> = (0..3)
                .map(|_| Vector4::from_fn(|_, _| r.gen_range(-1.0..1.0)).normalize() * DELTA)
                .collect();
            let s: f64 = r.gen_range(-2.0..2.0);
            (a, b, p, jitter, s)
        })
        .collect();
    let probes: Vec<(f64, Vec<f64>)> = cases
        .par_iter()
        .map(|(a, b, p, jitter, s)| {
            let witness: Vec<f64> = a
                .coords()
                .iter()
                .chain(b.coords().iter())
                .chain(p.coords().iter())
                .copied()
                .collect();
            let eval = || -> Result<f64> {
                let l = PLine::join(a, b)?;
                let cls = parallel_class_of(par, &l)?;
                let m = cls.spread_line_through(p)?;
                let incidence = m.incidence_residual(p);
                let membership = cls.membership_residual(&m);
                // a point of L is answered by L itself
                let on_l = HPoint4::new(a.coords() + b.coords() * *s)?;
                let echo = parallel_through(par, &on_l, &l)?.proj_sine(&l);
                let moved = |x: &HPoint4, d: &Vector4<f64>| HPoint4::new(x.coords() + d);
                let l2 = PLine::join(&moved(a, &jitter[0])?, &moved(b, &jitter[1])?)?;
                let m2 = parallel_through(par, &moved(p, &jitter[2])?, &l2)?;
                let motion = m2.proj_sine(&m);
                let scaled = RES_TOL * motion / MOTION_TOL;
                Ok(incidence.max(membership).max(echo).max(scaled))
            };
            (eval().unwrap_or(f64::INFINITY), witness)
        })
        .collect();
    match worst(probes) {
        None => CheckReport::new("parallel_queries", true, 0.0, None, n),
        Some((v, w)) => {
            let passed = v < RES_TOL;
            CheckReport::new("parallel_queries", passed, v, (!passed).then_some(w), n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin_example, clifford};
    use crate::projgeom::{x_axis, z_axis};
    use nalgebra::Vector3;
    use std::sync::OnceLock;

    fn clifford_par() -> &'static Parallelism {
        static P: OnceLock<Parallelism> = OnceLock::new();
        P.get_or_init(|| Parallelism::new(clifford(Vector3::zeros()).unwrap()))
    }

    fn builtin_par() -> &'static Parallelism {
        static P: OnceLock<Parallelism> = OnceLock::new();
        P.get_or_init(|| Parallelism::new(builtin_example()))
    }

    #[test]
    fn class_of_z_contains_z() {
        for par in [clifford_par(), builtin_par()] {
            let cls = parallel_class_of(par, &z_axis()).unwrap();
            assert!(cls.contains(&z_axis(), 1e-9), "{}", cls.membership_residual(&z_axis()));
        }
    }

    #[test]
    fn class_of_x_contains_x() {
        let cls = parallel_class_of(builtin_par(), &x_axis()).unwrap();
        assert!(cls.contains(&x_axis(), 1e-9));
    }

    #[test]
    fn clifford_parallel_of_z() {
        let p = HPoint4::affine(1.0, 0.0, 0.0);
        let m = parallel_through(clifford_par(), &p, &z_axis()).unwrap();
        assert!(m.contains(&p, 1e-9));
        assert!(m.meet_residual(&z_axis()) > 1e-3);
        // the Clifford parallel of Z through (1,0,0) is the line through it
        // with direction (0, ±1, 1)
        let q = HPoint4::affine(1.0, 1.0, 1.0);
        let q2 = HPoint4::affine(1.0, -1.0, 1.0);
        assert!(m.contains(&q, 1e-9) || m.contains(&q2, 1e-9));
    }

    #[test]
    fn point_on_line_returns_line() {
        let l = PLine::join(&HPoint4::affine(0.3, 0.1, 0.0), &HPoint4::affine(-0.2, 0.5, 1.0)).unwrap();
        let p = HPoint4::affine(0.3, 0.1, 0.0);
        assert_eq!(parallel_through(builtin_par(), &p, &l).unwrap(), l);
    }

    #[test]
    fn hfd_holds_for_clifford_and_builtin() {
        for par in [clifford_par(), builtin_par()] {
            let rep = check_hfd(par, 30);
            assert!(rep.passed, "{rep}");
        }
    }

    #[test]
    fn union_of_two_hfd_sets_violates_hfd() {
        let es = embed_star(builtin_example());
        let h = star_to_hfd(&es);
        // a second copy of H moved by a rotation about X, carried into U
        let (s, c) = 1.0f64.sin_cos();
        let mut rx = nalgebra::Matrix4::identity();
        rx[(2, 2)] = c;
        rx[(2, 3)] = -s;
        rx[(3, 2)] = s;
        rx[(3, 3)] = c;
        let iso = *es.iso_matrix();
        let tau = iso * rx * iso.transpose() / 2.0;
        let h2 = h.clone();
        let union = HfdLineSet::from_fn((0.0, 2.0), move |t, th| {
            if t <= 1.0 {
                h2.line(t, th)
            } else {
                h2.line(t - 1.0, th)?.transform(&tau)
            }
        });
        let par = Parallelism::from_parts(es, union);
        let l = PLine::join(&HPoint4::affine(0.2, 0.3, -0.1), &HPoint4::affine(0.7, -0.4, 0.5)).unwrap();
        assert!(matches!(
            parallel_class_of(&par, &l),
            Err(Error::HfdViolation { clusters: 2 })
        ));
        assert!(!check_hfd(&par, 5).passed);
    }

    #[test]
    fn torus_fixes_classes_and_mixing_rotation_does_not() {
        let es = embed_star(builtin_example());
        let rep = check_torus_fixes_classes(&es, 50);
        assert!(rep.passed, "{rep}");
        let d = canonical_basis();
        let mixing = [d[3].normalize(), d[4].normalize()];
        let bad = check_torus_action(&es, 50, |th| plane_rotation(&mixing, th));
        assert!(!bad.passed, "{bad}");
    }

    #[test]
    fn classes_are_elliptic_and_spreads_disjoint() {
        let par = builtin_par();
        let rep = check_class_signatures(par, 50, 1);
        assert!(rep.passed, "{rep}");
        let rep = check_spread_disjoint(par, 5, 20, 1e-9, 2);
        assert!(rep.passed, "{rep}");
    }

    #[test]
    fn parallel_queries_on_builtin() {
        let rep = check_parallel_queries(builtin_par(), 10, 3);
        assert!(rep.passed, "{rep}");
    }

    #[test]
    fn parallels_through_a_point_agree_within_a_class() {
        let par = builtin_par();
        let mut r = rng(9);
        let l = random_line(&mut r);
        let cls = parallel_class_of(par, &l).unwrap();
        // another line of the same class
        let m = cls.spread_line_through(&random_point(&mut r)).unwrap();
        let p = random_point(&mut r);
        let a = parallel_through(par, &p, &l).unwrap();
        let b = parallel_through(par, &p, &m).unwrap();
        assert!(a.proj_sine(&b) < 1e-8, "{}", a.proj_sine(&b));
    }
}
