use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Matrix4, Vector3, Vector4};
use rand::Rng;
use rayon::prelude::*;

use super::report::CheckReport;
use super::sampling::{fibonacci_sphere, random_unit, rng, sphere_point, DEFAULT_SEED};
use super::search::{grid_minima, refine_zeros, ZeroSearch};
use crate::constructions::{GlPencil, RealFn};
use crate::glstar::{meridian_point, rotation_z, GlStar};
use crate::projgeom::{klein_form_normalized, z_axis, HPoint4, PLine};
use crate::Result;

/// Smallest chord `|σ(q) − q|` accepted by [`check_fixed_point_free`].
pub const FPF_MARGIN: f64 = 0.05;
/// Parameter-space radius within which two coverage solutions are merged.
pub const CLUSTER_RADIUS: f64 = 0.05;
/// Coarse grid resolution of the coverage search, per parameter.
pub const COVERAGE_GRID: usize = 64;

/// One sample's outcome: its figure of merit and the sample coordinates.
type Probe = (f64, Vec<f64>);

fn worst_is_max(probes: &[Probe]) -> Option<&Probe> {
    probes
        .iter()
        .reduce(|a, b| if b.0.is_nan() || b.0 > a.0 { b } else { a })
}

fn worst_is_min(probes: &[Probe]) -> Option<&Probe> {
    probes
        .iter()
        .reduce(|a, b| if b.0.is_nan() || b.0 < a.0 { b } else { a })
}

/// Passes iff every value is below `tol`; the witness is the worst sample.
fn max_report(name: &str, probes: &[Probe], tol: f64, samples: usize) -> CheckReport {
    match worst_is_max(probes) {
        None => CheckReport::new(name, true, 0.0, None, samples),
        Some((v, w)) => {
            let passed = *v < tol;
            CheckReport::new(name, passed, *v, (!passed).then(|| w.clone()), samples)
        }
    }
}

/// Passes iff every value exceeds `margin`; reports the smallest value.
fn min_report(name: &str, probes: &[Probe], margin: f64, samples: usize) -> CheckReport {
    match worst_is_min(probes) {
        None => CheckReport::new(name, true, f64::INFINITY, None, samples),
        Some((v, w)) => {
            let passed = *v > margin;
            CheckReport::new(name, passed, *v, (!passed).then(|| w.clone()), samples)
        }
    }
}

fn coords(q: &Vector3<f64>) -> Vec<f64> {
    vec![q.x, q.y, q.z]
}

fn or_infinite(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

/// Rotation about `Z` acting on homogeneous coordinates `(w0, x, y, z)`.
pub(crate) fn rotation4(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    Matrix4::new(
        1.0, 0.0, 0.0, 0.0, //
        0.0, c, -s, 0.0, //
        0.0, s, c, 0.0, //
        0.0, 0.0, 0.0, 1.0,
    )
}

/// `max |σ(σ(q)) − q|` over a Fibonacci grid; passes iff `< tol`.
pub fn check_involution(star: &GlStar, n: usize, tol: f64) -> CheckReport {
    let probes: Vec<Probe> = fibonacci_sphere(n)
        .par_iter()
        .map(|q| {
            let r = star.sigma(q).and_then(|s| star.sigma(&s)).map(|qq| (qq - q).norm());
            (or_infinite(r), coords(q))
        })
        .collect();
    max_report("involution", &probes, tol, n)
}

/// `min |σ(q) − q|` over a Fibonacci grid; passes iff `>` [`FPF_MARGIN`].
/// The reported figure is the minimum chord.
pub fn check_fixed_point_free(star: &GlStar, n: usize) -> CheckReport {
    let probes: Vec<Probe> = fibonacci_sphere(n)
        .par_iter()
        .map(|q| {
            let d = star.sigma(q).map(|s| (s - q).norm()).unwrap_or(0.0);
            (d, coords(q))
        })
        .collect();
    min_report("fixed_point_free", &probes, FPF_MARGIN, n)
}

/// Sphere-form value `pᵀFp / |p|²` of a meeting point: positive outside.
fn exterior_value(p: &HPoint4) -> f64 {
    let c = p.coords();
    (-c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]) / c.norm_squared()
}

/// Searches sampled pairs of star lines for meeting points outside the
/// sphere. For a rotational star each pair `(L_t, L_s)` is swept through
/// all rotations `R_θ L_s`; the pairing `θ ↦ g(L_t, R_θ L_s)` has the form
/// `A + B cos θ + C sin θ`, so its zeros are found in closed form. Other
/// stars sweep `L_s` along a great circle and bracket sign changes.
///
/// The figure is the largest sphere-form value found at a meeting point
/// (negative inside); passes iff it stays below `tol`.
pub fn check_no_exterior_meet(star: &GlStar, n_pairs: usize, tol: f64) -> CheckReport {
    check_no_exterior_meet_seeded(star, n_pairs, tol, DEFAULT_SEED)
}

pub fn check_no_exterior_meet_seeded(star: &GlStar, n_pairs: usize, tol: f64, seed: u64) -> CheckReport {
    let mut r = rng(seed);
    let pairs: Vec<(f64, f64, Vector3<f64>, Vector3<f64>)> = (0..n_pairs)
        .map(|_| {
            (
                r.gen_range(0.0..=1.0),
                r.gen_range(0.0..=1.0),
                random_unit(&mut r),
                random_unit(&mut r),
            )
        })
        .collect();
    let probes: Vec<Probe> = pairs
        .par_iter()
        .flat_map_iter(|&(t, s, q1, q2)| {
            let found = if star.is_rotational() {
                rotational_meets(star, t, s)
            } else {
                circle_meets(star, &q1, &q2)
            };
            match found {
                Ok(v) => v,
                Err(_) => vec![(f64::INFINITY, vec![t, s])],
            }
        })
        .collect();
    max_report("no_exterior_meet", &probes, tol, n_pairs)
}

fn meeting_probe(l1: &PLine, l2: &PLine, witness: Vec<f64>) -> Option<Probe> {
    if l1.proj_sine(l2) < 1e-9 {
        return None;
    }
    let p = l1.meet_point(l2)?;
    Some((exterior_value(&p), witness))
}

fn rotational_meets(star: &GlStar, t: f64, s: f64) -> Result<Vec<Probe>> {
    let lt = star.meridian_line(t)?;
    let ls = star.meridian_line(s)?;
    let f = |theta: f64| klein_form_normalized(&lt.klein(), &ls.transform(&rotation4(theta)).klein());
    let (f0, f1, f2) = (f(0.0), f(FRAC_PI_2), f(PI));
    let a = 0.5 * (f0 + f2);
    let b = 0.5 * (f0 - f2);
    let c = f1 - a;
    let amp = b.hypot(c);
    let thetas: Vec<f64> = if amp < 1e-12 && a.abs() < 1e-12 {
        // every rotation of L_s meets L_t
        (0..8).map(|k| TAU * k as f64 / 8.0).collect()
    } else if amp < a.abs() {
        Vec::new()
    } else {
        let base = c.atan2(b);
        let delta = (-a / amp).clamp(-1.0, 1.0).acos();
        vec![base + delta, base - delta]
    };
    Ok(thetas
        .into_iter()
        .filter_map(|theta| {
            let m = ls.transform(&rotation4(theta));
            meeting_probe(&lt, &m, vec![t, s, theta.rem_euclid(TAU)])
        })
        .collect())
}

fn circle_meets(star: &GlStar, q1: &Vector3<f64>, q2: &Vector3<f64>) -> Result<Vec<Probe>> {
    const STEPS: usize = 128;
    let l1 = star.line_through(q1)?;
    let helper = if q2.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let v = (helper - q2 * q2.dot(&helper)).normalize();
    let point = |phi: f64| q2 * phi.cos() + v * phi.sin();
    let f = |phi: f64| -> Result<f64> {
        let l = star.line_through(&point(phi))?;
        Ok(klein_form_normalized(&l1.klein(), &l.klein()))
    };
    let values: Vec<f64> = (0..=STEPS)
        .map(|k| f(TAU * k as f64 / STEPS as f64))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for k in 0..STEPS {
        let (mut lo, mut hi) = (TAU * k as f64 / STEPS as f64, TAU * (k + 1) as f64 / STEPS as f64);
        let (mut flo, fhi) = (values[k], values[k + 1]);
        if flo == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid)?;
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let phi = 0.5 * (lo + hi);
        let l2 = star.line_through(&point(phi))?;
        let mut w = coords(q1);
        w.extend(coords(&point(phi)));
        out.extend(meeting_probe(&l1, &l2, w));
    }
    Ok(out)
}

/// Sine distance of a homogeneous point from a line given by an
/// orthonormal basis of its 2-dimensional subspace.
fn subspace_distance(x: &Vector4<f64>, u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
    (x - u * u.dot(x) - v * v.dot(x)).norm()
}

/// Deterministic exterior sample points: three quarters affine points in
/// the shell `1.1 ≤ |w| ≤ 3`, one quarter points at infinity.
pub fn exterior_samples(n: usize, seed: u64) -> Vec<HPoint4> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let dir = random_unit(&mut r);
            let radius: f64 = r.gen_range(1.1..=3.0);
            if i % 4 == 3 {
                HPoint4::at_infinity(&dir).expect("unit direction")
            } else {
                HPoint4::from_affine(&(dir * radius))
            }
        })
        .collect()
}

/// A line as an orthonormal pair of spanning vectors.
type LinePair = (Vector4<f64>, Vector4<f64>);

/// Star lines on the coverage grid `(z, θ)`, each as an orthonormal pair.
struct LineGrid {
    zs: Vec<f64>,
    thetas: Vec<f64>,
    lines: Vec<Vec<Option<LinePair>>>,
}

impl LineGrid {
    fn new(star: &GlStar, n: usize) -> LineGrid {
        let zs: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let thetas: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
        let lines = zs
            .par_iter()
            .map(|&z| {
                thetas
                    .iter()
                    .map(|&th| {
                        star.line_through(&sphere_point(z, th))
                            .ok()
                            .map(|l| l.spanning_vectors())
                    })
                    .collect()
            })
            .collect();
        LineGrid { zs, thetas, lines }
    }
}

/// The distinct star lines through `w`, found by minimising the distance
/// from `w` to `q ∨ σ(q)` over sphere points `q`.
fn lines_through(star: &GlStar, grid: &LineGrid, w: &HPoint4, tol: f64) -> Vec<(f64, f64, PLine)> {
    let x = w.coords() / w.coords().norm();
    let values: Vec<Vec<f64>> = grid
        .lines
        .iter()
        .map(|row| {
            row.iter()
                .map(|l| l.map_or(f64::INFINITY, |(u, v)| subspace_distance(&x, &u, &v)))
                .collect()
        })
        .collect();
    let dist = |p: [f64; 2]| -> f64 {
        star.line_through(&sphere_point(p[0], p[1]))
            .map(|l| {
                let (u, v) = l.spanning_vectors();
                subspace_distance(&x, &u, &v)
            })
            .unwrap_or(f64::INFINITY)
    };
    let f = |p: [f64; 2]| dist([p[0].clamp(-1.0, 1.0), p[1]]).powi(2);
    let step = 2.0 / (grid.zs.len() - 1) as f64;
    let cfg = ZeroSearch::new(tol);
    let mut zeros = Vec::new();
    for (i, j) in grid_minima(&values, 2, 8) {
        refine_zeros(&f, [grid.zs[i], grid.thetas[j]], [step, step * PI], &cfg, &mut zeros);
    }
    let mut found: Vec<(f64, f64, PLine)> = Vec::new();
    for (p, _) in zeros {
        let (z, th) = (p[0].clamp(-1.0, 1.0), p[1].rem_euclid(TAU));
        let Ok(line) = star.line_through(&sphere_point(z, th)) else {
            continue;
        };
        let duplicate = found.iter().any(|(z2, th2, l2)| {
            let dth = (th - th2).rem_euclid(TAU);
            let dth = dth.min(TAU - dth);
            (z - z2).hypot(dth) < CLUSTER_RADIUS || line.proj_sine(l2) < 1e-6
        });
        if !duplicate {
            found.push((z, th, line));
        }
    }
    found
}

/// Number of distinct star lines through every sampled exterior point;
/// passes iff each count is exactly one. The figure is the largest
/// refined distance among the accepted solutions.
pub fn check_coverage(star: &GlStar, n_points: usize, tol: f64) -> CheckReport {
    check_coverage_seeded(star, n_points, tol, DEFAULT_SEED)
}

pub fn check_coverage_seeded(star: &GlStar, n_points: usize, tol: f64, seed: u64) -> CheckReport {
    let grid = LineGrid::new(star, COVERAGE_GRID);
    let points = exterior_samples(n_points, seed);
    let results: Vec<(usize, f64, Vec<f64>)> = points
        .par_iter()
        .map(|w| {
            let found = lines_through(star, &grid, w, tol);
            let x = w.coords() / w.coords().norm();
            let worst = found
                .iter()
                .map(|(_, _, l)| {
                    let (u, v) = l.spanning_vectors();
                    subspace_distance(&x, &u, &v)
                })
                .fold(0.0, f64::max);
            (found.len(), worst, w.coords().iter().copied().collect())
        })
        .collect();
    let bad = results.iter().find(|r| r.0 != 1);
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    match bad {
        Some((count, _, w)) => {
            let mut witness = w.clone();
            witness.push(*count as f64);
            CheckReport::new("coverage", false, worst, Some(witness), n_points)
        }
        None => CheckReport::new("coverage", true, worst, None, n_points),
    }
}

/// Number of distinct star lines through `w` (exposed for diagnostics).
pub fn coverage_count(star: &GlStar, w: &HPoint4, tol: f64) -> usize {
    lines_through(star, &LineGrid::new(star, COVERAGE_GRID), w, tol).len()
}

/// `max |σ(R_θ q) − R_θ σ(q)|` over random `(θ, q)`.
pub fn check_rotational(star: &GlStar, n: usize, tol: f64) -> CheckReport {
    check_rotational_seeded(star, n, tol, DEFAULT_SEED)
}

pub fn check_rotational_seeded(star: &GlStar, n: usize, tol: f64, seed: u64) -> CheckReport {
    let mut r = rng(seed);
    let samples: Vec<(f64, Vector3<f64>)> = (0..n).map(|_| (r.gen_range(0.0..TAU), random_unit(&mut r))).collect();
    let probes: Vec<Probe> = samples
        .par_iter()
        .map(|(theta, q)| {
            let rot = rotation_z(*theta);
            let res = star
                .sigma(&(rot * q))
                .and_then(|a| star.sigma(q).map(|b| (a - rot * b).norm()));
            let mut w = vec![*theta];
            w.extend(coords(q));
            (or_infinite(res), w)
        })
        .collect();
    max_report("rotational", &probes, tol, n)
}

/// Sample lines: meridian lines for rotational stars, lines through a
/// Fibonacci grid otherwise.
fn sample_lines(star: &GlStar, n: usize) -> Vec<(Vec<f64>, Result<PLine>)> {
    if star.is_rotational() {
        (0..n)
            .map(|i| {
                let t = if n == 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
                (vec![t], star.meridian_line(t))
            })
            .collect()
    } else {
        fibonacci_sphere(n)
            .into_iter()
            .map(|q| (coords(&q), star.line_through(&q)))
            .collect()
    }
}

/// Axial symmetry: every sampled line meets `Z`, and `σ` commutes with the
/// reflection `y ↦ −y` in the plane `y = 0`.
pub fn check_axial(star: &GlStar, n: usize, tol: f64) -> CheckReport {
    let z = z_axis();
    let mut probes: Vec<Probe> = sample_lines(star, n)
        .into_par_iter()
        .map(|(w, l)| (or_infinite(l.map(|l| l.meet_residual(&z))), w))
        .collect();
    let reflect = |q: &Vector3<f64>| Vector3::new(q.x, -q.y, q.z);
    probes.extend(
        fibonacci_sphere(n)
            .par_iter()
            .map(|q| {
                let res = star
                    .sigma(&reflect(q))
                    .and_then(|a| star.sigma(q).map(|b| (a - reflect(&b)).norm()));
                (or_infinite(res), coords(q))
            })
            .collect::<Vec<_>>(),
    );
    max_report("axial", &probes, tol, 2 * n)
}

/// `max |z(σ(p_t)) + t|` over a `t`-grid of `[0, 1]`.
pub fn check_symmetric(star: &GlStar, n: usize, tol: f64) -> CheckReport {
    let probes: Vec<Probe> = (0..n)
        .into_par_iter()
        .map(|i| {
            let t = if n == 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
            let res = star.sigma(&meridian_point(t)).map(|q| (q.z + t).abs());
            (or_infinite(res), vec![t])
        })
        .collect();
    max_report("symmetric", &probes, tol, n)
}

/// Samples of `p_z` along `]0, a_z[` for a height family `t(a)`, `s(a)`.
fn pz_samples(t: &dyn RealFn, s: &dyn RealFn, z: f64) -> Vec<(f64, f64)> {
    const N: usize = 256;
    let a_z = pz_interval_end(t, s, z);
    let (lo, hi) = if a_z.is_finite() {
        (a_z * 1e-6, a_z * (1.0 - 1e-9))
    } else {
        (1e-4, 1e4)
    };
    (0..N)
        .map(|i| {
            let a = lo * (hi / lo).powf(i as f64 / (N - 1) as f64);
            let p = (a * a + 1.0) / (a * a) * (z - t.eval(a)) * (z + s.eval(a));
            (a, p)
        })
        .collect()
}

/// `a` with `f(a) = y` for an increasing `f: ]0, ∞[ → ]0, 1[`, by bisection
/// in `ln a`.
fn bisect_increasing(f: &dyn RealFn, y: f64) -> f64 {
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f.eval(mid.exp()) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// `a_z`, the end of the interval on which `p_z` must decrease.
pub fn pz_interval_end(t: &dyn RealFn, s: &dyn RealFn, z: f64) -> f64 {
    if z.abs() >= 1.0 {
        f64::INFINITY
    } else if z > 0.0 {
        bisect_increasing(t, z)
    } else {
        bisect_increasing(s, -z)
    }
}

/// Checks that `p_z(a) = (a²+1)/a² (z − t(a))(z + s(a))` decreases strictly
/// on `]0, a_z[` for every `z` of the grid. The figure is the largest
/// relative increase between consecutive samples.
pub fn check_pz_monotone(t: &dyn RealFn, s: &dyn RealFn, z_grid: &[f64]) -> CheckReport {
    let probes: Vec<Probe> = z_grid
        .par_iter()
        .filter(|z| **z != 0.0)
        .flat_map_iter(|&z| {
            pz_samples(t, s, z)
                .windows(2)
                .map(|w| {
                    let scale = w[0].1.abs().max(w[1].1.abs()).max(1.0);
                    ((w[1].1 - w[0].1) / scale, vec![z, w[0].0, w[1].0])
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut report = max_report("pz_monotone", &probes, 1e-12, z_grid.len());
    report.max_residual = report.max_residual.max(0.0);
    report
}

/// Cyclic-order separation of pencil pairs: for sampled angles `φ, ψ`, the
/// pairs `{φ, σ₁φ}` and `{ψ, σ₁ψ}` separate each other on the circle.
pub fn check_pencil_separation(pencil: &GlPencil, n: usize, seed: u64) -> CheckReport {
    let mut r = rng(seed);
    let samples: Vec<(f64, f64)> = (0..n).map(|_| (r.gen_range(0.0..TAU), r.gen_range(0.0..TAU))).collect();
    let probes: Vec<Probe> = samples
        .par_iter()
        .map(|&(phi, psi)| {
            let (sphi, spsi) = (pencil.sigma1(phi), pencil.sigma1(psi));
            let inside = |x: f64| {
                let span = (sphi - phi).rem_euclid(TAU);
                let off = (x - phi).rem_euclid(TAU);
                off > 0.0 && off < span
            };
            let same = [psi, spsi].iter().any(|&x| {
                let d = (x - phi).rem_euclid(TAU);
                d.min(TAU - d) < 1e-9
            });
            let separated = same || (inside(psi) != inside(spsi));
            (if separated { 0.0 } else { 1.0 }, vec![phi, psi])
        })
        .collect();
    max_report("pencil_separation", &probes, 0.5, n)
}
