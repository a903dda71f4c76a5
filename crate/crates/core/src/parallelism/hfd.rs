use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, Vector6};
use rand::Rng;
use rayon::prelude::*;

use super::embed::{EmbeddedStar, HLine};
use crate::glstar::{meridian_point, rotation_z};
use crate::projgeom::{klein_form, singular_values};
use crate::verify::rotation4;
use crate::verify::search::{grid_minima, refine_zeros, ZeroSearch};
use crate::verify::{rng, sphere_point, CheckReport, DEFAULT_SEED};
use crate::Result;

/// Resolution per parameter of the cached coarse grid of H-lines.
pub const HFD_GRID: usize = 64;
/// A parameter is a solution of the tangent-hyperplane search when the
/// root of the summed squared pairings is below this.
pub const HFD_ZERO_TOL: f64 = 1e-9;
/// Parameter-space radius within which two search solutions are merged.
pub const HFD_CLUSTER_RADIUS: f64 = 0.05;
/// Two H-lines closer than this are the same line.
const SAME_LINE_TOL: f64 = 1e-6;

type HfdEval = dyn Fn(f64, f64) -> Result<HLine> + Send + Sync;

struct HfdGrid {
    ts: Vec<f64>,
    thetas: Vec<f64>,
    lines: Vec<Vec<Option<HLine>>>,
}

/// A two-parameter family `H(t, θ)` of lines of `P⁵` (periodic in `θ`)
/// with a lazily built, then read-only, coarse grid.
#[derive(Clone)]
pub struct HfdLineSet {
    eval: Arc<HfdEval>,
    t_range: (f64, f64),
    grid: Arc<OnceLock<HfdGrid>>,
}

impl std::fmt::Debug for HfdLineSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HfdLineSet")
            .field("t_range", &self.t_range)
            .finish_non_exhaustive()
    }
}

/// One line of the set lying in a given tangent hyperplane.
#[derive(Debug, Clone, Copy)]
pub struct HfdSolution {
    pub t: f64,
    pub theta: f64,
    pub line: HLine,
    /// Root of the summed squared pairings at the solution.
    pub residual: f64,
}

impl HfdLineSet {
    /// A set from an evaluator on `[t_range.0, t_range.1] × [0, 2π)`.
    pub fn from_fn<F>(t_range: (f64, f64), f: F) -> HfdLineSet
    where
        F: Fn(f64, f64) -> Result<HLine> + Send + Sync + 'static,
    {
        HfdLineSet {
            eval: Arc::new(f),
            t_range,
            grid: Arc::new(OnceLock::new()),
        }
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }

    /// `H(t, θ)`, with `t` clamped to the parameter range.
    pub fn line(&self, t: f64, theta: f64) -> Result<HLine> {
        (self.eval)(t.clamp(self.t_range.0, self.t_range.1), theta.rem_euclid(TAU))
    }

    fn grid(&self) -> &HfdGrid {
        self.grid.get_or_init(|| {
            let (lo, hi) = self.t_range;
            let ts: Vec<f64> = (0..HFD_GRID)
                .map(|i| lo + (hi - lo) * i as f64 / (HFD_GRID - 1) as f64)
                .collect();
            let thetas: Vec<f64> = (0..HFD_GRID).map(|j| TAU * j as f64 / HFD_GRID as f64).collect();
            let lines = ts
                .par_iter()
                .map(|&t| thetas.iter().map(|&th| self.line(t, th).ok()).collect())
                .collect();
            HfdGrid { ts, thetas, lines }
        })
    }

    /// `n` lines at pseudo-random parameters drawn with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<((f64, f64), Result<HLine>)> {
        let mut r = rng(seed);
        let (lo, hi) = self.t_range;
        let params: Vec<(f64, f64)> = (0..n).map(|_| (r.gen_range(lo..=hi), r.gen_range(0.0..TAU))).collect();
        params
            .into_par_iter()
            .map(|(t, th)| ((t, th), self.line(t, th)))
            .collect()
    }

    /// All lines of the set inside the tangent hyperplane `k^⊥` of the
    /// Klein point `k`, found by minimising `Σ g(h_j, k̂)²` over the
    /// parameters (orthonormal `h_j`), clustered into distinct lines.
    pub fn solutions_in_tangent_hyperplane(&self, k: &Vector6<f64>) -> Vec<HfdSolution> {
        let k = k / k.norm();
        let pairing = |h: &HLine| {
            let [h1, h2] = h.basis();
            klein_form(h1, &k).powi(2) + klein_form(h2, &k).powi(2)
        };
        let grid = self.grid();
        let values: Vec<Vec<f64>> = grid
            .lines
            .iter()
            .map(|row| row.iter().map(|h| h.as_ref().map_or(f64::INFINITY, pairing)).collect())
            .collect();
        let f = |p: [f64; 2]| self.line(p[0], p[1]).map_or(f64::INFINITY, |h| pairing(&h));
        let (lo, hi) = self.t_range;
        let spacing = [(hi - lo) / (HFD_GRID - 1) as f64, TAU / HFD_GRID as f64];
        let cfg = ZeroSearch::new(HFD_ZERO_TOL);
        let mut zeros = Vec::new();
        for (i, j) in grid_minima(&values, 2, 8) {
            refine_zeros(&f, [grid.ts[i], grid.thetas[j]], spacing, &cfg, &mut zeros);
        }
        let mut out: Vec<HfdSolution> = Vec::new();
        for (p, residual) in zeros {
            let (t, theta) = (p[0].clamp(lo, hi), p[1].rem_euclid(TAU));
            let Ok(line) = self.line(t, theta) else { continue };
            let duplicate = out.iter().any(|s| {
                let dth = (theta - s.theta).rem_euclid(TAU);
                let dth = dth.min(TAU - dth);
                (t - s.t).hypot(dth) < HFD_CLUSTER_RADIUS || line.distance(&s.line) < SAME_LINE_TOL
            });
            if !duplicate {
                out.push(HfdSolution {
                    t,
                    theta,
                    line,
                    residual,
                });
            }
        }
        out
    }
}

/// How far the parameter of a rotational star's line set reaches below the
/// equator, so that searches can cross the seam where `L_{0,θ} = L_{0,θ+π}`.
pub const HFD_SEAM_OVERLAP: f64 = 0.0625;

/// The hfd line set `H = π₃(S)` of an embedded star: the polars, inside
/// `U`, of the embedded star lines, parametrised by the arc angle of the
/// meridian so that the set is smooth near the axis.
///
/// Rotational stars use `(u, θ) ↦ R_θ L_t` with `t = sin(uπ/2)` for
/// `u ∈ [0, 1]`, continued to `u ∈ [−1/16, 0[` by the star lines through
/// the rotated meridian points below the equator. Other stars use the line
/// through the sphere point `q(z, θ)` with `z = −cos(uπ)`, `u ∈ [0, 1]`,
/// each line then occurring twice.
pub fn star_to_hfd(es: &EmbeddedStar) -> HfdLineSet {
    let es = es.clone();
    if es.star().is_rotational() {
        HfdLineSet::from_fn((-HFD_SEAM_OVERLAP, 1.0), move |u, theta| {
            let line = if u >= 0.0 {
                es.star()
                    .meridian_line(meridian_height(u))?
                    .transform(&rotation4(theta))
            } else {
                es.star()
                    .line_through(&(rotation_z(theta) * meridian_point(meridian_height(u))))?
            };
            Ok(es.hfd_line_of(&line))
        })
    } else {
        HfdLineSet::from_fn((0.0, 1.0), move |u, theta| {
            let line = es.star().line_through(&sphere_point(-(u * PI).cos(), theta))?;
            Ok(es.hfd_line_of(&line))
        })
    }
}

/// The meridian parameter `t = sin(uπ/2)` at arc fraction `u ∈ [−1, 1]`.
pub fn meridian_height(u: f64) -> f64 {
    if u >= 1.0 {
        1.0
    } else {
        (u * FRAC_PI_2).sin()
    }
}

/// Rank analysis of the span of sampled H-lines.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    /// Projective dimension of the span.
    pub dim: usize,
    /// Singular values of the stacked spanning vectors, decreasing.
    pub singular_values: Vec<f64>,
    /// Ratio of the last retained to the first discarded singular value
    /// (infinite when nothing is discarded or the discarded one is zero).
    pub gap: f64,
}

/// Relative singular-value cutoff of [`dim_parallelism`].
pub const DIM_CUTOFF: f64 = 1e-8;

/// Rank of the stacked spanning vectors of `n ≥ 10` sampled H-lines.
pub fn dimension_estimate(h: &HfdLineSet, n: usize) -> DimensionEstimate {
    let lines: Vec<HLine> = h
        .sample(n.max(10), DEFAULT_SEED)
        .into_iter()
        .filter_map(|(_, l)| l.ok())
        .collect();
    let m = DMatrix::from_fn(2 * lines.len(), 6, |r, c| lines[r / 2].basis()[r % 2][c]);
    let sv = singular_values(&m);
    let rank = sv.iter().filter(|s| **s > DIM_CUTOFF * sv[0]).count();
    let gap = match sv.get(rank) {
        Some(&s) if s > 0.0 => sv[rank - 1] / s,
        _ => f64::INFINITY,
    };
    DimensionEstimate {
        dim: rank.saturating_sub(1),
        singular_values: sv,
        gap,
    }
}

/// `dim Π = dim span H`, estimated from `n` sampled H-lines.
pub fn dim_parallelism(h: &HfdLineSet, n: usize) -> usize {
    dimension_estimate(h, n).dim
}

/// Every sampled H-line is a 0-secant of the Klein quadric. The figure is
/// the largest secant discriminant `B² − AC` (negative when passing).
pub fn check_zero_secants(h: &HfdLineSet, n: usize) -> CheckReport {
    let samples = h.sample(n, DEFAULT_SEED);
    let worst = samples
        .iter()
        .map(|((t, th), l)| {
            (
                l.as_ref().map_or(f64::INFINITY, HLine::secant_discriminant),
                vec![*t, *th],
            )
        })
        .reduce(|a, b| if b.0.is_nan() || b.0 > a.0 { b } else { a });
    match worst {
        None => CheckReport::new("zero_secants", true, 0.0, None, 0),
        Some((v, w)) => {
            let passed = v < -1e-12;
            CheckReport::new("zero_secants", passed, v, (!passed).then_some(w), n)
        }
    }
}

/// The rotation by `θ` in the plane of the orthonormal pair `c`, identity
/// on its Euclidean complement.
pub(crate) fn plane_rotation(c: &[Vector6<f64>; 2], theta: f64) -> nalgebra::Matrix6<f64> {
    let (s, co) = theta.sin_cos();
    let [c1, c2] = c;
    let p = c1 * c1.transpose() + c2 * c2.transpose();
    nalgebra::Matrix6::identity() - p * (1.0 - co) + (c2 * c1.transpose() - c1 * c2.transpose()) * s
}

pub(crate) const TORUS_ANGLES: usize = 16;

pub(crate) fn torus_angles() -> Vec<f64> {
    (0..TORUS_ANGLES)
        .map(|k| PI * 2.0 * k as f64 / TORUS_ANGLES as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{builtin_example, clifford, symmetric_star, Fn1};
    use crate::parallelism::embed_star;
    use nalgebra::Vector3;

    #[test]
    fn clifford_hfd_spans_a_plane() {
        let h = star_to_hfd(&embed_star(clifford(Vector3::zeros()).unwrap()));
        let d = dimension_estimate(&h, 50);
        assert_eq!(d.dim, 2);
        assert!(d.gap > 1e6, "{d:?}");
    }

    #[test]
    fn rotational_non_clifford_stars_span_three_space() {
        for star in [builtin_example(), symmetric_star(Fn1::Moebius01).unwrap()] {
            let d = dimension_estimate(&star_to_hfd(&embed_star(star)), 50);
            assert_eq!(d.dim, 3);
            assert!(d.gap > 1e6, "{d:?}");
        }
    }

    #[test]
    fn hfd_lines_are_zero_secants() {
        let h = star_to_hfd(&embed_star(builtin_example()));
        assert!(check_zero_secants(&h, 200).passed);
    }

    #[test]
    fn off_axis_ordinary_star_is_still_clifford() {
        // its H-lines lie in the polar plane of the centre
        let h = star_to_hfd(&embed_star(clifford(Vector3::new(0.4, 0.0, 0.0)).unwrap()));
        assert!(!h.line(0.3, 0.0).unwrap().basis()[0].iter().any(|x| x.is_nan()));
        assert_eq!(dim_parallelism(&h, 40), 2);
    }

    #[test]
    fn plane_rotation_is_orthogonal_and_fixes_complement() {
        let c = [
            Vector6::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
            Vector6::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0),
        ];
        let r = plane_rotation(&c, 0.7);
        assert!((r.transpose() * r - nalgebra::Matrix6::identity()).amax() < 1e-15);
        let e = Vector6::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        assert_eq!(r * e, e);
        assert!((r * c[0] - (c[0] * 0.7f64.cos() + c[1] * 0.7f64.sin())).norm() < 1e-15);
    }
}
