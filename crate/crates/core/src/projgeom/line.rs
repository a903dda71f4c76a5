use nalgebra::{Matrix4, Vector4, Vector6};

use super::point::{proj_distance, proj_sine};
use super::HPoint4;
use crate::{Error, Result};

/// Index pairs `(i, j)` of the Plücker coordinates in storage order
/// `(p01, p02, p03, p23, p31, p12)`.
pub const PLUCKER_INDEX: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// Joins closer than this (sine of the angle between the homogeneous
/// coordinate vectors) are treated as coincident points.
const JOIN_EPS: f64 = 1e-12;

/// A line of projective 3-space in Plücker coordinates
/// `(p01, p02, p03, p23, p31, p12)`, equivalently its point on the Klein
/// quadric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PLine {
    p: Vector6<f64>,
}

/// The Klein pairing `½(p01q23 + p23q01 + p02q31 + p31q02 + p03q12 + p12q03)`.
///
/// `klein_form(k, k)` is the Plücker relation; two lines meet iff their
/// Klein vectors are orthogonal.
pub fn klein_form(k1: &Vector6<f64>, k2: &Vector6<f64>) -> f64 {
    0.5 * (k1[0] * k2[3] + k1[3] * k2[0] + k1[1] * k2[4] + k1[4] * k2[1] + k1[2] * k2[5] + k1[5] * k2[2])
}

/// Klein pairing normalised by the Euclidean norms of its arguments.
pub fn klein_form_normalized(k1: &Vector6<f64>, k2: &Vector6<f64>) -> f64 {
    klein_form(k1, k2) / (k1.norm() * k2.norm())
}

/// Lifts a point of the Klein quadric to the line it represents.
pub fn klein_lift(k: &Vector6<f64>, tol: f64) -> Result<PLine> {
    PLine::from_plucker(*k, tol)
}

impl PLine {
    /// The line through two projectively distinct points, `p_ij = a_i b_j − a_j b_i`.
    pub fn join(a: &HPoint4, b: &HPoint4) -> Result<PLine> {
        let (a, b) = (a.coords(), b.coords());
        let an = a / a.norm();
        let bn = b / b.norm();
        let mut p = Vector6::zeros();
        for (k, &(i, j)) in PLUCKER_INDEX.iter().enumerate() {
            p[k] = an[i] * bn[j] - an[j] * bn[i];
        }
        if p.norm() < JOIN_EPS {
            return Err(Error::DegenerateJoin);
        }
        Ok(PLine { p })
    }

    /// Builds a line from a Klein vector, checking the Plücker relation
    /// relative to `|k|²`.
    pub fn from_plucker(k: Vector6<f64>, tol: f64) -> Result<PLine> {
        let n2 = k.norm_squared();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::InvalidInput("zero Plücker vector".into()));
        }
        let residual = (klein_form(&k, &k) / n2).abs();
        if residual >= tol {
            return Err(Error::NotOnQuadric { residual });
        }
        Ok(PLine { p: k })
    }

    pub fn plucker(&self) -> &Vector6<f64> {
        &self.p
    }

    /// Unit-norm Klein vector.
    pub fn klein(&self) -> Vector6<f64> {
        self.p / self.p.norm()
    }

    /// `|p01 p23 + p02 p31 + p03 p12| / |p|²`.
    pub fn relation_residual(&self) -> f64 {
        (klein_form(&self.p, &self.p) / self.p.norm_squared()).abs()
    }

    /// The antisymmetric matrix `P = a bᵀ − b aᵀ`; its columns are points of
    /// the line.
    pub fn plucker_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (k, &(i, j)) in PLUCKER_INDEX.iter().enumerate() {
            m[(i, j)] = self.p[k];
            m[(j, i)] = -self.p[k];
        }
        m
    }

    /// Two Euclidean-orthonormal homogeneous vectors spanning the line.
    pub fn spanning_vectors(&self) -> (Vector4<f64>, Vector4<f64>) {
        let m = self.plucker_matrix();
        let cols: Vec<Vector4<f64>> = (0..4).map(|j| m.column(j).into_owned()).collect();
        let first = *cols
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("four columns");
        let u = first / first.norm();
        let second = cols
            .iter()
            .map(|c| c - u * u.dot(c))
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("four columns");
        (u, second / second.norm())
    }

    /// Two points spanning the line.
    pub fn points(&self) -> (HPoint4, HPoint4) {
        let (u, v) = self.spanning_vectors();
        (
            HPoint4::new(u).expect("unit vector"),
            HPoint4::new(v).expect("unit vector"),
        )
    }

    /// Distance of `p` from the line measured as the sine of the angle
    /// between `p` and the 2-dimensional subspace representing the line.
    pub fn incidence_residual(&self, p: &HPoint4) -> f64 {
        let (u, v) = self.spanning_vectors();
        let x = p.coords() / p.coords().norm();
        (x - u * u.dot(&x) - v * v.dot(&x)).norm()
    }

    pub fn contains(&self, p: &HPoint4, tol: f64) -> bool {
        self.incidence_residual(p) < tol
    }

    /// Klein pairing with `other`, normalised; zero iff the lines meet.
    pub fn meet_residual(&self, other: &PLine) -> f64 {
        klein_form_normalized(&self.p, &other.p).abs()
    }

    pub fn meets(&self, other: &PLine, tol: f64) -> bool {
        self.meet_residual(other) < tol
    }

    /// The common point of two distinct coplanar lines.
    ///
    /// Returns `None` when the lines coincide (every point is common).
    pub fn meet_point(&self, other: &PLine) -> Option<HPoint4> {
        let (a1, b1) = self.spanning_vectors();
        let (a2, b2) = other.spanning_vectors();
        let m = Matrix4::from_columns(&[a1, b1, a2, b2]);
        let svd = m.svd(false, true);
        let vt = svd.v_t.expect("requested V");
        let sv = svd.singular_values;
        // nalgebra sorts singular values in decreasing order
        if sv[2] < 1e-10 * sv[0] {
            return None;
        }
        let null = vt.row(3);
        let p = a1 * null[0] + b1 * null[1];
        HPoint4::new(p).ok()
    }

    /// `1 − |cos|` between the Klein vectors.
    pub fn proj_distance(&self, other: &PLine) -> f64 {
        proj_distance(&self.p, &other.p)
    }

    /// Sine of the angle between the Klein vectors; a metric-like distance
    /// on lines that is accurate for nearly equal lines.
    pub fn proj_sine(&self, other: &PLine) -> f64 {
        proj_sine(self.p.as_slice(), other.p.as_slice())
    }

    pub fn proj_eq(&self, other: &PLine, tol: f64) -> bool {
        self.proj_distance(other) < tol
    }

    /// Image under a linear map of R⁴ given by its matrix.
    pub fn transform(&self, m: &Matrix4<f64>) -> PLine {
        let (u, v) = self.spanning_vectors();
        PLine::join(
            &HPoint4::new(m * u).expect("invertible map"),
            &HPoint4::new(m * v).expect("invertible map"),
        )
        .expect("invertible map preserves distinctness")
    }

    pub(crate) fn from_raw(p: Vector6<f64>) -> PLine {
        PLine { p }
    }
}

/// Free-function form of [`PLine::join`].
pub fn join(a: &HPoint4, b: &HPoint4) -> Result<PLine> {
    PLine::join(a, b)
}

/// The `z`-axis, `(1,0,0,0) ∨ (0,0,0,1)`.
pub fn z_axis() -> PLine {
    PLine::from_raw(Vector6::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0))
}

/// The `x`-axis, `(1,0,0,0) ∨ (0,1,0,0)`.
pub fn x_axis() -> PLine {
    PLine::from_raw(Vector6::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0))
}
