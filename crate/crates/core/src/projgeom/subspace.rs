use nalgebra::{DMatrix, DVector};

use super::{PLine, QuadricForm};
use crate::{Error, Result};

/// Relative singular-value cutoff used to decide rank.
pub const RANK_CUTOFF: f64 = 1e-9;

/// A linear subspace of `R^n` (a projective subspace of `P^{n-1}`).
///
/// The basis is stored in reduced row echelon form, which is a normal form:
/// reducing it again gives the same rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    rows: DMatrix<f64>,
    ambient: usize,
}

impl Subspace {
    /// The span of `vectors`; linearly dependent input is allowed.
    pub fn span(vectors: &[DVector<f64>], ambient: usize) -> Result<Subspace> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::InvalidInput(
                "vector length differs from ambient dimension".into(),
            ));
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let m = DMatrix::from_fn(vectors.len(), ambient, |i, j| vectors[i][j]);
        Ok(Subspace::row_space(&m))
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            rows: DMatrix::zeros(0, ambient),
            ambient,
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            rows: DMatrix::identity(ambient, ambient),
            ambient,
        }
    }

    /// The 2-dimensional subspace of `R⁴` representing a line.
    pub fn from_line(line: &PLine) -> Subspace {
        let (u, v) = line.spanning_vectors();
        Subspace::span(
            &[
                DVector::from_column_slice(u.as_slice()),
                DVector::from_column_slice(v.as_slice()),
            ],
            4,
        )
        .expect("ambient 4")
    }

    /// Row space of `m`, rank decided by [`RANK_CUTOFF`].
    pub fn row_space(m: &DMatrix<f64>) -> Subspace {
        let ambient = m.ncols();
        let basis = orthonormal_row_basis(m, RANK_CUTOFF);
        Subspace {
            rows: rref(basis),
            ambient,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.nrows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Basis vectors in reduced row echelon form.
    pub fn basis(&self) -> Vec<DVector<f64>> {
        self.rows
            .row_iter()
            .map(|r| DVector::from_iterator(self.ambient, r.iter().copied()))
            .collect()
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    /// An orthonormal basis, as the rows of a `rank × ambient` matrix.
    pub fn orthonormal(&self) -> DMatrix<f64> {
        orthonormal_row_basis(&self.rows, RANK_CUTOFF)
    }

    /// Euclidean distance of the unit vector `v / |v|` from the subspace.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        let q = self.orthonormal();
        let x = v / v.norm();
        let proj = q.transpose() * (&q * &x);
        (x - proj).norm()
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.residual(v) < tol
    }

    /// Euclidean orthogonal complement.
    pub fn complement(&self) -> Subspace {
        Subspace {
            rows: rref(null_space(&self.rows, self.ambient)),
            ambient: self.ambient,
        }
    }

    /// Intersection `self ∩ other`.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let a = self.complement();
        let b = other.complement();
        let stacked = stack(a.rows(), b.rows());
        Ok(Subspace {
            rows: rref(null_space(&stacked, self.ambient)),
            ambient: self.ambient,
        })
    }

    /// Sum `self + other` (projective join).
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::row_space(&stack(&self.rows, &other.rows)))
    }

    /// Polar subspace with respect to `form`: `{w : wᵀ F u = 0 ∀ u ∈ self}`.
    pub fn polar(&self, form: &QuadricForm) -> Result<Subspace> {
        form.polar(self)
    }

    /// Equality of subspaces: same rank and each basis contained in the other.
    pub fn proj_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.ambient == other.ambient
            && self.rank() == other.rank()
            && other.basis().iter().all(|v| self.contains(v, tol))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::InvalidInput(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// Free-function form of [`Subspace::meet`].
pub fn meet(s1: &Subspace, s2: &Subspace) -> Result<Subspace> {
    s1.meet(s2)
}

fn stack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.ncols().max(b.ncols());
    let mut m = DMatrix::zeros(a.nrows() + b.nrows(), n);
    m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    m.view_mut((a.nrows(), 0), (b.nrows(), b.ncols())).copy_from(b);
    m
}

/// Singular values of `m` in decreasing order, padded with zeros up to
/// `m.ncols()`.
pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = if m.nrows() == 0 {
        Vec::new()
    } else {
        m.clone().svd(false, false).singular_values.iter().copied().collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.resize(m.ncols(), 0.0);
    sv
}

/// Right singular vectors of `m` paired with singular values (decreasing),
/// completed to a full orthonormal basis of `R^ncols`.
fn right_singular_basis(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.ncols();
    // Pad to a square matrix so that nalgebra returns a full V.
    let mut sq = DMatrix::zeros(m.nrows().max(n), n);
    sq.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let sv = svd.singular_values;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]));
    let values = order.iter().map(|&i| sv[i]).collect();
    let rows = DMatrix::from_fn(n, n, |i, j| vt[(order[i], j)]);
    (values, rows)
}

fn orthonormal_row_basis(m: &DMatrix<f64>, cutoff: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::zeros(0, n);
    }
    let (sv, vt) = right_singular_basis(m);
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = if top == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > cutoff * top).count()
    };
    vt.rows(0, rank).into_owned()
}

/// Orthonormal basis (rows) of the null space of `m`.
fn null_space(m: &DMatrix<f64>, ambient: usize) -> DMatrix<f64> {
    if m.nrows() == 0 {
        return DMatrix::identity(ambient, ambient);
    }
    let (sv, vt) = right_singular_basis(m);
    let top = sv[0];
    let rank = if top == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > RANK_CUTOFF * top).count()
    };
    vt.rows(rank, ambient - rank).into_owned()
}

/// Reduced row echelon form with partial pivoting. Rows are assumed
/// linearly independent (they come from an orthonormal basis).
fn rref(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (piv, val) = (r..rows)
            .map(|i| (i, m[(i, c)].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty range");
        if val < 1e-12 {
            continue;
        }
        m.swap_rows(r, piv);
        let p = m[(r, c)];
        for j in 0..cols {
            m[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r {
                let f = m[(i, c)];
                if f != 0.0 {
                    for j in 0..cols {
                        m[(i, j)] -= f * m[(r, j)];
                    }
                }
            }
        }
        // pivot column is exactly a unit vector
        for i in 0..rows {
            m[(i, c)] = if i == r { 1.0 } else { 0.0 };
        }
        r += 1;
    }
    m.rows(0, r).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(a)
    }

    #[test]
    fn two_planes_in_r4_meet_in_a_line() {
        let s1 = Subspace::span(&[v(&[1., 0., 0., 0.]), v(&[0., 1., 0., 0.]), v(&[0., 0., 1., 0.])], 4).unwrap();
        let s2 = Subspace::span(&[v(&[1., 0., 0., 0.]), v(&[0., 1., 0., 0.]), v(&[0., 0., 0., 1.])], 4).unwrap();
        let m = s1.meet(&s2).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(m.contains(&v(&[1., 1., 0., 0.]), 1e-12));
    }

    #[test]
    fn meet_with_itself() {
        let s = Subspace::span(&[v(&[1., 2., 0., 1.]), v(&[0., 1., 1., 3.])], 4).unwrap();
        assert!(s.meet(&s).unwrap().proj_eq(&s, 1e-12));
    }

    #[test]
    fn rref_is_idempotent() {
        let s = Subspace::span(&[v(&[1., 2., 0., 1.]), v(&[2., 5., 1., 3.]), v(&[3., 7., 1., 4.])], 4).unwrap();
        assert_eq!(s.rank(), 2);
        let again = Subspace::span(&s.basis(), 4).unwrap();
        assert!((again.rows() - s.rows()).amax() < 1e-12);
    }

    #[test]
    fn complement_dimensions() {
        let s = Subspace::span(&[v(&[1., 1., 0., 0., 0., 0.])], 6).unwrap();
        assert_eq!(s.complement().rank(), 5);
        assert_eq!(Subspace::zero(6).complement().rank(), 6);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        assert!(Subspace::full(4).meet(&Subspace::full(6)).is_err());
    }
}
