use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix4, Matrix6, Vector4};

use super::subspace::Subspace;
use crate::{Error, Result};

/// Eigenvalues with magnitude below this fraction of the largest are zero.
pub const SIGNATURE_CUTOFF: f64 = 1e-8;

/// Inertia `(pos, neg, zero)` of a symmetric bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

impl Signature {
    pub const fn new(pos: usize, neg: usize, zero: usize) -> Self {
        Signature { pos, neg, zero }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }

    /// The form of signature `(neg, pos)`.
    pub fn negated(&self) -> Signature {
        Signature::new(self.neg, self.pos, self.zero)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({},{})", self.pos, self.neg)
        } else {
            write!(f, "({},{},{})", self.pos, self.neg, self.zero)
        }
    }
}

/// Signature of a symmetric matrix from the signs of its eigenvalues.
pub fn signature_of(m: &DMatrix<f64>) -> Signature {
    if m.nrows() == 0 {
        return Signature::new(0, 0, 0);
    }
    let eig = m.clone().symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let mut s = Signature::new(0, 0, 0);
    for &e in eig.eigenvalues.iter() {
        if top == 0.0 || e.abs() <= SIGNATURE_CUTOFF * top {
            s.zero += 1;
        } else if e > 0.0 {
            s.pos += 1;
        } else {
            s.neg += 1;
        }
    }
    s
}

/// A symmetric bilinear form on `R^n`, used both as the Klein form on `R⁶`
/// and as the sphere polarity on `R⁴`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricForm {
    matrix: DMatrix<f64>,
    signature: Signature,
}

impl QuadricForm {
    pub fn new(matrix: DMatrix<f64>) -> Result<QuadricForm> {
        if !matrix.is_square() {
            return Err(Error::InvalidInput("form matrix must be square".into()));
        }
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        if (&matrix - matrix.transpose()).amax() > 1e-12 * scale {
            return Err(Error::InvalidInput("form matrix must be symmetric".into()));
        }
        let signature = signature_of(&matrix);
        Ok(QuadricForm { matrix, signature })
    }

    /// The Klein form on Plücker coordinates `(p01,p02,p03,p23,p31,p12)`.
    pub fn klein() -> QuadricForm {
        let mut m = Matrix6::zeros();
        for i in 0..3 {
            m[(i, i + 3)] = 0.5;
            m[(i + 3, i)] = 0.5;
        }
        QuadricForm::new(DMatrix::from_column_slice(6, 6, m.as_slice())).expect("symmetric")
    }

    /// The unit-sphere form `−w0² + w1² + w2² + w3²`.
    pub fn sphere() -> QuadricForm {
        let m = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
        QuadricForm::new(DMatrix::from_column_slice(4, 4, m.as_slice())).expect("symmetric")
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter()
            .enumerate()
            .map(|(i, ui)| {
                ui * v
                    .iter()
                    .enumerate()
                    .map(|(j, vj)| self.matrix[(i, j)] * vj)
                    .sum::<f64>()
            })
            .sum()
    }

    /// Signature of the form restricted to `s`, via the Gram matrix of an
    /// orthonormal basis.
    pub fn signature_on(&self, s: &Subspace) -> Signature {
        let q = s.orthonormal();
        let gram = &q * &self.matrix * q.transpose();
        signature_of(&gram)
    }

    /// `{w : wᵀ F u = 0 for all u ∈ s}`.
    pub fn polar(&self, s: &Subspace) -> Result<Subspace> {
        if !self.signature.is_nondegenerate() {
            return Err(Error::SingularForm);
        }
        if s.ambient() != self.dim() {
            return Err(Error::InvalidInput("subspace and form dimensions differ".into()));
        }
        if s.rank() == 0 {
            return Ok(Subspace::full(self.dim()));
        }
        let images = s.rows() * &self.matrix;
        Ok(Subspace::row_space(&images).complement())
    }
}

/// Free-function form of [`QuadricForm::signature_on`].
pub fn signature_on(form: &QuadricForm, s: &Subspace) -> Signature {
    form.signature_on(s)
}

/// Free-function form of [`QuadricForm::polar`].
pub fn polar(s: &Subspace, form: &QuadricForm) -> Result<Subspace> {
    form.polar(s)
}

pub(crate) fn dvec(a: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_and_sphere_signatures() {
        assert_eq!(QuadricForm::klein().signature(), Signature::new(3, 3, 0));
        assert_eq!(QuadricForm::sphere().signature(), Signature::new(3, 1, 0));
    }

    #[test]
    fn polar_of_z_axis_is_the_line_at_infinity_of_the_xy_plane() {
        let z = Subspace::span(&[dvec(&[1., 0., 0., 0.]), dvec(&[0., 0., 0., 1.])], 4).unwrap();
        let p = QuadricForm::sphere().polar(&z).unwrap();
        let expected = Subspace::span(&[dvec(&[0., 1., 0., 0.]), dvec(&[0., 0., 1., 0.])], 4).unwrap();
        assert!(p.proj_eq(&expected, 1e-12));
    }

    #[test]
    fn polar_of_klein_point_is_its_tangent_hyperplane() {
        let k = dvec(&[0., 0., 1., 0., 0., 0.]);
        let s = Subspace::span(std::slice::from_ref(&k), 6).unwrap();
        let t = QuadricForm::klein().polar(&s).unwrap();
        assert_eq!(t.rank(), 5);
        assert!(t.contains(&k, 1e-12));
    }

    #[test]
    fn degenerate_form_has_no_polarity() {
        let f = QuadricForm::new(DMatrix::from_diagonal(&dvec(&[1., 1., 0., -1.]))).unwrap();
        let s = Subspace::span(&[dvec(&[1., 0., 0., 0.])], 4).unwrap();
        assert_eq!(f.polar(&s), Err(Error::SingularForm));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1., 2., 0., 1.]);
        assert!(QuadricForm::new(m).is_err());
    }
}
