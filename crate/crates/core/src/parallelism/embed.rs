use nalgebra::{DVector, Matrix4, Matrix6, Matrix6x4, Vector4, Vector6};

use crate::glstar::GlStar;
use crate::projgeom::{dvec, klein_form, PLine, QuadricForm, Subspace};
use crate::{Error, Result};

/// The diagonalising basis `d_i = e_i + e_{i+3}`, `d_{i+3} = e_i − e_{i+3}`
/// (`i = 1, 2, 3`) of the Klein form: `g(d_i, d_i) = 1` for the first three
/// and `−1` for the last three, all other pairings zero.
pub fn canonical_basis() -> [Vector6<f64>; 6] {
    let e = |i: usize| Vector6::from_fn(|r, _| if r == i { 1.0 } else { 0.0 });
    [
        e(0) + e(3),
        e(1) + e(4),
        e(2) + e(5),
        e(0) - e(3),
        e(1) - e(4),
        e(2) - e(5),
    ]
}

/// The Gram matrix of the Klein form in Plücker coordinates.
pub fn klein_matrix() -> Matrix6<f64> {
    let mut m = Matrix6::zeros();
    for i in 0..3 {
        m[(i, i + 3)] = 0.5;
        m[(i + 3, i)] = 0.5;
    }
    m
}

/// A gl star together with the isometric embedding of `(R⁴, sphere form)`
/// onto the subspace `U = span(d1, d2, d3, d4)` of `(R⁶, g)`; the
/// complement `C = span(d5, d6)` is negative definite.
#[derive(Debug, Clone)]
pub struct EmbeddedStar {
    star: GlStar,
    iso: Matrix6x4<f64>,
    c_basis: [Vector6<f64>; 2],
}

/// Embeds a star: sphere coordinates `(w1, w2, w3; w0)` go to
/// `w1 d1 + w2 d2 + w3 d3 + w0 d4`.
pub fn embed_star(star: GlStar) -> EmbeddedStar {
    let d = canonical_basis();
    // columns indexed by the homogeneous coordinates (w0, w1, w2, w3)
    let iso = Matrix6x4::from_columns(&[d[3], d[0], d[1], d[2]]);
    EmbeddedStar {
        star,
        iso,
        c_basis: [d[4], d[5]],
    }
}

fn dvec6(v: &Vector6<f64>) -> DVector<f64> {
    dvec(v.as_slice())
}

impl EmbeddedStar {
    pub fn star(&self) -> &GlStar {
        &self.star
    }

    /// Matrix of the embedding `R⁴ → U`.
    pub fn iso_matrix(&self) -> &Matrix6x4<f64> {
        &self.iso
    }

    pub fn iso(&self, x: &Vector4<f64>) -> Vector6<f64> {
        self.iso * x
    }

    /// Preimage of the `U`-component of `k` (the columns of the embedding
    /// are orthogonal of squared length 2).
    pub fn iso_inverse(&self, k: &Vector6<f64>) -> Vector4<f64> {
        self.iso.transpose() * k / 2.0
    }

    pub fn u(&self) -> Subspace {
        let cols: Vec<DVector<f64>> = self.iso.column_iter().map(|c| dvec6(&c.into_owned())).collect();
        Subspace::span(&cols, 6).expect("ambient 6")
    }

    pub fn c(&self) -> Subspace {
        Subspace::span(&[dvec6(&self.c_basis[0]), dvec6(&self.c_basis[1])], 6).expect("ambient 6")
    }

    /// Orthonormal (Euclidean) basis of `C`.
    pub fn c_orthonormal(&self) -> [Vector6<f64>; 2] {
        [self.c_basis[0].normalize(), self.c_basis[1].normalize()]
    }

    /// `|g(iso u, iso v) − F(u, v)|` for the sphere form `F`.
    pub fn isometry_residual(&self, u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
        let f = QuadricForm::sphere().eval(u.as_slice(), v.as_slice());
        (klein_form(&self.iso(u), &self.iso(v)) - f).abs()
    }

    /// The H-line `π₃(iso L)`: the image of the sphere polar of `line`.
    pub fn hfd_line_of(&self, line: &PLine) -> HLine {
        let (a, b) = sphere_polar_basis(line);
        // the embedding scales lengths uniformly by √2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        HLine::from_orthonormal([self.iso(&a) * s, self.iso(&b) * s])
    }
}

/// Orthonormal basis of the sphere polar of a line of `P³`: the points `x`
/// with `xᵀFa = xᵀFb = 0` for `a, b` spanning the line.
fn sphere_polar_basis(line: &PLine) -> (Vector4<f64>, Vector4<f64>) {
    let f = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
    let (a, b) = line.spanning_vectors();
    let (u, v) = (f * a, f * b);
    let e1 = u.normalize();
    let v = v - e1 * e1.dot(&v);
    let e2 = v.normalize();
    let mut basis = vec![e1, e2];
    for _ in 0..2 {
        let best = (0..4)
            .map(|i| {
                let mut x = Vector4::zeros();
                x[i] = 1.0;
                for e in &basis {
                    x -= e * e.dot(&x);
                }
                x
            })
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("four candidates");
        basis.push(best.normalize());
    }
    (basis[2], basis[3])
}

/// The sphere polar of a line of `P³`.
pub fn sphere_polar(line: &PLine) -> PLine {
    let (a, b) = sphere_polar_basis(line);
    PLine::join(
        &crate::HPoint4::new(a).expect("unit vector"),
        &crate::HPoint4::new(b).expect("unit vector"),
    )
    .expect("orthonormal vectors are independent")
}

/// A line of `P⁵`, stored as a Euclidean-orthonormal pair spanning its
/// 2-dimensional subspace of `R⁶`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HLine {
    basis: [Vector6<f64>; 2],
}

impl HLine {
    /// The line spanned by two independent vectors.
    pub fn span(a: &Vector6<f64>, b: &Vector6<f64>) -> Result<HLine> {
        let e1 = a.normalize();
        let r = b - e1 * e1.dot(b);
        if !(r.norm() > 1e-12 * b.norm()) {
            return Err(Error::DegenerateJoin);
        }
        Ok(HLine::from_orthonormal([e1, r.normalize()]))
    }

    pub(crate) fn from_orthonormal(basis: [Vector6<f64>; 2]) -> HLine {
        HLine { basis }
    }

    pub fn basis(&self) -> &[Vector6<f64>; 2] {
        &self.basis
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::span(&[dvec6(&self.basis[0]), dvec6(&self.basis[1])], 6).expect("ambient 6")
    }

    /// Coefficients `(A, B, C)` of `g` restricted to the line:
    /// `g(λh₁ + μh₂) = Aλ² + 2Bλμ + Cμ²`.
    pub fn restricted_form(&self) -> (f64, f64, f64) {
        let [h1, h2] = &self.basis;
        (klein_form(h1, h1), klein_form(h1, h2), klein_form(h2, h2))
    }

    /// Discriminant `B² − AC` of the restricted form; negative exactly for
    /// 0-secants of the Klein quadric.
    pub fn secant_discriminant(&self) -> f64 {
        let (a, b, c) = self.restricted_form();
        b * b - a * c
    }

    pub fn is_zero_secant(&self) -> bool {
        self.secant_discriminant() < -1e-12
    }

    /// Euclidean distance of the unit vector `v/|v|` from the line's
    /// subspace.
    pub fn residual(&self, v: &Vector6<f64>) -> f64 {
        let x = v / v.norm();
        let [h1, h2] = &self.basis;
        (x - h1 * h1.dot(&x) - h2 * h2.dot(&x)).norm()
    }

    /// Largest distance of either line's basis from the other line.
    pub fn distance(&self, other: &HLine) -> f64 {
        let a = other.basis.iter().map(|v| self.residual(v)).fold(0.0, f64::max);
        let b = self.basis.iter().map(|v| other.residual(v)).fold(0.0, f64::max);
        a.max(b)
    }

    /// The line's image under a linear map of `R⁶`.
    pub fn transform(&self, m: &Matrix6<f64>) -> Result<HLine> {
        HLine::span(&(m * self.basis[0]), &(m * self.basis[1]))
    }
}
