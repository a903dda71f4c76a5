use nalgebra::{Vector3, Vector6};

use super::embed::{klein_matrix, HLine};
use crate::projgeom::{klein_lift, signature_on, PLine, QuadricForm, Signature, Subspace};
use crate::{Error, HPoint4, Result};

/// Plücker-relation tolerance when lifting a spread line from `W ∩ K`.
const LIFT_TOL: f64 = 1e-8;

/// A parallel class: the regular spread whose Klein image is `W ∩ K` for
/// the 3-space `W = π₅(h)` polar to a 0-secant `h`.
#[derive(Debug, Clone)]
pub struct ParallelClass {
    hfd: HLine,
    w: Subspace,
    /// Euclidean-orthonormal basis of the complement of `W`.
    normals: [Vector6<f64>; 2],
}

/// The class of the H-line `h`.
pub fn class_from_hfd_line(h: &HLine) -> Result<ParallelClass> {
    if !h.is_zero_secant() {
        return Err(Error::NotZeroSecant);
    }
    let w = QuadricForm::klein().polar(&h.subspace())?;
    let g = klein_matrix();
    let [h1, h2] = h.basis();
    let n1 = (g * h1).normalize();
    let n2 = g * h2 - n1 * n1.dot(&(g * h2));
    Ok(ParallelClass {
        hfd: *h,
        w,
        normals: [n1, n2.normalize()],
    })
}

impl ParallelClass {
    /// The H-line `h` with `W = π₅(h)`.
    pub fn hfd_line(&self) -> &HLine {
        &self.hfd
    }

    pub fn w(&self) -> &Subspace {
        &self.w
    }

    /// Signature of `g` on `W`. Since `h` is definite, `W` has signature
    /// complementary to it inside the `(3,3)` form: `(1,3)` for a positive
    /// definite `h`. Either way `W ∩ K` is an elliptic quadric.
    pub fn signature(&self) -> Signature {
        signature_on(&QuadricForm::klein(), &self.w)
    }

    /// Whether `W ∩ K` is an elliptic quadric (signature `(3,1)` or `(1,3)`).
    pub fn is_elliptic(&self) -> bool {
        let s = self.signature();
        s == Signature::new(3, 1, 0) || s == Signature::new(1, 3, 0)
    }

    /// Euclidean distance of the unit Klein vector of `line` from `W`.
    pub fn membership_residual(&self, line: &PLine) -> f64 {
        let k = line.klein();
        let k = k / k.norm();
        self.normals[0].dot(&k).hypot(self.normals[1].dot(&k))
    }

    pub fn contains(&self, line: &PLine, tol: f64) -> bool {
        self.membership_residual(line) < tol
    }

    /// Distance between the H-lines of two classes; zero iff the classes
    /// coincide.
    pub fn distance(&self, other: &ParallelClass) -> f64 {
        self.hfd.distance(&other.hfd)
    }

    /// The spread line through `p`.
    pub fn spread_line_through(&self, p: &HPoint4) -> Result<PLine> {
        spread_line_through(self, p)
    }
}

/// The unique line of the class through `p`: the Klein vectors of all lines
/// through `p` form a 3-space `A_p`, and `A_p ∩ W` is a single point of
/// `K`. Writing the meet as `Σ αᵢ kᵢ` over a basis of `A_p`, `α` is the
/// cross product of the two rows `(nⱼ · kᵢ)ᵢ` for a basis `nⱼ` of `W^⊥`.
pub fn spread_line_through(cls: &ParallelClass, p: &HPoint4) -> Result<PLine> {
    let x = p.coords() / p.coords().norm();
    // the three coordinate points farthest from p span A_p with p
    let skip = x.iamax();
    let lines: Vec<PLine> = (0..4)
        .filter(|&i| i != skip)
        .map(|i| {
            let mut e = nalgebra::Vector4::zeros();
            e[i] = 1.0;
            PLine::join(&HPoint4::new(x).expect("unit"), &HPoint4::new(e).expect("unit"))
        })
        .collect::<Result<_>>()?;
    let k: Vec<Vector6<f64>> = lines.iter().map(|l| l.klein()).collect();
    let row = |n: &Vector6<f64>| Vector3::new(n.dot(&k[0]), n.dot(&k[1]), n.dot(&k[2]));
    let (r1, r2) = (row(&cls.normals[0]), row(&cls.normals[1]));
    let alpha = r1.cross(&r2);
    if alpha.norm() <= 1e-12 * r1.norm() * r2.norm() || alpha.norm() == 0.0 {
        let rank = usize::from(r1.norm() > 1e-12) + usize::from(r2.norm() > 1e-12);
        return Err(Error::DegenerateMeet(3 - rank));
    }
    let meet = k[0] * alpha[0] + k[1] * alpha[1] + k[2] * alpha[2];
    klein_lift(&(meet / meet.norm()), LIFT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::clifford;
    use crate::parallelism::embed_star;
    use crate::projgeom::z_axis;

    fn clifford_class_of_z() -> ParallelClass {
        let es = embed_star(clifford(Vector3::zeros()).unwrap());
        class_from_hfd_line(&es.hfd_line_of(&z_axis())).unwrap()
    }

    #[test]
    fn class_of_z_contains_z_and_is_elliptic() {
        let cls = clifford_class_of_z();
        assert!(cls.contains(&z_axis(), 1e-12));
        assert_eq!(cls.w().rank(), 4);
        assert_eq!(cls.signature(), Signature::new(1, 3, 0));
        assert!(cls.is_elliptic());
        // the polar of W is h again
        let back = QuadricForm::klein().polar(cls.w()).unwrap();
        assert!(back.proj_eq(&cls.hfd_line().subspace(), 1e-12));
    }

    #[test]
    fn spread_lines_of_clifford_class() {
        let cls = clifford_class_of_z();
        let origin = HPoint4::affine(0.0, 0.0, 0.0);
        assert!(cls.spread_line_through(&origin).unwrap().proj_sine(&z_axis()) < 1e-12);
        let p = HPoint4::affine(1.0, 0.0, 0.0);
        let l = cls.spread_line_through(&p).unwrap();
        assert!(l.contains(&p, 1e-12));
        assert!(cls.contains(&l, 1e-12));
        // skew to Z
        assert!(l.meet_residual(&z_axis()) > 1e-3);
    }

    #[test]
    fn non_zero_secant_rejected() {
        let d = super::super::embed::canonical_basis();
        // d1 and d4 span a line of signature (1,1): a 2-secant of K
        let h = HLine::span(&d[0], &d[3]).unwrap();
        assert!(matches!(class_from_hfd_line(&h), Err(Error::NotZeroSecant)));
    }
}
