use nalgebra::{Vector3, Vector4};

use super::{HPoint4, PLine, QuadricForm};

/// Position of a point relative to a quadric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    On,
    Exterior,
}

/// Classifies `p` by the sign of `pᵀFp / |p|²`, with `|·| < tol` meaning on
/// the quadric. For the sphere form, negative values are interior.
pub fn point_side(p: &HPoint4, form: &QuadricForm, tol: f64) -> Side {
    let c = p.coords();
    let v = form.eval(c.as_slice(), c.as_slice()) / c.norm_squared();
    if v.abs() < tol {
        Side::On
    } else if v < 0.0 {
        Side::Interior
    } else {
        Side::Exterior
    }
}

/// Intersection of a line with a quadric of `P³`: zero, one (tangent) or two
/// points.
///
/// The restricted binary quadratic `A λ² + 2B λμ + C μ² = 0` is solved in
/// homogeneous form with `q = −(B + sign(B)√disc)`, giving the roots
/// `(q, A)` and `(C, q)` without cancellation.
pub fn line_sphere_intersect(line: &PLine, form: &QuadricForm, tol: f64) -> Vec<HPoint4> {
    let (u, v) = line.spanning_vectors();
    let (a, b, c) = restricted_quadratic(&u, &v, form);
    let disc = b * b - a * c;
    let scale = a * a + b * b + c * c;
    if scale == 0.0 {
        // the whole line lies on the quadric
        return Vec::new();
    }
    if disc.abs() < tol * scale {
        let p = if a.abs() >= c.abs() {
            u * (-b) + v * a
        } else {
            u * c + v * (-b)
        };
        let p = if p.norm() == 0.0 { u } else { p };
        return vec![HPoint4::new(p).expect("nonzero").normalized()];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -(b + b.signum_nonzero() * disc.sqrt());
    let p1 = u * q + v * a;
    let p2 = u * c + v * q;
    vec![
        HPoint4::new(p1).expect("nonzero").normalized(),
        HPoint4::new(p2).expect("nonzero").normalized(),
    ]
}

/// Coefficients `(A, B, C)` of the form restricted to `span(u, v)`.
pub(crate) fn restricted_quadratic(u: &Vector4<f64>, v: &Vector4<f64>, form: &QuadricForm) -> (f64, f64, f64) {
    (
        form.eval(u.as_slice(), u.as_slice()),
        form.eval(u.as_slice(), v.as_slice()),
        form.eval(v.as_slice(), v.as_slice()),
    )
}

trait SignumNonzero {
    fn signum_nonzero(self) -> f64;
}

impl SignumNonzero for f64 {
    fn signum_nonzero(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Second intersection of the line through the sphere point `q` with
/// direction `d` and the unit sphere: `q + λ d` with `λ = −2 q·d / |d|²`.
pub fn second_sphere_point(q: &Vector3<f64>, d: &Vector3<f64>) -> Vector3<f64> {
    let lambda = -2.0 * q.dot(d) / d.norm_squared();
    q + d * lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::line::{join, z_axis};

    fn pt(a: [f64; 4]) -> HPoint4 {
        HPoint4::from_array(a).unwrap()
    }

    #[test]
    fn sides() {
        let f = QuadricForm::sphere();
        assert_eq!(point_side(&pt([1., 0., 0., 0.]), &f, 1e-9), Side::Interior);
        assert_eq!(point_side(&pt([1., 1., 0., 0.]), &f, 1e-9), Side::On);
        assert_eq!(point_side(&pt([0., 0., 0., 1.]), &f, 1e-9), Side::Exterior);
    }

    #[test]
    fn z_axis_meets_sphere_at_the_poles() {
        let pts = line_sphere_intersect(&z_axis(), &QuadricForm::sphere(), 1e-9);
        assert_eq!(pts.len(), 2);
        let n = pt([1., 0., 0., 1.]);
        let s = pt([1., 0., 0., -1.]);
        assert!(pts.iter().any(|p| p.proj_eq(&n, 1e-15)));
        assert!(pts.iter().any(|p| p.proj_eq(&s, 1e-15)));
    }

    #[test]
    fn line_at_infinity_misses_sphere() {
        let l = join(&pt([0., 1., 0., 0.]), &pt([0., 0., 1., 0.])).unwrap();
        assert!(line_sphere_intersect(&l, &QuadricForm::sphere(), 1e-9).is_empty());
    }

    #[test]
    fn tangent_line_touches_once() {
        let l = join(&pt([1., 1., 0., 0.]), &pt([0., 0., 1., 0.])).unwrap();
        let pts = line_sphere_intersect(&l, &QuadricForm::sphere(), 1e-9);
        assert_eq!(pts.len(), 1);
        assert!(pts[0].proj_eq(&pt([1., 1., 0., 0.]), 1e-12));
    }

    #[test]
    fn second_point_on_chord() {
        let q = Vector3::new(1.0, 0.0, 0.0);
        let d = Vector3::new(0.0, 0.0, 0.5) - q;
        let r = second_sphere_point(&q, &d);
        assert!((r - Vector3::new(-0.6, 0.0, 0.8)).norm() < 1e-15);
    }
}
