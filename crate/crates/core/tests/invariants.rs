//! Property tests for the projective primitives and the gl-star axioms.

use glstar::constructions::{builtin_example, clifford};
use glstar::parallelism::sphere_polar;
use glstar::projgeom::klein_form_normalized;
use glstar::{HPoint4, PLine};
use nalgebra::{Vector3, Vector4};
use proptest::prelude::*;

fn point4() -> impl Strategy<Value = Vector4<f64>> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("well away from zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.05)
        .prop_map(Vector4::from)
}

fn sphere_point() -> impl Strategy<Value = Vector3<f64>> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("well away from zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.05)
        .prop_map(|a| Vector3::from(a).normalize())
}

fn line_through(a: Vector4<f64>, b: Vector4<f64>) -> Option<PLine> {
    PLine::join(&HPoint4::new(a).ok()?, &HPoint4::new(b).ok()?).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn join_contains_its_points_and_satisfies_the_relation(a in point4(), b in point4()) {
        let Some(l) = line_through(a, b) else { return Ok(()) };
        prop_assume!((a.normalize() - b.normalize()).norm() > 1e-2 && (a.normalize() + b.normalize()).norm() > 1e-2);
        prop_assert!(l.relation_residual() < 1e-12);
        prop_assert!(l.contains(&HPoint4::new(a).unwrap(), 1e-10));
        prop_assert!(l.contains(&HPoint4::new(b).unwrap(), 1e-10));
    }

    #[test]
    fn concurrent_lines_are_klein_orthogonal(p in point4(), a in point4(), b in point4()) {
        let (Some(l1), Some(l2)) = (line_through(p, a), line_through(p, b)) else { return Ok(()) };
        prop_assume!(l1.proj_sine(&l2) > 1e-2);
        prop_assert!(klein_form_normalized(&l1.klein(), &l2.klein()).abs() < 1e-10);
        prop_assert!(l1.meets(&l2, 1e-9));
    }

    #[test]
    fn sphere_polarity_is_an_involution(a in point4(), b in point4()) {
        let Some(l) = line_through(a, b) else { return Ok(()) };
        prop_assume!(a.normalize().dot(&b.normalize()).abs() < 0.99);
        prop_assert!(sphere_polar(&sphere_polar(&l)).proj_eq(&l, 1e-9));
    }

    #[test]
    fn builtin_star_is_a_fixed_point_free_involution(q in sphere_point()) {
        let star = builtin_example();
        let s = star.sigma(&q).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-9);
        prop_assert!((star.sigma(&s).unwrap() - q).norm() < 1e-9);
        prop_assert!((s - q).norm() > 1e-3);
        let l = star.line_through(&q).unwrap();
        prop_assert!(l.contains(&HPoint4::from_affine(&q), 1e-9));
        prop_assert!(l.contains(&HPoint4::from_affine(&s), 1e-9));
    }

    #[test]
    fn clifford_star_lines_pass_through_the_center(q in sphere_point()) {
        let c = Vector3::new(0.3, -0.2, 0.1);
        let star = clifford(c).unwrap();
        let l = star.line_through(&q).unwrap();
        prop_assert!(l.contains(&HPoint4::from_affine(&c), 1e-9));
    }
}
