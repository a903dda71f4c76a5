use nalgebra::{Vector2, Vector3};

use crate::glstar::GlStar;
use crate::projgeom::second_sphere_point;
use crate::{Error, Result};

/// The ordinary line star of an interior point `center`: `σ(q)` is the second
/// intersection of `q ∨ center` with the sphere.
pub fn clifford(center: Vector3<f64>) -> Result<GlStar> {
    if !center.iter().all(|c| c.is_finite()) || center.norm() >= 1.0 {
        return Err(Error::InvalidCenter([center.x, center.y, center.z]));
    }
    let rotational = center.x == 0.0 && center.y == 0.0;
    if center == Vector3::zeros() {
        return Ok(GlStar::from_map("clifford", true, |q| Ok(-q)));
    }
    Ok(GlStar::from_map("clifford", rotational, move |q| {
        Ok(second_sphere_point(q, &(center - q)))
    }))
}

/// `ω(x, 0, z) = (z, x²)`, mapping hyperbolas of the meridian plane to
/// parabolas.
pub fn omega(x: f64, z: f64) -> Vector2<f64> {
    Vector2::new(z, x * x)
}

/// The branch `x ≥ 0` of `ω⁻¹`: `(u, v) ↦ (√v, 0, u)`.
pub fn omega_inv(u: f64, v: f64) -> Result<Vector3<f64>> {
    if !(v >= 0.0) {
        return Err(Error::InvalidInput(format!("omega_inv needs v ≥ 0, got {v}")));
    }
    Ok(Vector3::new(v.sqrt(), 0.0, u))
}
