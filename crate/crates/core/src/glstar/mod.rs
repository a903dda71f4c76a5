//! The gl-star data model.
//!
//! A [`GlStar`] is given by its involution `σ` of the unit sphere. Rotational
//! stars (invariant under rotations about `Z`) are described by a
//! [`Meridian`]: the images `σ(p_t)` of the meridian points
//! `p_t = (√(1−t²), 0, t)`, `t ∈ [0, 1]`. The rest of `σ` follows by
//! rotation equivariance and the involution property.

mod mesh;
mod surface;

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::projgeom::{line_sphere_intersect, z_axis, HPoint4, PLine, QuadricForm};
use crate::{Error, Result};

pub use mesh::{surface_mesh, TriangleMesh, DEFAULT_Z_RANGE};
pub use surface::{handedness_of, Chirality, Handedness, SurfaceEntry, SurfaceKind, CONE_TOL, MEETS_AXIS_TOL};

/// Allowed deviation of `|q|` from 1 for inputs to `σ`.
const SPHERE_TOL: f64 = 1e-9;

/// The meridian point `p_t = (√(1−t²), 0, t)`.
pub fn meridian_point(t: f64) -> Vector3<f64> {
    let t = t.clamp(-1.0, 1.0);
    Vector3::new(((1.0 - t) * (1.0 + t)).max(0.0).sqrt(), 0.0, t)
}

/// Rotation about `Z` by `theta`.
pub fn rotation_z(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Description of a rotational star by its meridian.
pub trait Meridian: Send + Sync {
    /// `σ(p_t)` for `t ∈ [0, 1]`; a point of the closed lower hemisphere.
    fn image(&self, t: f64) -> Result<Vector3<f64>>;

    /// The parameter `t` with `z(σ(p_t)) = z`, for `z ∈ [−1, 0]`.
    ///
    /// The default bisects the decreasing map `t ↦ z(σ(p_t))`.
    fn parameter_for_height(&self, z: f64) -> Result<f64> {
        bisect_decreasing(|t| self.image(t).map(|q| q.z), z)
    }

    /// The surface carrying `L_t` as known to the construction, if any.
    fn entry(&self, _t: f64) -> Option<Result<SurfaceEntry>> {
        None
    }
}

/// Finds `t ∈ [0,1]` with `h(t) = target` for a decreasing `h` with
/// `h(0) = 0`, `h(1) = −1`.
pub(crate) fn bisect_decreasing<F>(h: F, target: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if target >= 0.0 {
        return Ok(0.0);
    }
    if target <= -1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

type MapFn = dyn Fn(&Vector3<f64>) -> Result<Vector3<f64>> + Send + Sync;

#[derive(Clone)]
enum Sigma {
    Map(Arc<MapFn>),
    Rotational(Arc<dyn Meridian>),
}

/// A gl star of the unit sphere, given by its involution `σ`.
#[derive(Clone)]
pub struct GlStar {
    sigma: Sigma,
    label: String,
    rotational: bool,
}

impl fmt::Debug for GlStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GlStar")
            .field("label", &self.label)
            .field("rotational", &self.rotational)
            .finish()
    }
}

impl GlStar {
    /// A star from an arbitrary map of the sphere. `rotational` declares that
    /// the map commutes with rotations about `Z`; it is not checked here.
    pub fn from_map<F>(label: impl Into<String>, rotational: bool, sigma: F) -> GlStar
    where
        F: Fn(&Vector3<f64>) -> Result<Vector3<f64>> + Send + Sync + 'static,
    {
        GlStar {
            sigma: Sigma::Map(Arc::new(sigma)),
            label: label.into(),
            rotational,
        }
    }

    /// A rotational star completed from its meridian.
    pub fn from_meridian<M: Meridian + 'static>(label: impl Into<String>, meridian: M) -> GlStar {
        GlStar {
            sigma: Sigma::Rotational(Arc::new(meridian)),
            label: label.into(),
            rotational: true,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> GlStar {
        self.label = label.into();
        self
    }

    /// Whether `σ` is known to commute with rotations about `Z`.
    pub fn is_rotational(&self) -> bool {
        self.rotational
    }

    /// The rotational profile, present for stars built from a meridian.
    pub fn profile(&self) -> Option<RotationalProfile<'_>> {
        match &self.sigma {
            Sigma::Rotational(m) => Some(RotationalProfile {
                star: self,
                meridian: m.as_ref(),
            }),
            Sigma::Map(_) => None,
        }
    }

    /// `σ(q)` for a unit vector `q`.
    pub fn sigma(&self, q: &Vector3<f64>) -> Result<Vector3<f64>> {
        if (q.norm() - 1.0).abs() > SPHERE_TOL {
            return Err(Error::InvalidInput(format!("{q:?} is not on the unit sphere")));
        }
        let r = match &self.sigma {
            Sigma::Map(f) => f(q)?,
            Sigma::Rotational(m) => rotational_sigma(m.as_ref(), q)?,
        };
        if !r.iter().all(|c| c.is_finite()) {
            return Err(Error::EvalError(format!("σ({q:?}) is not finite")));
        }
        Ok(r)
    }

    /// The star line `q ∨ σ(q)` through a sphere point.
    pub fn line_through(&self, q: &Vector3<f64>) -> Result<PLine> {
        let s = self.sigma(q)?;
        PLine::join(&HPoint4::from_affine(q), &HPoint4::from_affine(&s))
            .map_err(|_| Error::EvalError(format!("σ has a fixed point near {q:?}")))
    }

    /// `L_t = p_t ∨ σ(p_t)`; `L_1` is the axis `Z`.
    pub fn meridian_line(&self, t: f64) -> Result<PLine> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!("meridian parameter {t} outside [0,1]")));
        }
        if t == 1.0 {
            return Ok(z_axis());
        }
        self.line_through(&meridian_point(t))
    }
}

fn rotational_sigma(m: &dyn Meridian, q: &Vector3<f64>) -> Result<Vector3<f64>> {
    let angle = if q.x == 0.0 && q.y == 0.0 { 0.0 } else { q.y.atan2(q.x) };
    if q.z >= 0.0 {
        let img = m.image(q.z.min(1.0))?;
        Ok(rotation_z(angle) * img)
    } else {
        let t = m.parameter_for_height(q.z.max(-1.0))?;
        let img = m.image(t)?;
        let img_angle = if img.x == 0.0 && img.y == 0.0 {
            0.0
        } else {
            img.y.atan2(img.x)
        };
        Ok(rotation_z(angle - img_angle) * meridian_point(t))
    }
}

/// Free-function form of [`GlStar::sigma`].
pub fn sigma(star: &GlStar, q: &Vector3<f64>) -> Result<Vector3<f64>> {
    star.sigma(q)
}

/// Free-function form of [`GlStar::line_through`].
pub fn line_through(star: &GlStar, q: &Vector3<f64>) -> Result<PLine> {
    star.line_through(q)
}

/// The other intersection of a 2-secant with the unit sphere.
pub fn second_intersection(line: &PLine, q: &Vector3<f64>) -> Result<Vector3<f64>> {
    let pts = line_sphere_intersect(line, &QuadricForm::sphere(), 1e-12);
    if pts.len() != 2 {
        return Err(Error::NotTwoSecant);
    }
    let qh = HPoint4::from_affine(q);
    let other = if pts[0].proj_distance(&qh) > pts[1].proj_distance(&qh) {
        pts[0]
    } else {
        pts[1]
    };
    other
        .to_affine()
        .ok_or_else(|| Error::EvalError("sphere point at infinity".into()))
}

/// Cones and hyperboloids carrying the orbits of a rotational star.
#[derive(Clone, Copy)]
pub struct RotationalProfile<'a> {
    star: &'a GlStar,
    meridian: &'a dyn Meridian,
}

impl RotationalProfile<'_> {
    /// Surface through `L_t`: the axis at `t = 1`, the horizontal star at
    /// `t = 0`, otherwise the construction's own entry or the surface swept
    /// by `L_t`.
    pub fn entry_at(&self, t: f64) -> Result<SurfaceEntry> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!("profile parameter {t} outside [0,1]")));
        }
        if t == 1.0 {
            return Ok(SurfaceEntry::axis());
        }
        if t == 0.0 {
            return Ok(SurfaceEntry::horizontal_star());
        }
        match self.meridian.entry(t) {
            Some(e) => e,
            None => SurfaceEntry::from_line(&self.star.meridian_line(t)?),
        }
    }

    pub fn meridian_line(&self, t: f64) -> Result<PLine> {
        self.star.meridian_line(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Antipodal;

    impl Meridian for Antipodal {
        fn image(&self, t: f64) -> Result<Vector3<f64>> {
            Ok(-meridian_point(t))
        }
    }

    #[test]
    fn antipodal_meridian_completes_to_minus_identity() {
        let star = GlStar::from_meridian("antipodal", Antipodal);
        for q in [
            Vector3::new(0.6, 0.0, 0.8),
            Vector3::new(0.0, 0.6, -0.8),
            Vector3::new(-0.36, 0.48, -0.8),
            Vector3::new(0.0, 0.0, -1.0),
        ] {
            let s = star.sigma(&q).unwrap();
            assert!((s + q).norm() < 1e-12, "{q:?} -> {s:?}");
        }
    }

    #[test]
    fn meridian_line_endpoints() {
        let star = GlStar::from_meridian("antipodal", Antipodal);
        assert!(star.meridian_line(1.0).unwrap().proj_eq(&z_axis(), 1e-15));
        assert!(star
            .meridian_line(0.0)
            .unwrap()
            .proj_eq(&crate::projgeom::x_axis(), 1e-15));
        assert!(star.meridian_line(1.5).is_err());
    }

    #[test]
    fn sigma_rejects_points_off_the_sphere() {
        let star = GlStar::from_meridian("antipodal", Antipodal);
        assert!(star.sigma(&Vector3::new(0.5, 0.0, 0.0)).is_err());
    }

    #[test]
    fn second_intersection_examples() {
        let n = Vector3::new(0.0, 0.0, 1.0);
        assert!((second_intersection(&z_axis(), &n).unwrap() + n).norm() < 1e-15);
        let x = Vector3::new(1.0, 0.0, 0.0);
        assert!((second_intersection(&crate::projgeom::x_axis(), &x).unwrap() + x).norm() < 1e-15);
        let outside = PLine::join(&HPoint4::affine(0.0, 0.0, 2.0), &HPoint4::affine(1.0, 0.0, 2.0)).unwrap();
        assert_eq!(second_intersection(&outside, &n), Err(Error::NotTwoSecant));
    }

    #[test]
    fn bisection_inverts_a_decreasing_map() {
        let t = bisect_decreasing(|t| Ok(-t * t), -0.25).unwrap();
        assert!((t - 0.5).abs() < 1e-15);
    }
}
