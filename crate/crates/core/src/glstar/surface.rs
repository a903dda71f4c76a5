use nalgebra::{Vector3, Vector4};

use crate::projgeom::PLine;
use crate::{Error, Result};

/// Regulus choice on a hyperboloid of revolution about `Z`.
///
/// A line is *right* if, traversed with increasing `z`, its projection to the
/// `(x, y)`-plane turns counterclockwise about the origin; *left* otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    /// The sign `ε` of the `y`-coordinate of `σ(p_t)` for this regulus.
    pub fn epsilon(self) -> f64 {
        match self {
            Handedness::Right => -1.0,
            Handedness::Left => 1.0,
        }
    }

    pub fn flipped(self) -> Handedness {
        match self {
            Handedness::Right => Handedness::Left,
            Handedness::Left => Handedness::Right,
        }
    }
}

/// Result of [`handedness_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    Left,
    Right,
    /// The line meets the axis `Z`, possibly at infinity.
    MeetsAxis,
}

impl From<Handedness> for Chirality {
    fn from(h: Handedness) -> Chirality {
        match h {
            Handedness::Left => Chirality::Left,
            Handedness::Right => Chirality::Right,
        }
    }
}

/// `|p12|` threshold (unit Plücker vector) below which a line meets `Z`.
pub const MEETS_AXIS_TOL: f64 = 1e-10;

/// Sense of rotation of a line about `Z`.
///
/// For two affine points with `z1 < z2` the sign of `x1 y2 − x2 y1` decides;
/// in Plücker terms this is the sign of `p12 · p03`. Horizontal lines
/// missing `Z` (`p03 = 0`) are reported by the sign of `p12` alone.
pub fn handedness_of(line: &PLine) -> Chirality {
    let k = line.klein();
    let p03 = k[2];
    let p12 = k[5];
    if p12.abs() < MEETS_AXIS_TOL {
        return Chirality::MeetsAxis;
    }
    let s = if p03 == 0.0 { p12 } else { p12 * p03 };
    if s > 0.0 {
        Chirality::Right
    } else {
        Chirality::Left
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    /// The rotation axis `Z` itself.
    Axis,
    /// The horizontal lines through the origin.
    HorizontalStar,
    Cone,
    Hyperboloid,
}

/// A `Φ`-invariant surface `a²(x² + y²) − (z − b)² = c²` carrying one orbit
/// of star lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceEntry {
    pub kind: SurfaceKind,
    /// Asymptotic slope; `∞` for the axis, `0` for the horizontal star.
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Regulus, for hyperboloids only.
    pub handedness: Option<Handedness>,
}

/// `c` below this is treated as a cone.
pub const CONE_TOL: f64 = 1e-9;

impl SurfaceEntry {
    pub fn axis() -> SurfaceEntry {
        SurfaceEntry {
            kind: SurfaceKind::Axis,
            a: f64::INFINITY,
            b: 0.0,
            c: 0.0,
            handedness: None,
        }
    }

    pub fn horizontal_star() -> SurfaceEntry {
        SurfaceEntry {
            kind: SurfaceKind::HorizontalStar,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            handedness: None,
        }
    }

    /// Cone (`c = 0`) or hyperboloid with the given regulus.
    pub fn conic(a: f64, b: f64, c: f64, hand: Handedness) -> SurfaceEntry {
        if c.abs() < CONE_TOL {
            SurfaceEntry {
                kind: SurfaceKind::Cone,
                a,
                b,
                c: 0.0,
                handedness: None,
            }
        } else {
            SurfaceEntry {
                kind: SurfaceKind::Hyperboloid,
                a,
                b,
                c: c.abs(),
                handedness: Some(hand),
            }
        }
    }

    /// `a²(x² + y²) − (z − b)² − c²` for cones and hyperboloids; distance
    /// to `Z` or to the plane `z = 0` for the two degenerate kinds.
    pub fn residual(&self, p: &Vector3<f64>) -> f64 {
        match self.kind {
            SurfaceKind::Axis => p.x.hypot(p.y),
            SurfaceKind::HorizontalStar => p.z,
            _ => self.a * self.a * (p.x * p.x + p.y * p.y) - (p.z - self.b).powi(2) - self.c * self.c,
        }
    }

    /// Direction `(dx, dy, 1)` of the ruling through the meridian point
    /// `(x0, 0, z0)`, `x0 > 0`, lying on this surface.
    pub fn ruling_direction(&self, x0: f64, z0: f64) -> Vector3<f64> {
        let a2x = self.a * self.a * x0;
        let dx = (z0 - self.b) / a2x;
        let dy = match self.handedness {
            Some(h) => -h.epsilon() * self.c / a2x,
            None => 0.0,
        };
        Vector3::new(dx, dy, 1.0)
    }

    /// The surface of revolution swept by `line` under rotations about `Z`.
    pub fn from_line(line: &PLine) -> Result<SurfaceEntry> {
        let (u, v) = line.spanning_vectors();
        let dir4: Vector4<f64> = u * v[0] - v * u[0];
        if dir4.norm() < 1e-14 {
            return Err(Error::InvalidInput(
                "line at infinity has no surface of revolution".into(),
            ));
        }
        let base = if u[0].abs() >= v[0].abs() { u } else { v };
        let p = Vector3::new(base[1], base[2], base[3]) / base[0];
        let d = Vector3::new(dir4[1], dir4[2], dir4[3]);
        let d = d / d.norm();
        let dxy = d.x.hypot(d.y);
        let meets = handedness_of(line);
        if d.z.abs() < 1e-14 {
            if meets == Chirality::MeetsAxis && p.z.abs() < 1e-9 {
                return Ok(SurfaceEntry::horizontal_star());
            }
            return Err(Error::InvalidInput(
                "horizontal line is not in the star of the origin".into(),
            ));
        }
        if dxy < 1e-14 {
            if p.x.hypot(p.y) < 1e-9 {
                return Ok(SurfaceEntry::axis());
            }
            return Err(Error::InvalidInput(
                "vertical line off the axis sweeps a cylinder".into(),
            ));
        }
        // r²(z) = α (z − β)² + γ along the line
        let a = d.z.abs() / dxy;
        let b = p.z - d.z * (p.x * d.x + p.y * d.y) / (dxy * dxy);
        let c = d.z.abs() * (p.x * d.y - p.y * d.x).abs() / (dxy * dxy);
        let hand = match meets {
            Chirality::Left => Handedness::Left,
            _ => Handedness::Right,
        };
        let mut e = SurfaceEntry::conic(a, b, c, hand);
        if meets == Chirality::MeetsAxis {
            e.kind = SurfaceKind::Cone;
            e.c = 0.0;
            e.handedness = None;
        }
        Ok(e)
    }

    /// Whether `line` lies on this surface and, for hyperboloids, in the
    /// named regulus. `tol` bounds the algebraic residual at sampled points.
    pub fn carries(&self, line: &PLine, tol: f64) -> bool {
        let (u, v) = line.spanning_vectors();
        let samples: [f64; 5] = [-1.5, -0.5, 0.0, 0.5, 1.5];
        let on_surface = samples.iter().all(|&s| {
            let w = u * s.cos() + v * s.sin();
            if w[0].abs() < 1e-12 {
                return true;
            }
            let p = Vector3::new(w[1], w[2], w[3]) / w[0];
            if p.norm() > 10.0 {
                return true;
            }
            self.residual(&p).abs() < tol
        });
        let regulus_ok = match self.handedness {
            Some(h) => handedness_of(line) == Chirality::from(h),
            None => true,
        };
        on_surface && regulus_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::{join, x_axis, z_axis};
    use crate::HPoint4;

    #[test]
    fn axis_meets_itself() {
        assert_eq!(handedness_of(&z_axis()), Chirality::MeetsAxis);
    }

    #[test]
    fn mirror_flips_handedness() {
        let a = HPoint4::affine(1.0, 0.0, 0.0);
        let b = HPoint4::affine(1.0, 0.5, 1.0);
        let l = join(&a, &b).unwrap();
        let m = join(&a, &HPoint4::affine(1.0, -0.5, 1.0)).unwrap();
        assert_eq!(handedness_of(&l), Chirality::Right);
        assert_eq!(handedness_of(&m), Chirality::Left);
    }

    #[test]
    fn entries_from_degenerate_lines() {
        assert_eq!(SurfaceEntry::from_line(&z_axis()).unwrap().kind, SurfaceKind::Axis);
        assert_eq!(
            SurfaceEntry::from_line(&x_axis()).unwrap().kind,
            SurfaceKind::HorizontalStar
        );
    }

    #[test]
    fn hyperboloid_entry_from_ruling() {
        // x² + y² − z² = 1/2 through (√3/2, 0, 1/2), right regulus
        let e = SurfaceEntry::conic(1.0, 0.0, 0.5f64.sqrt(), Handedness::Right);
        let x0 = 0.75f64.sqrt();
        let d = e.ruling_direction(x0, 0.5);
        let p = Vector3::new(x0, 0.0, 0.5);
        let l = join(&HPoint4::from_affine(&p), &HPoint4::from_affine(&(p + d))).unwrap();
        let back = SurfaceEntry::from_line(&l).unwrap();
        assert_eq!(back.kind, SurfaceKind::Hyperboloid);
        assert_eq!(back.handedness, Some(Handedness::Right));
        assert!((back.a - 1.0).abs() < 1e-12);
        assert!(back.b.abs() < 1e-12);
        assert!((back.c - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(e.carries(&l, 1e-12));
    }
}
