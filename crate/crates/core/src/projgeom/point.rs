use nalgebra::{SVector, Vector3, Vector4};

use crate::{Error, Result};

/// A point of real projective space given by homogeneous coordinates.
///
/// The coordinate vector is never zero. Two `HPoint`s may represent the same
/// projective point with different scalings; use [`HPoint::proj_eq`] to
/// compare them and [`HPoint::normalized`] to get the canonical
/// representative (largest entry of magnitude 1, first nonzero entry
/// positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint<const N: usize> {
    coords: SVector<f64, N>,
}

/// A point of projective 3-space, `(w0, w1, w2, w3)` with affine part
/// `(w1, w2, w3) / w0`.
pub type HPoint4 = HPoint<4>;

/// A point of projective 5-space (the ambient space of the Klein quadric).
pub type HPoint6 = HPoint<6>;

impl<const N: usize> HPoint<N> {
    pub fn new(coords: SVector<f64, N>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        if coords.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidInput("zero vector is not a projective point".into()));
        }
        Ok(HPoint { coords })
    }

    pub fn from_array(a: [f64; N]) -> Result<Self> {
        Self::new(SVector::from(a))
    }

    pub fn coords(&self) -> &SVector<f64, N> {
        &self.coords
    }

    /// Canonical representative: scaled so the largest-magnitude entry has
    /// absolute value 1, with the first nonzero entry positive.
    pub fn normalized(&self) -> Self {
        let m = self.coords.amax();
        let mut v = self.coords / m;
        if let Some(first) = v.iter().find(|c| **c != 0.0) {
            if *first < 0.0 {
                v = -v;
            }
        }
        // -0.0 would make printed output depend on the sign of the input
        v.apply(|c| {
            if *c == 0.0 {
                *c = 0.0
            }
        });
        HPoint { coords: v }
    }

    /// `1 − |cos ∠(self, other)|`; zero exactly for projectively equal points.
    pub fn proj_distance(&self, other: &Self) -> f64 {
        proj_distance(&self.coords, &other.coords)
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
        self.proj_distance(other) < tol
    }

    /// Sine of the angle between the two coordinate vectors.
    pub fn proj_sine(&self, other: &Self) -> f64 {
        proj_sine(self.coords.as_slice(), other.coords.as_slice())
    }
}

impl HPoint4 {
    /// The affine point `(x, y, z)`, i.e. `(1, x, y, z)`.
    pub fn affine(x: f64, y: f64, z: f64) -> Self {
        HPoint {
            coords: Vector4::new(1.0, x, y, z),
        }
    }

    pub fn from_affine(p: &Vector3<f64>) -> Self {
        Self::affine(p.x, p.y, p.z)
    }

    /// The point at infinity in direction `d`.
    pub fn at_infinity(d: &Vector3<f64>) -> Result<Self> {
        Self::new(Vector4::new(0.0, d.x, d.y, d.z))
    }

    /// Affine coordinates, or `None` for a point at infinity.
    pub fn to_affine(&self) -> Option<Vector3<f64>> {
        let w0 = self.coords[0];
        let scale = self.coords.amax();
        if w0.abs() <= 1e-14 * scale {
            None
        } else {
            Some(Vector3::new(self.coords[1], self.coords[2], self.coords[3]) / w0)
        }
    }
}

/// Free-function form of [`HPoint::normalized`] for raw coordinate vectors.
pub fn normalize<const N: usize>(coords: SVector<f64, N>) -> Result<HPoint<N>> {
    HPoint::new(coords).map(|p| p.normalized())
}

pub(crate) fn proj_distance<const N: usize>(a: &SVector<f64, N>, b: &SVector<f64, N>) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    (1.0 - (a.dot(b) / (na * nb)).abs()).max(0.0)
}

/// Sine of the angle between two vectors, computed from the Gram determinant
/// so that it stays accurate for nearly parallel inputs.
pub(crate) fn proj_sine(a: &[f64], b: &[f64]) -> f64 {
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    // |a ∧ b|² = Σ_{i<j} (a_i b_j − a_j b_i)²
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let m = a[i] / na * b[j] / nb - a[j] / na * b[i] / nb;
            s += m * m;
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_scales_to_unit_max() {
        let p = normalize(Vector4::new(0.0, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!(p.coords(), &Vector4::new(0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn normalize_flips_leading_sign() {
        let p = normalize(Vector4::new(-1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(p.coords(), &Vector4::new(1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn normalize_keeps_positive_leading_entry() {
        // largest magnitude is |-1|; first nonzero entry 0.5 is already positive
        let p = normalize(Vector4::new(0.5, -1.0, 0.0, 0.0)).unwrap();
        assert_eq!(p.coords(), &Vector4::new(0.5, -1.0, 0.0, 0.0));
        let q = normalize(Vector4::new(-0.5, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(q.coords(), &Vector4::new(0.5, -1.0, 0.0, 0.0));
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(matches!(
            normalize(Vector4::<f64>::zeros()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn affine_round_trip() {
        let p = HPoint4::affine(1.0, -2.0, 0.5);
        assert_eq!(p.to_affine().unwrap(), Vector3::new(1.0, -2.0, 0.5));
        assert!(HPoint4::at_infinity(&Vector3::z()).unwrap().to_affine().is_none());
    }
}
