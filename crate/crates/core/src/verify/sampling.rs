use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed used by every check unless overridden.
pub const DEFAULT_SEED: u64 = 0;

/// The deterministic generator behind all random sampling.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` nearly uniform points of the unit sphere on a Fibonacci spiral,
/// including both poles for `n ≥ 2`.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = if n == 1 {
                0.0
            } else {
                1.0 - 2.0 * i as f64 / (n - 1) as f64
            };
            sphere_point(z, golden * i as f64)
        })
        .collect()
}

/// `(√(1−z²) cos θ, √(1−z²) sin θ, z)`.
pub fn sphere_point(z: f64, theta: f64) -> Vector3<f64> {
    let z = z.clamp(-1.0, 1.0);
    let r = ((1.0 - z) * (1.0 + z)).max(0.0).sqrt();
    let (s, c) = theta.sin_cos();
    Vector3::new(r * c, r * s, z)
}

/// A uniformly distributed point of the unit sphere.
pub fn random_unit<R: Rng>(rng: &mut R) -> Vector3<f64> {
    sphere_point(rng.gen_range(-1.0..=1.0), rng.gen_range(0.0..TAU))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_points_are_unit_and_spread() {
        let pts = fibonacci_sphere(500);
        assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
        assert_eq!(pts[0], Vector3::new(0.0, 0.0, 1.0));
        let mean: Vector3<f64> = pts.iter().sum::<Vector3<f64>>() / 500.0;
        assert!(mean.norm() < 0.01);
    }

    #[test]
    fn seeded_rng_is_reproducible() {
        let a = random_unit(&mut rng(7));
        let b = random_unit(&mut rng(7));
        assert_eq!(a, b);
    }
}
