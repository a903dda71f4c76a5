use crate::glstar::Handedness;
use crate::verify::log_grid;
use crate::{Error, Result};

/// Sampling parameters for the hypothesis checks run by the builders.
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    /// Uniform grid size on `[0, 1]` in the meridian parameter `t`.
    pub t_points: usize,
    /// Log-spaced grid size in the slope `a`.
    pub a_points: usize,
    pub a_range: (f64, f64),
    /// Parameters approaching 0 at which limit conditions are checked.
    pub limit_points: [f64; 3],
    /// Allowed deviation from the limit value at the smallest parameter,
    /// relative for nonzero limits and absolute for zero limits.
    pub limit_band: f64,
    /// Grid size per axis for `(x, z)` point conditions.
    pub xz_points: usize,
}

impl Default for Validation {
    fn default() -> Self {
        Validation {
            t_points: 1024,
            a_points: 512,
            a_range: (1e-3, 1e3),
            limit_points: [1e-2, 1e-3, 1e-4],
            limit_band: 0.05,
            xz_points: 20,
        }
    }
}

impl Validation {
    /// `t_points` uniform samples of `[0, 1]`, endpoints included.
    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.t_points.max(2);
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    pub fn a_grid(&self) -> Vec<f64> {
        log_grid(self.a_range.0, self.a_range.1, self.a_points)
    }

    /// Sample points `(x, z)` with `x > 0`, `z ≠ 0` and `x² + z² ≥ 1`.
    pub fn exterior_xz_grid(&self) -> Vec<(f64, f64)> {
        let n = self.xz_points.max(2);
        let mut pts = Vec::new();
        for i in 0..n {
            let x = 0.02 + 2.98 * i as f64 / (n - 1) as f64;
            for j in 0..n {
                // odd count of offsets keeps z = 0 out of the grid
                let z = -3.0 + 6.0 * (j as f64 + 0.5) / n as f64;
                if x * x + z * z >= 1.0 {
                    pts.push((x, z));
                }
            }
        }
        pts
    }

    /// Checks that `value(p)` approaches `limit` as `p → 0`: within the band
    /// at the smallest point and no farther away than at the largest.
    pub(crate) fn check_limit<F>(&self, name: &str, limit: f64, value: F) -> Result<()>
    where
        F: Fn(f64) -> f64,
    {
        let dev = |p: f64| {
            let v = value(p);
            if limit == 0.0 {
                v.abs()
            } else {
                ((v - limit) / limit).abs()
            }
        };
        let [p0, _, p2] = self.limit_points;
        let (d0, d2) = (dev(p0), dev(p2));
        if !(d2 <= self.limit_band) || !(d2 <= d0 + 1e-12) {
            return Err(Error::condition(name, &[p2, value(p2)]));
        }
        Ok(())
    }
}

/// Handedness as a function of the meridian parameter: `initial` on
/// `[0, s₁[`, flipped at every switch point `s₁ < s₂ < …`.
#[derive(Debug, Clone, PartialEq)]
pub struct HandSchedule {
    initial: Handedness,
    switches: Vec<f64>,
}

impl Default for HandSchedule {
    fn default() -> Self {
        HandSchedule::constant(Handedness::Right)
    }
}

impl HandSchedule {
    pub fn constant(hand: Handedness) -> HandSchedule {
        HandSchedule {
            initial: hand,
            switches: Vec::new(),
        }
    }

    /// Switch points must be strictly increasing in `]0, 1[`.
    pub fn with_switches(initial: Handedness, switches: Vec<f64>) -> Result<HandSchedule> {
        if switches.iter().any(|s| !(*s > 0.0 && *s < 1.0)) || switches.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!(
                "handedness switch points {switches:?} must increase strictly inside ]0,1["
            )));
        }
        Ok(HandSchedule { initial, switches })
    }

    pub fn switches(&self) -> &[f64] {
        &self.switches
    }

    pub fn at(&self, t: f64) -> Handedness {
        let k = self.switches.iter().filter(|s| **s <= t).count();
        if k % 2 == 0 {
            self.initial
        } else {
            self.initial.flipped()
        }
    }

    /// Requires `c(s) ≈ 0` at every switch point: reguli may change only
    /// across a cone.
    pub(crate) fn validate_at_cones<F>(&self, c: F) -> Result<()>
    where
        F: Fn(f64) -> f64,
    {
        for &s in &self.switches {
            let cs = c(s);
            if !(cs.abs() <= CONE_SWITCH_TOL) {
                return Err(Error::condition("handedness switch at a cone", &[s, cs]));
            }
        }
        Ok(())
    }
}

const CONE_SWITCH_TOL: f64 = 1e-9;

/// Scans a grid for the first point where `ok` fails.
pub(crate) fn first_failure<F>(grid: &[f64], ok: F) -> Option<f64>
where
    F: Fn(f64) -> bool,
{
    grid.iter().copied().find(|&x| !ok(x))
}

/// `1 − t²` without cancellation near `|t| = 1`.
pub(crate) fn one_minus_sq(t: f64) -> f64 {
    (1.0 - t) * (1.0 + t)
}

/// `√(p − q)` for nonnegative `p, q`, treating a difference below rounding
/// noise of the operands as zero.
pub(crate) fn sqrt_difference(p: f64, q: f64) -> f64 {
    let d = p - q;
    if d <= RELATIVE_ZERO * p.abs().max(q.abs()) {
        0.0
    } else {
        d.sqrt()
    }
}

const RELATIVE_ZERO: f64 = 1e-14;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_flips_at_switches() {
        let h = HandSchedule::with_switches(Handedness::Right, vec![0.3, 0.6]).unwrap();
        assert_eq!(h.at(0.1), Handedness::Right);
        assert_eq!(h.at(0.3), Handedness::Left);
        assert_eq!(h.at(0.7), Handedness::Right);
        assert!(HandSchedule::with_switches(Handedness::Right, vec![0.6, 0.3]).is_err());
    }

    #[test]
    fn exterior_grid_avoids_equator_and_disk() {
        let g = Validation::default().exterior_xz_grid();
        assert!(!g.is_empty());
        assert!(g.iter().all(|(x, z)| *x > 0.0 && *z != 0.0 && x * x + z * z >= 1.0));
    }

    #[test]
    fn limit_check_uses_band_and_trend() {
        let v = Validation::default();
        assert!(v.check_limit("l", 1.0, |t| 1.0 - t).is_ok());
        assert!(v.check_limit("l", 1.0, |t| 0.25 + t).is_err());
        assert!(v.check_limit("l", 0.0, |t| t).is_ok());
    }

    #[test]
    fn sqrt_difference_clamps_rounding_noise() {
        let t = 0.3f64;
        let a2 = t * t / one_minus_sq(t);
        assert_eq!(sqrt_difference(a2 * one_minus_sq(t), t * t), 0.0);
        assert!((sqrt_difference(1.0, 0.75) - 0.5).abs() < 1e-16);
    }
}
