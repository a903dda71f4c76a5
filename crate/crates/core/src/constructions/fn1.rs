use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// A real function of one variable, as used by the star builders.
pub trait RealFn: Send + Sync {
    fn eval(&self, x: f64) -> f64;

    /// `1 − eval(x)`, overridden where it can be computed without
    /// cancellation.
    fn complement(&self, x: f64) -> f64 {
        1.0 - self.eval(x)
    }

    /// Inverse of an increasing function, when known in closed form.
    fn inverse(&self, _y: f64) -> Option<f64> {
        None
    }
}

/// Wraps a closure as a [`RealFn`].
pub struct FnOf<F>(pub F);

impl<F> RealFn for FnOf<F>
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

impl<T: RealFn + ?Sized> RealFn for Arc<T> {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }

    fn complement(&self, x: f64) -> f64 {
        (**self).complement(x)
    }

    fn inverse(&self, y: f64) -> Option<f64> {
        (**self).inverse(y)
    }
}

/// Shared handle to a closure-backed [`RealFn`].
pub fn real_fn<F>(f: F) -> Arc<dyn RealFn>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(FnOf(f))
}

/// Piecewise-linear interpolation of a monotone sample table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    /// Knots must be strictly increasing and values monotone (either
    /// direction); outside the knot range the end values are held.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Table> {
        if knots.len() != values.len() || knots.len() < 2 {
            return Err(Error::InvalidInput(
                "table needs at least two (knot, value) pairs".into(),
            ));
        }
        if knots.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("table entries must be finite".into()));
        }
        if let Some(i) = knots.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::condition(
                "table knots strictly increasing",
                &[knots[i], knots[i + 1]],
            ));
        }
        let up = values.windows(2).all(|w| w[1] >= w[0]);
        let down = values.windows(2).all(|w| w[1] <= w[0]);
        if !up && !down {
            let i = values
                .windows(3)
                .position(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0)
                .unwrap_or(0);
            return Err(Error::condition(
                "table values monotone",
                &[knots[i + 1], values[i + 1]],
            ));
        }
        Ok(Table { knots, values })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0] {
            return self.values[0];
        }
        if x >= k[k.len() - 1] {
            return self.values[k.len() - 1];
        }
        let i = k.partition_point(|&kk| kk <= x) - 1;
        let w = (x - k[i]) / (k[i + 1] - k[i]);
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }

    fn inverse(&self, y: f64) -> Option<f64> {
        let v = &self.values;
        if !v.windows(2).all(|w| w[1] > w[0]) || y < v[0] || y > v[v.len() - 1] {
            return None;
        }
        let i = (v.partition_point(|&vv| vv <= y)).clamp(1, v.len() - 1) - 1;
        let w = (y - v[i]) / (v[i + 1] - v[i]);
        Some(self.knots[i] * (1.0 - w) + self.knots[i + 1] * w)
    }
}

/// The named scalar function families used by the constructions.
#[derive(Debug, Clone, PartialEq)]
pub enum Fn1 {
    /// `φ_r(a) = a(a + r) / (a² + ra + r)`, an increasing bijection
    /// `[0, ∞[ → [0, 1[`.
    PhiR {
        r: f64,
    },
    Identity,
    /// `t ↦ t / (1 − t)`.
    Moebius01,
    /// `t ↦ t^p`.
    Power {
        p: f64,
    },
    /// `t ↦ a t + b`.
    Affine {
        a: f64,
        b: f64,
    },
    /// `t ↦ k t / √(1 − t²)`; `k = 1` gives the cone slopes of the ordinary
    /// star at the origin.
    Slope {
        k: f64,
    },
    /// `t ↦ −√(1 − t²)`.
    LowerCircle,
    Constant {
        value: f64,
    },
    Table(Table),
}

impl Fn1 {
    pub fn phi(r: f64) -> Fn1 {
        Fn1::PhiR { r }
    }

    pub fn table(knots: Vec<f64>, values: Vec<f64>) -> Result<Fn1> {
        Table::new(knots, values).map(Fn1::Table)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Fn1::PhiR { r } => x * (x + r) / (x * x + r * x + r),
            Fn1::Identity => x,
            Fn1::Moebius01 => x / (1.0 - x),
            Fn1::Power { p } => x.powf(*p),
            Fn1::Affine { a, b } => a * x + b,
            Fn1::Slope { k } => k * x / ((1.0 - x) * (1.0 + x)).sqrt(),
            Fn1::LowerCircle => -((1.0 - x) * (1.0 + x)).max(0.0).sqrt(),
            Fn1::Constant { value } => *value,
            Fn1::Table(t) => t.eval(x),
        }
    }

    pub fn complement(&self, x: f64) -> f64 {
        match self {
            Fn1::PhiR { r } => r / (x * x + r * x + r),
            _ => 1.0 - self.eval(x),
        }
    }

    /// Closed-form inverse for increasing kinds.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        match self {
            Fn1::PhiR { r } => {
                if !(0.0..1.0).contains(&y) {
                    return None;
                }
                // a² + ra + r(1 − 1/(1−y)) = 0, positive root
                let c = r * y / (1.0 - y);
                let disc = r * r + 4.0 * c;
                Some(2.0 * c / (r + disc.sqrt()))
            }
            Fn1::Identity => Some(y),
            Fn1::Moebius01 => (y >= 0.0).then(|| y / (1.0 + y)),
            Fn1::Power { p } if *p > 0.0 && y >= 0.0 => Some(y.powf(1.0 / p)),
            Fn1::Affine { a, b } if *a > 0.0 => Some((y - b) / a),
            Fn1::Slope { k } if *k > 0.0 => Some(y / (k * k + y * y).sqrt()),
            Fn1::Table(t) => t.inverse(y),
            _ => None,
        }
    }

    /// Inverse of an increasing function on `[lo, hi]`, closed form when
    /// available and bisection otherwise.
    pub fn inverse_on(&self, y: f64, lo: f64, hi: f64) -> f64 {
        inverse_increasing(self, y, lo, hi)
    }
}

/// Solves `f(x) = y` for an increasing `f` on `[lo, hi]`, using the closed
/// form inverse when `f` has one and bisection otherwise.
pub fn inverse_increasing(f: &(impl RealFn + ?Sized), y: f64, lo: f64, hi: f64) -> f64 {
    if let Some(x) = f.inverse(y) {
        return x.clamp(lo, hi);
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f.eval(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl RealFn for Fn1 {
    fn eval(&self, x: f64) -> f64 {
        Fn1::eval(self, x)
    }

    fn complement(&self, x: f64) -> f64 {
        Fn1::complement(self, x)
    }

    fn inverse(&self, y: f64) -> Option<f64> {
        Fn1::inverse(self, y)
    }
}

impl fmt::Display for Fn1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fn1::PhiR { r } => write!(f, "phi_{r}"),
            Fn1::Identity => write!(f, "id"),
            Fn1::Moebius01 => write!(f, "t/(1-t)"),
            Fn1::Power { p } => write!(f, "t^{p}"),
            Fn1::Affine { a, b } => write!(f, "{a}t+{b}"),
            Fn1::Slope { k } => write!(f, "{k}t/sqrt(1-t^2)"),
            Fn1::LowerCircle => write!(f, "-sqrt(1-t^2)"),
            Fn1::Constant { value } => write!(f, "{value}"),
            Fn1::Table(t) => write!(f, "table[{}]", t.knots.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert!((Fn1::phi(1.5).eval(1.0) - 0.625).abs() < 1e-15);
        assert!((Fn1::phi(2.0).eval(1.0) - 0.6).abs() < 1e-15);
        assert!((Fn1::phi(2.0).complement(1.0) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn phi_inverse_matches_quadratic() {
        // t(a) = 1/2 for phi_{3/2} solves a² + 1.5a − 1.5 = 0
        let a = Fn1::phi(1.5).inverse(0.5).unwrap();
        assert!((a - (-0.75 + 33f64.sqrt() / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn inverses_round_trip() {
        let fs = [
            Fn1::phi(0.7),
            Fn1::Identity,
            Fn1::Moebius01,
            Fn1::Power { p: 2.0 },
            Fn1::Affine { a: 2.0, b: -1.0 },
            Fn1::Slope { k: 1.0 },
        ];
        for f in &fs {
            for &x in &[0.05, 0.3, 0.6, 0.9] {
                let y = f.eval(x);
                let back = f.inverse(y).unwrap();
                assert!((back - x).abs() < 1e-13, "{f}: {x} -> {y} -> {back}");
            }
        }
    }

    #[test]
    fn table_interpolates_and_inverts() {
        let t = Fn1::table(vec![0.0, 0.5, 1.0], vec![0.0, 0.2, 1.0]).unwrap();
        assert!((t.eval(0.25) - 0.1).abs() < 1e-15);
        assert!((t.eval(0.75) - 0.6).abs() < 1e-15);
        assert!((t.inverse(0.6).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(t.eval(2.0), 1.0);
    }

    #[test]
    fn non_monotone_table_rejected() {
        let e = Fn1::table(vec![0.0, 0.5, 1.0], vec![0.0, 0.6, 0.4]);
        assert!(matches!(e, Err(Error::ConditionFailed { .. })));
    }

    #[test]
    fn bisection_inverse_for_kinds_without_closed_form() {
        let f = Fn1::table(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!((f.inverse_on(0.3, 0.0, 1.0) - 0.3).abs() < 1e-15);
        let g = Fn1::Power { p: 3.0 };
        assert!((g.inverse_on(0.125, 0.0, 1.0) - 0.5).abs() < 1e-14);
    }
}
