use super::hyperbola::{builtin_family, hyperbola_star, HyperbolaFamily};
use super::validation::{HandSchedule, Validation};
use crate::glstar::GlStar;
use crate::{Error, Result};

/// The parabola `v = α(u − β)² + γ`, image under `ω` of the meridian
/// hyperbola `a²x² − (z − b)² = c²` with `α = 1/a²`, `β = b`, `γ = c²/a²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parabola {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Parabola {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Parabola> {
        if !(alpha > 0.0 && alpha.is_finite() && beta.is_finite() && gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "parabola needs α > 0 and γ ≥ 0, got ({alpha}, {beta}, {gamma})"
            )));
        }
        Ok(Parabola { alpha, beta, gamma })
    }

    pub fn from_hyperbola(a: f64, b: f64, c: f64) -> Parabola {
        Parabola {
            alpha: 1.0 / (a * a),
            beta: b,
            gamma: c * c / (a * a),
        }
    }

    /// `(a, b, c)` of the hyperbola.
    pub fn to_hyperbola(&self) -> (f64, f64, f64) {
        let a = self.slope();
        (a, self.beta, a * self.gamma.sqrt())
    }

    /// The hyperbola slope `a = 1/√α`.
    pub fn slope(&self) -> f64 {
        1.0 / self.alpha.sqrt()
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.alpha * (u - self.beta).powi(2) + self.gamma
    }

    pub fn vertex(&self) -> (f64, f64) {
        (self.beta, self.gamma)
    }

    /// `u`-coordinates `u₋ < u₊` of the intersections with the arc
    /// `D = {(u, 1 − u²)}`, if there are two.
    pub fn arc_intersections(&self) -> Option<(f64, f64)> {
        // (α + 1)u² − 2αβu + αβ² + γ − 1 = 0
        let (a, b, c) = (
            self.alpha + 1.0,
            -self.alpha * self.beta,
            self.alpha * self.beta * self.beta + self.gamma - 1.0,
        );
        let disc = b * b - a * c;
        if !(disc > 0.0) {
            return None;
        }
        let q = -(b + b.signum() * disc.sqrt());
        let (r1, r2) = if q == 0.0 {
            let r = (-c / a).sqrt();
            (-r, r)
        } else {
            (q / a, c / q)
        };
        Some((r1.min(r2), r1.max(r2)))
    }

    /// `(1 − w)·self + w·other` as quadratic functions of `u`.
    pub fn interpolate(&self, other: &Parabola, w: f64) -> Parabola {
        let (wa, wb) = ((1.0 - w) * self.alpha, w * other.alpha);
        let alpha = wa + wb;
        let beta = (wa * self.beta + wb * other.beta) / alpha;
        // the constant term, rearranged so that every summand is ≥ 0
        let gamma = (1.0 - w) * self.gamma + w * other.gamma + wa * wb * (self.beta - other.beta).powi(2) / alpha;
        Parabola { alpha, beta, gamma }
    }
}

/// A finite sequence of parabolas ordered by increasing slope `a = 1/√α`,
/// completed at the small-slope end by `λ·P_first`, `λ ≥ 1` (the first
/// vertex must be the origin) and at the large-slope end by `λ·P_last`,
/// `λ ∈ ]0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolaSeq {
    entries: Vec<Parabola>,
}

const SEQ_TOL: f64 = 1e-12;

impl ParabolaSeq {
    /// Checks the sequence conditions:
    ///
    /// * slopes strictly increasing;
    /// * the first vertex is the origin;
    /// * each parabola meets `D` in two points on either side of the
    ///   `v`-axis, nested inside those of its successor;
    /// * consecutive parabolas meet only inside the region `R` bounded by
    ///   `D` and the `u`-axis.
    pub fn new(entries: Vec<Parabola>) -> Result<ParabolaSeq> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput(
                "parabola sequence needs at least two entries".into(),
            ));
        }
        for p in &entries {
            Parabola::new(p.alpha, p.beta, p.gamma)?;
        }
        if let Some(i) = entries.windows(2).position(|w| !(w[1].alpha < w[0].alpha)) {
            return Err(Error::condition("slopes strictly increasing", &[i as f64]));
        }
        let first = entries[0];
        if !(first.beta.abs() <= SEQ_TOL && first.gamma <= SEQ_TOL) {
            return Err(Error::condition(
                "first vertex at the origin",
                &[0.0, first.beta, first.gamma],
            ));
        }
        let mut previous: Option<(f64, f64)> = None;
        for (i, p) in entries.iter().enumerate() {
            let (lo, hi) = match p.arc_intersections() {
                Some(r) if r.0 < 0.0 && r.1 > 0.0 && r.0 > -1.0 && r.1 < 1.0 => r,
                _ => return Err(Error::condition("two arc points separated by the v-axis", &[i as f64])),
            };
            if let Some((plo, phi)) = previous {
                if !(lo < plo && hi > phi) {
                    return Err(Error::condition("arc points nested", &[i as f64, lo, hi]));
                }
            }
            previous = Some((lo, hi));
        }
        for (i, w) in entries.windows(2).enumerate() {
            if let Some(u) = exterior_crossing(&w[0], &w[1]) {
                return Err(Error::condition(
                    "consecutive parabolas meet only inside R",
                    &[i as f64, u, w[0].eval(u)],
                ));
            }
        }
        Ok(ParabolaSeq { entries })
    }

    /// Samples a height family at the given slopes (unvalidated).
    pub fn sample<F: HyperbolaFamily + ?Sized>(family: &F, slopes: &[f64]) -> Vec<Parabola> {
        slopes
            .iter()
            .map(|&a| Parabola::from_hyperbola(a, family.b(a), family.c(a)))
            .collect()
    }

    pub fn entries(&self) -> &[Parabola] {
        &self.entries
    }

    /// The interpolated parabola of slope `a`.
    pub fn at_slope(&self, a: f64) -> Parabola {
        let alpha = 1.0 / (a * a);
        let e = &self.entries;
        let (first, last) = (e[0], e[e.len() - 1]);
        if alpha >= first.alpha {
            return Parabola {
                alpha,
                beta: 0.0,
                gamma: 0.0,
            };
        }
        if alpha <= last.alpha {
            return Parabola {
                alpha,
                beta: last.beta,
                gamma: last.gamma * alpha / last.alpha,
            };
        }
        // entries are ordered by decreasing α
        let i = e.partition_point(|p| p.alpha > alpha).max(1) - 1;
        let (p, q) = (e[i], e[i + 1]);
        let w = (p.alpha - alpha) / (p.alpha - q.alpha);
        let mut r = p.interpolate(&q, w);
        r.alpha = alpha;
        r
    }
}

/// A real root `u` of `p − q` where the parabolas meet strictly above `D`.
fn exterior_crossing(p: &Parabola, q: &Parabola) -> Option<f64> {
    let a = p.alpha - q.alpha;
    let b = -2.0 * (p.alpha * p.beta - q.alpha * q.beta);
    let c = p.alpha * p.beta * p.beta + p.gamma - q.alpha * q.beta * q.beta - q.gamma;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let qq = -0.5 * (b + b.signum() * disc.sqrt());
    let roots = if qq == 0.0 { vec![0.0] } else { vec![qq / a, c / qq] };
    roots.into_iter().find(|&u| p.eval(u) - (1.0 - u * u) > SEQ_TOL)
}

struct ParabolaFamily {
    seq: ParabolaSeq,
}

impl HyperbolaFamily for ParabolaFamily {
    fn b(&self, a: f64) -> f64 {
        self.seq.at_slope(a).beta
    }

    fn c(&self, a: f64) -> f64 {
        a * self.seq.at_slope(a).gamma.sqrt()
    }
}

/// The star of the `ω`-preimages of the interpolated parabola family.
pub fn parabola_star(seq: ParabolaSeq) -> Result<GlStar> {
    parabola_star_with(seq, HandSchedule::default(), &Validation::default())
}

pub fn parabola_star_with(seq: ParabolaSeq, hand: HandSchedule, v: &Validation) -> Result<GlStar> {
    hyperbola_star("parabolas", ParabolaFamily { seq }, hand, v)
}

/// Thirteen samples of the built-in example at slopes `2^i`, `i = −6..6`,
/// with the first replaced by the cone of slope `2^−6` through the origin so
/// that the sequence can be completed.
pub fn builtin_parabola_sequence() -> ParabolaSeq {
    let slopes: Vec<f64> = (-6..=6).map(|i| 2f64.powi(i)).collect();
    let mut entries = ParabolaSeq::sample(&builtin_family(), &slopes);
    entries[0] = Parabola::from_hyperbola(slopes[0], 0.0, 0.0);
    ParabolaSeq::new(entries).expect("samples of the built-in example form a valid sequence")
}
