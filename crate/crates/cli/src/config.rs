//! JSON star configurations.
//!
//! A configuration is a flat JSON object naming a construction family and
//! its parameters, e.g.
//!
//! ```json
//! {"family": "param", "t": {"kind": "phi_r", "r": 1.5}, "s": {"kind": "phi_r", "r": 2.0}}
//! ```
//!
//! Parsing validates the whole object and reports every violation with its
//! field path.

use std::fmt;

use glstar::constructions::{
    builtin_parabola_sequence, clifford, eqn_star_with, fg_star_with, latitudinal, parabola_star_with, param_star_with,
    symmetric_star_with, Fn1, GlPencil, HandSchedule, Parabola, ParabolaSeq, Validation,
};
use glstar::{GlStar, Handedness};
use nalgebra::Vector3;
use serde_json::{Map, Value};
use thiserror::Error;

/// The construction families a configuration can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Clifford,
    Symmetric,
    Fg,
    Eqn,
    Param,
    Latitudinal,
    Parabola,
}

impl Family {
    const ALL: [(&'static str, Family); 7] = [
        ("clifford", Family::Clifford),
        ("symmetric", Family::Symmetric),
        ("fg", Family::Fg),
        ("eqn", Family::Eqn),
        ("param", Family::Param),
        ("latitudinal", Family::Latitudinal),
        ("parabola", Family::Parabola),
    ];

    pub fn name(self) -> &'static str {
        Family::ALL
            .iter()
            .find(|(_, f)| *f == self)
            .map(|(n, _)| *n)
            .expect("listed")
    }

    /// Required function fields, in order, and the optional ones.
    fn function_fields(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Family::Clifford | Family::Parabola => (&[], &[]),
            Family::Symmetric => (&["a"], &[]),
            Family::Fg => (&["f", "g"], &[]),
            Family::Eqn => (&["b", "c"], &[]),
            Family::Param => (&["t", "s"], &[]),
            Family::Latitudinal => (&[], &["m"]),
        }
    }
}

/// A validated star configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct StarConfig {
    pub family: Family,
    /// Centre of a Clifford (ordinary) star.
    pub center: [f64; 3],
    /// The family's functions by field name.
    pub functions: Vec<(String, Fn1)>,
    /// Parabola entries `(α, β, γ)`; the built-in sequence when absent.
    pub parabolas: Option<Vec<[f64; 3]>>,
    pub hand: HandSchedule,
    pub tol: f64,
    /// Sample count override for every check.
    pub samples: Option<usize>,
    pub seed: u64,
}

/// A configuration that could not be used.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigFailure {
    /// The text is not valid JSON.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// The JSON is well formed but violates the schema.
    #[error("{0}")]
    Config(ConfigError),
}

/// Every schema violation of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// JSON path of the offending field, e.g. `t.r`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error:")?;
        for v in &self.violations {
            write!(f, " {}: {};", v.path, v.message)?;
        }
        Ok(())
    }
}

impl StarConfig {
    /// The function stored under `name`.
    pub fn function(&self, name: &str) -> Option<&Fn1> {
        self.functions.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// Runs the family's builder.
    pub fn build(&self) -> glstar::Result<GlStar> {
        let v = Validation::default();
        let f = |name: &str| self.function(name).cloned().expect("validated field");
        let hand = self.hand.clone();
        match self.family {
            Family::Clifford => clifford(Vector3::from(self.center)),
            Family::Symmetric => symmetric_star_with(f("a"), hand, &v),
            Family::Fg => fg_star_with(f("f"), f("g"), hand, &v),
            Family::Eqn => eqn_star_with(f("b"), f("c"), hand, &v),
            Family::Param => param_star_with(f("t"), f("s"), hand, &v),
            Family::Latitudinal => {
                let pencil = match self.function("m") {
                    Some(m) => GlPencil::from_reparametrization(m.clone())?,
                    None => GlPencil::diameters(),
                };
                Ok(latitudinal(pencil))
            }
            Family::Parabola => {
                let seq = match &self.parabolas {
                    None => builtin_parabola_sequence(),
                    Some(entries) => ParabolaSeq::new(
                        entries
                            .iter()
                            .map(|e| Parabola::new(e[0], e[1], e[2]))
                            .collect::<glstar::Result<_>>()?,
                    )?,
                };
                parabola_star_with(seq, hand, &v)
            }
        }
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<StarConfig, ConfigFailure> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigFailure::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut v = Validator::default();
    let cfg = v.config(&value);
    match cfg {
        Some(cfg) if v.violations.is_empty() => Ok(cfg),
        _ => Err(ConfigFailure::Config(ConfigError {
            violations: v.violations,
        })),
    }
}

#[derive(Default)]
struct Validator {
    violations: Vec<Violation>,
}

impl Validator {
    fn fail(&mut self, path: &str, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn config(&mut self, value: &Value) -> Option<StarConfig> {
        let Some(obj) = value.as_object() else {
            self.fail("$", "expected a JSON object");
            return None;
        };
        let family = match obj.get("family") {
            None => {
                self.fail("family", "missing");
                None
            }
            Some(Value::String(s)) => {
                let f = Family::ALL.iter().find(|(n, _)| n == s).map(|(_, f)| *f);
                if f.is_none() {
                    let names: Vec<&str> = Family::ALL.iter().map(|(n, _)| *n).collect();
                    self.fail(
                        "family",
                        format!("unknown family {s:?}, expected one of {}", names.join("|")),
                    );
                }
                f
            }
            Some(_) => {
                self.fail("family", "expected a string");
                None
            }
        };
        let (required, optional) = family.map_or((&[][..], &[][..]), Family::function_fields);
        let mut known = vec!["family", "center", "hand", "tol", "samples", "seed", "parabolas"];
        known.extend_from_slice(required);
        known.extend_from_slice(optional);
        for key in obj.keys() {
            if !known.contains(&key.as_str()) {
                self.fail(key, "unknown field");
            }
        }

        let mut functions = Vec::new();
        for name in required {
            match obj.get(*name) {
                None => self.fail(name, "missing"),
                Some(def) => {
                    if let Some(f) = self.function(name, def) {
                        functions.push((name.to_string(), f));
                    }
                }
            }
        }
        for name in optional {
            if let Some(def) = obj.get(*name) {
                if let Some(f) = self.function(name, def) {
                    functions.push((name.to_string(), f));
                }
            }
        }

        let center = match obj.get("center") {
            None => [0.0; 3],
            Some(c) => match self.numbers("center", c).as_deref() {
                Some(&[x, y, z]) => [x, y, z],
                Some(_) => {
                    self.fail("center", "expected three numbers");
                    [0.0; 3]
                }
                None => [0.0; 3],
            },
        };
        if family == Some(Family::Clifford) && center.iter().map(|x| x * x).sum::<f64>() >= 1.0 {
            self.fail("center", "must lie inside the unit sphere");
        }

        let parabolas = obj.get("parabolas").and_then(|p| self.parabolas(p));
        if parabolas.is_some() && family != Some(Family::Parabola) {
            self.fail("parabolas", "only used by the parabola family");
        }
        let hand = obj.get("hand").map_or_else(HandSchedule::default, |h| self.hand(h));
        let tol = match obj.get("tol") {
            None => glstar::DEFAULT_TOL,
            Some(t) => match t.as_f64() {
                Some(t) if t > 0.0 && t.is_finite() => t,
                _ => {
                    self.fail("tol", "expected a positive number");
                    glstar::DEFAULT_TOL
                }
            },
        };
        let samples = obj.get("samples").and_then(|s| self.count("samples", s));
        let seed = obj.get("seed").and_then(|s| self.count("seed", s)).unwrap_or(0) as u64;
        Some(StarConfig {
            family: family?,
            center,
            functions,
            parabolas,
            hand,
            tol,
            samples,
            seed,
        })
    }

    fn count(&mut self, path: &str, v: &Value) -> Option<usize> {
        match v.as_u64() {
            Some(n) => Some(n as usize),
            None => {
                self.fail(path, "expected a non-negative integer");
                None
            }
        }
    }

    fn numbers(&mut self, path: &str, v: &Value) -> Option<Vec<f64>> {
        let Some(arr) = v.as_array() else {
            self.fail(path, "expected an array of numbers");
            return None;
        };
        let mut out = Vec::with_capacity(arr.len());
        for (i, x) in arr.iter().enumerate() {
            match x.as_f64() {
                Some(x) => out.push(x),
                None => {
                    self.fail(&format!("{path}[{i}]"), "expected a number");
                    return None;
                }
            }
        }
        Some(out)
    }

    fn number(&mut self, obj: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        match obj.get(key) {
            None => {
                self.fail(&format!("{path}.{key}"), "missing");
                None
            }
            Some(v) => {
                let x = v.as_f64();
                if x.is_none() {
                    self.fail(&format!("{path}.{key}"), "expected a number");
                }
                x
            }
        }
    }

    fn function(&mut self, path: &str, def: &Value) -> Option<Fn1> {
        let Some(obj) = def.as_object() else {
            self.fail(path, "expected a function object {\"kind\": ...}");
            return None;
        };
        let Some(kind) = obj.get("kind").and_then(Value::as_str) else {
            self.fail(&format!("{path}.kind"), "missing or not a string");
            return None;
        };
        let allowed: &[&str] = match kind {
            "phi_r" => &["r"],
            "identity" | "moebius01" | "lower_circle" => &[],
            "power" => &["p"],
            "affine" => &["a", "b"],
            "slope" => &["k"],
            "constant" => &["value"],
            "table" => &["knots", "values"],
            _ => {
                self.fail(
                    &format!("{path}.kind"),
                    format!(
                        "unknown function kind {kind:?}, expected one of \
                         phi_r|identity|moebius01|power|affine|slope|lower_circle|constant|table"
                    ),
                );
                return None;
            }
        };
        for key in obj.keys() {
            if key != "kind" && !allowed.contains(&key.as_str()) {
                self.fail(&format!("{path}.{key}"), format!("not a parameter of {kind}"));
            }
        }
        let mut num = |key: &str| self.number(obj, path, key);
        let f = match kind {
            "phi_r" => {
                let r = num("r")?;
                if r <= 0.0 {
                    self.fail(&format!("{path}.r"), "must be positive");
                    return None;
                }
                Fn1::phi(r)
            }
            "identity" => Fn1::Identity,
            "moebius01" => Fn1::Moebius01,
            "lower_circle" => Fn1::LowerCircle,
            "power" => {
                let p = num("p")?;
                if p <= 0.0 {
                    self.fail(&format!("{path}.p"), "must be positive");
                    return None;
                }
                Fn1::Power { p }
            }
            "affine" => {
                let (a, b) = (num("a"), num("b"));
                Fn1::Affine { a: a?, b: b? }
            }
            "slope" => Fn1::Slope { k: num("k")? },
            "constant" => Fn1::Constant { value: num("value")? },
            "table" => {
                let knots = obj.get("knots").map(|k| self.numbers(&format!("{path}.knots"), k));
                let values = obj.get("values").map(|k| self.numbers(&format!("{path}.values"), k));
                match (knots, values) {
                    (Some(Some(k)), Some(Some(v))) => match Fn1::table(k, v) {
                        Ok(t) => t,
                        Err(e) => {
                            self.fail(path, e.to_string());
                            return None;
                        }
                    },
                    (k, v) => {
                        if k.is_none() {
                            self.fail(&format!("{path}.knots"), "missing");
                        }
                        if v.is_none() {
                            self.fail(&format!("{path}.values"), "missing");
                        }
                        return None;
                    }
                }
            }
            _ => unreachable!("kind checked above"),
        };
        Some(f)
    }

    fn hand(&mut self, v: &Value) -> HandSchedule {
        let parse_hand = |s: &str| match s {
            "right" => Some(Handedness::Right),
            "left" => Some(Handedness::Left),
            _ => None,
        };
        match v {
            Value::String(s) => match parse_hand(s) {
                Some(h) => HandSchedule::constant(h),
                None => {
                    self.fail("hand", "expected \"right\" or \"left\"");
                    HandSchedule::default()
                }
            },
            Value::Object(obj) => {
                let initial = match obj.get("initial").and_then(Value::as_str).map(parse_hand) {
                    Some(Some(h)) => h,
                    _ => {
                        self.fail("hand.initial", "expected \"right\" or \"left\"");
                        Handedness::Right
                    }
                };
                let switches = match obj.get("switches") {
                    None => Vec::new(),
                    Some(s) => self.numbers("hand.switches", s).unwrap_or_default(),
                };
                HandSchedule::with_switches(initial, switches).unwrap_or_else(|e| {
                    self.fail("hand.switches", e.to_string());
                    HandSchedule::default()
                })
            }
            _ => {
                self.fail("hand", "expected a string or {\"initial\", \"switches\"}");
                HandSchedule::default()
            }
        }
    }

    fn parabolas(&mut self, v: &Value) -> Option<Vec<[f64; 3]>> {
        let Some(arr) = v.as_array() else {
            self.fail("parabolas", "expected an array of [alpha, beta, gamma] triples");
            return None;
        };
        let mut out = Vec::new();
        for (i, e) in arr.iter().enumerate() {
            let path = format!("parabolas[{i}]");
            match self.numbers(&path, e).as_deref() {
                Some(&[a, b, c]) => out.push([a, b, c]),
                Some(_) => self.fail(&path, "expected three numbers"),
                None => {}
            }
        }
        Some(out)
    }
}
