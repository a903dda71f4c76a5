use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("points are projectively equal, their join is undefined")]
    DegenerateJoin,

    #[error("vector is not on the Klein quadric (residual {residual:.3e})")]
    NotOnQuadric { residual: f64 },

    #[error("quadratic form is degenerate")]
    SingularForm,

    #[error("evaluation failed: {0}")]
    EvalError(String),

    #[error("line is not a 2-secant of the sphere")]
    NotTwoSecant,

    #[error("center {0:?} is not interior to the unit sphere")]
    InvalidCenter([f64; 3]),

    /// A construction hypothesis failed; `witness` is the offending parameter
    /// or sample point when one exists.
    #[error("condition {condition} failed{}", fmt_witness(.witness))]
    ConditionFailed {
        condition: String,
        witness: Option<Vec<f64>>,
    },

    #[error("line is not a 0-secant of the Klein quadric")]
    NotZeroSecant,

    #[error("meet has dimension {0}, expected 1")]
    DegenerateMeet(usize),

    #[error("search found no solution")]
    SearchFailed,

    #[error("hfd property violated: {clusters} distinct solutions")]
    HfdViolation { clusters: usize },
}

impl Error {
    pub(crate) fn condition(condition: impl Into<String>, witness: &[f64]) -> Self {
        Error::ConditionFailed {
            condition: condition.into(),
            witness: Some(witness.to_vec()),
        }
    }
}

fn fmt_witness(w: &Option<Vec<f64>>) -> String {
    match w {
        Some(w) => format!(" at {w:?}"),
        None => String::new(),
    }
}
