//! Builders for the families of rotational gl stars.
//!
//! Each builder checks the hypotheses of its family on sample grids (see
//! [`Validation`]) and fails with [`Error::ConditionFailed`](crate::Error)
//! naming the violated condition and a witness. The returned stars evaluate
//! `σ` from their meridian data.

mod clifford;
mod fg;
mod fn1;
mod hyperbola;
mod parabola;
mod pencil;
mod symmetric;
mod validation;

pub use clifford::{clifford, omega, omega_inv};
pub use fg::{fg_star, fg_star_with};
pub use fn1::{inverse_increasing, real_fn, Fn1, FnOf, RealFn, Table};
pub use hyperbola::{
    builtin_example, builtin_family, builtin_heights, builtin_l_coefficients, eqn_star, eqn_star_with, height_inverse,
    heights_from_coefficients, hyperbola_star, param_star, param_star_with, CoefficientFamily, HeightFamily,
    HyperbolaFamily,
};
pub use parabola::{builtin_parabola_sequence, parabola_star, parabola_star_with, Parabola, ParabolaSeq};
pub use pencil::{latitudinal, pencil_from_mu, GlPencil};
pub use symmetric::{symmetric_star, symmetric_star_with};
pub use validation::{HandSchedule, Validation};
