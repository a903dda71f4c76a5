//! Rotational generalized line stars and the regular parallelisms they induce.
//!
//! A *gl star* is a set of 2-secants of the unit sphere such that every point
//! that is not interior to the sphere lies on exactly one of its lines. It is
//! described by a fixed-point-free involution `σ` of the sphere: the star is
//! the set of lines `q ∨ σ(q)`. Through the Klein correspondence a gl star
//! lifts to a regular topological parallelism of real projective 3-space.
//!
//! The crate is organised bottom-up:
//!
//! * [`projgeom`] – homogeneous points, Plücker lines, subspaces, quadratic
//!   forms and polarities;
//! * [`glstar`] – the gl-star data model (involution, rotational profile,
//!   meridian lines, reguli);
//! * [`constructions`] – builders for every family of rotational gl stars;
//! * [`verify`] – sampled checks of the gl-star axioms and symmetry classes;
//! * [`parallelism`] – the lift into the Klein quadric, parallel classes and
//!   parallel queries.
//!
//! ```
//! use glstar::constructions;
//! use glstar::verify;
//!
//! let star = constructions::builtin_example();
//! let report = verify::check_involution(&star, 200, 1e-9);
//! assert!(report.passed);
//! ```

// `!(x < tol)` is used deliberately throughout so that NaN fails a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod glstar;
pub mod parallelism;
pub mod projgeom;
pub mod verify;

mod error;

pub use error::{Error, Result};
pub use glstar::{GlStar, Handedness, SurfaceEntry, SurfaceKind};
pub use projgeom::{HPoint, HPoint4, HPoint6, PLine, QuadricForm, Signature, Subspace};

/// Default tolerance at unit scale.
pub const DEFAULT_TOL: f64 = 1e-9;

// The guide's code listings are compiled and run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/klein.md")]
    mod klein {}
    #[doc = include_str!("../../../book/src/glstars.md")]
    mod glstars {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/parallelisms.md")]
    mod parallelisms {}
}
