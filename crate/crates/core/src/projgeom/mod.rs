//! Real projective geometry in homogeneous coordinates.
//!
//! Points of `P³` are 4-vectors `(w0, w1, w2, w3)` whose affine part is
//! `(w1, w2, w3) / w0`; the unit sphere is the quadric of the form
//! `−w0² + w1² + w2² + w3²`. Lines are stored by their Plücker coordinates,
//! which are at the same time their points on the Klein quadric in `P⁵`.
//!
//! All numerics are `f64`; tolerances are relative to unit scale.

mod form;
mod line;
mod point;
mod sphere;
mod subspace;

pub use form::{polar, signature_of, signature_on, QuadricForm, Signature, SIGNATURE_CUTOFF};
pub use line::{join, klein_form, klein_form_normalized, klein_lift, x_axis, z_axis, PLine, PLUCKER_INDEX};
pub use point::{normalize, HPoint, HPoint4, HPoint6};
pub use sphere::{line_sphere_intersect, point_side, second_sphere_point, Side};
pub use subspace::{meet, Subspace, RANK_CUTOFF};

pub(crate) use form::dvec;
pub(crate) use subspace::singular_values;
