//! Sampled numerical checks of the gl-star axioms, of the symmetry classes
//! and of the root-count conditions behind the hyperbola constructions.
//!
//! Every check returns a [`CheckReport`]; all sampling is deterministic for
//! a given seed, and reductions over concurrently evaluated samples are
//! performed in sample order so that reports are reproducible bit for bit.

mod checks;
mod report;
mod roots;
mod sampling;
pub(crate) mod search;

pub(crate) use checks::rotation4;
pub use checks::{
    check_axial, check_coverage, check_coverage_seeded, check_fixed_point_free, check_involution,
    check_no_exterior_meet, check_no_exterior_meet_seeded, check_pencil_separation, check_pz_monotone,
    check_rotational, check_rotational_seeded, check_symmetric, coverage_count, exterior_samples, pz_interval_end,
    CLUSTER_RADIUS, COVERAGE_GRID, FPF_MARGIN,
};
pub use report::{format_g17, render_summary, CheckReport};
pub use roots::{
    default_root_grid, descartes_sign_changes, horner, log_grid, polynomial_root_count, positive_root_count, RootCount,
};
pub use sampling::{fibonacci_sphere, random_unit, rng, sphere_point, DEFAULT_SEED};
