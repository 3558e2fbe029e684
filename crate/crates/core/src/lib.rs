//! q-calculus for planar harmonic mappings.
//!
//! - [`qseries`]: truncated complex power series with Jackson q-derivative and
//!   q-integral, q-integers and q-factorials.
//! - [`harmonic`]: harmonic maps `f = h + conj(g)`, q-dilatation, the q-shear
//!   constructor and the named presets.
//! - [`combination`]: convex combinations of maps and the hypothesis checks
//!   for univalence and directional convexity of the combination.
//! - [`verify`]: grid sampling, the directional-convexity criterion, sense
//!   preservation, boundary simplicity and horizontal-slice checks.
//! - [`suite`]: the aggregate report run by `qshear report`.
//!
//! Every check samples a closed sub-disk; reports are numerical evidence, not
//! proofs.

pub mod combination;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod qseries;
pub mod suite;
pub mod verify;

pub use combination::{check_qth, check_th1, combine, combined_dilatation, qth_identity_residual, CombinationSpec};
pub use error::{Error, Result};
pub use harmonic::{preset, q_shear, Dilatation, HarmonicMap, Preset, ShearConvention, Sheared};
pub use num_complex::Complex64;
pub use qseries::{q_factorial, q_number, QParam, TruncatedSeries};
pub use verify::{
    check_cdr_criterion, check_convex_real_direction, check_half_plane_range, check_sense_preserving,
    check_univalence_boundary, phi_q, SampleGrid, Tolerances, VerificationReport,
};

/// Absolute tolerance for coefficient and pointwise comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Margin applied to strict inequalities (`Re > 0`, `|omega| < 1`).
pub const DEFAULT_MARGIN: f64 = 1e-7;

/// Default truncation order. At `r = 0.95` the tail of a series with
/// polynomially growing coefficients is below `1e-15` at this order.
pub const DEFAULT_ORDER: usize = 1024;

/// Smallest accepted proper `q`.
pub const Q_MIN: f64 = 1e-6;

/// Largest accepted proper `q`.
pub const Q_MAX: f64 = 1.0 - 1e-6;
