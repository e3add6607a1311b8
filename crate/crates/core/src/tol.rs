//! Tolerances shared across modules.

/// Geometric predicate tolerance (shell membership, collinearity).
pub const GEOM_EPS: f64 = 1e-12;

/// Tolerance on reported values (areas, symmetry defects).
pub const REPORT_TOL: f64 = 1e-9;

/// Relative agreement between successive Gauss-Legendre estimates.
pub const QUAD_REL_TOL: f64 = 1e-12;

/// Largest Gauss-Legendre rule used by the adaptive angular quadrature.
pub const QUAD_MAX_NODES: usize = 1 << 14;

/// Default smallest interval length in the α minimizations.
pub const ELL_MIN: f64 = 1e-3;

/// Angular resolution of the local refinements.
pub const ANGULAR_RESOLUTION: f64 = 1e-6;

/// Acceptance width for Monte-Carlo comparisons, in standard errors.
pub const MC_SIGMAS: f64 = 3.0;

/// Residual tolerance for the hemisphere halving search.
pub const HALVING_TOL: f64 = 1e-5;
