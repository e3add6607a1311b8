//! Scalar abstraction for the geometric kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar usable by the polygon and polytope kernels.
///
/// The tolerances scale with the precision of the type: `f64` uses the
/// predicate tolerance `1e-12`, `f32` a proportionally coarser one.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for geometric predicates (collinearity, containment).
    const GEOM_EPS: Self;
    /// Tolerance for reported values (symmetry defects, area checks).
    const REPORT_TOL: Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Scalar for f64 {
    const GEOM_EPS: Self = 1e-12;
    const REPORT_TOL: Self = 1e-9;
}

impl Scalar for f32 {
    const GEOM_EPS: Self = 1e-5;
    const REPORT_TOL: Self = 1e-4;
}
