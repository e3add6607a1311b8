//! Numerical toolkit for symmetric convex bodies: planar anisotropic measures
//! and their interval extremal problems, polar bodies and volume products in
//! higher dimension, hemisphere localization and related inequalities.

pub mod alpha;
pub mod bodynd;
pub mod error;
pub mod geometry2d;
pub mod inequalities;
pub mod io;
pub mod localize;
mod lp;
pub mod measure2d;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod tol;

pub use error::{Error, Result};

/// Body in `R^n` over `f64`.
pub type Body = bodynd::BodyND;

/// Symmetric polygon over `f64`.
pub type Polygon = geometry2d::SymmetricPolygon2<f64>;
