//! Spherical convex bodies represented as polyhedral cones.
//!
//! A body is `cone(generators) ∩ S^n`, kept in both generator and
//! inequality form. The crate provides the polar transform as exact cone
//! duality, geodesic and Pompeiu–Hausdorff distances, dilations, separation,
//! a plain-text shape format and a harness of randomized property suites.
//!
//! Everything geometric is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the aliases below fix the precision.
//!
//! ```
//! use wulff_core::metric::hausdorff;
//! use wulff_core::transforms::polar;
//! use wulff_core::{AngleF64, SphericalBodyF64, UnitPointF64};
//!
//! let pole = UnitPointF64::pole(2);
//! let small = SphericalBodyF64::cap_polytope(&pole, AngleF64::new(0.3)?, 16)?;
//! let large = SphericalBodyF64::cap_polytope(&pole, AngleF64::new(0.5)?, 16)?;
//! let d = hausdorff(&small, &large)?.radians();
//! let d_polar = hausdorff(&polar(&small)?, &polar(&large)?)?.radians();
//! assert!((d - d_polar).abs() < 1e-12);
//! # Ok::<(), wulff_core::GeometryError>(())
//! ```

pub mod body;
pub mod cone;
mod critical;
pub mod error;
pub mod harness;
mod linalg;
pub mod metric;
pub mod point;
pub mod scalar;
pub mod shape_file;
mod simplicial;
pub mod transforms;

pub use body::SphericalBody;
pub use error::GeometryError;
pub use metric::Measured;
pub use point::{Angle, UnitPoint};
pub use scalar::Scalar;

pub type UnitPointF64 = UnitPoint<f64>;
pub type UnitPointF32 = UnitPoint<f32>;
pub type SphericalBodyF64 = SphericalBody<f64>;
pub type SphericalBodyF32 = SphericalBody<f32>;
pub type AngleF64 = Angle<f64>;
pub type AngleF32 = Angle<f32>;
