//! Scalar abstraction shared by every geometric routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumCast, ToPrimitive};

/// Floating point type usable as a coordinate: `f32` or `f64`.
///
/// The tolerance hierarchy is part of the scalar because the meaningful
/// thresholds depend on the precision: ray identity > membership >
/// construction.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumCast
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Allowed deviation of a constructed unit vector from norm one.
    const TOL_CONSTRUCTION: f64;
    /// Slack for closed "≥ 0" membership tests.
    const TOL_MEMBERSHIP: f64;
    /// Two unit rays closer than this (in radians or dot-product units) are the same ray.
    const TOL_RAY: f64;
    /// Strictness margin replacing the `>` of open conditions.
    const EPS_STRICT: f64;
    /// Vectors shorter than this cannot be normalized.
    const MIN_NORM: f64;

    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn tol_construction() -> Self {
        Self::lit(Self::TOL_CONSTRUCTION)
    }
    fn tol_membership() -> Self {
        Self::lit(Self::TOL_MEMBERSHIP)
    }
    fn tol_ray() -> Self {
        Self::lit(Self::TOL_RAY)
    }
    fn eps_strict() -> Self {
        Self::lit(Self::EPS_STRICT)
    }
    fn min_norm() -> Self {
        Self::lit(Self::MIN_NORM)
    }
}

impl Scalar for f64 {
    const TOL_CONSTRUCTION: f64 = 1e-12;
    const TOL_MEMBERSHIP: f64 = 1e-10;
    const TOL_RAY: f64 = 1e-9;
    const EPS_STRICT: f64 = 1e-9;
    const MIN_NORM: f64 = 1e-9;
}

impl Scalar for f32 {
    const TOL_CONSTRUCTION: f64 = 1e-6;
    const TOL_MEMBERSHIP: f64 = 2e-5;
    const TOL_RAY: f64 = 2e-4;
    const EPS_STRICT: f64 = 2e-4;
    const MIN_NORM: f64 = 1e-4;
}
