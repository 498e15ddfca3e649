use crate::Rational;
use num_traits::{Float, Signed, ToPrimitive};

/// Common interface of exact rationals and hardware floats.
///
/// The polynomial kernels in this workspace (residuals, curvatures,
/// linearizations) are ring expressions in the input data, so they are
/// written once against this trait and can run either exactly (for
/// identity-level checks at rational points) or in floating point (for
/// grids and quadrature). `Signed` brings the full `Num` operator set
/// plus `abs`/`signum`.
pub trait Scalar: Signed + Clone + PartialOrd {
    /// Embed an exact rational constant.
    fn from_rational(q: &Rational) -> Self;

    /// Embed a small integer constant.
    fn from_int(n: i64) -> Self;

    /// Convenience: the constant 1/2, which appears throughout the
    /// displayed expressions.
    fn one_half() -> Self {
        Self::from_rational(&crate::rat(1, 2))
    }
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
}

impl Scalar for f32 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }
    fn from_int(n: i64) -> Self {
        n as f32
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
}

/// Scalars with square roots and rounding: the floating-point subset.
///
/// Quadrature, grid sampling, and anything involving `sqrt(lambda_sq)`
/// is bounded by this instead of [`Scalar`].
pub trait RealScalar: Scalar + Float {}

impl<T: Scalar + Float> RealScalar for T {}
