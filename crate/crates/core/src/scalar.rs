//! Scalar abstractions shared by the state engine and the information-theory code.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Floating point amplitude/probability type: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant, panicking only if the type cannot represent finite values.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// A tolerance no tighter than what this precision can actually hold.
    fn tol(requested: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        let requested = Self::lit(requested);
        if requested > floor {
            requested
        } else {
            floor
        }
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Probability mass type of a [`JointDistribution`](crate::analysis::JointDistribution).
///
/// Implemented for `f64` (approximate mode) and [`BigRational`] (exact mode).
pub trait Probability: Clone + Debug + PartialOrd + Zero + One + Signed + Send + Sync {
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    /// `num / den` with `den > 0`.
    fn ratio(num: u64, den: u64) -> Self;

    fn to_f64(&self) -> f64;

    /// Tolerance used when checking that a table sums to one.
    fn is_unit(&self) -> bool;
}

impl Probability for f64 {
    const EXACT: bool = false;

    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_unit(&self) -> bool {
        (self - 1.0).abs() <= 1e-12
    }
}

impl Probability for BigRational {
    const EXACT: bool = true;

    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_respects_precision() {
        assert_eq!(<f64 as Real>::tol(1e-10), 1e-10);
        assert!(<f32 as Real>::tol(1e-10) > 1e-6);
    }

    #[test]
    fn rational_ratio_is_exact() {
        let third = <BigRational as Probability>::ratio(1, 3);
        let sum = third.clone() + third.clone() + third;
        assert!(sum.is_unit());
        assert!(!<f64 as Probability>::ratio(1, 2).is_unit());
    }
}
