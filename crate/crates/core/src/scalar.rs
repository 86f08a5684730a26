//! Scalar abstraction for derived quantities (goodput, symbol counts).
//!
//! Durations and rates are stored as integers; anything derived from a
//! ratio of them is computed in a caller-chosen [`Scalar`]. The exact
//! rational instantiation is the reference; `f64`/`f32` are provided for
//! plotting and for checking how far floating point drifts from it.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, Num, ToPrimitive};

/// Numeric type usable for goodput and airtime arithmetic.
pub trait Scalar: Num + Copy + PartialOrd + Debug + Send + Sync + 'static {
    /// `num / den`, rounded only if the type cannot represent it exactly.
    fn from_ratio(num: i128, den: i128) -> Self;

    /// Smallest integral value not less than `self`.
    fn ceil(self) -> Self;

    fn to_f64(self) -> f64;

    fn from_int(v: i128) -> Self {
        Self::from_ratio(v, 1)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }

    fn ceil(self) -> Self {
        Float::ceil(self)
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i128, den: i128) -> Self {
        num as f32 / den as f32
    }

    fn ceil(self) -> Self {
        Float::ceil(self)
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for Ratio<i128> {
    fn from_ratio(num: i128, den: i128) -> Self {
        Ratio::new(num, den)
    }

    fn ceil(self) -> Self {
        Ratio::ceil(&self)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_ceil_on_boundaries() {
        let r = <Ratio<i128> as Scalar>::from_ratio(454, 192);
        assert_eq!(Scalar::ceil(r), Ratio::from_integer(3));
        let whole = <Ratio<i128> as Scalar>::from_ratio(384, 192);
        assert_eq!(Scalar::ceil(whole), Ratio::from_integer(2));
    }

    #[test]
    fn float_conversions() {
        assert_eq!(<f64 as Scalar>::from_ratio(1, 4), 0.25);
        assert_eq!(<f32 as Scalar>::from_ratio(3, 2).to_f64(), 1.5);
        assert_eq!(<Ratio<i128> as Scalar>::from_ratio(7, 2).to_f64(), 3.5);
        assert_eq!(2.0f64.max_of(3.0), 3.0);
    }
}
