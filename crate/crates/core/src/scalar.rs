//! Exact ordered-field scalars.
//!
//! Everything in this crate is generic over [`Scalar`]. Min-max equalities are
//! checked with `==`, so only exact types qualify: rationals over machine or
//! arbitrary-precision integers. Floating point does not implement `Ord` and is
//! deliberately not supported.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact ordered field element.
pub trait Scalar:
    Clone + Ord + Debug + Display + FromStr + Num + Signed + Send + Sync + 'static
{
    /// Converts a machine integer.
    fn from_int(value: i64) -> Self;

    /// Builds `numer / denom`. Panics when `denom == 0`.
    fn from_frac(numer: i64, denom: i64) -> Self;

    fn is_integral(&self) -> bool;

    /// The value as an `i64`, when it is integral and fits.
    fn to_int(&self) -> Option<i64>;
}

impl<T> Scalar for Ratio<T>
where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + num_traits::ToPrimitive
        + Send
        + Sync
        + 'static,
{
    fn from_int(value: i64) -> Self {
        Ratio::from_integer(T::from_i64(value).expect("integer out of range for scalar type"))
    }

    fn from_frac(numer: i64, denom: i64) -> Self {
        Ratio::new(
            T::from_i64(numer).expect("integer out of range for scalar type"),
            T::from_i64(denom).expect("integer out of range for scalar type"),
        )
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_int(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

/// Parses a value written as an integer or as `p/q`.
pub fn parse_scalar<S: Scalar>(token: &str) -> Option<S> {
    token.trim().parse::<S>().ok()
}

/// Sum of a slice.
pub fn sum<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| acc + v.clone())
}
