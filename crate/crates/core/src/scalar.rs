//! The exact scalar abstraction every objective value, weight and average is
//! computed in.
//!
//! Verification compares averages with `==`, so only exact ordered fields
//! qualify. [`Scalar`] is implemented for every `num_rational::Ratio<T>`
//! over a signed integer `T` (`Rational32`, `Rational64`, `BigRational`).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Ord + Hash + Debug + Display + FromStr + Signed + Send + Sync + 'static
{
    fn int(v: i64) -> Self;

    /// `numer / denom`; panics on a zero denominator.
    fn ratio(numer: i64, denom: i64) -> Self;

    fn count(v: usize) -> Self {
        Self::int(i64::try_from(v).expect("count fits in i64"))
    }

    fn approx(&self) -> f64;

    fn is_integer(&self) -> bool;

    /// The value as an `i64`, when it is an integer in range.
    fn as_integer(&self) -> Option<i64>;

    /// Exact square root, if the value is the square of a scalar.
    fn sqrt_exact(&self) -> Option<Self>;

    fn from_str_exact(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Clone
        + Integer
        + Signed
        + Roots
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static,
{
    fn int(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer fits in scalar"))
    }

    fn ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(
            T::from_i64(numer).expect("numerator fits in scalar"),
            T::from_i64(denom).expect("denominator fits in scalar"),
        )
    }

    fn approx(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    }

    fn is_integer(&self) -> bool {
        Ratio::is_integer(self)
    }

    fn as_integer(&self) -> Option<i64> {
        if Ratio::is_integer(self) {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        // Ratio keeps lowest terms, so numerator and denominator must each be squares.
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if n.clone() * n.clone() == *self.numer() && d.clone() * d.clone() == *self.denom() {
            Some(Ratio::new(n, d))
        } else {
            None
        }
    }
}

/// Exact arithmetic mean of a non-empty sequence.
pub(crate) fn mean<S: Scalar>(values: impl IntoIterator<Item = S>) -> Option<S> {
    let mut count = 0usize;
    let mut sum = S::zero();
    for v in values {
        sum = sum + v;
        count += 1;
    }
    (count > 0).then(|| sum / S::count(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    #[test]
    fn parses_fraction_strings() {
        let r: Rational64 = Scalar::from_str_exact("5/3").unwrap();
        assert_eq!(r, Rational64::new(5, 3));
        let b: BigRational = Scalar::from_str_exact(" -7 ").unwrap();
        assert_eq!(b, BigRational::int(-7));
        assert!(<Rational64 as Scalar>::from_str_exact("x").is_none());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Rational64::new(9, 4).sqrt_exact(), Some(Rational64::new(3, 2)));
        assert_eq!(Rational64::new(2, 1).sqrt_exact(), None);
        assert_eq!(Rational64::new(-4, 1).sqrt_exact(), None);
        assert_eq!(BigRational::ratio(0, 1).sqrt_exact(), Some(BigRational::int(0)));
    }

    #[test]
    fn integer_views() {
        assert_eq!(Rational64::new(6, 3).as_integer(), Some(2));
        assert_eq!(Rational64::new(1, 3).as_integer(), None);
        assert!((Rational64::new(1, 4).approx() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn mean_is_exact() {
        let vals = [0, 2, 1].map(Rational64::int);
        assert_eq!(mean(vals), Some(Rational64::int(1)));
        assert_eq!(mean(Vec::<Rational64>::new()), None);
    }
}
