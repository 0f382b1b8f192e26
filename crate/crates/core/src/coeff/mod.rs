//! Exact coefficient rings.
//!
//! Every ring used by the algebraic layers implements [`Ring`]. Arithmetic is
//! exact throughout; the only floating point code in the crate lives in
//! [`crate::model`].

mod fp;
mod laurent;
mod rational;
mod twisted;

pub use fp::Fp;
pub use laurent::GradedLaurent;
pub use rational::{parse_rational, rational_to_string};
pub use twisted::{twisted_invertibility, Invertibility, TwistedFraction, TwistedScalar};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("zero element has no inverse")]
    ZeroElement,
    #[error("element is not invertible in this ring")]
    NotInvertible,
    #[error("construction needs a field of characteristic zero")]
    CharacteristicNotZero,
    #[error("cannot parse coefficient `{0}`")]
    Parse(String),
    #[error("value is not representable in this ring: {0}")]
    NotRepresentable(String),
}

/// Commutative ring with exact arithmetic.
///
/// Method names avoid `add`/`mul` so they never collide with `std::ops`.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn from_rational(q: &BigRational) -> Result<Self, CoeffError>;
    fn try_inverse(&self) -> Option<Self>;
    fn characteristic() -> u64;
    /// Tag used in serialized categories: `Q`, `F5`, `K`, `L4`, `T`.
    fn tag() -> String;
    fn parse(s: &str) -> Result<Self, CoeffError>;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
            .unwrap_or_else(|_| Self::zero())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Grading degree of a homogeneous nonzero element, `None` otherwise.
    fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(0)
        }
    }

    /// An invertible element of the given degree, if the ring has one.
    fn monomial_of_degree(d: i64) -> Option<Self> {
        (d == 0).then(Self::one)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }
}

/// Field of characteristic zero or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    pub fn characteristic(self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => p,
        }
    }

    /// Twisted and bulk constructions divide by integers, so they refuse
    /// positive characteristic.
    pub fn require_char_zero(self) -> Result<(), CoeffError> {
        match self {
            BaseField::Rationals => Ok(()),
            BaseField::Prime(_) => Err(CoeffError::CharacteristicNotZero),
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_axioms<R: Ring>(a: R, b: R, c: R) {
        assert_eq!(a.plus(&b), b.plus(&a));
        assert_eq!(a.times(&b), b.times(&a));
        assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        assert!(a.minus(&a).is_zero());
        assert_eq!(a.times(&R::one()), a);
    }

    #[test]
    fn axioms_hold_in_each_ring() {
        ring_axioms(rat(1, 3), rat(-5, 2), rat(7, 1));
        ring_axioms(Fp::<7>::from_i64(3), Fp::<7>::from_i64(5), Fp::<7>::from_i64(6));
        let t = |e: i64, c: i64| TwistedScalar::monomial(rat(e, 2), rat_int(c));
        ring_axioms(
            t(1, 2).plus(&t(0, -1)),
            t(3, 1),
            t(-2, 5).plus(&t(4, 1)),
        );
        let h = |q: i64, c: i64| GradedLaurent::<4>::monomial(q, rat_int(c));
        ring_axioms(h(1, 2), h(-1, 3).plus(&h(2, 1)), h(0, -1));
    }

    #[test]
    fn base_field_refuses_positive_characteristic() {
        assert!(BaseField::Rationals.require_char_zero().is_ok());
        assert_eq!(
            BaseField::Prime(3).require_char_zero(),
            Err(CoeffError::CharacteristicNotZero)
        );
    }
}
