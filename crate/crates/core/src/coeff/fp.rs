use super::{CoeffError, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::fmt;

/// Prime field with `P` elements. `P` must be prime; this is checked when the
/// first element is constructed.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp<const P: u64>(u64);

const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl<const P: u64> Fp<P> {
    const PRIME: () = assert!(is_prime(P), "Fp modulus must be prime");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::PRIME;
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp::new(r.to_i64().unwrap_or(0))
    }

    fn pow_mod(mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= P;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * b as u128) % P as u128) as u64;
            }
            b = ((b as u128 * b as u128) % P as u128) as u64;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Ring for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }
    fn one() -> Self {
        Fp::new(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 + other.0 as u128) % P as u128) as u64)
    }
    fn negate(&self) -> Self {
        Fp((P - self.0) % P)
    }
    fn times(&self, other: &Self) -> Self {
        Fp(((self.0 as u128 * other.0 as u128) % P as u128) as u64)
    }
    fn from_rational(q: &BigRational) -> Result<Self, CoeffError> {
        let d = Self::from_bigint(q.denom());
        let inv = d.try_inverse().ok_or_else(|| {
            CoeffError::NotRepresentable(format!("denominator of {q} vanishes mod {P}"))
        })?;
        Ok(Self::from_bigint(q.numer()).times(&inv))
    }
    fn try_inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| Fp(Self::pow_mod(self.0, P - 2)))
    }
    fn characteristic() -> u64 {
        P
    }
    fn tag() -> String {
        format!("F{P}")
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let q = super::parse_rational(s)?;
        if q.denom().is_zero() {
            return Err(CoeffError::Parse(s.into()));
        }
        Self::from_rational(&q)
    }
}
