use super::{parse_rational, rational_to_string, CoeffError, Ring};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Finite sums `sum c_e t^e` with rational exponents and rational coefficients.
///
/// Stored as exponent to nonzero coefficient, so the zero element is the empty
/// map and equality is structural.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct TwistedScalar {
    terms: BTreeMap<BigRational, BigRational>,
}

impl TwistedScalar {
    pub fn monomial(exponent: BigRational, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        TwistedScalar { terms }
    }

    pub fn t_pow(exponent: BigRational) -> Self {
        Self::monomial(exponent, BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(BigRational::zero(), c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn add_term(&mut self, e: BigRational, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Specialization `t -> 1`.
    pub fn at_one(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    /// Substitution `t -> t^lambda`.
    pub fn rescale_exponents(&self, lambda: &BigRational) -> Self {
        let mut out = TwistedScalar::default();
        for (e, c) in &self.terms {
            out.add_term(e * lambda, c.clone());
        }
        out
    }

    /// Multiplies by `t^shift`.
    pub fn shift(&self, shift: &BigRational) -> Self {
        TwistedScalar {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = TwistedScalar::default();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn to_fraction(&self) -> TwistedFraction {
        TwistedFraction::new(self.clone(), TwistedScalar::one()).expect("unit denominator")
    }
}

impl fmt::Display for TwistedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("t^{{{}}}:{}", rational_to_string(e), rational_to_string(c)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl Ring for TwistedScalar {
    fn zero() -> Self {
        TwistedScalar::default()
    }
    fn one() -> Self {
        TwistedScalar::constant(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn negate(&self) -> Self {
        TwistedScalar {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = TwistedScalar::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
    fn from_rational(q: &BigRational) -> Result<Self, CoeffError> {
        Ok(TwistedScalar::constant(q.clone()))
    }
    fn try_inverse(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(TwistedScalar::monomial(-e, c.recip()))
    }
    fn characteristic() -> u64 {
        0
    }
    fn tag() -> String {
        "T".into()
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let s = s.trim();
        if !s.contains("t^") {
            return Ok(TwistedScalar::constant(parse_rational(s)?));
        }
        let err = || CoeffError::Parse(s.to_string());
        let mut out = TwistedScalar::default();
        for part in s.split(',') {
            let part = part.trim();
            let rest = part.strip_prefix("t^{").ok_or_else(err)?;
            let (e, c) = rest.split_once("}:").ok_or_else(err)?;
            out.add_term(parse_rational(e)?, parse_rational(c)?);
        }
        Ok(out)
    }
}

/// Formal fractions over [`TwistedScalar`]; serves as the Novikov-type field
/// of twisted coefficients.
#[derive(Clone, Debug)]
pub struct TwistedFraction {
    num: TwistedScalar,
    den: TwistedScalar,
}

impl TwistedFraction {
    pub fn new(num: TwistedScalar, den: TwistedScalar) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::ZeroElement);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: TwistedScalar, den: TwistedScalar) -> Self {
        if num.is_zero() {
            return TwistedFraction { num, den: TwistedScalar::one() };
        }
        match den.try_inverse() {
            Some(inv) => TwistedFraction { num: num.times(&inv), den: TwistedScalar::one() },
            None => TwistedFraction { num, den },
        }
    }

    pub fn numerator(&self) -> &TwistedScalar {
        &self.num
    }

    pub fn denominator(&self) -> &TwistedScalar {
        &self.den
    }

    /// The underlying scalar, if the denominator is trivial.
    pub fn as_scalar(&self) -> Option<&TwistedScalar> {
        self.den.is_one().then_some(&self.num)
    }
}

impl PartialEq for TwistedFraction {
    fn eq(&self, other: &Self) -> bool {
        self.num.times(&other.den) == other.num.times(&self.den)
    }
}

impl fmt::Display for TwistedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<TwistedScalar> for TwistedFraction {
    fn from(s: TwistedScalar) -> Self {
        s.to_fraction()
    }
}

impl Ring for TwistedFraction {
    fn zero() -> Self {
        TwistedScalar::zero().into()
    }
    fn one() -> Self {
        TwistedScalar::one().into()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::normalized(self.num.plus(&other.num), self.den.clone());
        }
        Self::normalized(
            self.num.times(&other.den).plus(&other.num.times(&self.den)),
            self.den.times(&other.den),
        )
    }
    fn negate(&self) -> Self {
        TwistedFraction { num: self.num.negate(), den: self.den.clone() }
    }
    fn times(&self, other: &Self) -> Self {
        Self::normalized(self.num.times(&other.num), self.den.times(&other.den))
    }
    fn from_rational(q: &BigRational) -> Result<Self, CoeffError> {
        Ok(TwistedScalar::constant(q.clone()).into())
    }
    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::normalized(self.den.clone(), self.num.clone()))
    }
    fn characteristic() -> u64 {
        0
    }
    fn tag() -> String {
        "K".into()
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(') {
            if let Some((n, d)) = inner.split_once(")/(") {
                let d = d.strip_suffix(')').ok_or_else(|| CoeffError::Parse(s.into()))?;
                return TwistedFraction::new(TwistedScalar::parse(n)?, TwistedScalar::parse(d)?);
            }
        }
        Ok(TwistedScalar::parse(s)?.into())
    }
}

/// Outcome of asking whether a twisted scalar can be inverted.
#[derive(Clone, Debug, PartialEq)]
pub enum Invertibility {
    /// The zero element.
    NotInvertible,
    /// A single term; the inverse stays in the scalar ring.
    Monomial(TwistedScalar),
    /// Several terms; invertible only after passing to fractions.
    Fraction(TwistedFraction),
}

pub fn twisted_invertibility(x: &TwistedScalar) -> Invertibility {
    if x.is_zero() {
        Invertibility::NotInvertible
    } else if let Some(inv) = x.try_inverse() {
        Invertibility::Monomial(inv)
    } else {
        Invertibility::Fraction(
            TwistedFraction::new(TwistedScalar::one(), x.clone()).expect("nonzero denominator"),
        )
    }
}
