use super::{parse_rational, rational_to_string, CoeffError, Ring};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomials in `h` with `deg h = 2 - L`.
///
/// `L` is the ambient dimension of the bulk deformation; it must be even and
/// at least 4 so that `h` has even nonzero degree.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct GradedLaurent<const L: u32> {
    terms: BTreeMap<i64, BigRational>,
}

impl<const L: u32> GradedLaurent<L> {
    const VALID: () = assert!(L >= 4 && L % 2 == 0, "ambient dimension must be even and >= 4");

    pub const HBAR_DEGREE: i64 = 2 - L as i64;

    pub fn monomial(q: i64, coeff: BigRational) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID;
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(q, coeff);
        }
        GradedLaurent { terms }
    }

    pub fn hbar_pow(q: i64) -> Self {
        Self::monomial(q, BigRational::one())
    }

    pub fn ambient_l(&self) -> u32 {
        L
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.terms.iter()
    }

    /// Exponent of `h` when the element is a single nonzero term.
    pub fn single_exponent(&self) -> Option<i64> {
        if self.terms.len() == 1 {
            self.terms.keys().next().copied()
        } else {
            None
        }
    }

    fn add_term(&mut self, q: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(q).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&q);
        }
    }

    /// Inverse of a homogeneous element.
    pub fn invert(&self) -> Result<Self, CoeffError> {
        if self.terms.is_empty() {
            return Err(CoeffError::ZeroElement);
        }
        self.try_inverse().ok_or(CoeffError::NonHomogeneous)
    }
}

impl<const L: u32> fmt::Display for GradedLaurent<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(q, c)| format!("h^{{{q}}}:{}", rational_to_string(c)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl<const L: u32> Ring for GradedLaurent<L> {
    fn zero() -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID;
        GradedLaurent::default()
    }
    fn one() -> Self {
        Self::hbar_pow(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (q, c) in &other.terms {
            out.add_term(*q, c.clone());
        }
        out
    }
    fn negate(&self) -> Self {
        GradedLaurent { terms: self.terms.iter().map(|(q, c)| (*q, -c)).collect() }
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = GradedLaurent::default();
        for (q1, c1) in &self.terms {
            for (q2, c2) in &other.terms {
                out.add_term(q1 + q2, c1 * c2);
            }
        }
        out
    }
    fn from_rational(q: &BigRational) -> Result<Self, CoeffError> {
        Ok(Self::monomial(0, q.clone()))
    }
    fn try_inverse(&self) -> Option<Self> {
        let q = self.single_exponent()?;
        Some(Self::monomial(-q, self.terms[&q].recip()))
    }
    fn characteristic() -> u64 {
        0
    }
    fn tag() -> String {
        format!("L{L}")
    }
    fn parse(s: &str) -> Result<Self, CoeffError> {
        let s = s.trim();
        if !s.contains("h^") {
            return Ok(Self::monomial(0, parse_rational(s)?));
        }
        let err = || CoeffError::Parse(s.to_string());
        let mut out = Self::zero();
        for part in s.split(',') {
            let rest = part.trim().strip_prefix("h^{").ok_or_else(err)?;
            let (q, c) = rest.split_once("}:").ok_or_else(err)?;
            out.add_term(q.trim().parse().map_err(|_| err())?, parse_rational(c)?);
        }
        Ok(out)
    }
    fn degree(&self) -> Option<i64> {
        self.single_exponent().map(|q| q * Self::HBAR_DEGREE)
    }
    fn monomial_of_degree(d: i64) -> Option<Self> {
        (d % Self::HBAR_DEGREE == 0).then(|| Self::hbar_pow(d / Self::HBAR_DEGREE))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;

    #[test]
    fn degrees_follow_ambient_dimension() {
        let h = GradedLaurent::<6>::hbar_pow(1);
        assert_eq!(h.degree(), Some(-4));
        assert_eq!(GradedLaurent::<6>::hbar_pow(-2).degree(), Some(8));
        assert_eq!(h.plus(&GradedLaurent::one()).degree(), None);
        assert_eq!(GradedLaurent::<4>::monomial_of_degree(4), Some(GradedLaurent::hbar_pow(-2)));
        assert_eq!(GradedLaurent::<4>::monomial_of_degree(3), None);
        assert_eq!(h.ambient_l(), 6);
    }

    #[test]
    fn inversion_needs_homogeneity() {
        let x = GradedLaurent::<4>::monomial(3, rat_int(5));
        assert_eq!(x.times(&x.invert().unwrap()), GradedLaurent::one());
        let y = x.plus(&GradedLaurent::one());
        assert_eq!(y.invert(), Err(CoeffError::NonHomogeneous));
        assert_eq!(GradedLaurent::<4>::zero().invert(), Err(CoeffError::ZeroElement));
    }

    #[test]
    fn text_round_trip() {
        let x = GradedLaurent::<8>::monomial(-1, rat_int(2)).plus(&GradedLaurent::hbar_pow(2));
        assert_eq!(x.to_string(), "h^{-1}:2, h^{2}:1");
        assert_eq!(GradedLaurent::<8>::parse(&x.to_string()).unwrap(), x);
    }
}
