use super::PipelineError;
use crate::coeff::{Ring, TwistedScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

/// A signed strip with its weight `int u^* Omega`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedCount {
    pub sign: i64,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub weight: BigRational,
}

impl WeightedCount {
    pub fn new(sign: i64, weight: BigRational) -> Self {
        WeightedCount { sign, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub quasi_isomorphic: bool,
    /// The count as a string in its coefficient ring.
    pub sum: String,
    /// Whether a vanishing sum certifies non-quasi-isomorphism.
    pub converse_applies: bool,
}

/// `sum_u s(u) t^{w(u)} != 0` in the Novikov field. Requires `|a| = n`, which
/// is also what makes the converse hold.
pub fn criterion_twisted(counts: &[WeightedCount], a_degree: i64, n: i64) -> Result<CriterionVerdict, PipelineError> {
    if a_degree != n {
        return Err(PipelineError::GradingMismatch { expected: n, found: a_degree });
    }
    let sum = counts.iter().fold(TwistedScalar::zero(), |acc, c| {
        acc.plus(&TwistedScalar::monomial(c.weight.clone(), BigRational::from_integer(BigInt::from(c.sign))))
    });
    Ok(CriterionVerdict { quasi_isomorphic: !sum.is_zero(), sum: sum.to_string(), converse_applies: true })
}

/// `sum_u s(u) != 0` over the point-constrained strips. Requires `|a| = 2n - 2`.
pub fn criterion_bulk(counts: &[i64], a_degree: i64, n: i64) -> Result<CriterionVerdict, PipelineError> {
    if a_degree != 2 * n - 2 {
        return Err(PipelineError::GradingMismatch { expected: 2 * n - 2, found: a_degree });
    }
    let sum: i64 = counts.iter().sum();
    Ok(CriterionVerdict { quasi_isomorphic: sum != 0, sum: sum.to_string(), converse_applies: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;

    #[test]
    fn twisted_examples() {
        let split = [WeightedCount::new(1, rat_int(0)), WeightedCount::new(-1, rat_int(3))];
        assert!(criterion_twisted(&split, 2, 2).unwrap().quasi_isomorphic);
        let flat = [WeightedCount::new(1, rat_int(0)), WeightedCount::new(-1, rat_int(0))];
        assert!(!criterion_twisted(&flat, 2, 2).unwrap().quasi_isomorphic);
        assert!(criterion_twisted(&[WeightedCount::new(1, rat_int(5))], 4, 4).unwrap().quasi_isomorphic);
        assert_eq!(criterion_twisted(&flat, 3, 2), Err(PipelineError::GradingMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn bulk_examples() {
        assert!(criterion_bulk(&[1], 6, 4).unwrap().quasi_isomorphic);
        assert!(!criterion_bulk(&[], 6, 4).unwrap().quasi_isomorphic);
        assert!(!criterion_bulk(&[1, -1], 6, 4).unwrap().quasi_isomorphic);
        assert!(criterion_bulk(&[1], 4, 4).is_err());
    }
}
