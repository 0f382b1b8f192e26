use super::DeformError;
use crate::ainfty::{check_ainfty, AInftyData};
use crate::coeff::{Ring, TwistedScalar};
use num_rational::BigRational;
use std::collections::BTreeMap;

/// One counted curve: signed count and the weight `t`-exponent it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub count: BigRational,
    pub weight: BigRational,
}

impl Curve {
    pub fn new(count: BigRational, weight: BigRational) -> Self {
        Curve { count, weight }
    }
}

/// Curve data per structure-tensor entry, keyed by generator names
/// `([x_k..x_1], output)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedTensor {
    entries: BTreeMap<(Vec<String>, String), Vec<Curve>>,
}

/// Per-generator exponents `alpha`; the basis change is `g -> t^{-alpha(g)} g`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaugePotential {
    pub alpha: BTreeMap<String, BigRational>,
}

impl GaugePotential {
    pub fn get(&self, name: &str) -> BigRational {
        self.alpha.get(name).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn negated(&self) -> Self {
        GaugePotential { alpha: self.alpha.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }
}

impl WeightedTensor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every entry of `c` as a single curve of weight zero.
    pub fn from_base(c: &AInftyData<BigRational>) -> Self {
        let mut w = Self::new();
        for (ins, out, coef) in c.entries() {
            let names = c.names(&ins);
            w.add(&names, &c.generators()[out].name, coef, BigRational::zero());
        }
        w
    }

    pub fn add(&mut self, inputs: &[String], output: &str, count: BigRational, weight: BigRational) {
        self.entries
            .entry((inputs.to_vec(), output.to_string()))
            .or_default()
            .push(Curve::new(count, weight));
    }

    /// Replaces the curve list of one entry.
    pub fn set(&mut self, inputs: &[String], output: &str, curves: Vec<Curve>) {
        self.entries.insert((inputs.to_vec(), output.to_string()), curves);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Vec<String>, String), &Vec<Curve>)> {
        self.entries.iter()
    }

    fn map_weights(&self, f: impl Fn(&(Vec<String>, String), &BigRational) -> BigRational) -> Self {
        WeightedTensor {
            entries: self
                .entries
                .iter()
                .map(|(k, cs)| {
                    (k.clone(), cs.iter().map(|c| Curve::new(c.count.clone(), f(k, &c.weight))).collect())
                })
                .collect(),
        }
    }

    /// All weights multiplied by `lambda`.
    pub fn rescaled(&self, lambda: &BigRational) -> Self {
        self.map_weights(|_, w| w * lambda)
    }

    /// Weights specialized to zero: the undeformed coefficients.
    pub fn total_counts(&self) -> BTreeMap<(Vec<String>, String), BigRational> {
        self.entries
            .iter()
            .map(|(k, cs)| (k.clone(), cs.iter().fold(BigRational::zero(), |a, c| a + &c.count)))
            .collect()
    }

    pub fn twisted_coefficient(curves: &[Curve]) -> TwistedScalar {
        curves.iter().fold(TwistedScalar::zero(), |acc, c| {
            acc.plus(&TwistedScalar::monomial(c.weight.clone(), c.count.clone()))
        })
    }
}

/// Weights after the basis change `g -> t^{-alpha(g)} g`: each entry shifts by
/// `alpha(output) - sum alpha(inputs)`.
pub fn gauge_shift(w: &WeightedTensor, alpha: &GaugePotential) -> WeightedTensor {
    w.map_weights(|(ins, out), wt| {
        let s = ins.iter().fold(BigRational::zero(), |a, g| a + alpha.get(g));
        wt + alpha.get(out) - s
    })
}

/// Multiplies structure constants by `t^{weight}` curve by curve.
///
/// The counts of every weighted entry must add up to the base coefficient, so
/// that specializing `t -> 1` gives back `c`. Entries without weight data keep
/// weight zero.
pub fn twist(c: &AInftyData<BigRational>, w: &WeightedTensor) -> Result<AInftyData<TwistedScalar>, DeformError> {
    let base = check_ainfty(c);
    if let Some(f) = base.failure {
        return Err(DeformError::BaseNotAInfty { arity: f.arity, inputs: f.inputs });
    }
    let mut coeffs: BTreeMap<(Vec<String>, String), TwistedScalar> = BTreeMap::new();
    for (ins, out, coef) in c.entries() {
        coeffs.insert((c.names(&ins), c.generators()[out].name.clone()), TwistedScalar::constant(coef));
    }
    for ((ins, out), curves) in w.entries() {
        for g in ins.iter().chain(std::iter::once(out)) {
            c.generator_index(g)?;
        }
        let key = (ins.clone(), out.clone());
        let expected = coeffs.get(&key).map_or_else(BigRational::zero, |t| t.at_one());
        let found = curves.iter().fold(BigRational::zero(), |a, cv| a + &cv.count);
        if expected != found {
            return Err(DeformError::WeightMismatch {
                inputs: ins.clone(),
                output: out.clone(),
                expected: expected.to_string(),
                found: found.to_string(),
            });
        }
        coeffs.insert(key, WeightedTensor::twisted_coefficient(curves));
    }
    let mut b = c.skeleton_builder::<TwistedScalar>();
    for ((ins, out), v) in coeffs {
        let refs: Vec<&str> = ins.iter().map(String::as_str).collect();
        b = b.entry(&refs, &out, v);
    }
    let twisted = b.build()?;
    let report = check_ainfty(&twisted);
    if let Some(f) = report.failure {
        return Err(DeformError::WeightInconsistency { arity: f.arity, inputs: f.inputs, residual: f.residual });
    }
    Ok(twisted)
}
