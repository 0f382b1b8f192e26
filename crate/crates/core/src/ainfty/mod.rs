//! Finite A-infinity categories given by explicit structure tensors.
//!
//! Inputs of `mu^k` are stored in the order `[x_k, ..., x_1]`, where `x_1` is
//! the first morphism (out of the source object). Signs follow the convention
//! with `mu^k` of degree `2 - k` and structure equation
//!
//! `sum (-1)^{sigma_b} mu(x_k, .., mu^c(x_{b+c}, .., x_{b+1}), x_b, .., x_1) = 0`,
//! `sigma_b = sum_{i <= b} (|x_i| - 1)`.

mod check;
mod cohomology;
mod directed;
pub mod models;
mod quasi_iso;
mod splitting;

pub use check::{check_ainfty, AInftyReport, EquationFailure};
pub use cohomology::{cohomology, CohomologyCategory, HomCohomology};
pub use directed::directed_subcategory;
pub use quasi_iso::{
    is_quasi_isomorphic, witness_registry, QuasiIsoConfig, QuasiIsoVerdict, SearchOutcome,
    WitnessProblem, WitnessSearch,
};
pub use splitting::{homogeneous_splitting, Splitting};

use crate::coeff::Ring;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub const DEFAULT_MAX_ARITY: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AInftyError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("inputs {0:?} are not composable")]
    NotComposable(Vec<String>),
    #[error("output `{output}` does not lie in the hom space of inputs {inputs:?}")]
    WrongTarget { inputs: Vec<String>, output: String },
    #[error("entry {inputs:?} -> `{output}` violates the degree rule: expected {expected}, found {found}")]
    DegreeMismatch { inputs: Vec<String>, output: String, expected: i64, found: i64 },
    #[error("arity {0} exceeds max_arity")]
    ArityTooLarge(usize),
    #[error("empty input tuple")]
    EmptyInputs,
    #[error("coefficient `{0}` is not homogeneous")]
    NonHomogeneousCoefficient(String),
    #[error("coefficients are neither a field nor graded Laurent: {0}")]
    NonFieldCoefficients(String),
    #[error("object `{0}` has no cohomological unit")]
    NotUnital(String),
    #[error("bad unit: {0}")]
    BadUnit(String),
    #[error("differential entries are not homogeneous: {0}")]
    NonHomogeneousEntries(String),
    #[error("differential does not square to zero")]
    NotAComplex,
    #[error("directed subcategory fails the structure equations: {0}")]
    DirectedNotAInfty(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub source: usize,
    pub target: usize,
}

/// Sparse linear combination of generators, keyed by generator index.
pub type Chain<R> = BTreeMap<usize, R>;

pub(crate) fn chain_add<R: Ring>(c: &mut Chain<R>, g: usize, v: R) {
    if v.is_zero() {
        return;
    }
    match c.get_mut(&g) {
        Some(old) => {
            let s = old.plus(&v);
            if s.is_zero() {
                c.remove(&g);
            } else {
                *old = s;
            }
        }
        None => {
            c.insert(g, v);
        }
    }
}

pub(crate) fn koszul_sign(degree_sum: i64) -> i64 {
    if degree_sum.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AInftyData<R> {
    objects: Vec<String>,
    generators: Vec<Generator>,
    mu: BTreeMap<Vec<usize>, Vec<(usize, R)>>,
    max_arity: usize,
    by_name: HashMap<String, usize>,
}

impl<R: Ring> AInftyData<R> {
    pub fn builder() -> AInftyBuilder<R> {
        AInftyBuilder::new()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn object_index(&self, name: &str) -> Result<usize, AInftyError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| AInftyError::UnknownObject(name.to_string()))
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, AInftyError> {
        self.by_name.get(name).copied().ok_or_else(|| AInftyError::UnknownGenerator(name.to_string()))
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.generators[g].degree
    }

    /// Generators of `hom(x, y)` in declaration order.
    pub fn hom_basis(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| self.generators[g].source == x && self.generators[g].target == y)
            .collect()
    }

    pub fn mu(&self, inputs: &[usize]) -> &[(usize, R)] {
        self.mu.get(inputs).map_or(&[], Vec::as_slice)
    }

    pub fn arities(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.mu.keys().map(Vec::len).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// Flattened entries `(inputs, output, coeff)` in a fixed order.
    pub fn entries(&self) -> Vec<(Vec<usize>, usize, R)> {
        self.mu
            .iter()
            .flat_map(|(ins, outs)| outs.iter().map(move |(o, c)| (ins.clone(), *o, c.clone())))
            .collect()
    }

    pub fn num_entries(&self) -> usize {
        self.mu.values().map(Vec::len).sum()
    }

    pub fn names(&self, gens: &[usize]) -> Vec<String> {
        gens.iter().map(|&g| self.generators[g].name.clone()).collect()
    }

    /// Copy with the sign of entry `idx` (in [`Self::entries`] order) flipped.
    pub fn with_flipped_entry(&self, idx: usize) -> Self {
        let mut out = self.clone();
        let mut n = 0;
        for outs in out.mu.values_mut() {
            for (_, c) in outs.iter_mut() {
                if n == idx {
                    *c = c.negate();
                }
                n += 1;
            }
        }
        out
    }

    /// Applies `f` to every structure constant. Degrees are not rechecked.
    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> AInftyData<S> {
        let mu = self
            .mu
            .iter()
            .map(|(k, outs)| {
                let mapped: Vec<(usize, S)> =
                    outs.iter().map(|(o, c)| (*o, f(c))).filter(|(_, c)| !c.is_zero()).collect();
                (k.clone(), mapped)
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        AInftyData {
            objects: self.objects.clone(),
            generators: self.generators.clone(),
            mu,
            max_arity: self.max_arity,
            by_name: self.by_name.clone(),
        }
    }

    /// Builder over another ring with the same objects and generators and no
    /// structure constants.
    pub fn skeleton_builder<S: Ring>(&self) -> AInftyBuilder<S> {
        let mut b = AInftyBuilder::new().max_arity(self.max_arity);
        for o in &self.objects {
            b = b.object(o);
        }
        for g in &self.generators {
            b = b.generator(&g.name, g.degree, &self.objects[g.source], &self.objects[g.target]);
        }
        b
    }

    /// Multilinear extension of `mu^k` to chains, inputs ordered `[x_k..x_1]`.
    pub fn mu_chains(&self, inputs: &[Chain<R>]) -> Chain<R> {
        let mut out = Chain::new();
        let mut idx = Vec::with_capacity(inputs.len());
        self.expand(inputs, 0, R::one(), &mut idx, &mut out);
        out
    }

    fn expand(&self, inputs: &[Chain<R>], pos: usize, coef: R, idx: &mut Vec<usize>, out: &mut Chain<R>) {
        if pos == inputs.len() {
            for (o, c) in self.mu(idx) {
                chain_add(out, *o, coef.times(c));
            }
            return;
        }
        for (g, c) in &inputs[pos] {
            idx.push(*g);
            self.expand(inputs, pos + 1, coef.times(c), idx, out);
            idx.pop();
        }
    }

    /// Composable tuples `[x_k..x_1]` of length `k`.
    pub fn composable_tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        for g in 0..self.generators.len() {
            cur.push(g);
            self.extend_tuple(k, &mut cur, &mut out);
            cur.pop();
        }
        for t in &mut out {
            t.reverse();
        }
        out
    }

    fn extend_tuple(&self, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let last = *cur.last().expect("nonempty");
        let t = self.generators[last].target;
        for g in 0..self.generators.len() {
            if self.generators[g].source == t {
                cur.push(g);
                self.extend_tuple(k, cur, out);
                cur.pop();
            }
        }
    }

    fn validate_entry(&self, inputs: &[usize], output: usize, coeff: &R) -> Result<(), AInftyError> {
        let names = || self.names(inputs);
        let k = inputs.len();
        if k == 0 {
            return Err(AInftyError::EmptyInputs);
        }
        if k > self.max_arity {
            return Err(AInftyError::ArityTooLarge(k));
        }
        // inputs are [x_k..x_1]; x_{i+1}.source == x_i.target
        for w in inputs.windows(2) {
            if self.generators[w[0]].source != self.generators[w[1]].target {
                return Err(AInftyError::NotComposable(names()));
            }
        }
        let src = self.generators[inputs[k - 1]].source;
        let tgt = self.generators[inputs[0]].target;
        let og = &self.generators[output];
        if og.source != src || og.target != tgt {
            return Err(AInftyError::WrongTarget { inputs: names(), output: og.name.clone() });
        }
        let cdeg = coeff
            .degree()
            .ok_or_else(|| AInftyError::NonHomogeneousCoefficient(coeff.to_string()))?;
        let expected: i64 = inputs.iter().map(|&g| self.generators[g].degree).sum::<i64>() + 2 - k as i64;
        let found = og.degree + cdeg;
        if found != expected {
            return Err(AInftyError::DegreeMismatch { inputs: names(), output: og.name.clone(), expected, found });
        }
        Ok(())
    }
}

/// Incremental constructor for [`AInftyData`].
///
/// `entry` takes the structure constant directly. `product` and `differential`
/// take the usual associative-algebra data and convert signs:
/// `mu^2(a2, a1) = (-1)^{|a1|} a2 a1` and `mu^1(a) = (-1)^{|a|} da`.
#[derive(Debug, Clone)]
pub struct AInftyBuilder<R> {
    objects: Vec<String>,
    generators: Vec<Generator>,
    entries: Vec<(Vec<String>, String, R)>,
    max_arity: usize,
}

impl<R: Ring> Default for AInftyBuilder<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Ring> AInftyBuilder<R> {
    pub fn new() -> Self {
        AInftyBuilder { objects: Vec::new(), generators: Vec::new(), entries: Vec::new(), max_arity: DEFAULT_MAX_ARITY }
    }

    pub fn max_arity(mut self, k: usize) -> Self {
        self.max_arity = k;
        self
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn generator(mut self, name: &str, degree: i64, source: &str, target: &str) -> Self {
        let s = self.objects.iter().position(|o| o == source).unwrap_or(usize::MAX);
        let t = self.objects.iter().position(|o| o == target).unwrap_or(usize::MAX);
        self.generators.push(Generator { name: name.to_string(), degree, source: s, target: t });
        self
    }

    fn degree_of(&self, name: &str) -> i64 {
        self.generators.iter().find(|g| g.name == name).map_or(0, |g| g.degree)
    }

    pub fn entry(mut self, inputs: &[&str], output: &str, coeff: R) -> Self {
        self.entries.push((inputs.iter().map(|s| s.to_string()).collect(), output.to_string(), coeff));
        self
    }

    pub fn product(self, a2: &str, a1: &str, output: &str, coeff: R) -> Self {
        let c = if koszul_sign(self.degree_of(a1)) < 0 { coeff.negate() } else { coeff };
        self.entry(&[a2, a1], output, c)
    }

    pub fn differential(self, a: &str, output: &str, coeff: R) -> Self {
        let c = if koszul_sign(self.degree_of(a)) < 0 { coeff.negate() } else { coeff };
        self.entry(&[a], output, c)
    }

    pub fn build(self) -> Result<AInftyData<R>, AInftyError> {
        let mut seen = std::collections::HashSet::new();
        for o in &self.objects {
            if !seen.insert(o.clone()) {
                return Err(AInftyError::DuplicateName(o.clone()));
            }
        }
        let mut by_name = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.source == usize::MAX || g.target == usize::MAX {
                return Err(AInftyError::UnknownObject(format!("endpoint of generator `{}`", g.name)));
            }
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(AInftyError::DuplicateName(g.name.clone()));
            }
        }
        let mut data = AInftyData {
            objects: self.objects,
            generators: self.generators,
            mu: BTreeMap::new(),
            max_arity: self.max_arity,
            by_name,
        };
        let mut acc: BTreeMap<Vec<usize>, Chain<R>> = BTreeMap::new();
        for (ins, out, c) in self.entries {
            let inputs = ins.iter().map(|n| data.generator_index(n)).collect::<Result<Vec<_>, _>>()?;
            let output = data.generator_index(&out)?;
            if c.is_zero() {
                continue;
            }
            data.validate_entry(&inputs, output, &c)?;
            chain_add(acc.entry(inputs).or_default(), output, c);
        }
        data.mu = acc
            .into_iter()
            .filter(|(_, ch)| !ch.is_empty())
            .map(|(k, ch)| (k, ch.into_iter().collect()))
            .collect();
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;
    use num_rational::BigRational;

    #[test]
    fn degree_rule_is_enforced() {
        let r = AInftyData::<BigRational>::builder()
            .object("X")
            .generator("a", 0, "X", "X")
            .generator("b", 0, "X", "X")
            .entry(&["a"], "b", rat_int(1))
            .build();
        assert!(matches!(r, Err(AInftyError::DegreeMismatch { expected: 1, found: 0, .. })));
    }

    #[test]
    fn composability_is_enforced() {
        let r = AInftyData::<BigRational>::builder()
            .object("X")
            .object("Y")
            .generator("f", 0, "X", "Y")
            .entry(&["f", "f"], "f", rat_int(1))
            .build();
        assert!(matches!(r, Err(AInftyError::NotComposable(_))));
    }

    #[test]
    fn product_helper_applies_sign() {
        let c = AInftyData::<BigRational>::builder()
            .object("X")
            .generator("e", 0, "X", "X")
            .generator("f", 3, "X", "X")
            .product("e", "f", "f", rat_int(1))
            .product("f", "e", "f", rat_int(1))
            .build()
            .unwrap();
        let e = c.generator_index("e").unwrap();
        let f = c.generator_index("f").unwrap();
        assert_eq!(c.mu(&[e, f]), &[(f, rat_int(-1))]);
        assert_eq!(c.mu(&[f, e]), &[(f, rat_int(1))]);
    }
}
