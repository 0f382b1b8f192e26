use super::{DeformError, GaugePotential};
use crate::coeff::{Ring, TwistedScalar};
use crate::linalg::{Matrix, Solve};
use num_rational::BigRational;

/// One counted strip from `from` (the input generator) to `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub from: String,
    pub to: String,
    pub count: BigRational,
    pub weight: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDifferential {
    pub generators: Vec<String>,
    pub entries: Vec<DiffEntry>,
}

impl WeightedDifferential {
    fn index(&self, name: &str) -> Result<usize, DeformError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| DeformError::InvalidArgument(format!("unknown generator `{name}`")))
    }

    /// Matrix over twisted scalars; column `j` is the image of generator `j`.
    pub fn twisted_matrix(&self) -> Result<Matrix<TwistedScalar>, DeformError> {
        let n = self.generators.len();
        let mut m = Matrix::<TwistedScalar>::zeros(n, n);
        for e in &self.entries {
            let (i, j) = (self.index(&e.to)?, self.index(&e.from)?);
            let v = m.get(i, j).plus(&TwistedScalar::monomial(e.weight.clone(), e.count.clone()));
            m.set(i, j, v);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactTwistRemoval {
    pub alpha: GaugePotential,
    /// `(generator, t^{-alpha})`: the new basis vector is this multiple of the old one.
    pub basis_change: Vec<(String, TwistedScalar)>,
    /// The differential in the new basis; its weights are the base weights.
    pub conjugated: WeightedDifferential,
}

/// Solves `alpha(from) - alpha(to) = weight - base` for every entry.
///
/// `base` defaults to zero weights. Infeasibility comes with a certificate
/// `y` over the entries such that `sum y_e (from_e - to_e) = 0` while
/// `sum y_e (weight_e - base_e) != 0`.
pub fn solve_gauge(d: &WeightedDifferential, base: Option<&[BigRational]>) -> Result<GaugePotential, DeformError> {
    let n = d.generators.len();
    let m = d.entries.len();
    if let Some(b) = base {
        if b.len() != m {
            return Err(DeformError::InvalidArgument("one base weight per entry".into()));
        }
    }
    let mut a = Matrix::<BigRational>::zeros(m, n);
    let mut rhs = Vec::with_capacity(m);
    for (r, e) in d.entries.iter().enumerate() {
        let (p, q) = (d.index(&e.from)?, d.index(&e.to)?);
        a.set(r, p, a.get(r, p).plus(&BigRational::one()));
        a.set(r, q, a.get(r, q).minus(&BigRational::one()));
        let b0 = base.map_or_else(BigRational::zero, |b| b[r].clone());
        rhs.push(&e.weight - b0);
    }
    match a.solve(&rhs).map_err(|e| DeformError::InvalidArgument(e.to_string()))? {
        Solve::Solution(x) => Ok(GaugePotential { alpha: d.generators.iter().cloned().zip(x).collect() }),
        Solve::Inconsistent { certificate } => Err(DeformError::NotExactDiscrepancy {
            certificate: certificate
                .into_iter()
                .enumerate()
                .filter(|(_, y)| !y.is_zero())
                .map(|(i, y)| (i, y.to_string()))
                .collect(),
        }),
    }
}

/// Changes basis by `g -> t^{-alpha(g)} g` and returns the conjugated
/// differential. The identity `D_w P = P D_conj` with `P = diag(t^{-alpha})`
/// is checked exactly.
pub fn remove_exact_twist(d: &WeightedDifferential, alpha: &GaugePotential) -> Result<ExactTwistRemoval, DeformError> {
    let conjugated = WeightedDifferential {
        generators: d.generators.clone(),
        entries: d
            .entries
            .iter()
            .map(|e| DiffEntry {
                from: e.from.clone(),
                to: e.to.clone(),
                count: e.count.clone(),
                weight: &e.weight - alpha.get(&e.from) + alpha.get(&e.to),
            })
            .collect(),
    };
    let basis_change: Vec<(String, TwistedScalar)> =
        d.generators.iter().map(|g| (g.clone(), TwistedScalar::t_pow(-alpha.get(g)))).collect();
    let n = d.generators.len();
    let mut p = Matrix::zeros(n, n);
    for (i, (_, v)) in basis_change.iter().enumerate() {
        p.set(i, i, v.clone());
    }
    let lhs = d.twisted_matrix()?.mul(&p);
    let rhs = p.mul(&conjugated.twisted_matrix()?);
    if lhs != rhs {
        return Err(DeformError::ConjugationFailure);
    }
    Ok(ExactTwistRemoval { alpha: alpha.clone(), basis_change, conjugated })
}
