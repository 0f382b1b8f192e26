use super::DeformError;
use crate::ainfty::{AInftyData, Generator};
use crate::coeff::GradedLaurent;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Raw count of curves with `q` interior constraints contributing to
/// `mu^k(inputs) -> output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BulkEntry {
    pub q: u32,
    pub inputs: Vec<String>,
    pub output: String,
    pub count: BigRational,
}

/// Components `mu_q` of a bulk-deformed structure over the rationals, for a
/// cycle in an ambient manifold of dimension `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct BulkFamily {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    pub l: u32,
    pub max_arity: usize,
    pub entries: Vec<BulkEntry>,
}

fn factorial(q: u32) -> BigInt {
    (1..=q).fold(BigInt::from(1), |a, i| a * BigInt::from(i))
}

impl BulkFamily {
    /// Objects and generators copied from `c`, with no entries.
    pub fn over(c: &AInftyData<BigRational>, l: u32) -> Self {
        BulkFamily {
            objects: c.objects().to_vec(),
            generators: c.generators().to_vec(),
            l,
            max_arity: c.max_arity(),
            entries: Vec::new(),
        }
    }

    /// Every entry of `c` as a `q = 0` component.
    pub fn from_undeformed(c: &AInftyData<BigRational>, l: u32) -> Self {
        let mut f = Self::over(c, l);
        for (ins, out, coef) in c.entries() {
            f.add(0, &c.names(&ins), &c.generators()[out].name, coef);
        }
        f
    }

    pub fn add(&mut self, q: u32, inputs: &[String], output: &str, count: BigRational) {
        self.entries.push(BulkEntry { q, inputs: inputs.to_vec(), output: output.to_string(), count });
    }

    pub fn without_deformation(&self) -> Self {
        BulkFamily { entries: self.entries.iter().filter(|e| e.q == 0).cloned().collect(), ..self.clone() }
    }

    fn degree_of(&self, name: &str) -> Result<i64, DeformError> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .map(|g| g.degree)
            .ok_or_else(|| DeformError::InvalidArgument(format!("unknown generator `{name}`")))
    }

    /// The unique number of interior constraints allowed by degrees for
    /// `inputs -> output`, if any.
    pub fn allowed_q(&self, inputs: &[String], output: &str) -> Result<Option<u32>, DeformError> {
        let k = inputs.len() as i64;
        let mut s = 0;
        for g in inputs {
            s += self.degree_of(g)?;
        }
        let gap = self.degree_of(output)? - (s + 2 - k);
        let step = self.l as i64 - 2;
        Ok((gap >= 0 && gap % step == 0).then(|| (gap / step) as u32))
    }

    /// Checks `|out| = sum |in| + 2 - k + q (l - 2)` for every entry.
    pub fn check_ledger(&self) -> Result<(), DeformError> {
        for e in &self.entries {
            if self.allowed_q(&e.inputs, &e.output)? != Some(e.q) {
                return Err(DeformError::DegreeLedgerViolation {
                    k: e.inputs.len(),
                    q: e.q,
                    inputs: e.inputs.clone(),
                    output: e.output.clone(),
                });
            }
        }
        Ok(())
    }
}

/// `mu^k = sum_q h^q / q! * mu_q^k` over graded Laurent coefficients.
pub fn assemble_bulk<const L: u32>(fam: &BulkFamily) -> Result<AInftyData<GradedLaurent<L>>, DeformError> {
    if fam.l != L {
        return Err(DeformError::InvalidArgument(format!("family has l = {}, requested L{L}", fam.l)));
    }
    fam.check_ledger()?;
    let mut b = AInftyData::<GradedLaurent<L>>::builder().max_arity(fam.max_arity);
    for o in &fam.objects {
        b = b.object(o);
    }
    for g in &fam.generators {
        b = b.generator(&g.name, g.degree, &fam.objects[g.source], &fam.objects[g.target]);
    }
    for e in &fam.entries {
        let c = &e.count / BigRational::from_integer(factorial(e.q));
        let refs: Vec<&str> = e.inputs.iter().map(String::as_str).collect();
        b = b.entry(&refs, &e.output, GradedLaurent::monomial(e.q as i64, c));
    }
    Ok(b.build()?)
}
