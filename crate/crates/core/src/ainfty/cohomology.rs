use super::{homogeneous_splitting, koszul_sign, AInftyData, AInftyError, Chain, Splitting};
use crate::coeff::Ring;
use crate::linalg::{Matrix, Solve};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub struct HomCohomology<R> {
    pub source: usize,
    pub target: usize,
    /// Generators of the chain-level hom space, in coordinate order.
    pub basis: Vec<usize>,
    pub splitting: Splitting<R>,
    /// Degree of each harmonic basis class.
    pub class_degrees: Vec<i64>,
}

impl<R: Ring> HomCohomology<R> {
    pub fn dim(&self) -> usize {
        self.splitting.harmonic.len()
    }

    pub fn to_dense(&self, c: &Chain<R>) -> Vec<R> {
        self.basis.iter().map(|g| c.get(g).cloned().unwrap_or_else(R::zero)).collect()
    }

    pub fn to_chain(&self, v: &[R]) -> Chain<R> {
        self.basis
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (*g, c.clone()))
            .collect()
    }
}

/// Cohomology category with composition `[x'] . [x] = (-1)^{|x|} [mu^2(x', x)]`.
#[derive(Debug, Clone)]
pub struct CohomologyCategory<R> {
    data: AInftyData<R>,
    homs: BTreeMap<(usize, usize), HomCohomology<R>>,
    units: Vec<Option<Vec<R>>>,
}

fn vector_degree<R: Ring>(c: &AInftyData<R>, basis: &[usize], v: &[R]) -> i64 {
    basis
        .iter()
        .zip(v)
        .find(|(_, x)| !x.is_zero())
        .map_or(0, |(g, x)| c.degree(*g) + x.degree().unwrap_or(0))
}

pub fn cohomology<R: Ring>(c: &AInftyData<R>) -> Result<CohomologyCategory<R>, AInftyError> {
    let n_obj = c.objects().len();
    let mut homs = BTreeMap::new();
    for x in 0..n_obj {
        for y in 0..n_obj {
            let basis = c.hom_basis(x, y);
            let n = basis.len();
            let mut d = Matrix::zeros(n, n);
            for (j, &g) in basis.iter().enumerate() {
                for (o, v) in c.mu(&[g]) {
                    let i = basis.iter().position(|b| b == o).expect("mu^1 stays in hom");
                    d.set(i, j, v.clone());
                }
            }
            let degrees: Vec<i64> = basis.iter().map(|&g| c.degree(g)).collect();
            let splitting = homogeneous_splitting(&d, &degrees)?;
            let class_degrees = splitting.harmonic.iter().map(|h| vector_degree(c, &basis, h)).collect();
            homs.insert((x, y), HomCohomology { source: x, target: y, basis, splitting, class_degrees });
        }
    }
    let mut coh = CohomologyCategory { data: c.clone(), homs, units: vec![None; n_obj] };
    for x in 0..n_obj {
        coh.units[x] = coh.find_unit(x)?;
    }
    Ok(coh)
}

impl<R: Ring> CohomologyCategory<R> {
    pub fn data(&self) -> &AInftyData<R> {
        &self.data
    }

    pub fn hom(&self, x: usize, y: usize) -> &HomCohomology<R> {
        &self.homs[&(x, y)]
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).dim()
    }

    pub fn unit(&self, x: usize) -> Option<&[R]> {
        self.units[x].as_deref()
    }

    pub fn is_unital(&self, x: usize) -> bool {
        self.units[x].is_some()
    }

    /// Harmonic cocycle representing the given class, as a chain.
    pub fn representative(&self, x: usize, y: usize, coords: &[R]) -> Chain<R> {
        let h = self.hom(x, y);
        h.to_chain(&h.splitting.representative(coords))
    }

    /// Class of a cocycle in `hom(x, y)`.
    pub fn class_of(&self, x: usize, y: usize, cocycle: &Chain<R>) -> Vec<R> {
        let h = self.hom(x, y);
        h.splitting.class_coords(&h.to_dense(cocycle))
    }

    /// Composition of `g: y -> z` after `f: x -> y`, in class coordinates.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: &[R], f: &[R]) -> Vec<R> {
        let hxz = self.hom(x, z);
        let mut out = vec![R::zero(); hxz.dim()];
        let hxy = self.hom(x, y);
        for (j, fj) in f.iter().enumerate() {
            if fj.is_zero() {
                continue;
            }
            let mut ej = vec![R::zero(); f.len()];
            ej[j] = R::one();
            let rep_f = self.representative(x, y, &ej);
            let sign = R::from_i64(koszul_sign(hxy.class_degrees[j]));
            for (i, gi) in g.iter().enumerate() {
                if gi.is_zero() {
                    continue;
                }
                let mut ei = vec![R::zero(); g.len()];
                ei[i] = R::one();
                let rep_g = self.representative(y, z, &ei);
                let prod = self.data.mu_chains(&[rep_g, rep_f.clone()]);
                let cls = self.class_of(x, z, &prod);
                let w = gi.times(fj).times(&sign);
                for (o, c) in out.iter_mut().zip(cls) {
                    *o = o.plus(&w.times(&c));
                }
            }
        }
        out
    }

    fn basis_vec(len: usize, i: usize) -> Vec<R> {
        let mut v = vec![R::zero(); len];
        v[i] = R::one();
        v
    }

    /// Degree-zero multiples of the basis classes of `hom(x, y)`, i.e. a
    /// spanning set of `H^0` over the degree-zero coefficients.
    pub fn degree_zero_basis(&self, x: usize, y: usize) -> Vec<Vec<R>> {
        let h = self.hom(x, y);
        (0..h.dim())
            .filter_map(|i| {
                R::monomial_of_degree(-h.class_degrees[i]).map(|m| {
                    let mut v = Self::basis_vec(h.dim(), i);
                    v[i] = m;
                    v
                })
            })
            .collect()
    }

    fn find_unit(&self, x: usize) -> Result<Option<Vec<R>>, AInftyError> {
        let n_obj = self.data.objects().len();
        let dxx = self.dim(x, x);
        let cands = self.degree_zero_basis(x, x);
        // Equations: e . f = f for f in H(y, x), f . e = f for f in H(x, y).
        let mut rows: Vec<Vec<R>> = Vec::new();
        let mut rhs: Vec<R> = Vec::new();
        let mut push = |cols: Vec<Vec<R>>, target: Vec<R>| {
            for (r, t) in target.into_iter().enumerate() {
                rows.push(cols.iter().map(|c| c[r].clone()).collect());
                rhs.push(t);
            }
        };
        for y in 0..n_obj {
            for i in 0..self.dim(y, x) {
                let f = Self::basis_vec(self.dim(y, x), i);
                let cols = cands.iter().map(|e| self.compose(y, x, x, e, &f)).collect();
                push(cols, f);
            }
            for i in 0..self.dim(x, y) {
                let f = Self::basis_vec(self.dim(x, y), i);
                let cols = cands.iter().map(|e| self.compose(x, x, y, &f, e)).collect();
                push(cols, f);
            }
        }
        if cands.is_empty() {
            return Ok(rhs.iter().all(Ring::is_zero).then(|| vec![R::zero(); dxx]));
        }
        let a = Matrix::from_rows(rows);
        let sol = a
            .solve(&rhs)
            .map_err(|e| AInftyError::NonFieldCoefficients(e.to_string()))?;
        let Solve::Solution(coef) = sol else { return Ok(None) };
        let mut e = vec![R::zero(); dxx];
        for (c, v) in coef.iter().zip(&cands) {
            for (ei, vi) in e.iter_mut().zip(v) {
                *ei = ei.plus(&c.times(vi));
            }
        }
        Ok(Some(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::models;
    use crate::coeff::{rat_int, Fp};
    use num_rational::BigRational;

    fn two_term<R: Ring>() -> AInftyData<R> {
        AInftyData::builder()
            .object("X")
            .generator("a", 0, "X", "X")
            .generator("b", 1, "X", "X")
            .entry(&["a"], "b", R::from_i64(2))
            .build()
            .unwrap()
    }

    #[test]
    fn multiplication_by_two_depends_on_characteristic() {
        assert_eq!(cohomology(&two_term::<BigRational>()).unwrap().dim(0, 0), 0);
        assert_eq!(cohomology(&two_term::<Fp<2>>()).unwrap().dim(0, 0), 2);
    }

    #[test]
    fn sphere_endomorphisms_have_expected_ring_structure() {
        let c = models::zigzag(2);
        let coh = cohomology(&c).unwrap();
        let l = c.object_index("L").unwrap();
        assert_eq!(coh.dim(l, l), 2);
        let e = coh.unit(l).unwrap().to_vec();
        let f = vec![BigRational::from_i64(0), BigRational::from_i64(1)];
        assert_eq!(e, vec![rat_int(1), rat_int(0)]);
        assert_eq!(coh.compose(l, l, l, &e, &e), e);
        assert_eq!(coh.compose(l, l, l, &e, &f), f);
        assert_eq!(coh.compose(l, l, l, &f, &e), f);
        assert!(coh.compose(l, l, l, &f, &f).iter().all(Ring::is_zero));
    }
}
