use super::DeformError;
use crate::coeff::Ring;
use crate::linalg::Matrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

type Q = BigRational;

/// Generator degrees and ambient dimension, when the module is graded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub degrees: Vec<i64>,
    pub l: u32,
}

/// Operators `F_q` and differential components `delta_q` subject to
/// `q delta_q = sum_{1 <= i <= q} (delta_{q-i} F_i - F_i delta_{q-i})`.
#[derive(Debug, Clone, PartialEq)]
pub struct FSeriesData {
    dim: usize,
    f: BTreeMap<u32, Matrix<Q>>,
    delta: Vec<Matrix<Q>>,
    grading: Option<Grading>,
}

fn rq(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl FSeriesData {
    /// Validates the structure equation for every provided `delta_q`, `q >= 1`.
    pub fn new(delta: Vec<Matrix<Q>>, f: BTreeMap<u32, Matrix<Q>>, grading: Option<Grading>) -> Result<Self, DeformError> {
        let dim = delta.first().map(Matrix::rows).ok_or_else(|| DeformError::InvalidArgument("delta_0 is required".into()))?;
        let square = |m: &Matrix<Q>| m.rows() == dim && m.cols() == dim;
        if !delta.iter().all(square) || !f.values().all(square) {
            return Err(DeformError::InvalidArgument("all operators must be square of the same size".into()));
        }
        if f.contains_key(&0) {
            return Err(DeformError::InvalidArgument("F_q is indexed from q = 1".into()));
        }
        let fs = FSeriesData { dim, f, delta, grading };
        if let Some(g) = &fs.grading {
            if g.degrees.len() != dim || g.l < 4 || g.l % 2 != 0 {
                return Err(DeformError::InvalidArgument("grading does not fit the module".into()));
            }
            let step = g.l as i64 - 2;
            for (&q, m) in &fs.f {
                fs.check_degree(m, q as i64 * step, q)?;
            }
            for (q, m) in fs.delta.iter().enumerate() {
                fs.check_degree(m, 1 + q as i64 * step, q as u32)?;
            }
        }
        for q in 1..fs.delta.len() as u32 {
            if fs.predicted_delta(q) != fs.delta[q as usize] {
                return Err(DeformError::StructureEquationFailure { q });
            }
        }
        Ok(fs)
    }

    /// `delta_q` for `1 <= q <= max_q` generated from `delta_0` and the `F_i`.
    pub fn from_generators(delta0: Matrix<Q>, f: BTreeMap<u32, Matrix<Q>>, max_q: u32, grading: Option<Grading>) -> Result<Self, DeformError> {
        let mut fs = FSeriesData::new(vec![delta0], f, grading)?;
        fs.extend_deltas(max_q);
        Ok(fs)
    }

    fn check_degree(&self, m: &Matrix<Q>, shift: i64, q: u32) -> Result<(), DeformError> {
        let g = self.grading.as_ref().expect("graded");
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !m.get(i, j).is_zero() && g.degrees[i] != g.degrees[j] + shift {
                    return Err(DeformError::InvalidArgument(format!("operator at q = {q} has the wrong degree")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn f_op(&self, q: u32) -> Option<&Matrix<Q>> {
        self.f.get(&q)
    }

    pub fn f_ops(&self) -> &BTreeMap<u32, Matrix<Q>> {
        &self.f
    }

    pub fn deltas(&self) -> &[Matrix<Q>] {
        &self.delta
    }

    /// Largest `q` with `F_q != 0`.
    pub fn max_q(&self) -> u32 {
        self.f.iter().filter(|(_, m)| !m.is_zero()).map(|(q, _)| *q).max().unwrap_or(0)
    }

    fn predicted_delta(&self, q: u32) -> Matrix<Q> {
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for (&i, fi) in self.f.range(1..=q) {
            let d = &self.delta[(q - i) as usize];
            acc = acc.plus(&d.mul(fi)).minus(&fi.mul(d));
        }
        acc.scale(&(rq(1) / rq(q as i64)))
    }

    /// Appends `delta_q` from the structure equation up to `max_q`.
    pub fn extend_deltas(&mut self, max_q: u32) {
        while (self.delta.len() as u32) <= max_q {
            let q = self.delta.len() as u32;
            let d = self.predicted_delta(q);
            self.delta.push(d);
        }
    }
}

/// Which closed form to use for the inverse series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseFormula {
    /// `(-1)^n F_{i1}..F_{in} / ((i1+..+in)(i2+..+in)..(in))`; the two-sided
    /// inverse of `F`.
    SuffixSums,
    /// `(-1)^n F_{i1}..F_{in} / (i1 (i1+i2) .. (i1+..+in))`; agrees with the
    /// inverse only when the `F_i` commute.
    PrefixSums,
}

/// Truncated series: entry `n` is the coefficient of `h^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FSeries {
    pub f: Vec<Matrix<Q>>,
    pub f_inv: Vec<Matrix<Q>>,
    pub truncation: usize,
    pub warnings: Vec<String>,
}

fn compositions(n: u32, parts: &[u32]) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for &p in parts.iter().filter(|&&p| p <= n) {
        for mut tail in compositions(n - p, parts) {
            tail.insert(0, p);
            out.push(tail);
        }
    }
    out
}

fn word_sum(fs: &FSeriesData, n: u32, sign_alternates: bool, denom: impl Fn(&[u32]) -> i64) -> Matrix<Q> {
    let parts: Vec<u32> = fs.f.iter().filter(|(_, m)| !m.is_zero()).map(|(q, _)| *q).collect();
    let mut acc = Matrix::zeros(fs.dim, fs.dim);
    if n == 0 {
        return Matrix::identity(fs.dim);
    }
    for word in compositions(n, &parts) {
        let mut prod = Matrix::identity(fs.dim);
        for i in &word {
            prod = prod.mul(&fs.f[i]);
        }
        let sign = if sign_alternates && word.len() % 2 == 1 { -1 } else { 1 };
        acc = acc.plus(&prod.scale(&(rq(sign) / rq(denom(&word)))));
    }
    acc
}

fn prefix_product(w: &[u32]) -> i64 {
    let mut s = 0i64;
    w.iter().map(|&i| {
        s += i as i64;
        s
    }).product()
}

fn suffix_product(w: &[u32]) -> i64 {
    let mut s = 0i64;
    w.iter().rev().map(|&i| {
        s += i as i64;
        s
    }).product()
}

pub fn f_series(fs: &FSeriesData, n: usize) -> Result<FSeries, DeformError> {
    f_series_with(fs, n, InverseFormula::SuffixSums)
}

pub fn f_series_with(fs: &FSeriesData, n: usize, formula: InverseFormula) -> Result<FSeries, DeformError> {
    if n < 1 {
        return Err(DeformError::InvalidArgument("truncation must be at least 1".into()));
    }
    let f = (0..=n as u32).map(|k| word_sum(fs, k, false, prefix_product)).collect();
    let f_inv = (0..=n as u32)
        .map(|k| match formula {
            InverseFormula::SuffixSums => word_sum(fs, k, true, suffix_product),
            InverseFormula::PrefixSums => word_sum(fs, k, true, prefix_product),
        })
        .collect();
    let mut warnings = Vec::new();
    if (n as u32) < fs.max_q() {
        warnings.push(format!("TruncationTooSmall: truncation {n} is below the largest nonzero F_q (q = {})", fs.max_q()));
    }
    Ok(FSeries { f, f_inv, truncation: n, warnings })
}

/// Product of truncated series, truncated at `h^n`.
pub fn series_mul(a: &[Matrix<Q>], b: &[Matrix<Q>], n: usize) -> Vec<Matrix<Q>> {
    let dim = a[0].rows();
    (0..=n)
        .map(|k| {
            (0..=k).fold(Matrix::zeros(dim, dim), |acc, i| match (a.get(i), b.get(k - i)) {
                (Some(x), Some(y)) => acc.plus(&x.mul(y)),
                _ => acc,
            })
        })
        .collect()
}

impl FSeries {
    /// Coefficients of `F^{-1} F - id` through the truncation.
    pub fn inverse_defect(&self) -> Vec<Matrix<Q>> {
        let mut p = series_mul(&self.f_inv, &self.f, self.truncation);
        p[0] = p[0].minus(&Matrix::identity(p[0].rows()));
        p
    }

    /// Coefficients of `F F^{-1} - id` through the truncation.
    pub fn right_inverse_defect(&self) -> Vec<Matrix<Q>> {
        let mut p = series_mul(&self.f, &self.f_inv, self.truncation);
        p[0] = p[0].minus(&Matrix::identity(p[0].rows()));
        p
    }

    /// Coefficients of `F^{-1} delta_0 F - sum h^q delta_q`.
    pub fn conjugation_defect(&self, fs: &FSeriesData) -> Vec<Matrix<Q>> {
        let mut fs = fs.clone();
        fs.extend_deltas(self.truncation as u32);
        let d0 = vec![fs.delta[0].clone()];
        let conj = series_mul(&series_mul(&self.f_inv, &d0, self.truncation), &self.f, self.truncation);
        conj.iter().zip(&fs.delta).map(|(c, d)| c.minus(d)).collect()
    }

    pub fn is_exact_inverse(&self) -> bool {
        self.inverse_defect().iter().all(Matrix::is_zero) && self.right_inverse_defect().iter().all(Matrix::is_zero)
    }
}

/// Random ungraded instance: `delta_0 = [[0, 0], [X, 0]]` in block form (so
/// `delta_0^2 = 0`), nonzero integer `F_1..F_max_q` with entries in `-2..=2`,
/// and `delta_q` generated through `extend_to`.
pub fn random_fseries_data(rng: &mut ChaCha8Rng, rank: usize, max_q: u32, extend_to: u32) -> FSeriesData {
    let half = rank / 2;
    let mut d0 = Matrix::zeros(rank, rank);
    for i in half..rank {
        for j in 0..half {
            d0.set(i, j, rq(rng.random_range(-2..=2)));
        }
    }
    let mut f = BTreeMap::new();
    for q in 1..=max_q {
        let m = loop {
            let m = Matrix::from_rows((0..rank).map(|_| (0..rank).map(|_| rq(rng.random_range(-2..=2))).collect()).collect());
            if !m.is_zero() {
                break m;
            }
        };
        f.insert(q, m);
    }
    FSeriesData::from_generators(d0, f, extend_to, None).expect("square operators")
}
