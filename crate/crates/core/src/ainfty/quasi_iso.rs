use super::{AInftyError, CohomologyCategory};
use crate::coeff::Ring;
use crate::linalg::{Matrix, Solve};
use crate::registry::Registry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum QuasiIsoVerdict<R> {
    /// Classes `f: x -> y`, `g: y -> x` (coordinates in the cohomology bases)
    /// with `g f = e_x` and `f g = e_y`, checked exactly.
    Isomorphic { f: Vec<R>, g: Vec<R>, strategy: String },
    /// Certified: no pair of degree-zero classes can compose to the units.
    Refuted { note: String },
    /// Search exhausted its budget without a witness or a refutation.
    NotFound { candidates_tried: usize },
}

impl<R> QuasiIsoVerdict<R> {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, QuasiIsoVerdict::Isomorphic { .. })
    }
    pub fn is_refuted(&self) -> bool {
        matches!(self, QuasiIsoVerdict::Refuted { .. })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiIsoConfig {
    /// Strategy names tried in order.
    pub strategies: Vec<String>,
    pub seed: u64,
    pub coefficient_bound: i64,
    pub exhaustive_limit: usize,
    pub random_budget: usize,
}

impl Default for QuasiIsoConfig {
    fn default() -> Self {
        QuasiIsoConfig {
            strategies: vec!["exhaustive".into(), "randomized".into()],
            seed: 0,
            coefficient_bound: 2,
            exhaustive_limit: 100_000,
            random_budget: 2_000,
        }
    }
}

/// Everything a witness search needs: degree-zero spanning sets and units.
pub struct WitnessProblem<'a, R> {
    pub coh: &'a CohomologyCategory<R>,
    pub x: usize,
    pub y: usize,
    pub f_basis: Vec<Vec<R>>,
    pub g_basis: Vec<Vec<R>>,
    pub e_x: Vec<R>,
    pub e_y: Vec<R>,
}

fn combine<R: Ring>(coeffs: &[R], basis: &[Vec<R>], len: usize) -> Vec<R> {
    let mut out = vec![R::zero(); len];
    for (c, v) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.plus(&c.times(x));
        }
    }
    out
}

impl<R: Ring> WitnessProblem<'_, R> {
    pub fn gf(&self, g: &[R], f: &[R]) -> Vec<R> {
        self.coh.compose(self.x, self.y, self.x, g, f)
    }

    pub fn fg(&self, f: &[R], g: &[R]) -> Vec<R> {
        self.coh.compose(self.y, self.x, self.y, f, g)
    }

    pub fn verify(&self, f: &[R], g: &[R]) -> bool {
        self.gf(g, f) == self.e_x && self.fg(f, g) == self.e_y
    }

    pub fn f_from(&self, coeffs: &[R]) -> Vec<R> {
        combine(coeffs, &self.f_basis, self.coh.dim(self.x, self.y))
    }

    /// Solves `g f = e_x` for `g` in the span of `g_basis`, then checks `f g = e_y`.
    pub fn complete(&self, f: &[R]) -> Option<Vec<R>> {
        if self.g_basis.is_empty() {
            return None;
        }
        let cols: Vec<Vec<R>> = self.g_basis.iter().map(|g| self.gf(g, f)).collect();
        let a = Matrix::from_columns(self.e_x.len(), &cols);
        let Ok(Solve::Solution(beta)) = a.solve(&self.e_x) else { return None };
        let g = combine(&beta, &self.g_basis, self.coh.dim(self.y, self.x));
        self.verify(f, &g).then_some(g)
    }

    /// True when `target` is not in the span of all products `u . v`.
    fn outside_span(&self, target: &[R], products: Vec<Vec<R>>) -> bool {
        if target.iter().all(Ring::is_zero) {
            return false;
        }
        if products.is_empty() {
            return true;
        }
        let a = Matrix::from_columns(target.len(), &products);
        matches!(a.solve(target), Ok(Solve::Inconsistent { .. }))
    }

    pub fn refutation(&self) -> Option<String> {
        let mut gfs = Vec::new();
        let mut fgs = Vec::new();
        for g in &self.g_basis {
            for f in &self.f_basis {
                gfs.push(self.gf(g, f));
                fgs.push(self.fg(f, g));
            }
        }
        if self.outside_span(&self.e_x, gfs) {
            return Some("unit of the source is not in the span of the composites g.f".into());
        }
        if self.outside_span(&self.e_y, fgs) {
            return Some("unit of the target is not in the span of the composites f.g".into());
        }
        None
    }
}

pub struct SearchOutcome<R> {
    pub witness: Option<(Vec<R>, Vec<R>)>,
    pub tried: usize,
}

/// Strategy for discovering witness pairs. Witnesses are always verified
/// exactly; only the discovery differs.
pub trait WitnessSearch<R: Ring>: Send + Sync {
    fn search(&self, p: &WitnessProblem<'_, R>, cfg: &QuasiIsoConfig) -> SearchOutcome<R>;
}

/// Enumerates integer combinations of the degree-zero basis of `hom(x, y)`.
pub struct ExhaustiveSearch;

impl<R: Ring> WitnessSearch<R> for ExhaustiveSearch {
    fn search(&self, p: &WitnessProblem<'_, R>, cfg: &QuasiIsoConfig) -> SearchOutcome<R> {
        let m = p.f_basis.len();
        let b = cfg.coefficient_bound;
        let mut digits = vec![-b; m];
        let mut tried = 0;
        if m == 0 {
            return SearchOutcome { witness: None, tried };
        }
        loop {
            if digits.iter().any(|&d| d != 0) {
                tried += 1;
                let coeffs: Vec<R> = digits.iter().map(|&d| R::from_i64(d)).collect();
                let f = p.f_from(&coeffs);
                if let Some(g) = p.complete(&f) {
                    return SearchOutcome { witness: Some((f, g)), tried };
                }
                if tried >= cfg.exhaustive_limit {
                    return SearchOutcome { witness: None, tried };
                }
            }
            let mut i = 0;
            loop {
                if i == m {
                    return SearchOutcome { witness: None, tried };
                }
                digits[i] += 1;
                if digits[i] <= b {
                    break;
                }
                digits[i] = -b;
                i += 1;
            }
        }
    }
}

/// Seeded random integer combinations with a wider coefficient range.
pub struct RandomizedSearch;

impl<R: Ring> WitnessSearch<R> for RandomizedSearch {
    fn search(&self, p: &WitnessProblem<'_, R>, cfg: &QuasiIsoConfig) -> SearchOutcome<R> {
        let m = p.f_basis.len();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let range = 5 * cfg.coefficient_bound.max(1);
        let mut tried = 0;
        if m == 0 {
            return SearchOutcome { witness: None, tried };
        }
        while tried < cfg.random_budget {
            tried += 1;
            let coeffs: Vec<R> = (0..m).map(|_| R::from_i64(rng.random_range(-range..=range))).collect();
            let f = p.f_from(&coeffs);
            if let Some(g) = p.complete(&f) {
                return SearchOutcome { witness: Some((f, g)), tried };
            }
        }
        SearchOutcome { witness: None, tried }
    }
}

pub fn witness_registry<R: Ring>() -> Registry<dyn WitnessSearch<R>> {
    let mut r: Registry<dyn WitnessSearch<R>> = Registry::new();
    r.register("exhaustive", Box::new(ExhaustiveSearch)).expect("fresh registry");
    r.register("randomized", Box::new(RandomizedSearch)).expect("fresh registry");
    r
}

pub fn is_quasi_isomorphic<R: Ring>(
    coh: &CohomologyCategory<R>,
    x: usize,
    y: usize,
    cfg: &QuasiIsoConfig,
) -> Result<QuasiIsoVerdict<R>, AInftyError> {
    let name = |o: usize| coh.data().objects()[o].clone();
    let e_x = coh.unit(x).ok_or_else(|| AInftyError::NotUnital(name(x)))?.to_vec();
    let e_y = coh.unit(y).ok_or_else(|| AInftyError::NotUnital(name(y)))?.to_vec();
    if x == y {
        return Ok(QuasiIsoVerdict::Isomorphic { f: e_x.clone(), g: e_x, strategy: "identity".into() });
    }
    let p = WitnessProblem {
        coh,
        x,
        y,
        f_basis: coh.degree_zero_basis(x, y),
        g_basis: coh.degree_zero_basis(y, x),
        e_x,
        e_y,
    };
    if let Some(note) = p.refutation() {
        return Ok(QuasiIsoVerdict::Refuted { note });
    }
    let registry = witness_registry::<R>();
    let mut tried = 0;
    for s in &cfg.strategies {
        let strat = registry.get(s).map_err(|e| AInftyError::InvalidArgument(e.to_string()))?;
        let out = strat.search(&p, cfg);
        tried += out.tried;
        if let Some((f, g)) = out.witness {
            return Ok(QuasiIsoVerdict::Isomorphic { f, g, strategy: s.clone() });
        }
    }
    Ok(QuasiIsoVerdict::NotFound { candidates_tried: tried })
}
