use super::{check_dim, check_eps, ModelError, SectionParam};
use crate::registry::Registry;
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// `u_a(z) = r (eps_c s_1 - i eps t_1, eps_c t_1 + i eps s_1, ...)` with
/// `a = (1/2 + i c_1, i c_2, .., i c_n)` already through the base point, or
/// with `a` held fixed.
///
/// Unknowns: `[c_1..c_n, x, y, r, s_1..s_m, t_1..t_m]` where `z = x + i y`,
/// or `[x, y, r, s, t]` for fixed `a`. Equations: real and imaginary parts of
/// the `n` components, `sum s^2 + t^2 = 1`, and (free `a` only) `c_1 = 0`,
/// `sum c^2 = 1/4`, which together with the base-point condition are
/// `pi_std(a) = 0`, `||a||^2 = 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub eps: f64,
    pub n: usize,
    pub fixed_a: Option<SectionParam>,
}

impl ConstraintSystem {
    pub fn free(eps: f64, n: usize) -> Self {
        ConstraintSystem { eps, n, fixed_a: None }
    }

    pub fn with_fixed_section(eps: f64, a: SectionParam) -> Self {
        ConstraintSystem { eps, n: a.dim(), fixed_a: Some(a) }
    }

    pub fn eps_c(&self) -> f64 {
        (1.0 + self.eps * self.eps).sqrt()
    }

    fn offset(&self) -> usize {
        if self.fixed_a.is_some() {
            0
        } else {
            self.n
        }
    }

    pub fn num_vars(&self) -> usize {
        self.offset() + 3 + self.n
    }

    pub fn num_equations(&self) -> usize {
        2 * self.n + 1 + if self.fixed_a.is_some() { 0 } else { 2 }
    }

    /// Real and imaginary parts of `a_j`.
    fn a_parts(&self, v: &DVector<f64>) -> Vec<(f64, f64)> {
        match &self.fixed_a {
            Some(a) => a.a.iter().map(|c| (c.re, c.im)).collect(),
            None => (0..self.n).map(|j| (if j == 0 { 0.5 } else { 0.0 }, v[j])).collect(),
        }
    }

    pub fn section(&self, v: &DVector<f64>) -> SectionParam {
        SectionParam::new(self.a_parts(v).into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
    }

    fn target(&self, v: &DVector<f64>) -> Vec<(f64, f64)> {
        let (o, m) = (self.offset(), self.n / 2);
        let (e, ec, r) = (self.eps, self.eps_c(), v[o + 2]);
        let mut out = Vec::with_capacity(self.n);
        for k in 0..m {
            let (s, t) = (v[o + 3 + k], v[o + 3 + m + k]);
            out.push((r * ec * s, -r * e * t));
            out.push((r * ec * t, r * e * s));
        }
        out
    }

    pub fn residual(&self, v: &DVector<f64>) -> DVector<f64> {
        let (o, m) = (self.offset(), self.n / 2);
        let (x, y) = (v[o], v[o + 1]);
        let mut f = DVector::zeros(self.num_equations());
        for (j, ((al, be), (tr, ti))) in self.a_parts(v).into_iter().zip(self.target(v)).enumerate() {
            f[2 * j] = x * al - y * be + al - tr;
            f[2 * j + 1] = x * be + y * al - be - ti;
        }
        let sphere: f64 = (0..m).map(|k| v[o + 3 + k].powi(2) + v[o + 3 + m + k].powi(2)).sum();
        f[2 * self.n] = sphere - 1.0;
        if self.fixed_a.is_none() {
            f[2 * self.n + 1] = v[0];
            f[2 * self.n + 2] = (0..self.n).map(|j| v[j] * v[j]).sum::<f64>() - 0.25;
        }
        f
    }

    pub fn jacobian(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let (o, m, n) = (self.offset(), self.n / 2, self.n);
        let (e, ec) = (self.eps, self.eps_c());
        let (x, y, r) = (v[o], v[o + 1], v[o + 2]);
        let mut j = DMatrix::zeros(self.num_equations(), self.num_vars());
        for (row, (al, be)) in self.a_parts(v).into_iter().enumerate() {
            let (re, im) = (2 * row, 2 * row + 1);
            if self.fixed_a.is_none() {
                j[(re, row)] = -y;
                j[(im, row)] = x - 1.0;
            }
            j[(re, o)] = al;
            j[(re, o + 1)] = -be;
            j[(im, o)] = be;
            j[(im, o + 1)] = al;
        }
        for k in 0..m {
            let (si, ti) = (o + 3 + k, o + 3 + m + k);
            let (s, t) = (v[si], v[ti]);
            let (a, b) = (4 * k, 4 * k + 2);
            j[(a, o + 2)] = -ec * s;
            j[(a, si)] = -r * ec;
            j[(a + 1, o + 2)] = e * t;
            j[(a + 1, ti)] = r * e;
            j[(b, o + 2)] = -ec * t;
            j[(b, ti)] = -r * ec;
            j[(b + 1, o + 2)] = -e * s;
            j[(b + 1, si)] = -r * e;
            j[(2 * n, si)] = 2.0 * s;
            j[(2 * n, ti)] = 2.0 * t;
        }
        if self.fixed_a.is_none() {
            j[(2 * n + 1, 0)] = 1.0;
            for c in 0..n {
                j[(2 * n + 2, c)] = 2.0 * v[c];
            }
        }
        j
    }

    /// Representative of the `(r, s, t) -> (-r, -s, -t)` orbit with `r >= 0`.
    pub fn normalize(&self, v: &DVector<f64>) -> DVector<f64> {
        let o = self.offset();
        let mut w = v.clone();
        if w[o + 2] < 0.0 {
            for i in o + 2..w.len() {
                w[i] = -w[i];
            }
        }
        w
    }

    /// Inside the closed disk with `0 <= r <= 1`.
    pub fn admissible(&self, v: &DVector<f64>) -> bool {
        let o = self.offset();
        let w = self.normalize(v);
        v[o].hypot(v[o + 1]) <= 1.0 + 1e-12 && w[o + 2] <= 1.0 + 1e-12
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        DVector::from_fn(self.num_vars(), |_, _| rng.random_range(-1.0..1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub seeds: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iter: usize,
    pub orbit_tolerance: f64,
    pub regularity_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { seeds: 200, seed: 0, tolerance: 1e-10, max_iter: 100, orbit_tolerance: 1e-8, regularity_threshold: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionSolution {
    pub eps: f64,
    pub a: SectionParam,
    pub z: Complex64,
    pub r: f64,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub residuals: Vec<f64>,
    pub jacobian_sigma_min: f64,
    pub solver: String,
}

impl SectionSolution {
    fn from_vars(sys: &ConstraintSystem, v: &DVector<f64>, solver: &str) -> Self {
        let v = sys.normalize(v);
        let (o, m) = (sys.offset(), sys.n / 2);
        SectionSolution {
            eps: sys.eps,
            a: sys.section(&v),
            z: Complex64::new(v[o], v[o + 1]),
            r: v[o + 2],
            s: (0..m).map(|k| v[o + 3 + k]).collect(),
            t: (0..m).map(|k| v[o + 3 + m + k]).collect(),
            residuals: sys.residual(&v).iter().copied().collect(),
            jacobian_sigma_min: sigma_min(&sys.jacobian(&v)),
            solver: solver.to_string(),
        }
    }

    /// The real radius `R = z`.
    pub fn radius(&self) -> f64 {
        self.z.re
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, r| a.max(r.abs()))
    }

    pub fn system(&self) -> ConstraintSystem {
        ConstraintSystem::free(self.eps, self.a.dim())
    }

    pub fn variables(&self) -> DVector<f64> {
        let mut v: Vec<f64> = self.a.a.iter().map(|c| c.im).collect();
        v.extend([self.z.re, self.z.im, self.r]);
        v.extend(&self.s);
        v.extend(&self.t);
        DVector::from_vec(v)
    }
}

pub fn sigma_min(j: &DMatrix<f64>) -> f64 {
    j.clone().svd(false, false).singular_values.iter().fold(f64::INFINITY, |a, &s| a.min(s))
}

/// `(eps_c - eps) / (eps_c + eps)`.
pub fn closed_form_radius(eps: f64) -> f64 {
    let ec = (1.0 + eps * eps).sqrt();
    (ec - eps) / (ec + eps)
}

/// For rational `eps` with `1 + eps^2` a rational square, checks exactly that
/// `R = (eps_c - eps)/(eps_c + eps)` satisfies `-R/2 + 1/2 = sqrt(R) eps`.
/// Returns `None` if `eps_c` is irrational.
pub fn exact_consistency(eps: &BigRational) -> Option<(BigRational, bool)> {
    let one = BigRational::from_integer(BigInt::from(1));
    let sq = &one + eps * eps;
    let (n, d) = (sq.numer().sqrt(), sq.denom().sqrt());
    if &n * &n != *sq.numer() || &d * &d != *sq.denom() {
        return None;
    }
    let ec = BigRational::new(n, d);
    let r = (&ec - eps) / (&ec + eps);
    let root = &ec - eps;
    if &root * &root != r {
        return Some((r, false));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let ok = -(&r * &half) + &half == root * eps;
    Some((r, ok))
}

fn newton(sys: &ConstraintSystem, mut v: DVector<f64>, cfg: &SolverConfig) -> Option<DVector<f64>> {
    let mut f = sys.residual(&v);
    for _ in 0..cfg.max_iter {
        if f.amax() < cfg.tolerance * 1e-3 {
            break;
        }
        let j = sys.jacobian(&v);
        let step = match j.clone().lu().solve(&f) {
            Some(s) if s.iter().all(|x| x.is_finite()) => s,
            _ => j.svd(true, true).solve(&f, 1e-14).ok()?,
        };
        let mut lambda = 1.0;
        loop {
            let w = &v - &step * lambda;
            let fw = sys.residual(&w);
            if fw.norm() < f.norm() {
                v = w;
                f = fw;
                break;
            }
            lambda /= 2.0;
            if lambda < 1e-8 {
                return None;
            }
        }
    }
    (f.amax() < cfg.tolerance && v.iter().all(|x| x.is_finite())).then_some(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub seed: u64,
    pub starts: usize,
    pub converged: usize,
    pub admissible: usize,
    /// Distinct admissible solutions up to the `r -> -r` symmetry.
    pub orbits: Vec<DVector<f64>>,
}

/// Damped Newton from `cfg.seeds` random starts.
pub fn newton_orbits(sys: &ConstraintSystem, cfg: &SolverConfig) -> NewtonReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rep = NewtonReport { seed: cfg.seed, starts: cfg.seeds, converged: 0, admissible: 0, orbits: Vec::new() };
    for _ in 0..cfg.seeds {
        let Some(v) = newton(sys, sys.random_start(&mut rng), cfg) else { continue };
        rep.converged += 1;
        if !sys.admissible(&v) {
            continue;
        }
        rep.admissible += 1;
        let w = sys.normalize(&v);
        if !rep.orbits.iter().any(|o| (o - &w).amax() < cfg.orbit_tolerance) {
            rep.orbits.push(w);
        }
    }
    rep
}

pub trait SectionSolver: Send + Sync {
    fn solve(&self, eps: f64, n: usize, cfg: &SolverConfig) -> Result<SectionSolution, ModelError>;
}

/// `a = (1/2, -i/2, 0, ..)`, `z = R`, `r = sqrt(R) = eps_c - eps`, `s_1 = 1`.
pub struct ClosedFormSolver;

impl SectionSolver for ClosedFormSolver {
    fn solve(&self, eps: f64, n: usize, _cfg: &SolverConfig) -> Result<SectionSolution, ModelError> {
        check_eps(eps)?;
        check_dim(n)?;
        let sys = ConstraintSystem::free(eps, n);
        let r = closed_form_radius(eps);
        let mut v = DVector::zeros(sys.num_vars());
        v[1] = -0.5;
        v[n] = r;
        v[n + 2] = r.sqrt();
        v[n + 3] = 1.0;
        Ok(SectionSolution::from_vars(&sys, &v, "closed-form"))
    }
}

pub struct NewtonSolver;

impl SectionSolver for NewtonSolver {
    fn solve(&self, eps: f64, n: usize, cfg: &SolverConfig) -> Result<SectionSolution, ModelError> {
        check_eps(eps)?;
        check_dim(n)?;
        let sys = ConstraintSystem::free(eps, n);
        let rep = newton_orbits(&sys, cfg);
        match rep.orbits.as_slice() {
            [v] => Ok(SectionSolution::from_vars(&sys, v, "newton")),
            [] => Err(ModelError::NewtonDivergence { seed: cfg.seed }),
            _ => Err(ModelError::Disagreement { a: "newton".into(), b: "newton".into(), distance: f64::NAN }),
        }
    }
}

pub fn section_solvers() -> Registry<dyn SectionSolver> {
    let mut r: Registry<dyn SectionSolver> = Registry::new();
    r.register("closed-form", Box::new(ClosedFormSolver)).expect("fresh registry");
    r.register("newton", Box::new(NewtonSolver)).expect("fresh registry");
    r
}

/// Regularity of the full constraint system at `sol`.
pub fn verify_regularity(sol: &SectionSolution, cfg: &SolverConfig) -> Result<f64, ModelError> {
    let res = sol.max_residual();
    if res > cfg.tolerance {
        return Err(ModelError::ResidualTooLarge { residual: res, tolerance: cfg.tolerance });
    }
    let sys = sol.system();
    verify_jacobian(&sys.jacobian(&sol.variables()), cfg.regularity_threshold)
}

pub fn verify_jacobian(j: &DMatrix<f64>, threshold: f64) -> Result<f64, ModelError> {
    let s = sigma_min(j);
    if s > threshold {
        Ok(s)
    } else {
        Err(ModelError::SingularSolution { sigma_min: s })
    }
}

/// Solves with every registered solver and requires agreement to the
/// configured tolerance and regularity.
pub fn solve_through_point(eps: f64, n: usize, cfg: &SolverConfig) -> Result<SectionSolution, ModelError> {
    let reg = section_solvers();
    let mut sols = Vec::new();
    for (name, s) in reg.iter() {
        sols.push((name.to_string(), s.solve(eps, n, cfg)?));
    }
    let (first_name, first) = &sols[0];
    for (name, s) in &sols[1..] {
        let d = (first.variables() - s.variables()).amax();
        if d > cfg.tolerance {
            return Err(ModelError::Disagreement { a: first_name.clone(), b: name.clone(), distance: d });
        }
    }
    let first = first.clone();
    verify_regularity(&first, cfg)?;
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sys in [
            ConstraintSystem::free(0.2, 2),
            ConstraintSystem::free(0.3, 4),
            ConstraintSystem::with_fixed_section(0.1, super::super::circle_point(super::super::Circle::C1, 0.4)),
        ] {
            let v = sys.random_start(&mut rng);
            let j = sys.jacobian(&v);
            let h = 1e-6;
            for c in 0..sys.num_vars() {
                let mut p = v.clone();
                let mut q = v.clone();
                p[c] += h;
                q[c] -= h;
                let d = (sys.residual(&p) - sys.residual(&q)) / (2.0 * h);
                assert!((d - j.column(c)).amax() < 1e-8, "column {c}");
            }
        }
    }

    #[test]
    fn radius_at_one_tenth() {
        let r = closed_form_radius(0.1);
        assert!((r - 0.819_002_487_5).abs() < 1e-9, "{r}");
        let ec = 1.01f64.sqrt();
        assert!((r - (ec - 0.1).powi(2)).abs() < 1e-15);
        assert!(closed_form_radius(1e-9) > 1.0 - 1e-8);
    }

    #[test]
    fn exact_pythagorean_eps() {
        for e in [rat(5, 12), rat(7, 24), rat(9, 40)] {
            let (r, ok) = exact_consistency(&e).unwrap();
            assert!(ok);
            assert!(r < rat(1, 1));
        }
        assert!(exact_consistency(&rat(1, 10)).is_none());
    }

    #[test]
    fn closed_form_and_newton_agree() {
        let cfg = SolverConfig::default();
        for n in [2, 4] {
            let sol = solve_through_point(0.1, n, &cfg).unwrap();
            assert!(sol.max_residual() < 1e-12);
            assert!(sol.jacobian_sigma_min > 1e-6);
            let rr = sol.radius();
            assert!((-rr / 2.0 + 0.5 - rr.sqrt() * 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicated_row_is_singular() {
        let sol = ClosedFormSolver.solve(0.1, 2, &SolverConfig::default()).unwrap();
        let mut j = sol.system().jacobian(&sol.variables());
        let row = j.row(0).clone_owned();
        j.set_row(1, &row);
        assert!(matches!(verify_jacobian(&j, 1e-6), Err(ModelError::SingularSolution { .. })));
    }

    #[test]
    fn out_of_range_eps() {
        let cfg = SolverConfig::default();
        assert_eq!(solve_through_point(0.0, 2, &cfg), Err(ModelError::EpsOutOfRange(0.0)));
        assert_eq!(solve_through_point(0.6, 2, &cfg), Err(ModelError::EpsOutOfRange(0.6)));
        assert_eq!(solve_through_point(0.1, 3, &cfg), Err(ModelError::OddDimension(3)));
    }
}
