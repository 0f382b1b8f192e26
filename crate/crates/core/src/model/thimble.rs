use super::solver::{newton_orbits, ConstraintSystem, SolverConfig};
use super::{base_point_sections, check_eps, Circle, ModelError};
use crate::coeff::{Ring, TwistedScalar};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use std::f64::consts::PI;

/// The perturbed thimble `T_eps`; `eps = 0` is the real thimble over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThimbleEps {
    pub eps: f64,
}

impl ThimbleEps {
    pub fn eps_c(&self) -> f64 {
        (1.0 + self.eps * self.eps).sqrt()
    }

    pub fn point(&self, r: f64, s: &[f64], t: &[f64]) -> Vec<Complex64> {
        thimble_point(self.eps, r, s, t)
    }
}

pub fn thimble_point(eps: f64, r: f64, s: &[f64], t: &[f64]) -> Vec<Complex64> {
    let ec = (1.0 + eps * eps).sqrt();
    s.iter()
        .zip(t)
        .flat_map(|(&s, &t)| [Complex64::new(r * ec * s, -r * eps * t), Complex64::new(r * ec * t, r * eps * s)])
        .collect()
}

/// How far `p` is from satisfying the defining relations of `T_eps`:
/// the imaginary parts must match those implied by the real parts, and the
/// implied `r` must not exceed 1.
pub fn thimble_defect(p: &[Complex64], eps: f64) -> f64 {
    let ec = (1.0 + eps * eps).sqrt();
    let mut d: f64 = 0.0;
    let mut r2 = 0.0;
    for pair in p.chunks(2) {
        let (rs, rt) = (pair[0].re / ec, pair[1].re / ec);
        r2 += rs * rs + rt * rt;
        d = d.max((pair[0].im + eps * rt).abs()).max((pair[1].im - eps * rs).abs());
    }
    d.max(r2.sqrt() - 1.0)
}

fn dist_at(p: &[Complex64], phi: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, -phi);
    let (mut re2, mut im2) = (0.0, 0.0);
    for v in p {
        let w = rot * v;
        re2 += w.re * w.re;
        im2 += w.im * w.im;
    }
    ((re2.sqrt() - 1.0).powi(2) + im2).sqrt()
}

/// Euclidean distance from `p` to `Q_std = { e^{i phi} x : x in S^{n-1} }`.
pub fn distance_to_q_std(p: &[Complex64]) -> f64 {
    let steps = 180;
    let h = PI / steps as f64;
    let best = (0..steps).map(|k| k as f64 * h).min_by(|a, b| dist_at(p, *a).total_cmp(&dist_at(p, *b))).unwrap();
    let (mut lo, mut hi) = (best - h, best + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if dist_at(p, m1) < dist_at(p, m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist_at(p, (lo + hi) / 2.0).min(dist_at(p, best))
}

fn circle_grid(k: usize) -> impl Iterator<Item = (f64, f64)> {
    (0..k).map(move |i| {
        let a = 2.0 * PI * i as f64 / k as f64;
        (a.cos(), a.sin())
    })
}

/// Minimum distance from a grid sample of `T_eps` (`n = 2`) to `Q_std`.
pub fn disjointness_gap(eps: f64, grid: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=grid {
        let r = i as f64 / grid as f64;
        for (s, t) in circle_grid(grid) {
            best = best.min(distance_to_q_std(&thimble_point(eps, r, &[s], &[t])));
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerationReport {
    /// Largest defect of sampled points of `Sigma_1` in `T_0` and in `Q_std`.
    pub sigma1_defect: f64,
    /// Sampled points of `T_0` within tolerance of `Q_std` that are not in `Sigma_1`.
    pub t0_strays: usize,
    /// Sampled points of `Q_std` within tolerance of `T_0` that are not in `Sigma_1`.
    pub q_strays: usize,
    pub samples: usize,
}

impl DegenerationReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.sigma1_defect <= tol && self.t0_strays == 0 && self.q_strays == 0
    }
}

fn in_sigma1(p: &[Complex64], tol: f64) -> bool {
    let n2: f64 = p.iter().map(|v| v.re * v.re).sum();
    p.iter().all(|v| v.im.abs() <= tol) && (n2.sqrt() - 1.0).abs() <= tol
}

/// Sampled check that `T_0` meets `Q_std` exactly in `Sigma_1` (`n = 2`).
pub fn degeneration_check(grid: usize, tol: f64) -> DegenerationReport {
    let mut rep = DegenerationReport { sigma1_defect: 0.0, t0_strays: 0, q_strays: 0, samples: 0 };
    for (s, t) in circle_grid(grid) {
        let x = [Complex64::new(s, 0.0), Complex64::new(t, 0.0)];
        rep.sigma1_defect = rep.sigma1_defect.max(thimble_defect(&x, 0.0)).max(distance_to_q_std(&x));
        rep.samples += 1;
        for i in 0..=grid {
            let r = i as f64 / grid as f64;
            let p = thimble_point(0.0, r, &[s], &[t]);
            if distance_to_q_std(&p) <= tol && !in_sigma1(&p, tol) {
                rep.t0_strays += 1;
            }
            let q: Vec<Complex64> = x.iter().map(|v| v * Complex64::from_polar(1.0, PI * r)).collect();
            if thimble_defect(&q, 0.0) <= tol && !in_sigma1(&q, tol) {
                rep.q_strays += 1;
            }
            rep.samples += 2;
        }
    }
    rep
}

/// Intersections of the two sections through the base point with `T_eps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dichotomy {
    pub eps: f64,
    pub circles: [Circle; 2],
    /// Intersection numbers with `T_eps`.
    pub counts: [usize; 2],
    /// Orientation signs `s(u_0) = +1`, `s(u_1) = -1`.
    pub signs: [i64; 2],
    pub newton_seed: u64,
}

impl Dichotomy {
    pub fn signed_total(&self) -> i64 {
        self.signs.iter().sum()
    }

    /// Weights `w(u) = count * c`.
    pub fn weights(&self, c: &BigRational) -> [BigRational; 2] {
        self.counts.map(|k| c * BigRational::from_integer(BigInt::from(k)))
    }

    /// `sum_u s(u) t^{w(u)}`.
    pub fn twisted_sum(&self, c: &BigRational) -> TwistedScalar {
        let w = self.weights(c);
        (0..2).fold(TwistedScalar::zero(), |acc, i| {
            acc.plus(&TwistedScalar::monomial(w[i].clone(), BigRational::from_integer(BigInt::from(self.signs[i]))))
        })
    }
}

/// Counts solution orbits of `u_a(z) in T_eps` for the two sections through
/// `ev_1 = (1, 0)`, by multi-start Newton and by the closed form (a solution
/// exists iff `Im a_2 = -1/2`); both must agree.
pub fn weight_dichotomy(eps: f64, cfg: &SolverConfig) -> Result<Dichotomy, ModelError> {
    check_eps(eps)?;
    let secs = base_point_sections();
    let mut counts = [0usize; 2];
    for (i, (_, a)) in secs.iter().enumerate() {
        let closed = usize::from((a.a[1].im + 0.5).abs() < 1e-12);
        let rep = newton_orbits(&ConstraintSystem::with_fixed_section(eps, a.clone()), cfg);
        if rep.orbits.len() != closed {
            return Err(ModelError::Disagreement {
                a: "closed-form".into(),
                b: "newton".into(),
                distance: (rep.orbits.len() as f64 - closed as f64).abs(),
            });
        }
        counts[i] = closed;
    }
    Ok(Dichotomy { eps, circles: [secs[0].0, secs[1].0], counts, signs: [1, -1], newton_seed: cfg.seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;

    #[test]
    fn thimble_projects_to_unit_interval() {
        let th = ThimbleEps { eps: 0.2 };
        for (s, t) in circle_grid(16) {
            for r in [0.0, 0.3, 1.0] {
                let p = th.point(r, &[s], &[t]);
                let pi = super::super::pi_std(&p);
                assert!((pi - Complex64::new(r * r, 0.0)).norm() < 1e-14);
                assert!(thimble_defect(&p, 0.2) < 1e-14);
            }
        }
    }

    #[test]
    fn gap_is_positive_and_closes_at_zero() {
        let g1 = disjointness_gap(0.1, 40);
        let g2 = disjointness_gap(0.3, 40);
        assert!(g1 > 0.0 && g2 > g1, "{g1} {g2}");
        assert!(disjointness_gap(0.0, 40) < 1e-12);
    }

    #[test]
    fn degeneration() {
        assert!(degeneration_check(36, 1e-9).holds(1e-9));
    }

    #[test]
    fn one_section_meets_the_thimble() {
        let d = weight_dichotomy(0.1, &SolverConfig::default()).unwrap();
        assert_eq!(d.counts, [0, 1]);
        assert_eq!(d.signed_total(), 0);
        let sum = d.twisted_sum(&rat_int(1));
        assert!(!sum.is_zero());
        assert!(sum.at_one() == BigRational::from_integer(0.into()));
        assert!(d.twisted_sum(&rat_int(0)).is_zero());
    }
}
