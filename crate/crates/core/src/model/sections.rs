use super::{check_dim, ModelError};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub fn pi_std(x: &[Complex64]) -> Complex64 {
    x.iter().map(|v| v * v).sum()
}

/// `u_a(z) = z a + conj(a)`.
pub fn section_value(a: &SectionParam, z: Complex64) -> Vec<Complex64> {
    a.a.iter().map(|v| z * v + v.conj()).collect()
}

/// Evaluation at the boundary point `1`.
pub fn ev1(a: &SectionParam) -> Vec<Complex64> {
    section_value(a, Complex64::new(1.0, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionParam {
    pub a: Vec<Complex64>,
}

impl SectionParam {
    pub fn new(a: Vec<Complex64>) -> Self {
        SectionParam { a }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `(|pi_std(a)|, | ||a||^2 - 1/2 |)`.
    pub fn defects(&self) -> (f64, f64) {
        let norm2: f64 = self.a.iter().map(|v| v.norm_sqr()).sum();
        (pi_std(&self.a).norm(), (norm2 - 0.5).abs())
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let (p, q) = self.defects();
        p <= tol && q <= tol
    }
}

/// The two components of the section space for `n = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Circle {
    /// `a_2 = i a_1`
    C0,
    /// `a_2 = -i a_1`
    C1,
}

pub fn circle_point(c: Circle, theta: f64) -> SectionParam {
    let a1 = Complex64::from_polar(0.5, theta);
    let rot = match c {
        Circle::C0 => Complex64::i(),
        Circle::C1 => -Complex64::i(),
    };
    SectionParam::new(vec![a1, rot * a1])
}

/// Components of the section space. Only `n = 2` has an explicit
/// parametrization; larger `n` go through [`sample_sections`].
pub fn section_circles(n: usize) -> Result<Vec<Circle>, ModelError> {
    check_dim(n)?;
    if n == 2 {
        Ok(vec![Circle::C0, Circle::C1])
    } else {
        Ok(Vec::new())
    }
}

/// The section on each circle through the base point `ev_1 = (1, 0)`.
pub fn base_point_sections() -> [(Circle, SectionParam); 2] {
    [(Circle::C0, circle_point(Circle::C0, 0.0)), (Circle::C1, circle_point(Circle::C1, 0.0))]
}

/// Random points of `{pi_std(a) = 0, ||a||^2 = 1/2}`: `a = x + i y` with
/// `|x| = |y| = 1/2` and `x` orthogonal to `y`.
pub fn sample_sections(n: usize, count: usize, seed: u64) -> Result<Vec<SectionParam>, ModelError> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if nx < 1e-3 {
            continue;
        }
        let x: Vec<f64> = x.iter().map(|v| v / nx).collect();
        let proj: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let y: Vec<f64> = y.iter().zip(&x).map(|(b, a)| b - proj * a).collect();
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if ny < 1e-3 {
            continue;
        }
        out.push(SectionParam::new(x.iter().zip(&y).map(|(a, b)| Complex64::new(a / 2.0, b / (2.0 * ny))).collect()));
    }
    Ok(out)
}

/// Dimension of the solution set at `a`: `2n` minus the numeric rank of the
/// real Jacobian of `(Re pi, Im pi, ||a||^2)`.
pub fn tangent_dimension(a: &SectionParam) -> usize {
    let n = a.dim();
    let mut j = DMatrix::<f64>::zeros(3, 2 * n);
    for (k, v) in a.a.iter().enumerate() {
        let (x, y) = (v.re, v.im);
        j[(0, k)] = 2.0 * x;
        j[(0, n + k)] = -2.0 * y;
        j[(1, k)] = 2.0 * y;
        j[(1, n + k)] = 2.0 * x;
        j[(2, k)] = 2.0 * x;
        j[(2, n + k)] = 2.0 * y;
    }
    2 * n - j.rank(1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn worked_value() {
        let a = SectionParam::new(vec![c(0.5, 0.0), c(0.0, 0.5)]);
        let u = section_value(&a, Complex64::i());
        assert!((u[0] - c(0.5, 0.5)).norm() < 1e-15);
        assert!((u[1] - c(-0.5, -0.5)).norm() < 1e-15);
        assert!((pi_std(&u) - Complex64::i()).norm() < 1e-15);
    }

    #[test]
    fn circles_cover_the_sphere_twice() {
        for c in [Circle::C0, Circle::C1] {
            for k in 0..12 {
                let theta = k as f64 * std::f64::consts::PI / 6.0;
                let a = circle_point(c, theta);
                assert!(a.is_valid(1e-15));
                let e = ev1(&a);
                assert!(e.iter().all(|v| v.im.abs() < 1e-15));
                assert!((e[0].re.hypot(e[1].re) - 1.0).abs() < 1e-15);
                assert!((e[0].re - theta.cos()).abs() < 1e-15);
            }
        }
        let [(_, a0), (_, a1)] = base_point_sections();
        assert!((ev1(&a0)[0] - 1.0).norm() < 1e-15 && (ev1(&a1)[1]).norm() < 1e-15);
        assert_ne!(a0, a1);
    }

    #[test]
    fn sampled_points_have_stiefel_dimension() {
        for n in [2, 4, 6] {
            for a in sample_sections(n, 20, 7).unwrap() {
                assert!(a.is_valid(1e-12));
                assert_eq!(tangent_dimension(&a), 2 * n - 3);
            }
        }
        assert_eq!(section_circles(3), Err(ModelError::OddDimension(3)));
    }
}
