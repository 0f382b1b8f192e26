//! Picard-Lefschetz reflections on integral intersection lattices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("sphere class has self-pairing {found}, expected {expected}")]
    BadSphereClass { found: i64, expected: String },
    #[error("pairing matrix is not {0}")]
    ParityMismatch(&'static str),
    #[error("pairing matrix is not square of size {0}")]
    Shape(usize),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
}

/// `Even`: the middle dimension is even and the pairing symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionLattice {
    pub labels: Vec<String>,
    pub pairing: Vec<Vec<i64>>,
    pub parity: Parity,
    /// Sign used in the odd case; the even case is normalized by `tau(S) = -S`.
    #[serde(default = "default_odd_sign")]
    pub odd_sign: i64,
}

fn default_odd_sign() -> i64 {
    1
}

pub type Class = Vec<i64>;

impl IntersectionLattice {
    pub fn new(labels: Vec<String>, pairing: Vec<Vec<i64>>, parity: Parity) -> Result<Self, PicardError> {
        let l = IntersectionLattice { labels, pairing, parity, odd_sign: 1 };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<(), PicardError> {
        let n = self.labels.len();
        if self.pairing.len() != n || self.pairing.iter().any(|r| r.len() != n) {
            return Err(PicardError::Shape(n));
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.pairing[i][j], self.pairing[j][i]);
                match self.parity {
                    Parity::Even if a != b => return Err(PicardError::ParityMismatch("symmetric")),
                    Parity::Odd if a != -b => return Err(PicardError::ParityMismatch("antisymmetric")),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// The `A_2` lattice of the Milnor fibre: `<S,S> = <L,L> = -2`, `<L,S> = 1`.
    pub fn a2() -> Self {
        IntersectionLattice::new(vec!["S".into(), "L".into()], vec![vec![-2, 1], vec![1, -2]], Parity::Even)
            .expect("valid lattice")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn basis(&self, label: &str) -> Result<Class, PicardError> {
        let i = self.labels.iter().position(|l| l == label).ok_or_else(|| PicardError::UnknownLabel(label.into()))?;
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Ok(v)
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.pairing[i][j] * yj;
            }
        }
        s
    }

    /// The Picard-Lefschetz sign for twisting along `s`.
    pub fn pl_sign(&self, s: &[i64]) -> Result<i64, PicardError> {
        let ss = self.pair(s, s);
        match self.parity {
            Parity::Even if ss == 2 || ss == -2 => Ok(-2 / ss),
            Parity::Even => Err(PicardError::BadSphereClass { found: ss, expected: "+2 or -2".into() }),
            Parity::Odd if ss == 0 => Ok(self.odd_sign),
            Parity::Odd => Err(PicardError::BadSphereClass { found: ss, expected: "0".into() }),
        }
    }

    /// Matrix of `tau_S` in the basis; column `j` is the image of basis vector `j`.
    pub fn twist_matrix(&self, s: &[i64]) -> Result<Vec<Vec<i64>>, PicardError> {
        let n = self.rank();
        let mut m = vec![vec![0; n]; n];
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let img = dehn_twist_action(self, s, &e)?;
            for i in 0..n {
                m[i][j] = img[i];
            }
        }
        Ok(m)
    }
}

/// `tau_S(x) = x + eps_PL <x, S> S`.
pub fn dehn_twist_action(l: &IntersectionLattice, s: &[i64], x: &[i64]) -> Result<Class, PicardError> {
    let e = l.pl_sign(s)?;
    let k = e * l.pair(x, s);
    Ok(x.iter().zip(s).map(|(a, b)| a + k * b).collect())
}

pub fn twist_power(l: &IntersectionLattice, s: &[i64], x: &[i64], power: u32) -> Result<Class, PicardError> {
    let mut y = x.to_vec();
    for _ in 0..power {
        y = dehn_twist_action(l, s, &y)?;
    }
    Ok(y)
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

pub fn mat_pow(a: &[Vec<i64>], p: u32) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut r: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..p {
        r = mat_mul(&r, a);
    }
    r
}

pub fn is_identity(a: &[Vec<i64>]) -> bool {
    a.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
}

/// `<tau x, tau y> = <x, y>` on all basis pairs.
pub fn preserves_pairing(l: &IntersectionLattice, s: &[i64]) -> Result<bool, PicardError> {
    let n = l.rank();
    let imgs: Vec<Class> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            dehn_twist_action(l, s, &e)
        })
        .collect::<Result<_, _>>()?;
    Ok((0..n).all(|i| (0..n).all(|j| l.pair(&imgs[i], &imgs[j]) == l.pairing[i][j])))
}

/// A random lattice of the given parity and rank with sphere class at basis
/// index 0 (`<S,S> = +-2` when even) and `<e_1, S> != 0` when `rank >= 2`.
pub fn random_lattice(rng: &mut ChaCha8Rng, parity: Parity, rank: usize) -> IntersectionLattice {
    let mut p = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in i..rank {
            let v = rng.random_range(-3..=3);
            match parity {
                Parity::Even => {
                    p[i][j] = v;
                    p[j][i] = v;
                }
                Parity::Odd if i != j => {
                    p[i][j] = v;
                    p[j][i] = -v;
                }
                Parity::Odd => {}
            }
        }
    }
    if parity == Parity::Even {
        p[0][0] = if rng.random_bool(0.5) { 2 } else { -2 };
    }
    if rank >= 2 && p[1][0] == 0 {
        let v = if rng.random_bool(0.5) { 1 } else { -1 };
        p[1][0] = v;
        p[0][1] = if parity == Parity::Even { v } else { -v };
    }
    IntersectionLattice::new((0..rank).map(|i| format!("x{i}")).collect(), p, parity).expect("constructed valid")
}

pub fn random_lattices(seed: u64, parity: Parity, count: usize, max_rank: usize) -> Vec<IntersectionLattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.random_range(1..=max_rank);
            random_lattice(&mut rng, parity, r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_squared_twist_is_trivial() {
        let l = IntersectionLattice::a2();
        let s = l.basis("S").unwrap();
        let x = l.basis("L").unwrap();
        assert_eq!(dehn_twist_action(&l, &s, &s).unwrap(), vec![-1, 0]);
        assert_eq!(dehn_twist_action(&l, &s, &x).unwrap(), vec![1, 1]);
        assert_eq!(twist_power(&l, &s, &x, 2).unwrap(), x);
        assert!(is_identity(&mat_pow(&l.twist_matrix(&s).unwrap(), 2)));
    }

    #[test]
    fn orthogonal_class_is_fixed() {
        let l = IntersectionLattice::new(vec!["S".into(), "y".into()], vec![vec![2, 0], vec![0, 5]], Parity::Even).unwrap();
        let (s, y) = (l.basis("S").unwrap(), l.basis("y").unwrap());
        assert_eq!(dehn_twist_action(&l, &s, &y).unwrap(), y);
    }

    #[test]
    fn odd_iterates_are_distinct() {
        let l = IntersectionLattice::new(vec!["S".into(), "L".into()], vec![vec![0, -1], vec![1, 0]], Parity::Odd).unwrap();
        let (s, x) = (l.basis("S").unwrap(), l.basis("L").unwrap());
        for k in 0..=10 {
            assert_eq!(twist_power(&l, &s, &x, k).unwrap(), vec![k as i64, 1]);
        }
    }

    #[test]
    fn bad_inputs() {
        let l = IntersectionLattice::new(vec!["S".into()], vec![vec![4]], Parity::Even).unwrap();
        assert!(matches!(l.pl_sign(&[1]), Err(PicardError::BadSphereClass { found: 4, .. })));
        assert_eq!(
            IntersectionLattice::new(vec!["a".into(), "b".into()], vec![vec![0, 1], vec![2, 0]], Parity::Even),
            Err(PicardError::ParityMismatch("symmetric"))
        );
        assert_eq!(l.basis("T"), Err(PicardError::UnknownLabel("T".into())));
    }

    #[test]
    fn json_round_trip() {
        let l = IntersectionLattice::a2();
        let s = serde_json::to_string(&l).unwrap();
        let back: IntersectionLattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        let minimal: IntersectionLattice =
            serde_json::from_str(r#"{"labels":["S"],"pairing":[[0]],"parity":"odd"}"#).unwrap();
        assert_eq!(minimal.odd_sign, 1);
    }
}
