//! Small reference categories used by tests, the CLI and the pipelines.

use super::{AInftyBuilder, AInftyData};
use crate::coeff::Ring;
use num_rational::BigRational;

fn one<R: Ring>() -> R {
    R::one()
}

/// Two objects `X0`, `X1` with units and one degree-zero morphism `m: X0 -> X1`.
pub fn directed_a2() -> AInftyData<BigRational> {
    AInftyData::builder()
        .object("X0")
        .object("X1")
        .generator("e0", 0, "X0", "X0")
        .generator("e1", 0, "X1", "X1")
        .generator("m", 0, "X0", "X1")
        .product("e0", "e0", "e0", one())
        .product("e1", "e1", "e1", one())
        .product("m", "e0", "m", one())
        .product("e1", "m", "m", one())
        .build()
        .expect("directed A2 model is well formed")
}

/// A dga on one object: unit `e`, idempotent `u` of degree 0 and `v = du` of
/// degree 1 with `u v = v`, `v u = 0`.
pub fn interval_dga() -> AInftyData<BigRational> {
    let mut b = AInftyData::builder().object("X");
    for (n, d) in [("e", 0), ("u", 0), ("v", 1)] {
        b = b.generator(n, d, "X", "X");
    }
    for (a2, a1, out) in [
        ("e", "e", "e"),
        ("e", "u", "u"),
        ("u", "e", "u"),
        ("e", "v", "v"),
        ("v", "e", "v"),
        ("u", "u", "u"),
        ("u", "v", "v"),
    ] {
        b = b.product(a2, a1, out, one());
    }
    b.differential("u", "v", one()).build().expect("interval dga is well formed")
}

/// The `A_2` zigzag: two spheres `L`, `S` of dimension `n` meeting once, with
/// `p: L -> S` of degree 0 and `q: S -> L` of degree `n`.
pub fn zigzag(n: i64) -> AInftyData<BigRational> {
    AInftyData::builder()
        .object("L")
        .object("S")
        .generator("eL", 0, "L", "L")
        .generator("fL", n, "L", "L")
        .generator("eS", 0, "S", "S")
        .generator("fS", n, "S", "S")
        .generator("p", 0, "L", "S")
        .generator("q", n, "S", "L")
        .product("eL", "eL", "eL", one())
        .product("eL", "fL", "fL", one())
        .product("fL", "eL", "fL", one())
        .product("eS", "eS", "eS", one())
        .product("eS", "fS", "fS", one())
        .product("fS", "eS", "fS", one())
        .product("p", "eL", "p", one())
        .product("eS", "p", "p", one())
        .product("q", "eS", "q", one())
        .product("eL", "q", "q", one())
        .product("q", "p", "fL", one())
        .product("p", "q", "fS", one())
        .build()
        .expect("zigzag model is well formed")
}

/// Two objects made isomorphic by `f: X -> Y`, `g: Y -> X`.
pub fn isomorphic_pair() -> AInftyData<BigRational> {
    AInftyData::builder()
        .object("X")
        .object("Y")
        .generator("eX", 0, "X", "X")
        .generator("eY", 0, "Y", "Y")
        .generator("f", 0, "X", "Y")
        .generator("g", 0, "Y", "X")
        .product("eX", "eX", "eX", one())
        .product("eY", "eY", "eY", one())
        .product("f", "eX", "f", one())
        .product("eY", "f", "f", one())
        .product("g", "eY", "g", one())
        .product("eX", "g", "g", one())
        .product("g", "f", "eX", one())
        .product("f", "g", "eY", one())
        .build()
        .expect("isomorphic pair is well formed")
}

/// Degrees of the two-object Floer model of `L0 = L` and `L1 = tau^2 L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct FloerDegrees {
    pub n: i64,
    pub a: i64,
    pub a_dual: i64,
}

impl FloerDegrees {
    /// Twisted setting: `|a| = n`, `|a^v| = 0`.
    pub fn twisted(n: i64) -> Self {
        FloerDegrees { n, a: n, a_dual: 0 }
    }

    /// Bulk setting in ambient dimension `l = n`: `|a| = 2n - 2`, `|a^v| = 2 - n`.
    pub fn bulk(n: i64) -> Self {
        FloerDegrees { n, a: 2 * n - 2, a_dual: 2 - n }
    }
}

/// The products of the Floer model that carry the strip count `sigma`, as
/// `(a2, a1, output)` in algebra notation `a2 . a1`.
pub const SIGMA_PRODUCTS: [(&str, &str, &str); 6] = [
    ("adual", "b", "e0"),
    ("b", "adual", "e1"),
    ("b", "f0", "a"),
    ("f1", "b", "a"),
    ("adual", "f1", "bdual"),
    ("f0", "adual", "bdual"),
];

/// Products that do not involve `sigma`.
pub const PLAIN_PRODUCTS: [(&str, &str, &str); 16] = [
    ("e0", "e0", "e0"),
    ("e0", "f0", "f0"),
    ("f0", "e0", "f0"),
    ("e1", "e1", "e1"),
    ("e1", "f1", "f1"),
    ("f1", "e1", "f1"),
    ("b", "e0", "b"),
    ("e1", "b", "b"),
    ("a", "e0", "a"),
    ("e1", "a", "a"),
    ("adual", "e1", "adual"),
    ("e0", "adual", "adual"),
    ("bdual", "e1", "bdual"),
    ("e0", "bdual", "bdual"),
    ("adual", "a", "f0"),
    ("bdual", "b", "f0"),
];

pub const PAIRING_PRODUCTS: [(&str, &str, &str); 2] = [("a", "adual", "f1"), ("b", "bdual", "f1")];

/// Skeleton (objects and generators) of the Floer model.
pub fn floer_skeleton<R: Ring>(deg: FloerDegrees) -> AInftyBuilder<R> {
    AInftyData::builder()
        .object("L0")
        .object("L1")
        .generator("e0", 0, "L0", "L0")
        .generator("f0", deg.n, "L0", "L0")
        .generator("e1", 0, "L1", "L1")
        .generator("f1", deg.n, "L1", "L1")
        .generator("b", 0, "L0", "L1")
        .generator("a", deg.a, "L0", "L1")
        .generator("adual", deg.a_dual, "L1", "L0")
        .generator("bdual", deg.n, "L1", "L0")
}

/// Degree of the second factor, for the sign `(-1)^{|a1|}` of the product
/// conversion.
pub fn floer_degree_of(deg: FloerDegrees, name: &str) -> i64 {
    match name {
        "f0" | "f1" | "bdual" => deg.n,
        "a" => deg.a,
        "adual" => deg.a_dual,
        _ => 0,
    }
}

/// Floer model of the pair `(L, tau^2 L)` in the `A_2` Milnor fibre, with
/// every strip-count product multiplied by `sigma`.
pub fn a2_floer<R: Ring>(deg: FloerDegrees, sigma: R) -> AInftyData<R> {
    let mut b = floer_skeleton::<R>(deg);
    for (a2, a1, out) in PLAIN_PRODUCTS.iter().chain(PAIRING_PRODUCTS.iter()) {
        b = b.product(a2, a1, out, R::one());
    }
    for (a2, a1, out) in SIGMA_PRODUCTS {
        b = b.product(a2, a1, out, sigma.clone());
    }
    b.build().expect("Floer model is well formed")
}
