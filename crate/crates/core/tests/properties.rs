use floer_core::ainfty::{check_ainfty, models};
use floer_core::coeff::{rat, Fp, GradedLaurent, Ring, TwistedFraction, TwistedScalar};
use floer_core::deform::{f_series, gauge_shift, random_fseries_data, twist, GaugePotential};
use floer_core::pipeline::{twisted_floer, WeightedCount};
use floer_core::model::{pi_std, sample_sections, section_value};
use floer_core::picard::{dehn_twist_action, preserves_pairing, random_lattice, Parity};
use floer_core::trees::enumerate_stable;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn twisted() -> impl Strategy<Value = TwistedScalar> {
    prop::collection::vec((small_rat(), small_rat()), 0..4).prop_map(|terms| {
        terms.into_iter().fold(TwistedScalar::zero(), |acc, (e, c)| acc.plus(&TwistedScalar::monomial(e, c)))
    })
}

fn laurent() -> impl Strategy<Value = GradedLaurent<6>> {
    prop::collection::vec((-3i64..=3, small_rat()), 0..4).prop_map(|terms| {
        terms.into_iter().fold(GradedLaurent::zero(), |acc, (q, c)| acc.plus(&GradedLaurent::monomial(q, c)))
    })
}

fn fp() -> impl Strategy<Value = Fp<7>> {
    (0i64..7).prop_map(Fp::new)
}

fn ring_axioms<R: Ring>(a: &R, b: &R, c: &R) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.plus(b), b.plus(a));
    prop_assert_eq!(a.times(b), b.times(a));
    prop_assert_eq!(a.plus(b).plus(c), a.plus(&b.plus(c)));
    prop_assert_eq!(a.times(b).times(c), a.times(&b.times(c)));
    prop_assert_eq!(a.times(&b.plus(c)), a.times(b).plus(&a.times(c)));
    prop_assert!(a.plus(&a.negate()).is_zero());
    prop_assert_eq!(a.times(&R::one()), a.clone());
    if let Some(inv) = a.try_inverse() {
        prop_assert!(a.times(&inv).is_one());
    }
    let round = R::parse(&a.to_string()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&round, a);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twisted_scalars_form_a_ring(a in twisted(), b in twisted(), c in twisted()) {
        ring_axioms(&a, &b, &c)?;
        prop_assert_eq!(a.times(&b).at_one(), a.at_one() * b.at_one());
    }

    #[test]
    fn laurent_polynomials_form_a_ring(a in laurent(), b in laurent(), c in laurent()) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn prime_field_axioms(a in fp(), b in fp(), c in fp()) {
        ring_axioms(&a, &b, &c)?;
        prop_assert_eq!(a.is_zero(), a.try_inverse().is_none());
    }

    #[test]
    fn fractions_invert_nonzero_scalars(a in twisted()) {
        prop_assume!(!a.is_zero());
        let f = a.to_fraction();
        let inv = f.try_inverse().expect("nonzero");
        prop_assert!(f.times(&inv).is_one());
        prop_assert_eq!(inv.times(&f), TwistedFraction::one());
    }

    #[test]
    fn hbar_degree_is_additive(p in -4i64..=4, q in -4i64..=4) {
        let (x, y) = (GradedLaurent::<8>::hbar_pow(p), GradedLaurent::<8>::hbar_pow(q));
        prop_assert_eq!(x.times(&y).degree(), Some((p + q) * (2 - 8)));
    }

    #[test]
    fn fseries_inverts_and_conjugates(seed in any::<u64>(), rank in 1usize..=5, max_q in 1u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = random_fseries_data(&mut rng, rank, max_q, 5);
        let s = f_series(&fs, 5).unwrap();
        prop_assert!(s.is_exact_inverse());
        prop_assert!(s.conjugation_defect(&fs).iter().all(|m| m.is_zero()));
    }

    #[test]
    fn gauge_shift_is_an_involution(c in small_rat(), alpha in prop::collection::vec(small_rat(), 8)) {
        prop_assume!(c != rat(0, 1));
        let counts = [WeightedCount::new(1, rat(0, 1)), WeightedCount::new(-1, c)];
        let (tw, w) = twisted_floer(models::FloerDegrees::twisted(2), &counts).unwrap();
        let base = tw.map_coeffs(TwistedScalar::at_one);
        let g = GaugePotential { alpha: base.generators().iter().map(|g| g.name.clone()).zip(alpha).collect() };
        let there = gauge_shift(&w, &g);
        prop_assert_eq!(gauge_shift(&there, &g.negated()), w.clone());
        let sh = twist(&base, &there).unwrap();
        prop_assert!(check_ainfty(&sh).passed);
        prop_assert_eq!(sh.map_coeffs(TwistedScalar::at_one), base);
    }

    #[test]
    fn twists_preserve_the_pairing(seed in any::<u64>(), rank in 1usize..=6, even in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let parity = if even { Parity::Even } else { Parity::Odd };
        let l = random_lattice(&mut rng, parity, rank);
        let s = l.basis(&l.labels[0]).unwrap();
        prop_assert!(preserves_pairing(&l, &s).unwrap());
        let ts = dehn_twist_action(&l, &s, &s).unwrap();
        let expected: Vec<i64> = s.iter().map(|v| if even { -v } else { *v }).collect();
        prop_assert_eq!(ts, expected);
    }

    #[test]
    fn sections_cover_the_base(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let z = Complex64::new(re, im);
        for n in [2usize, 4] {
            for a in sample_sections(n, 3, seed).unwrap() {
                prop_assert!(a.is_valid(1e-12));
                prop_assert!((pi_std(&section_value(&a, z)) - z).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn contraction_lowers_codimension_within_the_family() {
    for k in 2..=5 {
        let trees = enumerate_stable(k).unwrap();
        let names: BTreeSet<String> = trees.iter().map(|t| t.canonical()).collect();
        for t in &trees {
            assert!(t.codim() <= k - 2);
            for (e, _) in t.internal_edges() {
                let c = t.contract(e).unwrap();
                assert_eq!(c.codim() + 1, t.codim());
                assert!(names.contains(&c.canonical()), "{}", c.canonical());
            }
        }
    }
}
