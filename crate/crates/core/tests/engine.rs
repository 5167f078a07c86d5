use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shv_core::induced::{
    random_vector, random_word, strategy_registry, verma, BasisKey, InducedError, InducedModule, WhittakerBase,
};
use shv_core::superalgebra::{generator_bracket, AlgebraTag, Family, Generator, SuperElement};
use shv_core::{Parity, Scalar};

fn verma_with(strategy: &str) -> InducedModule {
    let s = strategy_registry().get(strategy).unwrap();
    InducedModule::new(Arc::new(verma(Scalar::from_int(2), Scalar::one()))).with_strategy(s)
}

fn whittaker() -> InducedModule {
    let phi = BTreeMap::from([(Generator::int(Family::I, 1), Scalar::one())]);
    InducedModule::new(Arc::new(WhittakerBase::new(1, phi, Scalar::one()).unwrap()))
}

#[test]
fn strategies_agree() {
    let left = verma_with("leftmost");
    let right = verma_with("rightmost");
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let len = rand::Rng::gen_range(&mut rng, 0..=6);
        let word = random_word(&mut rng, len, -5, 5);
        for key in [BasisKey::Index(0), BasisKey::Index(1)] {
            let a = left.word_on_base(&word, key.clone()).unwrap();
            let b = right.word_on_base(&word, key).unwrap();
            assert_eq!(a, b, "{word:?}");
        }
    }
}

#[test]
fn g_squares_are_half_brackets() {
    let m = verma_with("leftmost");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for a in -4..=4 {
        let g = Generator::int(Family::G, a);
        for _ in 0..5 {
            let u = random_vector(&m, &mut rng, 4, 2, 2);
            let twice = m.act_word(&[g, g], &u).unwrap();
            let via_i = m.act(Generator::int(Family::I, 2 * a), &u).unwrap();
            assert_eq!(twice, via_i, "G_{a} on {u:?}");
        }
    }
}

fn check_module_axiom(m: &InducedModule, seed: u64, count: usize, max_weight: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let v = random_vector(m, &mut rng, max_weight, 2, 2);
        let xy = random_word(&mut rng, 2, -3, 3);
        let (x, y) = (xy[0], xy[1]);
        let lhs = m.act_word(&[x, y], &v).unwrap().sub(
            &m.act_word(&[y, x], &v)
                .unwrap()
                .scale(&Parity::swap_sign(x.parity(), y.parity())),
        );
        let rhs = match generator_bracket(x, y) {
            Some((c, g)) => {
                let e = SuperElement::from_terms(AlgebraTag::Ramond, [(g, c)]).unwrap();
                m.act_element(&e, &v).unwrap()
            }
            None => m.zero(),
        };
        assert_eq!(lhs, rhs, "[{x}, {y}] on {v:?}");
    }
}

#[test]
fn verma_module_axiom() {
    check_module_axiom(&verma_with("leftmost"), 9, 100, 4);
}

#[test]
fn whittaker_module_axiom() {
    check_module_axiom(&whittaker(), 10, 60, 3);
}

#[test]
fn generators_respect_parity() {
    let m = verma_with("leftmost");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let v = random_vector(&m, &mut rng, 4, 3, 2);
        let p = v.parity(m.base().as_ref()).expect("homogeneous");
        let g = random_word(&mut rng, 1, -4, 4)[0];
        let w = m.act(g, &v).unwrap();
        if !w.is_zero() {
            assert_eq!(w.parity(m.base().as_ref()), Some(p.sum(g.parity())));
        }
    }
}

#[test]
fn fuel_is_enforced() {
    let m = verma_with("leftmost").with_fuel(3);
    let word: Vec<Generator> = (1..=4)
        .map(|n| Generator::int(Family::L, n))
        .chain([Generator::int(Family::L, -4)])
        .collect();
    let got = m.word_on_base(&word, BasisKey::Index(0));
    assert!(matches!(got, Err(InducedError::FuelExhausted(3))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_linear(seed in any::<u64>(), a in -6i64..6, b in 1i64..4, n in -4i64..4, f in 0..3usize) {
        let m = verma_with("leftmost");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_vector(&m, &mut rng, 3, 2, 2);
        let v = random_vector(&m, &mut rng, 3, 2, 2);
        let k = Scalar::ratio(a, b);
        let g = Generator::int(Family::ALL[f], n);
        let lhs = m.act(g, &u.scale(&k).add(&v)).unwrap();
        let rhs = m.act(g, &u).unwrap().scale(&k).add(&m.act(g, &v).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
