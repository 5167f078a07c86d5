use rand::Rng;

use super::{BasisKey, InducedModule, InducedVector};
use crate::order::{BoolIndex, MonoIndex, PbwIndex};
use crate::scalar::Scalar;
use crate::superalgebra::{Family, Generator};
use crate::Parity;

/// A random PBW index of total weight at most `max_weight`.
fn random_index(rng: &mut impl Rng, max_weight: u64) -> PbwIndex {
    let mut budget = rng.gen_range(0..=max_weight);
    let mut i = Vec::new();
    let mut j = Vec::new();
    let mut k = Vec::new();
    while budget > 0 {
        let p = rng.gen_range(1..=budget) as u32;
        match rng.gen_range(0..3) {
            0 => i.push((p, 1)),
            1 if !j.contains(&p) => j.push(p),
            1 => continue,
            _ => k.push((p, 1)),
        }
        budget -= p as u64;
        if rng.gen_bool(0.25) {
            break;
        }
    }
    PbwIndex::new(
        MonoIndex::from_entries(i),
        BoolIndex::from_positions(j),
        MonoIndex::from_entries(k),
    )
}

fn random_coeff(rng: &mut impl Rng) -> Scalar {
    let n = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let d = rng.gen_range(1..=3);
    Scalar::ratio(n, d)
}

/// A nonzero vector of homogeneous parity with at most `max_terms` terms,
/// each of total weight at most `max_weight`. Base coordinates are drawn from
/// the basis elements of size at most `sample_bound`.
pub fn random_vector(
    module: &InducedModule,
    rng: &mut impl Rng,
    max_weight: u64,
    max_terms: usize,
    sample_bound: usize,
) -> InducedVector {
    let base = module.base().as_ref();
    let keys = base.basis_sample(sample_bound);
    let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    loop {
        let mut v = module.zero();
        for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
            let index = random_index(rng, max_weight);
            let need = parity.sum(Parity::from_bit((index.j.positions().count() % 2) as u8));
            let choices: Vec<&BasisKey> = keys.iter().filter(|k| base.parity(k) == need).collect();
            if choices.is_empty() {
                continue;
            }
            let key = choices[rng.gen_range(0..choices.len())].clone();
            v.add_term(index, key, &random_coeff(rng));
        }
        if !v.is_zero() {
            return v;
        }
    }
}

/// A random word of `len` Ramond generators with indices in `lo..=hi`.
pub fn random_word(rng: &mut impl Rng, len: usize, lo: i64, hi: i64) -> Vec<Generator> {
    (0..len)
        .map(|_| {
            let family = Family::ALL[rng.gen_range(0..3)];
            Generator::int(family, rng.gen_range(lo..=hi))
        })
        .collect()
}
