//! PBW straightening for a module induced from a subalgebra.
//!
//! A term is a word of generators followed by a basis element of the module
//! being induced from. Letters outside the acting subalgebra ("creation"
//! letters) are sorted into canonical order; every other letter is moved to
//! the right end and handed to the bottom action.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{BasisKey, Coords, InducedError};
use crate::registry::Registry;
use crate::scalar::Scalar;
use crate::superalgebra::{generator_bracket, Family, Generator};
use crate::Parity;

pub type Word = Vec<Generator>;

/// Default number of rewrites per straightening call.
pub const DEFAULT_FUEL: u64 = 1_000_000;

/// The fuel bound, overridable through `SHV_FUEL`.
pub fn fuel_from_env() -> u64 {
    std::env::var("SHV_FUEL")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_FUEL)
}

/// What distinguishes one induction from another.
pub trait InductionRules {
    /// Letters that stay in the word as basis letters.
    fn is_creation(&self, g: &Generator) -> bool;

    /// Action of a non-creation letter on a basis element of the inducing module.
    fn bottom(&self, g: Generator, key: &BasisKey) -> Result<Coords, InducedError>;
}

/// Sort key: I block, then G, then L, each by increasing index. Non-creation
/// letters sort after everything.
fn letter_key(rules: &dyn InductionRules, g: &Generator) -> (u8, i64) {
    if !rules.is_creation(g) {
        return (3, 0);
    }
    let block = match g.family {
        Family::I => 0,
        Family::G => 1,
        Family::L => 2,
    };
    (block, g.index.doubled())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Redex {
    /// Adjacent letters out of order.
    Swap,
    /// `G_a G_a` of creation letters.
    Square,
    /// A non-creation letter at the right end.
    Bottom,
}

fn redex_at(rules: &dyn InductionRules, word: &Word, p: usize) -> Option<Redex> {
    if p + 1 == word.len() {
        return (!rules.is_creation(&word[p])).then_some(Redex::Bottom);
    }
    let (x, y) = (&word[p], &word[p + 1]);
    let (kx, ky) = (letter_key(rules, x), letter_key(rules, y));
    if kx > ky {
        Some(Redex::Swap)
    } else if kx == ky && kx.0 != 3 && x == y && x.family == Family::G {
        Some(Redex::Square)
    } else {
        None
    }
}

/// Which reducible position to rewrite next.
pub trait ReductionStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn pick(&self, len: usize, reducible: &dyn Fn(usize) -> bool) -> Option<usize>;
}

pub struct Leftmost;

impl ReductionStrategy for Leftmost {
    fn name(&self) -> &'static str {
        "leftmost"
    }

    fn pick(&self, len: usize, reducible: &dyn Fn(usize) -> bool) -> Option<usize> {
        (0..len).find(|&p| reducible(p))
    }
}

pub struct Rightmost;

impl ReductionStrategy for Rightmost {
    fn name(&self) -> &'static str {
        "rightmost"
    }

    fn pick(&self, len: usize, reducible: &dyn Fn(usize) -> bool) -> Option<usize> {
        (0..len).rev().find(|&p| reducible(p))
    }
}

pub fn strategy_registry() -> Registry<dyn ReductionStrategy> {
    let mut r: Registry<dyn ReductionStrategy> = Registry::new("reduction strategy", "leftmost");
    r.register("leftmost", Arc::new(Leftmost));
    r.register("rightmost", Arc::new(Rightmost));
    r
}

pub type Terms = BTreeMap<(Word, BasisKey), Scalar>;

fn accumulate(map: &mut Terms, key: (Word, BasisKey), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(key.clone()).or_default();
    *slot += &c;
    if slot.is_zero() {
        map.remove(&key);
    }
}

/// Rewrite `start` until every word is a canonical product of creation
/// letters.
pub fn straighten(
    rules: &dyn InductionRules,
    strategy: &dyn ReductionStrategy,
    start: Terms,
    fuel: u64,
) -> Result<Terms, InducedError> {
    let mut pending = start;
    let mut done = Terms::new();
    let mut spent = 0u64;
    while let Some(((word, key), c)) = pending.pop_first() {
        let found = strategy.pick(word.len(), &|p| redex_at(rules, &word, p).is_some());
        let Some(p) = found else {
            accumulate(&mut done, (word, key), c);
            continue;
        };
        spent += 1;
        if spent > fuel {
            return Err(InducedError::FuelExhausted(fuel));
        }
        match redex_at(rules, &word, p).expect("picked a redex") {
            Redex::Swap => {
                let (x, y) = (word[p], word[p + 1]);
                let mut swapped = word.clone();
                swapped.swap(p, p + 1);
                let sign = Parity::swap_sign(x.parity(), y.parity());
                accumulate(&mut pending, (swapped, key.clone()), &c * &sign);
                if let Some((k, g)) = generator_bracket(x, y) {
                    let mut merged = word[..p].to_vec();
                    merged.push(g);
                    merged.extend_from_slice(&word[p + 2..]);
                    accumulate(&mut pending, (merged, key), &c * &k);
                }
            }
            Redex::Square => {
                // G_a G_a = ½[G_a, G_a] = I_{2a}.
                let g = word[p];
                let mut merged = word[..p].to_vec();
                merged.push(Generator::new(Family::I, g.index + g.index));
                merged.extend_from_slice(&word[p + 2..]);
                accumulate(&mut pending, (merged, key), c);
            }
            Redex::Bottom => {
                let g = word[p];
                let rest = word[..p].to_vec();
                for (k2, d) in rules.bottom(g, &key)? {
                    accumulate(&mut pending, (rest.clone(), k2), &c * &d);
                }
            }
        }
    }
    Ok(done)
}
