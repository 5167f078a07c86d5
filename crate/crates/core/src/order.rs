//! Index vectors `𝐌`, `𝐌̂`, PBW monomials and the total orders on them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::registry::Registry;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("operation needs a nonzero index vector")]
pub struct ZeroIndex;

/// Operations shared by `𝐌` and `𝐌̂`.
pub trait IndexVector: Clone + Eq {
    /// Nonzero entries `(position, exponent)` by increasing position.
    fn entries(&self) -> Vec<(u32, u32)>;

    fn is_zero(&self) -> bool {
        self.entries().is_empty()
    }

    /// `Σ s · i_s`.
    fn weight(&self) -> u64 {
        self.entries().iter().map(|&(p, e)| p as u64 * e as u64).sum()
    }

    /// The exponent sum.
    fn length(&self) -> u64 {
        self.entries().iter().map(|&(_, e)| e as u64).sum()
    }

    fn min_support(&self) -> Result<u32, ZeroIndex> {
        self.entries().first().map(|&(p, _)| p).ok_or(ZeroIndex)
    }

    /// `i - ε_p` for the smallest supported position `p`.
    fn lower_prime(&self) -> Result<Self, ZeroIndex>;
}

/// An element of `𝐌`: finitely supported exponents at positions `p ≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MonoIndex(BTreeMap<u32, u32>);

impl MonoIndex {
    pub fn zero() -> Self {
        MonoIndex::default()
    }

    /// `e · ε_p`.
    pub fn unit(p: u32, e: u32) -> Self {
        MonoIndex::from_entries([(p, e)])
    }

    /// Panics on position 0; zero exponents are dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (p, e) in entries {
            assert!(p >= 1, "positions start at 1");
            if e > 0 {
                *m.entry(p).or_insert(0) += e;
            }
        }
        MonoIndex(m)
    }

    pub fn get(&self, p: u32) -> u32 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn increment(&mut self, p: u32) {
        assert!(p >= 1, "positions start at 1");
        *self.0.entry(p).or_insert(0) += 1;
    }
}

impl IndexVector for MonoIndex {
    fn entries(&self) -> Vec<(u32, u32)> {
        self.0.iter().map(|(&p, &e)| (p, e)).collect()
    }

    fn lower_prime(&self) -> Result<Self, ZeroIndex> {
        let p = self.min_support()?;
        let mut out = self.clone();
        let e = out.0.get_mut(&p).expect("supported");
        *e -= 1;
        if *e == 0 {
            out.0.remove(&p);
        }
        Ok(out)
    }
}

/// An element of `𝐌̂`: entries in `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BoolIndex(BTreeSet<u32>);

impl BoolIndex {
    pub fn zero() -> Self {
        BoolIndex::default()
    }

    pub fn unit(p: u32) -> Self {
        BoolIndex::from_positions([p])
    }

    pub fn from_positions(positions: impl IntoIterator<Item = u32>) -> Self {
        let set: BTreeSet<u32> = positions.into_iter().collect();
        assert!(!set.contains(&0), "positions start at 1");
        BoolIndex(set)
    }

    pub fn contains(&self, p: u32) -> bool {
        self.0.contains(&p)
    }

    pub fn positions(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

impl IndexVector for BoolIndex {
    fn entries(&self) -> Vec<(u32, u32)> {
        self.0.iter().map(|&p| (p, 1)).collect()
    }

    fn lower_prime(&self) -> Result<Self, ZeroIndex> {
        let p = self.min_support()?;
        let mut out = self.clone();
        out.0.remove(&p);
        Ok(out)
    }
}

fn render_index(entries: &[(u32, u32)]) -> String {
    if entries.is_empty() {
        return "0".to_string();
    }
    entries
        .iter()
        .rev()
        .map(|&(p, e)| if e == 1 { format!("ε{p}") } else { format!("{e}ε{p}") })
        .collect::<Vec<_>>()
        .join("+")
}

impl fmt::Debug for MonoIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_index(&self.entries()))
    }
}

impl fmt::Debug for BoolIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_index(&self.entries()))
    }
}

/// The reverse lexicographic order: the first differing position, scanning
/// upward from 1, decides, and the larger exponent there wins.
pub fn rev_lex_compare<T: IndexVector>(x: &T, y: &T) -> Ordering {
    let (a, b) = (x.entries(), y.entries());
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(p, e)), Some(&(q, f))) => match p.cmp(&q) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal if e != f => return e.cmp(&f),
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

/// The index triple `(i, j, k)` of a PBW monomial `I^i G^j L^k`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PbwIndex {
    pub i: MonoIndex,
    pub j: BoolIndex,
    pub k: MonoIndex,
}

impl PbwIndex {
    pub fn new(i: MonoIndex, j: BoolIndex, k: MonoIndex) -> Self {
        PbwIndex { i, j, k }
    }

    pub fn zero() -> Self {
        PbwIndex::default()
    }

    pub fn is_zero(&self) -> bool {
        self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    /// `w(i) + w(j) + w(k)`.
    pub fn total_weight(&self) -> u64 {
        self.i.weight() + self.j.weight() + self.k.weight()
    }
}

impl fmt::Debug for PbwIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?})", self.i, self.j, self.k)
    }
}

/// A basis monomial `I^i G^j L^k` of `U(𝔖₋)` for the offsets `(α, β)`:
/// position `p` stands for `I_{-p-α}`, `G_{-p-β}` and `L_{-p}` respectively.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PbwMonomial {
    pub index: PbwIndex,
    pub alpha: i64,
    pub beta: i64,
}

/// A total order on PBW index triples built from the six slots
/// `i, w(i), j, w(j), k, w(k)`.
pub trait PrincipalOrder: Send + Sync {
    fn name(&self) -> &'static str;
    fn compare(&self, x: &PbwIndex, y: &PbwIndex) -> Ordering;
}

/// Slots read as written: `i, w(i), j, w(j), k, w(k)`.
pub struct LeftToRight;

impl PrincipalOrder for LeftToRight {
    fn name(&self) -> &'static str {
        "left-to-right"
    }

    fn compare(&self, x: &PbwIndex, y: &PbwIndex) -> Ordering {
        rev_lex_compare(&x.i, &y.i)
            .then(x.i.weight().cmp(&y.i.weight()))
            .then(rev_lex_compare(&x.j, &y.j))
            .then(x.j.weight().cmp(&y.j.weight()))
            .then(rev_lex_compare(&x.k, &y.k))
            .then(x.k.weight().cmp(&y.k.weight()))
    }
}

/// Slots read from the right: `w(k), k, w(j), j, w(i), i`. Lowering with a
/// positive-index generator strictly decreases this order.
pub struct RightToLeft;

impl PrincipalOrder for RightToLeft {
    fn name(&self) -> &'static str {
        "right-to-left"
    }

    fn compare(&self, x: &PbwIndex, y: &PbwIndex) -> Ordering {
        x.k.weight()
            .cmp(&y.k.weight())
            .then(rev_lex_compare(&x.k, &y.k))
            .then(x.j.weight().cmp(&y.j.weight()))
            .then(rev_lex_compare(&x.j, &y.j))
            .then(x.i.weight().cmp(&y.i.weight()))
            .then(rev_lex_compare(&x.i, &y.i))
    }
}

pub fn order_registry() -> Registry<dyn PrincipalOrder> {
    let mut r: Registry<dyn PrincipalOrder> = Registry::new("principal order", "right-to-left");
    r.register("right-to-left", Arc::new(RightToLeft));
    r.register("left-to-right", Arc::new(LeftToRight));
    r
}

/// The six-slot comparison read left to right.
pub fn principal_compare(x: &PbwIndex, y: &PbwIndex) -> Ordering {
    LeftToRight.compare(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: u32) -> MonoIndex {
        MonoIndex::unit(p, 1)
    }

    #[test]
    fn weights() {
        assert_eq!(e(3).weight(), 3);
        assert_eq!(MonoIndex::from_entries([(2, 1), (1, 3)]).weight(), 5);
        assert_eq!(MonoIndex::zero().weight(), 0);
    }

    #[test]
    fn lowering() {
        assert_eq!(e(1).lower_prime().unwrap(), MonoIndex::zero());
        assert_eq!(
            MonoIndex::from_entries([(3, 2), (2, 1)]).lower_prime().unwrap(),
            MonoIndex::unit(3, 2)
        );
        assert_eq!(MonoIndex::unit(1, 2).lower_prime().unwrap(), e(1));
        assert_eq!(MonoIndex::zero().lower_prime(), Err(ZeroIndex));
        assert_eq!(
            BoolIndex::from_positions([1, 4]).lower_prime().unwrap(),
            BoolIndex::unit(4)
        );
    }

    #[test]
    fn minimal_support() {
        assert_eq!(e(5).min_support().unwrap(), 5);
        assert_eq!(MonoIndex::from_entries([(4, 1), (2, 2)]).min_support().unwrap(), 2);
        assert_eq!(MonoIndex::from_entries([(1, 1), (7, 1)]).min_support().unwrap(), 1);
        assert_eq!(MonoIndex::zero().min_support(), Err(ZeroIndex));
    }

    #[test]
    fn reverse_lexicographic() {
        assert_eq!(rev_lex_compare(&e(2), &e(2)), Ordering::Equal);
        assert_eq!(rev_lex_compare(&e(1), &e(2)), Ordering::Greater);
        assert_eq!(rev_lex_compare(&MonoIndex::zero(), &e(5)), Ordering::Less);
    }

    #[test]
    fn principal_examples() {
        let z = MonoIndex::zero;
        let b = BoolIndex::zero;
        let x = PbwIndex::new(z(), b(), e(1));
        let y = PbwIndex::new(z(), b(), e(2));
        assert_eq!(principal_compare(&x, &y), Ordering::Greater);
        let x = PbwIndex::new(e(1), b(), z());
        let y = PbwIndex::new(z(), BoolIndex::unit(1), z());
        assert_eq!(principal_compare(&x, &y), Ordering::Greater);
        assert_eq!(principal_compare(&x, &x), Ordering::Equal);
    }

    #[test]
    fn right_to_left_puts_the_l_block_first() {
        let i_only = PbwIndex::new(e(1), BoolIndex::zero(), MonoIndex::zero());
        let l_only = PbwIndex::new(MonoIndex::zero(), BoolIndex::zero(), e(1));
        assert_eq!(RightToLeft.compare(&l_only, &i_only), Ordering::Greater);
        assert_eq!(LeftToRight.compare(&l_only, &i_only), Ordering::Less);
    }

    #[test]
    fn registry_defaults_to_right_to_left() {
        let r = order_registry();
        assert_eq!(r.resolve(None).unwrap().name(), "right-to-left");
        assert_eq!(r.get("left-to-right").unwrap().name(), "left-to-right");
        assert!(r.get("diagonal").is_err());
    }
}
