use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use super::engine::{fuel_from_env, straighten, InductionRules, Leftmost, ReductionStrategy, Terms, Word};
use super::{add_coords, BaseModule, BasisKey, Coords, InducedError};
use crate::order::{BoolIndex, IndexVector, MonoIndex, PbwIndex, PrincipalOrder};
use crate::scalar::Scalar;
use crate::superalgebra::{Family, Generator, SubalgebraSpec, SuperElement};
use crate::Parity;

/// `Σ I^i G^j L^k ⊗ v_{i,j,k}`, keyed by the index triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedVector {
    alpha: i64,
    beta: i64,
    terms: BTreeMap<PbwIndex, Coords>,
}

impl InducedVector {
    pub fn zero(alpha: i64, beta: i64) -> Self {
        InducedVector {
            alpha,
            beta,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn offsets(&self) -> (i64, i64) {
        (self.alpha, self.beta)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwIndex, &Coords)> {
        self.terms.iter()
    }

    pub fn coords(&self, index: &PbwIndex) -> Coords {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, index: PbwIndex, key: BasisKey, c: &Scalar) {
        let coords = self.terms.entry(index.clone()).or_default();
        add_coords(coords, key, c);
        if coords.is_empty() {
            self.terms.remove(&index);
        }
    }

    pub fn scale(&self, k: &Scalar) -> InducedVector {
        let mut out = InducedVector::zero(self.alpha, self.beta);
        for (idx, coords) in &self.terms {
            for (key, c) in coords {
                out.add_term(idx.clone(), key.clone(), &(c * k));
            }
        }
        out
    }

    pub fn add(&self, other: &InducedVector) -> InducedVector {
        assert_eq!(self.offsets(), other.offsets(), "vectors of different induced modules");
        let mut out = self.clone();
        for (idx, coords) in &other.terms {
            for (key, c) in coords {
                out.add_term(idx.clone(), key.clone(), c);
            }
        }
        out
    }

    pub fn sub(&self, other: &InducedVector) -> InducedVector {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn support(&self) -> Vec<PbwIndex> {
        self.terms.keys().cloned().collect()
    }

    /// The support together with its maximum under `order`.
    pub fn support_and_degree(&self, order: &dyn PrincipalOrder) -> Result<(Vec<PbwIndex>, PbwIndex), InducedError> {
        let support = self.support();
        let degree = support
            .iter()
            .max_by(|a, b| order.compare(a, b))
            .cloned()
            .ok_or_else(|| InducedError::Domain("the zero vector has no degree".into()))?;
        Ok((support, degree))
    }

    pub fn degree(&self, order: &dyn PrincipalOrder) -> Result<PbwIndex, InducedError> {
        self.support_and_degree(order).map(|(_, d)| d)
    }

    /// Whether the vector lies in `1 ⊗ V`.
    pub fn in_base(&self) -> bool {
        self.terms.keys().all(PbwIndex::is_zero)
    }

    /// The `1 ⊗ V` component.
    pub fn base_part(&self) -> Coords {
        self.coords(&PbwIndex::zero())
    }

    /// Largest total weight in the support.
    pub fn max_weight(&self) -> u64 {
        self.terms.keys().map(PbwIndex::total_weight).max().unwrap_or(0)
    }

    /// The common parity of all components, if homogeneous.
    pub fn parity(&self, base: &dyn BaseModule) -> Option<Parity> {
        let mut seen = None;
        for (idx, coords) in &self.terms {
            let pj = Parity::from_bit((idx.j.length() % 2) as u8);
            for key in coords.keys() {
                let p = pj.sum(base.parity(key));
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        seen
    }
}

struct Outer<'a> {
    base: &'a dyn BaseModule,
    sub: SubalgebraSpec,
}

impl InductionRules for Outer<'_> {
    fn is_creation(&self, g: &Generator) -> bool {
        !self.sub.contains(g)
    }

    fn bottom(&self, g: Generator, key: &BasisKey) -> Result<Coords, InducedError> {
        self.base.act_basis(g, key)
    }
}

/// `Ind(V)` for a base module `V`, with a chosen reduction strategy.
#[derive(Clone)]
pub struct InducedModule {
    base: Arc<dyn BaseModule>,
    strategy: Arc<dyn ReductionStrategy>,
    fuel: u64,
}

impl InducedModule {
    pub fn new(base: Arc<dyn BaseModule>) -> Self {
        InducedModule {
            base,
            strategy: Arc::new(Leftmost),
            fuel: fuel_from_env(),
        }
    }

    pub fn with_strategy(mut self, strategy: Arc<dyn ReductionStrategy>) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn base(&self) -> &Arc<dyn BaseModule> {
        &self.base
    }

    pub fn strategy(&self) -> &Arc<dyn ReductionStrategy> {
        &self.strategy
    }

    pub fn alpha(&self) -> i64 {
        self.base.alpha()
    }

    pub fn beta(&self) -> i64 {
        self.base.beta()
    }

    fn subalgebra(&self) -> SubalgebraSpec {
        SubalgebraSpec::alpha_beta(self.alpha(), self.beta()).expect("base modules satisfy α ≥ 2β")
    }

    pub fn zero(&self) -> InducedVector {
        InducedVector::zero(self.alpha(), self.beta())
    }

    /// `1 ⊗ key`.
    pub fn base_vector(&self, key: BasisKey) -> InducedVector {
        self.monomial(PbwIndex::zero(), key)
    }

    /// `I^i G^j L^k ⊗ key`.
    pub fn monomial(&self, index: PbwIndex, key: BasisKey) -> InducedVector {
        let mut v = self.zero();
        v.add_term(index, key, &Scalar::one());
        v
    }

    /// The canonical word of a PBW index.
    pub fn word_of(&self, index: &PbwIndex) -> Word {
        let (a, b) = (self.alpha(), self.beta());
        let mut word = Vec::new();
        for (p, e) in index.i.entries().into_iter().rev() {
            word.extend(std::iter::repeat_n(
                Generator::int(Family::I, -(p as i64) - a),
                e as usize,
            ));
        }
        for p in index.j.positions().collect::<Vec<_>>().into_iter().rev() {
            word.push(Generator::int(Family::G, -(p as i64) - b));
        }
        for (p, e) in index.k.entries().into_iter().rev() {
            word.extend(std::iter::repeat_n(Generator::int(Family::L, -(p as i64)), e as usize));
        }
        word
    }

    /// The PBW index of a canonical word.
    pub fn index_of(&self, word: &[Generator]) -> PbwIndex {
        let (a, b) = (self.alpha(), self.beta());
        let mut i = Vec::new();
        let mut j = Vec::new();
        let mut k = Vec::new();
        for g in word {
            let n = g.index.as_int().expect("Ramond index");
            match g.family {
                Family::I => i.push(((-n - a) as u32, 1)),
                Family::G => j.push((-n - b) as u32),
                Family::L => k.push(((-n) as u32, 1)),
            }
        }
        PbwIndex::new(
            MonoIndex::from_entries(i),
            BoolIndex::from_positions(j),
            MonoIndex::from_entries(k),
        )
    }

    /// Straighten a word applied to `1 ⊗ key`.
    pub fn word_on_base(&self, word: &[Generator], key: BasisKey) -> Result<InducedVector, InducedError> {
        let start = Terms::from([((word.to_vec(), key), Scalar::one())]);
        self.finish(start)
    }

    fn finish(&self, start: Terms) -> Result<InducedVector, InducedError> {
        let rules = Outer {
            base: self.base.as_ref(),
            sub: self.subalgebra(),
        };
        let done = straighten(&rules, self.strategy.as_ref(), start, self.fuel)?;
        let mut out = self.zero();
        for ((word, key), c) in done {
            out.add_term(self.index_of(&word), key, &c);
        }
        Ok(out)
    }

    /// `g · v`.
    pub fn act(&self, g: Generator, v: &InducedVector) -> Result<InducedVector, InducedError> {
        let mut start = Terms::new();
        for (idx, coords) in v.terms() {
            let mut word = vec![g];
            word.extend(self.word_of(idx));
            for (key, c) in coords {
                start.insert((word.clone(), key.clone()), c.clone());
            }
        }
        self.finish(start)
    }

    /// `w₁ w₂ ... w_n · v`: the rightmost letter acts first.
    pub fn act_word(&self, word: &[Generator], v: &InducedVector) -> Result<InducedVector, InducedError> {
        let mut out = v.clone();
        for g in word.iter().rev() {
            out = self.act(*g, &out)?;
        }
        Ok(out)
    }

    /// `x · v` for a linear combination of Ramond generators.
    pub fn act_element(&self, x: &SuperElement, v: &InducedVector) -> Result<InducedVector, InducedError> {
        let mut out = self.zero();
        for (g, c) in x.terms() {
            out = out.add(&self.act(*g, v)?.scale(c));
        }
        Ok(out)
    }

    /// Compare two vectors' degrees.
    pub fn compare_degrees(
        &self,
        order: &dyn PrincipalOrder,
        x: &InducedVector,
        y: &InducedVector,
    ) -> Result<Ordering, InducedError> {
        Ok(order.compare(&x.degree(order)?, &y.degree(order)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::induced::verma;
    use crate::order::{LeftToRight, MonoIndex};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn module(h: i64, c0: i64) -> InducedModule {
        InducedModule::new(Arc::new(verma(s(h), s(c0))))
    }

    fn g(f: Family, n: i64) -> Generator {
        Generator::int(f, n)
    }

    #[test]
    fn central_i0() {
        let m = module(2, 3);
        let one = m.base_vector(BasisKey::Index(0));
        assert_eq!(m.act(g(Family::I, 0), &one).unwrap(), one.scale(&s(3)));
    }

    #[test]
    fn g_square_collapses() {
        let m = module(2, 1);
        let one = m.base_vector(BasisKey::Index(0));
        let gv = m.act(g(Family::G, -1), &one).unwrap();
        let ggv = m.act(g(Family::G, -1), &gv).unwrap();
        let expect = m.monomial(
            PbwIndex::new(MonoIndex::unit(2, 1), BoolIndex::zero(), MonoIndex::zero()),
            BasisKey::Index(0),
        );
        assert_eq!(ggv, expect);
    }

    #[test]
    fn lowering_by_l1() {
        let m = module(2, 1);
        let one = m.base_vector(BasisKey::Index(0));
        let iv = m.act(g(Family::I, -1), &one).unwrap();
        assert_eq!(m.act(g(Family::L, 1), &iv).unwrap(), one.scale(&s(-1)));
        let lv = m.act(g(Family::L, -1), &one).unwrap();
        assert_eq!(m.act(g(Family::L, 1), &lv).unwrap(), one.scale(&s(-4)));
        assert_eq!(
            m.act_word(&[g(Family::L, 1), g(Family::L, -1)], &one).unwrap(),
            one.scale(&s(-4))
        );
        assert_eq!(m.act_word(&[], &one).unwrap(), one);
    }

    #[test]
    fn words_and_indices_agree() {
        let m = module(2, 1);
        let idx = PbwIndex::new(
            MonoIndex::from_entries([(1, 2), (3, 1)]),
            BoolIndex::from_positions([1, 2]),
            MonoIndex::unit(2, 1),
        );
        let word = m.word_of(&idx);
        assert_eq!(word[0], g(Family::I, -3));
        assert_eq!(m.index_of(&word), idx);
        assert_eq!(
            m.word_on_base(&word, BasisKey::Index(0)).unwrap(),
            m.monomial(idx, BasisKey::Index(0))
        );
    }

    #[test]
    fn degree_examples() {
        let m = module(2, 1);
        let one = m.base_vector(BasisKey::Index(0));
        let (support, degree) = one.support_and_degree(&LeftToRight).unwrap();
        assert_eq!((support, degree), (vec![PbwIndex::zero()], PbwIndex::zero()));

        let v = m
            .act(g(Family::I, -1), &one)
            .unwrap()
            .add(&m.act(g(Family::L, -1), &one).unwrap());
        let expect = PbwIndex::new(MonoIndex::unit(1, 1), BoolIndex::zero(), MonoIndex::zero());
        assert_eq!(v.degree(&LeftToRight).unwrap(), expect);
        assert!(m.zero().degree(&LeftToRight).is_err());
    }
}
