use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::engine::{fuel_from_env, straighten, InductionRules, Leftmost, ReductionStrategy, Terms};
use super::{
    add_coords, generator_name, int_field, parse_generator, scalar_field, BaseModule, BasisKey, ConditionsReport,
    Coords, InducedError,
};
use crate::linalg;
use crate::scalar::Scalar;
use crate::superalgebra::{Family, Generator};
use crate::Parity;

/// The high order Whittaker module `U(T(0)) ⊗_{U(T(k))} ℂ_φ`, where `φ` is a
/// character of `T(k) = 𝔖^{(k,k,k)}` and `I₀` acts as `c₀`.
///
/// Basis elements are canonical words in `L_i, I_i, G_i` with `0 ≤ i < k`
/// (`I₀` excluded, each `G_i` at most once) applied to the cyclic vector.
pub struct WhittakerBase {
    k: i64,
    c0: Scalar,
    phi: BTreeMap<Generator, Scalar>,
    strategy: Arc<dyn ReductionStrategy>,
    fuel: u64,
}

impl std::fmt::Debug for WhittakerBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WhittakerBase")
            .field("k", &self.k)
            .field("c0", &self.c0)
            .field("phi", &self.phi)
            .finish()
    }
}

impl WhittakerBase {
    /// `phi` may only be nonzero on `L_k..L_{2k}` and `I_k..I_{2k-1}`; the
    /// remaining slots of `T(k)` are brackets and must vanish, and `G` slots
    /// must vanish because the cyclic vector is even.
    pub fn new(k: i64, phi: BTreeMap<Generator, Scalar>, c0: Scalar) -> Result<Self, InducedError> {
        if k < 1 {
            return Err(InducedError::InvalidModule(format!("level must be positive, got {k}")));
        }
        let mut kept = BTreeMap::new();
        for (g, value) in phi {
            let i = g.index.as_int().expect("Ramond index");
            if i < k {
                return Err(InducedError::InvalidModule(format!(
                    "{} is not in T({k})",
                    generator_name(&g)
                )));
            }
            if value.is_zero() {
                continue;
            }
            let derived = match g.family {
                Family::L => i > 2 * k,
                Family::I | Family::G => i >= 2 * k,
            };
            if derived {
                return Err(InducedError::InconsistentHomomorphism(format!(
                    "{} is a bracket in T({k}) but phi is nonzero there",
                    generator_name(&g)
                )));
            }
            if g.family == Family::G {
                return Err(InducedError::InconsistentHomomorphism(format!(
                    "phi must vanish on the odd generator {}",
                    generator_name(&g)
                )));
            }
            kept.insert(g, value);
        }
        Ok(WhittakerBase {
            k,
            c0,
            phi: kept,
            strategy: Arc::new(Leftmost),
            fuel: fuel_from_env(),
        })
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    pub fn phi(&self, g: &Generator) -> Scalar {
        self.phi.get(g).cloned().unwrap_or_default()
    }

    pub fn from_json(doc: &Value) -> Result<Self, InducedError> {
        let mut phi = BTreeMap::new();
        if let Some(obj) = doc.get("phi") {
            let obj = obj
                .as_object()
                .ok_or_else(|| InducedError::InvalidModule("\"phi\" must be an object".into()))?;
            for (name, value) in obj {
                phi.insert(parse_generator(name)?, scalar_field(&json!({ "x": value }), "x")?);
            }
        }
        WhittakerBase::new(int_field(doc, "k", None)?, phi, scalar_field(doc, "c0")?)
    }

    /// The inner basis letters in canonical order.
    fn letters(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for i in 1..self.k {
            out.push(Generator::int(Family::I, i));
        }
        for i in 0..self.k {
            out.push(Generator::int(Family::G, i));
        }
        for i in 0..self.k {
            out.push(Generator::int(Family::L, i));
        }
        out
    }
}

impl InductionRules for WhittakerBase {
    fn is_creation(&self, g: &Generator) -> bool {
        let i = g.index.as_int().expect("Ramond index");
        (0..self.k).contains(&i) && !(g.family == Family::I && i == 0)
    }

    fn bottom(&self, g: Generator, _key: &BasisKey) -> Result<Coords, InducedError> {
        let i = g.index.as_int().expect("Ramond index");
        let value = if g == Generator::int(Family::I, 0) {
            self.c0.clone()
        } else if i >= self.k {
            self.phi(&g)
        } else {
            return Err(InducedError::NotInSubalgebra(g));
        };
        let mut out = Coords::new();
        add_coords(&mut out, BasisKey::Index(0), &value);
        Ok(out)
    }
}

impl BaseModule for WhittakerBase {
    fn kind(&self) -> &'static str {
        "whittaker"
    }

    fn alpha(&self) -> i64 {
        0
    }

    fn beta(&self) -> i64 {
        0
    }

    fn z(&self) -> i64 {
        2 * self.k - 1
    }

    fn c0(&self) -> Scalar {
        self.c0.clone()
    }

    fn parity(&self, key: &BasisKey) -> Parity {
        match key {
            BasisKey::Word(w) => Parity::from_bit(w.iter().filter(|g| g.family == Family::G).count() as u8 % 2),
            BasisKey::Index(_) => Parity::Even,
        }
    }

    fn contains_key(&self, key: &BasisKey) -> bool {
        let BasisKey::Word(w) = key else {
            return false;
        };
        let letters = self.letters();
        let ranks: Option<Vec<usize>> = w.iter().map(|g| letters.iter().position(|x| x == g)).collect();
        // Canonical: letters in basis order, each G at most once.
        ranks.is_some_and(|r| {
            r.windows(2)
                .all(|p| p[0] < p[1] || (p[0] == p[1] && letters[p[0]].family != Family::G))
        })
    }

    fn act_basis(&self, g: Generator, key: &BasisKey) -> Result<Coords, InducedError> {
        if g.index.doubled() < 0 {
            return Err(InducedError::NotInSubalgebra(g));
        }
        let BasisKey::Word(w) = key else {
            return Err(InducedError::Domain(format!(
                "{key:?} is not a Whittaker basis element"
            )));
        };
        let mut word = vec![g];
        word.extend_from_slice(w);
        let start = Terms::from([((word, BasisKey::Index(0)), Scalar::one())]);
        let done = straighten(self, self.strategy.as_ref(), start, self.fuel)?;
        let mut out = Coords::new();
        for ((word, _), c) in done {
            add_coords(&mut out, BasisKey::Word(word), &c);
        }
        Ok(out)
    }

    fn basis_sample(&self, bound: usize) -> Vec<BasisKey> {
        fn extend(
            letters: &[Generator],
            from: usize,
            left: usize,
            current: &mut Vec<Generator>,
            out: &mut Vec<BasisKey>,
        ) {
            out.push(BasisKey::Word(current.clone()));
            if left == 0 {
                return;
            }
            for (t, g) in letters.iter().enumerate().skip(from) {
                let next = if g.family == Family::G { t + 1 } else { t };
                current.push(*g);
                extend(letters, next, left - 1, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        extend(&self.letters(), 0, bound, &mut Vec::new(), &mut out);
        out
    }

    fn action_ceiling(&self, _key: &BasisKey) -> i64 {
        2 * self.k
    }

    fn generating_key(&self) -> BasisKey {
        BasisKey::Word(Vec::new())
    }

    fn describe(&self) -> Value {
        let mut phi = Map::new();
        for (g, v) in &self.phi {
            phi.insert(generator_name(g), json!(v.to_string()));
        }
        json!({ "kind": "whittaker", "k": self.k, "c0": self.c0.to_string(), "phi": phi })
    }

    fn validate(&self, sample_bound: usize) -> ConditionsReport {
        let z = self.z();
        let iz = Generator::int(Family::I, z);
        let sample = self.basis_sample(sample_bound);

        let images: Vec<Coords> = sample
            .iter()
            .map(|key| self.act_basis(iz, key).expect("I_z lies in T(0)"))
            .collect();
        let mut columns: Vec<BasisKey> = images.iter().flat_map(|c| c.keys().cloned()).collect();
        columns.sort();
        columns.dedup();
        let rows: Vec<Vec<Scalar>> = images
            .iter()
            .map(|c| columns.iter().map(|k| c.get(k).cloned().unwrap_or_default()).collect())
            .collect();
        let injective = !self.phi(&iz).is_zero() && linalg::rank(&rows, columns.len()) == sample.len();

        let mut violations = Vec::new();
        for family in Family::ALL {
            // α = β = 0, so every family has the same bound.
            for i in z + 1..=self.action_ceiling(&self.generating_key()) + 2 {
                let g = Generator::int(family, i);
                let acts = sample
                    .iter()
                    .any(|key| !self.act_basis(g, key).expect("index is non-negative").is_empty());
                if acts {
                    violations.push(g);
                }
            }
        }
        ConditionsReport::new(z, iz, injective, violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn level_one() -> WhittakerBase {
        WhittakerBase::new(1, BTreeMap::from([(Generator::int(Family::I, 1), s(1))]), s(1)).unwrap()
    }

    fn word(letters: &[(Family, i64)]) -> BasisKey {
        BasisKey::Word(letters.iter().map(|&(f, i)| Generator::int(f, i)).collect())
    }

    #[test]
    fn i1_on_l0v() {
        let m = level_one();
        let got = m
            .act_basis(Generator::int(Family::I, 1), &word(&[(Family::L, 0)]))
            .unwrap();
        // (L₀ - 1)·φ(I₁)v
        let expect = Coords::from([(word(&[(Family::L, 0)]), s(1)), (word(&[]), s(-1))]);
        assert_eq!(got, expect);
    }

    #[test]
    fn g0_squared_is_c0() {
        let m = level_one();
        let got = m
            .act_basis(Generator::int(Family::G, 0), &word(&[(Family::G, 0)]))
            .unwrap();
        assert_eq!(got, Coords::from([(word(&[]), s(1))]));
    }

    #[test]
    fn high_modes_annihilate() {
        let m = level_one();
        assert!(m
            .act_basis(Generator::int(Family::L, 3), &word(&[]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn derived_slots_are_rejected() {
        let bad = WhittakerBase::new(1, BTreeMap::from([(Generator::int(Family::I, 2), s(1))]), s(1));
        assert!(matches!(bad, Err(InducedError::InconsistentHomomorphism(_))));
        let odd = WhittakerBase::new(1, BTreeMap::from([(Generator::int(Family::G, 1), s(1))]), s(1));
        assert!(matches!(odd, Err(InducedError::InconsistentHomomorphism(_))));
    }

    #[test]
    fn canonical_keys() {
        let m = level_one();
        assert!(m.contains_key(&word(&[(Family::G, 0), (Family::L, 0), (Family::L, 0)])));
        assert!(!m.contains_key(&word(&[(Family::L, 0), (Family::G, 0)])));
        assert!(!m.contains_key(&word(&[(Family::G, 0), (Family::G, 0)])));
        assert!(!m.contains_key(&word(&[(Family::L, 1)])));
        assert!(!m.contains_key(&BasisKey::Index(0)));
    }

    #[test]
    fn level_one_basis() {
        let keys = level_one().basis_sample(2);
        let expect = vec![
            word(&[]),
            word(&[(Family::G, 0)]),
            word(&[(Family::G, 0), (Family::L, 0)]),
            word(&[(Family::L, 0)]),
            word(&[(Family::L, 0), (Family::L, 0)]),
        ];
        assert_eq!(keys, expect);
    }

    #[test]
    fn conditions_at_level_one() {
        let r = level_one().validate(4);
        assert_eq!(r.z, 1);
        assert!(r.passed(), "{r:?}");
        let with_l2 = WhittakerBase::new(
            1,
            BTreeMap::from([
                (Generator::int(Family::I, 1), s(1)),
                (Generator::int(Family::L, 2), s(1)),
            ]),
            s(1),
        )
        .unwrap();
        let r = with_l2.validate(2);
        assert!(!r.passed());
        assert!(r.condition_b_violations.contains(&Generator::int(Family::L, 2)));
    }
}
