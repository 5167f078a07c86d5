//! Hypothesis checks and the case-directed lowering procedure that walks a
//! nonzero induced vector down into `1 ⊗ V`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{generator_name, BaseModule, Coords, InducedError, InducedModule, InducedVector};
use crate::order::{IndexVector, PbwIndex, PrincipalOrder};
use crate::scalar::Scalar;
use crate::superalgebra::{generator_bracket, Family, Generator};

/// Outcome of checking conditions (a) and (b) on a base module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionsReport {
    pub z: i64,
    /// The generator whose injectivity condition (a) asks for.
    pub injective_generator: Generator,
    pub condition_a: bool,
    /// Generators above the bounds that act nontrivially.
    pub condition_b_violations: Vec<Generator>,
}

impl ConditionsReport {
    pub fn new(
        z: i64,
        injective_generator: Generator,
        condition_a: bool,
        condition_b_violations: Vec<Generator>,
    ) -> Self {
        ConditionsReport {
            z,
            injective_generator,
            condition_a,
            condition_b_violations,
        }
    }

    pub fn passed(&self) -> bool {
        self.condition_a && self.condition_b_violations.is_empty()
    }

    /// A one-line description of the first failed condition.
    pub fn failure(&self) -> Option<String> {
        if !self.condition_a {
            return Some(format!(
                "condition (a) failed: {} not injective",
                generator_name(&self.injective_generator)
            ));
        }
        self.condition_b_violations
            .first()
            .map(|g| format!("condition (b) failed: {} acts nontrivially", generator_name(g)))
    }
}

/// Conditions (a) and (b) for a base module. Infinite-dimensional modules are
/// checked on basis elements of size at most `sample_bound`.
pub fn validate_conditions(base: &dyn BaseModule, sample_bound: usize) -> ConditionsReport {
    base.validate(sample_bound)
}

/// Which block the lowering generator targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Branch {
    I,
    G,
    L,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeStep {
    pub generator: Generator,
    pub branch: Branch,
    pub degree_before: PbwIndex,
    pub degree: PbwIndex,
    pub predicted: PbwIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// A nonzero element of `1 ⊗ V`.
    Reached(Coords),
    /// The vector became zero after this many steps.
    Vanished { step: usize },
    /// The degree failed to decrease at this step.
    NoDescent { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeTrace {
    pub order: &'static str,
    pub start_weight: u64,
    pub steps: Vec<ProbeStep>,
    pub outcome: ProbeOutcome,
}

impl ProbeTrace {
    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, ProbeOutcome::Reached(_))
    }
}

/// `(i, j, k′)` if `k ≠ 0`, else `(i, j′, 0)` if `j ≠ 0`, else `(i′, 0, 0)`.
pub fn degree_after_lowering(degree: &PbwIndex) -> Result<PbwIndex, InducedError> {
    let mut out = degree.clone();
    if !degree.k.is_zero() {
        out.k = degree.k.lower_prime().expect("nonzero");
    } else if !degree.j.is_zero() {
        out.j = degree.j.lower_prime().expect("nonzero");
    } else if !degree.i.is_zero() {
        out.i = degree.i.lower_prime().expect("nonzero");
    } else {
        return Err(InducedError::Domain("the vector already lies in 1 ⊗ V".into()));
    }
    Ok(out)
}

fn lowering_generator(degree: &PbwIndex, base: &dyn BaseModule) -> (Generator, Branch) {
    let (a, b, z) = (base.alpha(), base.beta(), base.z());
    if let Ok(p) = degree.k.min_support() {
        (Generator::int(Family::I, p as i64 + z), Branch::I)
    } else if let Ok(p) = degree.j.min_support() {
        (Generator::int(Family::G, p as i64 + z + b), Branch::G)
    } else {
        let p = degree
            .i
            .min_support()
            .expect("caller checked the vector is outside 1 ⊗ V");
        (Generator::int(Family::L, p as i64 + z + a), Branch::L)
    }
}

/// Apply `I_{k̃+z}`, `G_{j̃+z+β}` or `L_{ĩ+z+α}` according to the degree until
/// the vector lands in `1 ⊗ V`.
pub fn simplicity_probe(
    module: &InducedModule,
    v: &InducedVector,
    order: &dyn PrincipalOrder,
) -> Result<ProbeTrace, InducedError> {
    if v.is_zero() {
        return Err(InducedError::Domain("cannot probe the zero vector".into()));
    }
    let base = module.base().as_ref();
    let mut trace = ProbeTrace {
        order: order.name(),
        start_weight: v.max_weight(),
        steps: Vec::new(),
        outcome: ProbeOutcome::Vanished { step: 0 },
    };
    let mut current = v.clone();
    while !current.in_base() {
        let step = trace.steps.len() + 1;
        let before = current.degree(order)?;
        let (generator, branch) = lowering_generator(&before, base);
        let predicted = degree_after_lowering(&before)?;
        current = module.act(generator, &current)?;
        if current.is_zero() {
            trace.outcome = ProbeOutcome::Vanished { step };
            return Ok(trace);
        }
        let degree = current.degree(order)?;
        let descended = order.compare(&degree, &before) == Ordering::Less;
        trace.steps.push(ProbeStep {
            generator,
            branch,
            degree_before: before,
            degree,
            predicted,
        });
        if !descended {
            trace.outcome = ProbeOutcome::NoDescent { step };
            return Ok(trace);
        }
    }
    trace.outcome = ProbeOutcome::Reached(current.base_part());
    Ok(trace)
}

/// The least `n ≥ 0` such that every generator of index above `n` kills `v`.
pub fn annihilation_bound(module: &InducedModule, v: &InducedVector) -> Result<i64, InducedError> {
    let base = module.base().as_ref();
    let mut upper = 0i64;
    for (idx, coords) in v.terms() {
        let depth: i64 = module
            .word_of(idx)
            .iter()
            .map(|g| g.index.as_int().expect("Ramond index").abs())
            .sum();
        for key in coords.keys() {
            upper = upper.max(depth + base.action_ceiling(key));
        }
    }
    for n in (1..=upper).rev() {
        for family in Family::ALL {
            if !module.act(Generator::int(family, n), v)?.is_zero() {
                return Ok(n);
            }
        }
    }
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimCheckReport {
    pub pairs_checked: usize,
    /// Pairs `(x, y)` with `φ([x, y]) ≠ 0`.
    pub failures: Vec<(Generator, Generator)>,
    /// Odd generators with `φ ≠ 0`, impossible on an even line.
    pub odd_nonzero: Vec<Generator>,
}

impl DimCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.odd_nonzero.is_empty()
    }
}

/// Whether `x·v = φ(x)v` defines a `T(1)`-module on the line `ℂv`, checked
/// on generators of index `1..=4`.
pub fn dim_check_t1(phi: &BTreeMap<Generator, Scalar>) -> DimCheckReport {
    let value = |g: &Generator| phi.get(g).cloned().unwrap_or_default();
    let gens: Vec<Generator> = Family::ALL
        .iter()
        .flat_map(|&f| (1..=4).map(move |i| Generator::int(f, i)))
        .collect();
    let mut report = DimCheckReport {
        pairs_checked: 0,
        failures: Vec::new(),
        odd_nonzero: gens
            .iter()
            .filter(|g| g.family == Family::G && !value(g).is_zero())
            .copied()
            .collect(),
    };
    for x in &gens {
        for y in &gens {
            report.pairs_checked += 1;
            if let Some((c, g)) = generator_bracket(*x, *y) {
                if !(&c * &value(&g)).is_zero() {
                    report.failures.push((*x, *y));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::induced::{verma, BasisKey, WhittakerBase};
    use crate::order::{BoolIndex, MonoIndex, RightToLeft};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn verma_module(h: i64, c0: i64) -> InducedModule {
        InducedModule::new(Arc::new(verma(s(h), s(c0))))
    }

    #[test]
    fn predicted_degrees() {
        let k = PbwIndex::new(
            MonoIndex::zero(),
            BoolIndex::zero(),
            MonoIndex::from_entries([(2, 1), (1, 1)]),
        );
        assert_eq!(degree_after_lowering(&k).unwrap().k, MonoIndex::unit(2, 1));
        let ij = PbwIndex::new(MonoIndex::unit(1, 1), BoolIndex::unit(2), MonoIndex::zero());
        assert_eq!(
            degree_after_lowering(&ij).unwrap(),
            PbwIndex::new(MonoIndex::unit(1, 1), BoolIndex::zero(), MonoIndex::zero())
        );
        let i = PbwIndex::new(MonoIndex::unit(1, 2), BoolIndex::zero(), MonoIndex::zero());
        assert_eq!(degree_after_lowering(&i).unwrap().i, MonoIndex::unit(1, 1));
        assert!(degree_after_lowering(&PbwIndex::zero()).is_err());
    }

    #[test]
    fn probe_examples() {
        let m = verma_module(2, 1);
        let one = m.base_vector(BasisKey::Index(0));

        let iv = m.act(Generator::int(Family::I, -1), &one).unwrap();
        let t = simplicity_probe(&m, &iv, &RightToLeft).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].generator, Generator::int(Family::L, 1));
        assert_eq!(
            t.outcome,
            ProbeOutcome::Reached(Coords::from([(BasisKey::Index(0), s(-1))]))
        );

        let gv = m.act(Generator::int(Family::G, -1), &one).unwrap();
        let t = simplicity_probe(&m, &gv, &RightToLeft).unwrap();
        assert_eq!(t.steps[0].generator, Generator::int(Family::G, 1));
        assert_eq!(
            t.outcome,
            ProbeOutcome::Reached(Coords::from([(BasisKey::Index(0), s(2))]))
        );

        let t = simplicity_probe(&m, &one, &RightToLeft).unwrap();
        assert!(t.steps.is_empty() && t.succeeded());
    }

    #[test]
    fn annihilation_examples() {
        let m = verma_module(2, 1);
        let one = m.base_vector(BasisKey::Index(0));
        assert_eq!(annihilation_bound(&m, &one).unwrap(), 0);
        let lv = m.act(Generator::int(Family::L, -1), &one).unwrap();
        assert_eq!(annihilation_bound(&m, &lv).unwrap(), 1);

        let w = WhittakerBase::new(1, BTreeMap::from([(Generator::int(Family::I, 1), s(1))]), s(1)).unwrap();
        let m = InducedModule::new(Arc::new(w));
        let one = m.base_vector(BasisKey::Word(Vec::new()));
        assert_eq!(annihilation_bound(&m, &one).unwrap(), 1);
    }

    #[test]
    fn line_modules_of_t1() {
        let i1 = BTreeMap::from([(Generator::int(Family::I, 1), s(1))]);
        assert!(dim_check_t1(&i1).passed());
        let i2 = BTreeMap::from([(Generator::int(Family::I, 2), s(1))]);
        assert!(!dim_check_t1(&i2).passed());
        assert!(dim_check_t1(&BTreeMap::new()).passed());
    }
}
