//! Induced modules `Ind(V) = U(𝔖) ⊗_{U(𝔖_{α,β})} V` and their base modules.

pub mod engine;
mod probe;
mod sample;
mod table;
mod vector;
mod whittaker;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::registry::{Registry, UnknownEntry};
use crate::scalar::Scalar;
use crate::superalgebra::{AlgebraError, Generator};
use crate::Parity;

pub use engine::{strategy_registry, ReductionStrategy};
pub use probe::{
    annihilation_bound, degree_after_lowering, dim_check_t1, simplicity_probe, validate_conditions, Branch,
    ConditionsReport, DimCheckReport, ProbeOutcome, ProbeStep, ProbeTrace,
};
pub use sample::{random_vector, random_word};
pub use table::{verma, FiniteTableModule};
pub use vector::{InducedModule, InducedVector};
pub use whittaker::WhittakerBase;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InducedError {
    #[error("straightening exceeded its fuel of {0} rewrites")]
    FuelExhausted(u64),
    #[error("inconsistent homomorphism: {0}")]
    InconsistentHomomorphism(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0} does not act on the base module")]
    NotInSubalgebra(Generator),
    #[error(transparent)]
    Registry(#[from] UnknownEntry),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A basis element of a base module: a position in a finite basis, or a
/// canonical word applied to a cyclic vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    Index(usize),
    Word(Vec<Generator>),
}

impl fmt::Debug for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKey::Index(i) => write!(f, "b{i}"),
            BasisKey::Word(w) if w.is_empty() => f.write_str("v"),
            BasisKey::Word(w) => {
                for g in w {
                    write!(f, "{g}·")?;
                }
                f.write_str("v")
            }
        }
    }
}

/// Coordinates in a base module.
pub type Coords = BTreeMap<BasisKey, Scalar>;

pub(crate) fn add_coords(target: &mut Coords, key: BasisKey, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = target.entry(key.clone()).or_default();
    *slot += c;
    if slot.is_zero() {
        target.remove(&key);
    }
}

/// A module over `𝔖_{α,β}` to induce from.
pub trait BaseModule: Send + Sync {
    fn kind(&self) -> &'static str;
    fn alpha(&self) -> i64;
    fn beta(&self) -> i64;
    /// The annihilation level of the module.
    fn z(&self) -> i64;
    fn c0(&self) -> Scalar;
    fn parity(&self, key: &BasisKey) -> Parity;

    /// Whether `key` names a basis element of this module.
    fn contains_key(&self, key: &BasisKey) -> bool;

    /// `g · key` for `g ∈ 𝔖_{α,β}`.
    fn act_basis(&self, g: Generator, key: &BasisKey) -> Result<Coords, InducedError>;

    /// The whole basis when finite, otherwise the basis elements of size at
    /// most `bound`.
    fn basis_sample(&self, bound: usize) -> Vec<BasisKey>;

    /// An index above which no generator acts nontrivially on `key`.
    fn action_ceiling(&self, key: &BasisKey) -> i64;

    /// Cyclic vector or first basis element.
    fn generating_key(&self) -> BasisKey;

    /// A JSON description accepted by the module registry.
    fn describe(&self) -> Value;

    fn validate(&self, sample_bound: usize) -> ConditionsReport;
}

/// Builds a base module from its JSON description.
pub trait ModuleKind: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, doc: &Value) -> Result<Arc<dyn BaseModule>, InducedError>;
}

struct VermaKind;
struct WhittakerKind;
struct TableKind;

impl ModuleKind for VermaKind {
    fn name(&self) -> &'static str {
        "verma"
    }
    fn build(&self, doc: &Value) -> Result<Arc<dyn BaseModule>, InducedError> {
        Ok(Arc::new(verma(scalar_field(doc, "h")?, scalar_field(doc, "c0")?)))
    }
}

impl ModuleKind for WhittakerKind {
    fn name(&self) -> &'static str {
        "whittaker"
    }
    fn build(&self, doc: &Value) -> Result<Arc<dyn BaseModule>, InducedError> {
        Ok(Arc::new(WhittakerBase::from_json(doc)?))
    }
}

impl ModuleKind for TableKind {
    fn name(&self) -> &'static str {
        "table"
    }
    fn build(&self, doc: &Value) -> Result<Arc<dyn BaseModule>, InducedError> {
        Ok(Arc::new(FiniteTableModule::from_json(doc)?))
    }
}

pub fn module_registry() -> Registry<dyn ModuleKind> {
    let mut r: Registry<dyn ModuleKind> = Registry::new("module kind", "verma");
    r.register("verma", Arc::new(VermaKind));
    r.register("whittaker", Arc::new(WhittakerKind));
    r.register("table", Arc::new(TableKind));
    r
}

/// Build a base module from a document with a `"kind"` field.
pub fn module_from_json(doc: &Value) -> Result<Arc<dyn BaseModule>, InducedError> {
    let kind = doc
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| InducedError::InvalidModule("missing \"kind\"".into()))?;
    module_registry().get(kind)?.build(doc)
}

pub(crate) fn scalar_field(doc: &Value, field: &str) -> Result<Scalar, InducedError> {
    match doc.get(field) {
        Some(Value::String(s)) => s
            .parse()
            .map_err(|e| InducedError::InvalidModule(format!("{field}: {e}"))),
        Some(Value::Number(n)) if n.is_i64() => Ok(Scalar::from_int(n.as_i64().expect("i64"))),
        _ => Err(InducedError::InvalidModule(format!("missing scalar field {field:?}"))),
    }
}

pub(crate) fn int_field(doc: &Value, field: &str, default: Option<i64>) -> Result<i64, InducedError> {
    match doc.get(field) {
        Some(v) => v
            .as_i64()
            .ok_or_else(|| InducedError::InvalidModule(format!("{field} must be an integer"))),
        None => default.ok_or_else(|| InducedError::InvalidModule(format!("missing integer field {field:?}"))),
    }
}

/// `"L_2"`, `"I_-1"`, `"G_0"`.
pub fn parse_generator(s: &str) -> Result<Generator, InducedError> {
    let bad = || InducedError::InvalidModule(format!("invalid generator {s:?}"));
    let (fam, idx) = s.split_once('_').ok_or_else(bad)?;
    let family = crate::superalgebra::Family::from_name(fam).ok_or_else(bad)?;
    let n: i64 = idx.parse().map_err(|_| bad())?;
    Ok(Generator::int(family, n))
}

pub fn generator_name(g: &Generator) -> String {
    format!("{}_{}", g.family, g.index)
}
