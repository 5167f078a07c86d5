//! The Ramond algebra `𝔖` spanned by `L_m, I_m, G_m` and its Neveu-Schwarz
//! sibling `𝒯` with half-integral `G_r`.
//!
//! Indices are stored doubled so both algebras share one element type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conformal::{jth_products, ConformalAlgebraSpec, ConformalError};
use crate::poly::D;
use crate::scalar::{binomial, falling_factorial, Scalar};
use crate::Parity;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("cannot combine elements of the {0:?} and {1:?} algebras")]
    TagMismatch(AlgebraTag, AlgebraTag),
    #[error("expected an element of the {0:?} algebra")]
    WrongTag(AlgebraTag),
    #[error("{family}_{index} is not a generator of the {tag:?} algebra")]
    BadIndex {
        family: Family,
        index: GenIndex,
        tag: AlgebraTag,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("conformal generator {0:?} has no mode family")]
    UnknownFamily(String),
    #[error(transparent)]
    Conformal(#[from] ConformalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    L,
    I,
    G,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::L, Family::I, Family::G];

    pub fn parity(self) -> Parity {
        match self {
            Family::G => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::L => "L",
            Family::I => "I",
            Family::G => "G",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        match s {
            "L" => Some(Family::L),
            "I" => Some(Family::I),
            "G" => Some(Family::G),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AlgebraTag {
    Ramond,
    NeveuSchwarz,
}

/// A generator index, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenIndex(i64);

impl GenIndex {
    pub fn int(n: i64) -> Self {
        GenIndex(2 * n)
    }

    pub fn from_doubled(d: i64) -> Self {
        GenIndex(d)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn value(self) -> Scalar {
        Scalar::ratio(self.0, 2)
    }
}

impl std::ops::Add for GenIndex {
    type Output = GenIndex;
    fn add(self, rhs: GenIndex) -> GenIndex {
        GenIndex(self.0 + rhs.0)
    }
}

impl fmt::Display for GenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_int() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

impl fmt::Debug for GenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GenIndex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(num) = t.strip_suffix("/2") {
            let d: i64 = num.trim().parse().map_err(|_| format!("invalid index {s:?}"))?;
            return Ok(GenIndex(d));
        }
        t.parse::<i64>()
            .map(GenIndex::int)
            .map_err(|_| format!("invalid index {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: Family,
    pub index: GenIndex,
}

impl Generator {
    pub fn new(family: Family, index: GenIndex) -> Self {
        Generator { family, index }
    }

    pub fn int(family: Family, n: i64) -> Self {
        Generator::new(family, GenIndex::int(n))
    }

    pub fn parity(self) -> Parity {
        self.family.parity()
    }

    /// Whether the index obeys the parity rule of the algebra.
    pub fn valid_in(self, tag: AlgebraTag) -> bool {
        match (tag, self.family) {
            (AlgebraTag::NeveuSchwarz, Family::G) => !self.index.is_integer(),
            _ => self.index.is_integer(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.index)
    }
}

/// A finite linear combination of generators of `𝔖` or `𝒯`.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperElement {
    tag: AlgebraTag,
    terms: BTreeMap<Generator, Scalar>,
}

impl SuperElement {
    pub fn zero(tag: AlgebraTag) -> Self {
        SuperElement {
            tag,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(tag: AlgebraTag, g: Generator) -> Result<Self, AlgebraError> {
        let mut e = SuperElement::zero(tag);
        e.add_term(g, Scalar::one())?;
        Ok(e)
    }

    /// Shorthand for Ramond generators.
    pub fn ramond(family: Family, n: i64) -> Self {
        SuperElement::generator(AlgebraTag::Ramond, Generator::int(family, n))
            .expect("integral indices are valid in the Ramond algebra")
    }

    pub fn from_terms(
        tag: AlgebraTag,
        terms: impl IntoIterator<Item = (Generator, Scalar)>,
    ) -> Result<Self, AlgebraError> {
        let mut e = SuperElement::zero(tag);
        for (g, c) in terms {
            e.add_term(g, c)?;
        }
        Ok(e)
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &Generator) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: Generator, c: Scalar) -> Result<(), AlgebraError> {
        if !g.valid_in(self.tag) {
            return Err(AlgebraError::BadIndex {
                family: g.family,
                index: g.index,
                tag: self.tag,
            });
        }
        self.push(g, &c);
        Ok(())
    }

    fn push(&mut self, g: Generator, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn scale(&self, k: &Scalar) -> SuperElement {
        let mut out = SuperElement::zero(self.tag);
        for (g, c) in &self.terms {
            out.push(*g, &(c * k));
        }
        out
    }

    pub fn add(&self, other: &SuperElement) -> Result<SuperElement, AlgebraError> {
        self.same_tag(other)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.push(*g, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperElement) -> Result<SuperElement, AlgebraError> {
        self.add(&other.scale(&-Scalar::one()))
    }

    /// Keep only the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&Generator) -> bool) -> SuperElement {
        SuperElement {
            tag: self.tag,
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (*g, c.clone()))
                .collect(),
        }
    }

    fn same_tag(&self, other: &SuperElement) -> Result<(), AlgebraError> {
        if self.tag == other.tag {
            Ok(())
        } else {
            Err(AlgebraError::TagMismatch(self.tag, other.tag))
        }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (g, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if !abs.is_one() {
                if abs.is_integer() {
                    out.push_str(&abs.to_string());
                } else {
                    out.push_str(&format!("({abs})"));
                }
            }
            out.push_str(&g.to_string());
        }
        out
    }
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `[x, y]` on generators; every nonzero bracket is a single term.
pub fn generator_bracket(x: Generator, y: Generator) -> Option<(Scalar, Generator)> {
    use Family::*;
    let sum = x.index + y.index;
    let (m, n) = (x.index.value(), y.index.value());
    match (x.family, y.family) {
        (L, L) => Some((&n - &m, Generator::new(L, sum))),
        (L, I) => Some((n, Generator::new(I, sum))),
        (L, G) => Some((n, Generator::new(G, sum))),
        (I, L) => Some((-m, Generator::new(I, sum))),
        (G, L) => Some((-m, Generator::new(G, sum))),
        (G, G) => Some((Scalar::from_int(2), Generator::new(I, sum))),
        _ => None,
    }
    .filter(|(c, _)| !c.is_zero())
}

/// The bracket of `𝔖` or `𝒯`, extended bilinearly.
pub fn bracket(x: &SuperElement, y: &SuperElement) -> Result<SuperElement, AlgebraError> {
    x.same_tag(y)?;
    let mut out = SuperElement::zero(x.tag);
    for (a, p) in &x.terms {
        for (b, q) in &y.terms {
            if let Some((k, g)) = generator_bracket(*a, *b) {
                out.push(g, &(&(p * q) * &k));
            }
        }
    }
    Ok(out)
}

/// A mode `X_(n)` of a conformal generator.
pub type Mode = (String, i64);

/// `[a_(m), b_(n)] = Σ_j C(m, j) (a_(j) b)_(m+n-j)` with
/// `(∂^k g)_(N) = (-1)^k N(N-1)...(N-k+1) g_(N-k)`.
pub fn mode_bracket(
    spec: &ConformalAlgebraSpec,
    a: &str,
    m: i64,
    b: &str,
    n: i64,
) -> Result<BTreeMap<Mode, Scalar>, AlgebraError> {
    let mut out: BTreeMap<Mode, Scalar> = BTreeMap::new();
    for (j, product) in jth_products(spec, a, b)? {
        let outer = binomial(m, j);
        let big_n = m + n - j as i64;
        for (g, p) in product.terms() {
            for (mono, c) in p.terms() {
                let (k, rest) = mono.take(D);
                debug_assert!(rest.is_one(), "products lie in ℂ[∂]");
                let sign = if k % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                let coeff = &(&outer * c) * &(&sign * &falling_factorial(big_n, k));
                if coeff.is_zero() {
                    continue;
                }
                let slot = out.entry((g.to_string(), big_n - k as i64)).or_default();
                *slot += &coeff;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// The re-indexing `L_m = -L_(m+1)`, `I_m = I_(m)`, `G_m = G_(m)`, as
/// `(sign, offset)` so that `X_m = sign · X_(m + offset)`.
fn shift(family: Family) -> (Scalar, i64) {
    match family {
        Family::L => (-Scalar::one(), 1),
        _ => (Scalar::one(), 0),
    }
}

/// Bracket table of the mode algebra of `spec` on generators with indices in
/// `range`, after re-indexing.
pub fn lie_of(
    spec: &ConformalAlgebraSpec,
    range: std::ops::RangeInclusive<i64>,
) -> Result<BTreeMap<(Generator, Generator), SuperElement>, AlgebraError> {
    let mut families = Vec::new();
    for g in spec.generators() {
        families.push(Family::from_name(&g.name).ok_or_else(|| AlgebraError::UnknownFamily(g.name.clone()))?);
    }
    let mut table = BTreeMap::new();
    for &fx in &families {
        for &fy in &families {
            for m in range.clone() {
                for n in range.clone() {
                    let x = Generator::int(fx, m);
                    let y = Generator::int(fy, n);
                    table.insert((x, y), shifted_bracket(spec, x, y)?);
                }
            }
        }
    }
    Ok(table)
}

/// `[x, y]` for re-indexed generators computed from the mode algebra.
pub fn shifted_bracket(spec: &ConformalAlgebraSpec, x: Generator, y: Generator) -> Result<SuperElement, AlgebraError> {
    let (sx, ox) = shift(x.family);
    let (sy, oy) = shift(y.family);
    let m = x.index.as_int().expect("Ramond index") + ox;
    let n = y.index.as_int().expect("Ramond index") + oy;
    let raw = mode_bracket(spec, x.family.name(), m, y.family.name(), n)?;
    let mut out = SuperElement::zero(AlgebraTag::Ramond);
    for ((name, k), c) in raw {
        let family = Family::from_name(&name).ok_or(AlgebraError::UnknownFamily(name))?;
        let (s, o) = shift(family);
        // X_(k) = s⁻¹ · X_{k - o}, and s = ±1.
        out.push(Generator::int(family, k - o), &(&(&sx * &sy) * &(&c * &s)));
    }
    Ok(out)
}

/// The embedding `𝒯 → 𝔖`: `L_m ↦ ½L_{2m}`, `I_m ↦ I_{2m}`, `G_r ↦ G_{2r}`.
pub fn ns_embed(x: &SuperElement) -> Result<SuperElement, AlgebraError> {
    if x.tag != AlgebraTag::NeveuSchwarz {
        return Err(AlgebraError::WrongTag(AlgebraTag::NeveuSchwarz));
    }
    let mut out = SuperElement::zero(AlgebraTag::Ramond);
    for (g, c) in &x.terms {
        let image = Generator::new(g.family, GenIndex(2 * g.index.0));
        let k = if g.family == Family::L {
            c * &Scalar::ratio(1, 2)
        } else {
            c.clone()
        };
        out.push(image, &k);
    }
    Ok(out)
}

/// Generators of the given algebra with `|index| ≤ bound`.
pub fn generators_up_to(tag: AlgebraTag, bound: i64) -> Vec<Generator> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for d in -2 * bound..=2 * bound {
            let g = Generator::new(family, GenIndex(d));
            if g.valid_in(tag) {
                out.push(g);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EmbeddingReport {
    pub pairs_checked: usize,
    pub failures: Vec<(Generator, Generator)>,
    pub injective: bool,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.injective
    }
}

pub fn check_ns_embedding(bound: i64) -> EmbeddingReport {
    check_ns_embedding_with(bound, &|x| ns_embed(x).expect("input is Neveu-Schwarz"))
}

/// Homomorphism and injectivity check of an arbitrary map `𝒯 → 𝔖` on the
/// generators with `|index| ≤ bound`.
pub fn check_ns_embedding_with(bound: i64, map: &dyn Fn(&SuperElement) -> SuperElement) -> EmbeddingReport {
    let gens = generators_up_to(AlgebraTag::NeveuSchwarz, bound);
    let elems: Vec<SuperElement> = gens
        .iter()
        .map(|g| SuperElement::generator(AlgebraTag::NeveuSchwarz, *g).expect("valid"))
        .collect();
    let images: Vec<SuperElement> = elems.iter().map(map).collect();
    let mut report = EmbeddingReport {
        injective: images.iter().all(|i| !i.is_zero())
            && images.iter().map(SuperElement::render).collect::<BTreeSet<_>>().len() == images.len(),
        ..Default::default()
    };
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            report.pairs_checked += 1;
            let left = map(&bracket(x, y).expect("same tag"));
            let right = bracket(&images[i], &images[j]);
            if right.as_ref() != Ok(&left) {
                report.failures.push((gens[i], gens[j]));
            }
        }
    }
    report
}

/// The subalgebras `𝔖_{α,β}` and `𝔖^{(r,s,t)}` of the Ramond algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubalgebraSpec {
    AlphaBeta { alpha: i64, beta: i64 },
    Rst { r: i64, s: i64, t: i64 },
}

impl SubalgebraSpec {
    pub fn alpha_beta(alpha: i64, beta: i64) -> Result<Self, AlgebraError> {
        if alpha < 0 || beta < 0 || alpha < 2 * beta {
            return Err(AlgebraError::Precondition(format!(
                "need 0 ≤ 2β ≤ α, got α={alpha}, β={beta}"
            )));
        }
        Ok(SubalgebraSpec::AlphaBeta { alpha, beta })
    }

    pub fn rst(r: i64, s: i64, t: i64) -> Self {
        SubalgebraSpec::Rst { r, s, t }
    }

    /// `T(r) = 𝔖^{(r,r,r)}`.
    pub fn t(r: i64) -> Self {
        SubalgebraSpec::Rst { r, s: r, t: r }
    }

    /// Smallest index of `family` in the subalgebra.
    pub fn lower_bound(&self, family: Family) -> i64 {
        match (*self, family) {
            (SubalgebraSpec::AlphaBeta { .. }, Family::L) => 0,
            (SubalgebraSpec::AlphaBeta { alpha, .. }, Family::I) => -alpha,
            (SubalgebraSpec::AlphaBeta { beta, .. }, Family::G) => -beta,
            (SubalgebraSpec::Rst { r, .. }, Family::L) => r,
            (SubalgebraSpec::Rst { s, .. }, Family::I) => s,
            (SubalgebraSpec::Rst { t, .. }, Family::G) => t,
        }
    }

    pub fn contains(&self, g: &Generator) -> bool {
        g.index.doubled() >= 2 * self.lower_bound(g.family)
    }

    pub fn member(&self, x: &SuperElement) -> bool {
        x.tag == AlgebraTag::Ramond && x.terms().all(|(g, _)| self.contains(g))
    }
}

/// The finite quotient `𝔖_{α,β} / 𝔖^{(z+α+1, z+1, z+β+1)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientAlgebra {
    pub alpha: i64,
    pub beta: i64,
    pub z: i64,
    pub survivors: Vec<Generator>,
    /// Nonzero truncated brackets among survivors.
    pub table: BTreeMap<(Generator, Generator), SuperElement>,
}

impl QuotientAlgebra {
    pub fn ideal(&self) -> SubalgebraSpec {
        quotient_ideal(self.alpha, self.beta, self.z)
    }

    pub fn bracket(&self, x: &Generator, y: &Generator) -> SuperElement {
        self.table
            .get(&(*x, *y))
            .cloned()
            .unwrap_or_else(|| SuperElement::zero(AlgebraTag::Ramond))
    }

    fn bracket_elements(&self, x: &SuperElement, y: &SuperElement) -> SuperElement {
        let mut out = SuperElement::zero(AlgebraTag::Ramond);
        for (a, p) in x.terms() {
            for (b, q) in y.terms() {
                for (g, c) in self.bracket(a, b).terms() {
                    out.push(*g, &(&(p * q) * c));
                }
            }
        }
        out
    }

    /// Triples of survivors on which the truncated table violates super Jacobi.
    pub fn jacobi_violations(&self) -> Vec<(Generator, Generator, Generator)> {
        let mut out = Vec::new();
        let as_elem = |g: &Generator| SuperElement::generator(AlgebraTag::Ramond, *g).expect("valid");
        for x in &self.survivors {
            for y in &self.survivors {
                for z in &self.survivors {
                    let (ex, ey, ez) = (as_elem(x), as_elem(y), as_elem(z));
                    let lhs = self.bracket_elements(&ex, &self.bracket(y, z));
                    let first = self.bracket_elements(&self.bracket(x, y), &ez);
                    let second = self
                        .bracket_elements(&ey, &self.bracket(x, z))
                        .scale(&Parity::swap_sign(x.parity(), y.parity()));
                    let residual = lhs.sub(&first).and_then(|r| r.sub(&second)).expect("same tag");
                    if !residual.is_zero() {
                        out.push((*x, *y, *z));
                    }
                }
            }
        }
        out
    }
}

fn quotient_ideal(alpha: i64, beta: i64, z: i64) -> SubalgebraSpec {
    SubalgebraSpec::rst(z + alpha + 1, z + 1, z + beta + 1)
}

pub fn quotient_algebra(alpha: i64, beta: i64, z: i64) -> Result<QuotientAlgebra, AlgebraError> {
    let sub = SubalgebraSpec::alpha_beta(alpha, beta)?;
    if z < 0 {
        return Err(AlgebraError::Precondition(format!("need z ≥ 0, got {z}")));
    }
    let ideal = quotient_ideal(alpha, beta, z);

    // Brackets add indices, so a window twice the quotient width suffices.
    let width = 2 * (z + alpha + beta + 2);
    let window = |spec: &SubalgebraSpec| -> Vec<Generator> {
        Family::ALL
            .iter()
            .flat_map(|&f| {
                let lo = spec.lower_bound(f);
                (lo..=lo + width).map(move |n| Generator::int(f, n))
            })
            .collect()
    };
    for x in window(&sub) {
        for y in window(&ideal) {
            if let Some((_, g)) = generator_bracket(x, y) {
                if !ideal.contains(&g) {
                    return Err(AlgebraError::Internal(format!("[{x}, {y}] leaves the ideal")));
                }
            }
        }
    }

    let survivors: Vec<Generator> = Family::ALL
        .iter()
        .flat_map(|&f| {
            let lo = sub.lower_bound(f);
            let hi = ideal.lower_bound(f) - 1;
            (lo..=hi).map(move |n| Generator::int(f, n))
        })
        .collect();
    let mut table = BTreeMap::new();
    for x in &survivors {
        for y in &survivors {
            if let Some((c, g)) = generator_bracket(*x, *y) {
                if !ideal.contains(&g) {
                    let e = SuperElement::from_terms(AlgebraTag::Ramond, [(g, c)]).expect("valid");
                    table.insert((*x, *y), e);
                }
            }
        }
    }
    Ok(QuotientAlgebra {
        alpha,
        beta,
        z,
        survivors,
        table,
    })
}
