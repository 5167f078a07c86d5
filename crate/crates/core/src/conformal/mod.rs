//! λ-bracket calculus for Lie conformal superalgebras of finite rank.
//!
//! Elements are finite sums `Σ p_g · g` of generators with polynomial
//! coefficients. A coefficient lives in ℂ[∂] for honest algebra elements; the
//! bracket machinery also carries `λ`, `µ` and unknowns as scalars, which is
//! what the Jacobi check and the classifier need.

mod classify;

use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{Monomial, Poly, Var, D, LAMBDA, MU};
use crate::scalar::{factorial, Scalar};
use crate::Parity;

pub use classify::{classify_rank_one_extension, classify_rank_one_extension_in, Branch, ParamValue, SolutionFamily};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConformalError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {0:?} declared twice")]
    DuplicateGenerator(String),
    #[error("bracket table has no entry for ({0}, {1})")]
    MissingEntry(String, String),
    #[error("entry [{x} λ {y}] contains {found} of the wrong parity")]
    ParityMismatch { x: String, y: String, found: String },
    #[error("invalid extension ansatz: {0}")]
    BadAnsatz(String),
    #[error("classification could not finish: {0}")]
    Unresolved(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConformalGenerator {
    pub name: String,
    pub parity: Parity,
}

impl ConformalGenerator {
    pub fn new(name: &str, parity: Parity) -> Self {
        ConformalGenerator {
            name: name.to_string(),
            parity,
        }
    }
}

/// A polynomial in `∂` alone, stored by exponent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DPoly(BTreeMap<u32, Scalar>);

impl DPoly {
    pub fn coefficients(&self) -> &BTreeMap<u32, Scalar> {
        &self.0
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.0 {
            p.add_term(Monomial::var(D, *e), c);
        }
        p
    }

    /// `None` if `p` mentions anything besides `∂`.
    pub fn from_poly(p: &Poly) -> Option<DPoly> {
        let mut out = BTreeMap::new();
        for (m, c) in p.terms() {
            let (e, rest) = m.take(D);
            if !rest.is_one() {
                return None;
            }
            out.insert(e, c.clone());
        }
        Some(DPoly(out))
    }
}

/// A finite sum of generators with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ConfExpr {
    terms: BTreeMap<String, Poly>,
}

impl ConfExpr {
    pub fn zero() -> Self {
        ConfExpr::default()
    }

    pub fn gen(name: &str) -> Self {
        ConfExpr::term(name, Poly::one())
    }

    pub fn term(name: &str, coeff: Poly) -> Self {
        let mut e = ConfExpr::zero();
        e.add_term(name, &coeff);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &Poly)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn coeff(&self, name: &str) -> Poly {
        self.terms.get(name).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, name: &str, coeff: &Poly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(name.to_string()).or_default();
        *slot = &*slot + coeff;
        if slot.is_zero() {
            self.terms.remove(name);
        }
    }

    pub fn add(&self, other: &ConfExpr) -> ConfExpr {
        let mut out = self.clone();
        for (g, p) in &other.terms {
            out.add_term(g, p);
        }
        out
    }

    pub fn sub(&self, other: &ConfExpr) -> ConfExpr {
        let mut out = self.clone();
        for (g, p) in &other.terms {
            out.add_term(g, &-p);
        }
        out
    }

    /// Multiply every coefficient by `p`.
    pub fn times(&self, p: &Poly) -> ConfExpr {
        let mut out = ConfExpr::zero();
        for (g, q) in &self.terms {
            out.add_term(g, &(q * p));
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> ConfExpr {
        self.times(&Poly::constant(k.clone()))
    }

    /// Apply a substitution to every coefficient.
    pub fn substitute(&self, v: Var, replacement: &Poly) -> ConfExpr {
        let mut out = ConfExpr::zero();
        for (g, q) in &self.terms {
            out.add_term(g, &q.substitute(v, replacement));
        }
        out
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(g, p)| {
                if *p == Poly::one() {
                    g.clone()
                } else if *p == -Poly::one() {
                    format!("-{g}")
                } else if p.len() == 1 {
                    format!("{p}{g}")
                } else {
                    format!("({p}){g}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for ConfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for ConfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The value of a λ-bracket: a combination of generators with coefficients
/// in ℂ[∂, λ].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaPolynomial(ConfExpr);

impl LambdaPolynomial {
    pub fn as_expr(&self) -> &ConfExpr {
        &self.0
    }

    pub fn into_expr(self) -> ConfExpr {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The coefficient of `λ^j`, a ℂ[∂]-combination of generators.
    pub fn lambda_coefficient(&self, j: u32) -> ConfExpr {
        let mut out = ConfExpr::zero();
        for (g, p) in self.0.terms() {
            for (m, c) in p.terms() {
                let (e, rest) = m.take(LAMBDA);
                if e == j {
                    out.add_term(g, &Poly::term(rest, c.clone()));
                }
            }
        }
        out
    }

    pub fn lambda_degree(&self) -> u32 {
        self.0.terms().map(|(_, p)| p.degree_in(LAMBDA)).max().unwrap_or(0)
    }

    /// The table from `λ`-exponent to `(DPoly, generator)` summands.
    pub fn by_lambda_power(&self) -> BTreeMap<u32, Vec<(DPoly, String)>> {
        let mut out: BTreeMap<u32, Vec<(DPoly, String)>> = BTreeMap::new();
        for j in 0..=self.lambda_degree() {
            let layer = self.lambda_coefficient(j);
            if layer.is_zero() {
                continue;
            }
            let row = layer
                .terms()
                .filter_map(|(g, p)| DPoly::from_poly(p).map(|d| (d, g.to_string())))
                .collect();
            out.insert(j, row);
        }
        out
    }
}

impl fmt::Display for LambdaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// A Lie conformal superalgebra presented by generators over ℂ[∂] and a
/// λ-bracket table on ordered generator pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalAlgebraSpec {
    generators: Vec<ConformalGenerator>,
    table: BTreeMap<(String, String), ConfExpr>,
}

impl ConformalAlgebraSpec {
    /// Validate a complete table.
    pub fn new(
        generators: Vec<ConformalGenerator>,
        table: BTreeMap<(String, String), ConfExpr>,
    ) -> Result<Self, ConformalError> {
        let spec = ConformalAlgebraSpec { generators, table };
        spec.validate()?;
        Ok(spec)
    }

    /// Fill every missing mirrored entry `[y λ x]` from `[x λ y]` by skew
    /// supersymmetry, then validate.
    pub fn complete_by_skew(
        generators: Vec<ConformalGenerator>,
        partial: BTreeMap<(String, String), ConfExpr>,
    ) -> Result<Self, ConformalError> {
        let mut spec = ConformalAlgebraSpec {
            generators,
            table: partial,
        };
        let pairs: Vec<(String, String)> = spec.table.keys().cloned().collect();
        for (x, y) in pairs {
            let key = (y.clone(), x.clone());
            if spec.table.contains_key(&key) {
                continue;
            }
            let sign = Parity::swap_sign(spec.parity_of(&x)?, spec.parity_of(&y)?);
            let mirrored = mirror(&spec.table[&(x, y)]).scale(&-sign);
            spec.table.insert(key, mirrored);
        }
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), ConformalError> {
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(ConformalError::DuplicateGenerator(g.name.clone()));
            }
        }
        for ((x, y), value) in &self.table {
            let expected = self.parity_of(x)?.sum(self.parity_of(y)?);
            for (g, _) in value.terms() {
                if self.parity_of(g)? != expected {
                    return Err(ConformalError::ParityMismatch {
                        x: x.clone(),
                        y: y.clone(),
                        found: g.to_string(),
                    });
                }
            }
        }
        for x in &self.generators {
            for y in &self.generators {
                if !self.table.contains_key(&(x.name.clone(), y.name.clone())) {
                    return Err(ConformalError::MissingEntry(x.name.clone(), y.name.clone()));
                }
            }
        }
        Ok(())
    }

    /// The Heisenberg-Virasoro conformal algebra on `L`, `I`.
    pub fn heisenberg_virasoro() -> Self {
        let (d, l) = (Poly::var(D), Poly::var(LAMBDA));
        let gens = vec![
            ConformalGenerator::new("L", Parity::Even),
            ConformalGenerator::new("I", Parity::Even),
        ];
        let mut table = BTreeMap::new();
        table.insert(pair("L", "L"), ConfExpr::term("L", &d + &l.scale(&2.into())));
        table.insert(pair("L", "I"), ConfExpr::term("I", &d + &l));
        table.insert(pair("I", "L"), ConfExpr::term("I", l.clone()));
        table.insert(pair("I", "I"), ConfExpr::zero());
        ConformalAlgebraSpec::new(gens, table).expect("built-in table is well formed")
    }

    /// The super Heisenberg-Virasoro conformal algebra on `L`, `I`, `G`
    /// (normalised so that `[G λ G] = 2I`).
    pub fn super_heisenberg_virasoro() -> Self {
        let (d, l) = (Poly::var(D), Poly::var(LAMBDA));
        let gens = vec![
            ConformalGenerator::new("L", Parity::Even),
            ConformalGenerator::new("I", Parity::Even),
            ConformalGenerator::new("G", Parity::Odd),
        ];
        let mut table = BTreeMap::new();
        table.insert(pair("L", "L"), ConfExpr::term("L", &d + &l.scale(&2.into())));
        table.insert(pair("L", "I"), ConfExpr::term("I", &d + &l));
        table.insert(pair("L", "G"), ConfExpr::term("G", &d + &l));
        table.insert(pair("I", "L"), ConfExpr::term("I", l.clone()));
        table.insert(pair("I", "I"), ConfExpr::zero());
        table.insert(pair("I", "G"), ConfExpr::zero());
        table.insert(pair("G", "L"), ConfExpr::term("G", l.clone()));
        table.insert(pair("G", "I"), ConfExpr::zero());
        table.insert(pair("G", "G"), ConfExpr::term("I", Poly::int(2)));
        ConformalAlgebraSpec::new(gens, table).expect("built-in table is well formed")
    }

    /// The odd extension `[L λ G] = (∂ + aλ + b)G`, `[I λ G] = cG`,
    /// `[G λ G] = φ(∂,λ)L + ψ(∂,λ)I` of the Heisenberg-Virasoro algebra, with
    /// the mirrored entries filled in by skew supersymmetry.
    pub fn extension(ansatz: &ExtensionAnsatz) -> Result<Self, ConformalError> {
        ansatz.validate()?;
        Ok(extension_table(
            &Poly::constant(ansatz.a.clone()),
            &Poly::constant(ansatz.b.clone()),
            &Poly::constant(ansatz.c.clone()),
            &ansatz.phi,
            &ansatz.psi,
        ))
    }

    pub fn generators(&self) -> &[ConformalGenerator] {
        &self.generators
    }

    pub fn parity_of(&self, name: &str) -> Result<Parity, ConformalError> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .map(|g| g.parity)
            .ok_or_else(|| ConformalError::UnknownGenerator(name.to_string()))
    }

    pub fn entry(&self, x: &str, y: &str) -> Result<&ConfExpr, ConformalError> {
        self.parity_of(x)?;
        self.parity_of(y)?;
        self.table
            .get(&pair(x, y))
            .ok_or_else(|| ConformalError::MissingEntry(x.to_string(), y.to_string()))
    }

    /// A copy with one entry replaced. The result is validated for parity but
    /// not for the axioms.
    pub fn with_entry(&self, x: &str, y: &str, value: ConfExpr) -> Result<Self, ConformalError> {
        let mut table = self.table.clone();
        table.insert(pair(x, y), value);
        ConformalAlgebraSpec::new(self.generators.clone(), table)
    }

    /// `[a_ν b]` for generators `a`, `b` with `λ` replaced by `nu`.
    fn generator_bracket(&self, a: &str, b: &str, nu: &Poly) -> Result<ConfExpr, ConformalError> {
        let entry = self.entry(a, b)?;
        if *nu == Poly::var(LAMBDA) {
            Ok(entry.clone())
        } else {
            Ok(entry.substitute(LAMBDA, nu))
        }
    }

    /// `[x_ν y]` extended by sesquilinearity: a ∂ on the left becomes `-ν`,
    /// a ∂ on the right becomes `∂ + ν`.
    fn bracket_with(&self, x: &ConfExpr, y: &ConfExpr, nu: &Poly) -> Result<ConfExpr, ConformalError> {
        let minus_nu = -nu;
        let shifted = &Poly::var(D) + nu;
        let mut out = ConfExpr::zero();
        for (a, p) in x.terms() {
            let left = p.substitute(D, &minus_nu);
            if left.is_zero() {
                continue;
            }
            for (b, q) in y.terms() {
                let right = q.substitute(D, &shifted);
                let base = self.generator_bracket(a, b, nu)?;
                out = out.add(&base.times(&(&left * &right)));
            }
        }
        Ok(out)
    }

    fn expr_parity(&self, x: &ConfExpr) -> Result<Option<Parity>, ConformalError> {
        let mut parity = None;
        for (g, _) in x.terms() {
            let p = self.parity_of(g)?;
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return Ok(None),
                _ => {}
            }
        }
        Ok(parity)
    }
}

fn pair(x: &str, y: &str) -> (String, String) {
    (x.to_string(), y.to_string())
}

/// `λ ↦ -λ - ∂` on every coefficient.
fn mirror(e: &ConfExpr) -> ConfExpr {
    let target = -(&Poly::var(LAMBDA) + &Poly::var(D));
    e.substitute(LAMBDA, &target)
}

/// The extension table with arbitrary polynomial parameters; the classifier
/// passes unknowns here.
pub(crate) fn extension_table(a: &Poly, b: &Poly, c: &Poly, phi: &Poly, psi: &Poly) -> ConformalAlgebraSpec {
    let hv = ConformalAlgebraSpec::heisenberg_virasoro();
    let (d, l) = (Poly::var(D), Poly::var(LAMBDA));
    let mut gens = hv.generators.clone();
    gens.push(ConformalGenerator::new("G", Parity::Odd));
    let mut table = hv.table.clone();
    table.insert(pair("L", "G"), ConfExpr::term("G", &(&d + &(a * &l)) + b));
    table.insert(pair("I", "G"), ConfExpr::term("G", c.clone()));
    let mut gg = ConfExpr::term("L", phi.clone());
    gg.add_term("I", psi);
    table.insert(pair("G", "G"), gg);
    ConformalAlgebraSpec::complete_by_skew(gens, table).expect("extension table is well formed")
}

/// Parameters of the odd rank-one extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionAnsatz {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    /// Polynomial in `∂` and `λ`.
    pub phi: Poly,
    /// Polynomial in `∂` and `λ`.
    pub psi: Poly,
}

impl ExtensionAnsatz {
    pub fn validate(&self) -> Result<(), ConformalError> {
        for (name, p) in [("phi", &self.phi), ("psi", &self.psi)] {
            if p.variables().iter().any(|&v| v != D && v != LAMBDA) {
                return Err(ConformalError::BadAnsatz(format!("{name} may only involve ∂ and λ")));
            }
        }
        if self.phi.is_zero() && self.psi.is_zero() {
            return Err(ConformalError::BadAnsatz("phi and psi cannot both vanish".to_string()));
        }
        Ok(())
    }
}

/// The rank-one module `ℂ[∂]v` with `L λ v = (∂ + aλ + b)v`, `I λ v = cv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneModuleSpec {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl RankOneModuleSpec {
    pub fn new(a: impl Into<Scalar>, b: impl Into<Scalar>, c: impl Into<Scalar>) -> Self {
        RankOneModuleSpec {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn action(&self) -> RankOneAction {
        let (d, l) = (Poly::var(D), Poly::var(LAMBDA));
        let mut actions = BTreeMap::new();
        actions.insert(
            "L".to_string(),
            &(&d + &l.scale(&self.a)) + &Poly::constant(self.b.clone()),
        );
        actions.insert("I".to_string(), Poly::constant(self.c.clone()));
        RankOneAction { actions }
    }
}

/// An arbitrary λ-action on a rank-one free module `ℂ[∂]v` (`v` even):
/// `g λ v = A_g(∂, λ) v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneAction {
    pub actions: BTreeMap<String, Poly>,
}

impl RankOneAction {
    fn get(&self, g: &str) -> Result<&Poly, ConformalError> {
        self.actions
            .get(g)
            .ok_or_else(|| ConformalError::UnknownGenerator(g.to_string()))
    }
}

/// One failed instance of an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub generators: Vec<String>,
    pub residual: ConfExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed_on(&self, generators: &[&str]) -> bool {
        self.violations
            .iter()
            .any(|v| v.generators.iter().map(String::as_str).eq(generators.iter().copied()))
    }
}

/// `[x λ y]` for ℂ[∂]-combinations of generators.
pub fn lambda_bracket(
    spec: &ConformalAlgebraSpec,
    x: &ConfExpr,
    y: &ConfExpr,
) -> Result<LambdaPolynomial, ConformalError> {
    spec.bracket_with(x, y, &Poly::var(LAMBDA)).map(LambdaPolynomial)
}

/// Residuals `[x λ y] + (-1)^{|x||y|}[y_{-λ-∂} x]` over all ordered generator
/// pairs, nonzero ones only.
pub(crate) fn skew_residuals(spec: &ConformalAlgebraSpec) -> Result<Vec<Violation>, ConformalError> {
    let mut out = Vec::new();
    for x in &spec.generators {
        for y in &spec.generators {
            let sign = Parity::swap_sign(x.parity, y.parity);
            let forward = spec.entry(&x.name, &y.name)?;
            let backward = mirror(spec.entry(&y.name, &x.name)?);
            let residual = forward.add(&backward.scale(&sign));
            if !residual.is_zero() {
                out.push(Violation {
                    generators: vec![x.name.clone(), y.name.clone()],
                    residual,
                });
            }
        }
    }
    Ok(out)
}

/// Jacobi residual for one generator triple:
/// `[a λ [b µ c]] - [[a λ b] λ+µ c] - (-1)^{|a||b|}[b µ [a λ c]]`.
pub fn jacobi_residual(spec: &ConformalAlgebraSpec, a: &str, b: &str, c: &str) -> Result<ConfExpr, ConformalError> {
    let (lam, mu) = (Poly::var(LAMBDA), Poly::var(MU));
    let (ga, gb, gc) = (ConfExpr::gen(a), ConfExpr::gen(b), ConfExpr::gen(c));
    let sign = Parity::swap_sign(spec.parity_of(a)?, spec.parity_of(b)?);

    let inner = spec.bracket_with(&gb, &gc, &mu)?;
    let lhs = spec.bracket_with(&ga, &inner, &lam)?;

    let ab = spec.bracket_with(&ga, &gb, &lam)?;
    let first = spec.bracket_with(&ab, &gc, &(&lam + &mu))?;

    let ac = spec.bracket_with(&ga, &gc, &lam)?;
    let second = spec.bracket_with(&gb, &ac, &mu)?.scale(&sign);

    Ok(lhs.sub(&first).sub(&second))
}

/// Both sides of the Jacobi identity for one triple, for inspection.
pub fn jacobi_sides(
    spec: &ConformalAlgebraSpec,
    a: &str,
    b: &str,
    c: &str,
) -> Result<(ConfExpr, ConfExpr), ConformalError> {
    let (lam, mu) = (Poly::var(LAMBDA), Poly::var(MU));
    let (ga, gb, gc) = (ConfExpr::gen(a), ConfExpr::gen(b), ConfExpr::gen(c));
    let sign = Parity::swap_sign(spec.parity_of(a)?, spec.parity_of(b)?);
    let lhs = spec.bracket_with(&ga, &spec.bracket_with(&gb, &gc, &mu)?, &lam)?;
    let ab = spec.bracket_with(&ga, &gb, &lam)?;
    let ac = spec.bracket_with(&ga, &gc, &lam)?;
    let rhs = spec
        .bracket_with(&ab, &gc, &(&lam + &mu))?
        .add(&spec.bracket_with(&gb, &ac, &mu)?.scale(&sign));
    Ok((lhs, rhs))
}

pub(crate) fn jacobi_residuals(spec: &ConformalAlgebraSpec) -> Result<Vec<Violation>, ConformalError> {
    let mut out = Vec::new();
    for a in &spec.generators {
        for b in &spec.generators {
            for c in &spec.generators {
                let residual = jacobi_residual(spec, &a.name, &b.name, &c.name)?;
                if !residual.is_zero() {
                    out.push(Violation {
                        generators: vec![a.name.clone(), b.name.clone(), c.name.clone()],
                        residual,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Skew supersymmetry on every ordered generator pair.
pub fn check_skew(spec: &ConformalAlgebraSpec) -> CheckReport {
    CheckReport {
        violations: skew_residuals(spec).expect("validated spec resolves all generators"),
    }
}

/// The conformal Jacobi identity on every generator triple, as an identity in
/// ℂ[∂, λ, µ].
pub fn check_jacobi(spec: &ConformalAlgebraSpec) -> CheckReport {
    CheckReport {
        violations: jacobi_residuals(spec).expect("validated spec resolves all generators"),
    }
}

/// Module axiom `x λ (y µ v) - (-1)^{|x||y|} y µ (x λ v) = [x λ y]_{λ+µ} v`
/// for every generator pair acting on a rank-one module.
pub fn check_conformal_module(
    spec: &ConformalAlgebraSpec,
    module: &RankOneAction,
) -> Result<CheckReport, ConformalError> {
    let (d, lam, mu) = (Poly::var(D), Poly::var(LAMBDA), Poly::var(MU));
    let nu = &lam + &mu;
    let mut report = CheckReport::default();
    for x in spec.generators() {
        for y in spec.generators() {
            let ax = module.get(&x.name)?;
            let ay_mu = module.get(&y.name)?.substitute(LAMBDA, &mu);
            let sign = Parity::swap_sign(x.parity, y.parity);

            let first = &ay_mu.substitute(D, &(&d + &lam)) * ax;
            let second = (&ax.substitute(D, &(&d + &mu)) * &ay_mu).scale(&sign);

            let mut rhs = Poly::zero();
            for (g, r) in spec.entry(&x.name, &y.name)?.terms() {
                let left = r.substitute(D, &-&nu);
                let act = module.get(g)?.substitute(LAMBDA, &nu);
                rhs = &rhs + &(&left * &act);
            }

            let residual = &(&first - &second) - &rhs;
            if !residual.is_zero() {
                report.violations.push(Violation {
                    generators: vec![x.name.clone(), y.name.clone()],
                    residual: ConfExpr::term("v", residual),
                });
            }
        }
    }
    Ok(report)
}

/// `V(a,b,c)` is irreducible exactly when `(a, c) ≠ (0, 0)`.
pub fn rank_one_irreducible(module: &RankOneModuleSpec) -> bool {
    !(module.a.is_zero() && module.c.is_zero())
}

/// All nonzero `x_(j) y = j! · [λ^j][x λ y]`.
pub fn jth_products(spec: &ConformalAlgebraSpec, x: &str, y: &str) -> Result<Vec<(u32, ConfExpr)>, ConformalError> {
    let bracket = LambdaPolynomial(spec.entry(x, y)?.clone());
    let mut out = Vec::new();
    for j in 0..=bracket.lambda_degree() {
        let layer = bracket.lambda_coefficient(j).scale(&factorial(j));
        if !layer.is_zero() {
            out.push((j, layer));
        }
    }
    Ok(out)
}

/// `Σ λ^j / j! · products[j]`.
pub fn assemble_from_products(products: &[(u32, ConfExpr)]) -> ConfExpr {
    let mut out = ConfExpr::zero();
    for (j, layer) in products {
        let weight = Poly::term(Monomial::var(LAMBDA, *j), factorial(*j).inv().expect("nonzero"));
        out = out.add(&layer.times(&weight));
    }
    out
}

/// Whether an expression is homogeneous, and its parity.
pub fn parity_of_expr(spec: &ConformalAlgebraSpec, x: &ConfExpr) -> Result<Option<Parity>, ConformalError> {
    spec.expr_parity(x)
}
