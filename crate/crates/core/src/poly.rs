//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are small integers. The conformal calculus reserves the first
//! three: `∂` ([`D`]), `λ` ([`LAMBDA`]) and `µ` ([`MU`]); anything above is
//! free for unknowns.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

pub type Var = u16;

pub const D: Var = 0;
pub const LAMBDA: Var = 1;
pub const MU: Var = 2;
/// First variable index available for unknowns.
pub const FIRST_UNKNOWN: Var = 3;

/// A power product, stored as `(variable, exponent)` pairs sorted by
/// variable with no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va == vb {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    } else if va < vb {
                        out.push((va, ea));
                        a.next();
                    } else {
                        out.push((vb, eb));
                        b.next();
                    }
                }
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Split off the exponent of `v`.
    pub fn take(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        let rest = self.0.iter().copied().filter(|&(w, _)| w != v).collect();
        (e, Monomial(rest))
    }

    /// Split into the part in `vars` and the rest.
    pub fn partition(&self, vars: &[Var]) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) = self.0.iter().copied().partition(|(v, _)| vars.contains(v));
        (Monomial(inside), Monomial(outside))
    }
}

/// A polynomial: a finite map from monomials to nonzero scalars.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Scalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Monomial::var(v, 1), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The constant term, if the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Poly, k: &Scalar) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &(c * k));
        }
    }

    pub fn scale(&self, k: &Scalar) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, k: &Scalar) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Replace `v` by `replacement` everywhere (polynomial composition).
    pub fn substitute(&self, v: Var, replacement: &Poly) -> Poly {
        let mut powers: Vec<Poly> = vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.take(v);
            if e == 0 {
                out.add_term(rest, c);
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * replacement;
                powers.push(next);
            }
            for (pm, pc) in &powers[e as usize].terms {
                out.add_term(pm.mul(&rest), &(pc * c));
            }
        }
        out
    }

    /// Replace `v` by the constant `value`.
    pub fn evaluate(&self, v: Var, value: &Scalar) -> Poly {
        self.substitute(v, &Poly::constant(value.clone()))
    }

    /// Group terms by their power product in `vars`; each group's value is the
    /// cofactor polynomial in the remaining variables.
    pub fn coefficients_in(&self, vars: &[Var]) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.partition(vars);
            out.entry(inside).or_default().add_term(outside, c);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Render with the given variable names.
    pub fn render(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest total degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.total_degree().cmp(&a.total_degree()).then(a.cmp(b)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let body: Vec<String> = m
                .pairs()
                .iter()
                .map(|&(v, e)| if e == 1 { name(v) } else { format!("{}^{}", name(v), e) })
                .collect();
            if body.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                }
                out.push_str(&body.join(""));
            }
        }
        out
    }
}

/// Names for the conformal variables; unknowns render as `x<n>`.
pub fn default_var_name(v: Var) -> String {
    match v {
        D => "∂".to_string(),
        LAMBDA => "λ".to_string(),
        MU => "µ".to_string(),
        other => format!("x{}", other - FIRST_UNKNOWN),
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_var_name))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_var_name))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Scalar::one())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d() -> Poly {
        Poly::var(D)
    }
    fn l() -> Poly {
        Poly::var(LAMBDA)
    }

    #[test]
    fn substitution_is_composition() {
        // (∂ + 2λ) with λ ↦ -λ - ∂ gives -∂ - 2λ.
        let p = &d() + &l().scale(&Scalar::from_int(2));
        let q = p.substitute(LAMBDA, &(-&(&l() + &d())));
        assert_eq!(q, -&(&d() + &l().scale(&Scalar::from_int(2))));
    }

    #[test]
    fn substitution_of_a_variable_into_itself() {
        // λ^2 with λ ↦ λ + µ.
        let p = l().pow(2);
        let q = p.substitute(LAMBDA, &(&l() + &Poly::var(MU)));
        let expect = &(&l().pow(2) + &(&l() * &Poly::var(MU)).scale(&Scalar::from_int(2))) + &Poly::var(MU).pow(2);
        assert_eq!(q, expect);
    }

    #[test]
    fn coefficient_split() {
        let x = Poly::var(FIRST_UNKNOWN);
        let p = &(&d() * &x) + &(&d() * &l());
        let parts = p.coefficients_in(&[D, LAMBDA]);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&Monomial::var(D, 1)], x);
    }

    #[test]
    fn render_reads_naturally() {
        let p = &(&d() + &l().scale(&Scalar::from_int(2))) - &Poly::int(3);
        assert_eq!(p.to_string(), "∂ + 2λ - 3");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
