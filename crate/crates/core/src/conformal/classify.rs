//! Classification of the odd rank-one extensions of the Heisenberg-Virasoro
//! conformal algebra.
//!
//! The ansatz has unknowns `a`, `b`, `c` and the coefficients of `φ`, `ψ` up to
//! a total degree bound. Skew symmetry and Jacobi become polynomial
//! identities in `∂, λ, µ`; their coefficients are linear forms in the `φ, ψ`
//! coefficients over `ℚ[a, b, c]`. The solver splits on `c` and `b`
//! (zero or not), shrinks the coefficient space with every constraint that is
//! numeric up to a nonzero factor, and finally pins `a` down through the
//! maximal minors of what remains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{extension_table, jacobi_residuals, skew_residuals, ConformalError};
use crate::linalg::{self, Matrix};
use crate::poly::{Monomial, Poly, Var, D, FIRST_UNKNOWN, LAMBDA, MU};
use crate::scalar::Scalar;

const A: Var = FIRST_UNKNOWN;
const B: Var = FIRST_UNKNOWN + 1;
const C: Var = FIRST_UNKNOWN + 2;
const FIRST_COEFF: Var = FIRST_UNKNOWN + 3;

/// Restriction on a parameter when entering the case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParamValue {
    #[default]
    Any,
    Zero,
    NonZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Branch {
    pub b: ParamValue,
    pub c: ParamValue,
}

/// A family of solutions. `phi` and `psi` are polynomials in `∂`, `λ` and the
/// free parameters, which are the variables `FIRST_UNKNOWN + i` named by
/// `parameters[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SolutionFamily {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub phi: Poly,
    pub psi: Poly,
    pub parameters: Vec<String>,
}

impl SolutionFamily {
    fn var_name(&self, v: Var) -> String {
        match v {
            D => "∂".to_string(),
            LAMBDA => "λ".to_string(),
            _ => self.parameters[(v - FIRST_UNKNOWN) as usize].clone(),
        }
    }

    pub fn render_phi(&self) -> String {
        self.phi.render(&|v| self.var_name(v))
    }

    pub fn render_psi(&self) -> String {
        self.psi.render(&|v| self.var_name(v))
    }
}

/// All solution families with `(φ, ψ) ≠ (0, 0)` and `deg φ, deg ψ ≤ degree_bound`.
pub fn classify_rank_one_extension(degree_bound: u32) -> Result<Vec<SolutionFamily>, ConformalError> {
    classify_rank_one_extension_in(degree_bound, Branch::default())
}

/// As [`classify_rank_one_extension`], restricted to a branch of the case split.
pub fn classify_rank_one_extension_in(
    degree_bound: u32,
    branch: Branch,
) -> Result<Vec<SolutionFamily>, ConformalError> {
    let system = System::generate(degree_bound)?;
    let mut families = Vec::new();
    for c in split(branch.c) {
        for b in split(branch.b) {
            families.extend(system.solve_branch(b, c)?);
        }
    }
    families.sort();
    families.dedup();
    Ok(families)
}

fn split(p: ParamValue) -> Vec<ParamValue> {
    match p {
        ParamValue::Any => vec![ParamValue::Zero, ParamValue::NonZero],
        other => vec![other],
    }
}

/// Linear constraints `Σ_k row[k] · X_k = 0` with `row[k] ∈ ℚ[a, b, c]`.
struct System {
    monomials: Vec<Monomial>,
    rows: Vec<Vec<Poly>>,
}

impl System {
    fn generate(degree_bound: u32) -> Result<System, ConformalError> {
        let mut monomials = Vec::new();
        for total in 0..=degree_bound {
            for i in (0..=total).rev() {
                monomials.push(Monomial::from_pairs(vec![(D, i), (LAMBDA, total - i)]));
            }
        }
        let n = monomials.len();
        let coeff_var = |k: usize| FIRST_COEFF + k as Var;
        let mut phi = Poly::zero();
        let mut psi = Poly::zero();
        for (k, m) in monomials.iter().enumerate() {
            phi = &phi + &Poly::term(m.mul(&Monomial::var(coeff_var(k), 1)), Scalar::one());
            psi = &psi + &Poly::term(m.mul(&Monomial::var(coeff_var(n + k), 1)), Scalar::one());
        }
        let spec = extension_table(&Poly::var(A), &Poly::var(B), &Poly::var(C), &phi, &psi);

        let mut residuals = skew_residuals(&spec)?;
        residuals.extend(jacobi_residuals(&spec)?);

        let unknowns: Vec<Var> = (0..2 * n).map(coeff_var).collect();
        let mut rows = Vec::new();
        for violation in residuals {
            for (_, coeff) in violation.residual.terms() {
                for (_, form) in coeff.coefficients_in(&[D, LAMBDA, MU]) {
                    let mut row = vec![Poly::zero(); 2 * n];
                    for (m, k) in form.terms() {
                        let (inside, outside) = m.partition(&unknowns);
                        match inside.pairs() {
                            [(v, 1)] => row[(v - FIRST_COEFF) as usize].add_term(outside, k),
                            _ => {
                                return Err(ConformalError::Unresolved(
                                    "constraint is not linear in the φ, ψ coefficients".into(),
                                ))
                            }
                        }
                    }
                    if row.iter().any(|p| !p.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        Ok(System { monomials, rows })
    }

    fn solve_branch(&self, b: ParamValue, c: ParamValue) -> Result<Vec<SolutionFamily>, ConformalError> {
        let n = self.monomials.len() * 2;
        let mut nonzero = Vec::new();
        let mut rows: Vec<Vec<Poly>> = self.rows.clone();
        for (var, value) in [(B, b), (C, c)] {
            match value {
                ParamValue::Zero => {
                    for row in rows.iter_mut() {
                        for p in row.iter_mut() {
                            *p = p.evaluate(var, &Scalar::zero());
                        }
                    }
                }
                ParamValue::NonZero => nonzero.push(var),
                ParamValue::Any => unreachable!("branches are split before solving"),
            }
        }

        // Columns of `basis` span the part of the coefficient space still in play.
        let mut basis = linalg::identity(n);
        let mut width = n;
        loop {
            rows.retain(|r| r.iter().any(|p| !p.is_zero()));
            let numeric: Matrix = rows.iter().filter_map(|r| numeric_row(r, &nonzero)).collect();
            if linalg::rank(&numeric, width) == 0 {
                break;
            }
            let k = columns(&linalg::kernel(&numeric, width), width);
            let new_width = k.first().map_or(0, Vec::len);
            if new_width == 0 {
                return Ok(Vec::new());
            }
            basis = linalg::mul(&basis, &k, new_width);
            rows = rows.iter().map(|r| restrict(r, &k, new_width)).collect();
            width = new_width;
        }

        if rows.is_empty() {
            return Err(ConformalError::Unresolved(
                "a family survives with a free structure parameter".into(),
            ));
        }
        if rows.iter().flatten().any(|p| p.variables().iter().any(|&v| v != A)) {
            return Err(ConformalError::Unresolved(
                "constraints still depend on b or c after elimination".into(),
            ));
        }

        let matrix: Vec<Vec<UniPoly>> = rows
            .iter()
            .map(|r| r.iter().map(|p| UniPoly::from_poly(p, A)).collect())
            .collect();
        let (rank, diagonal) = hermite_diagonal(matrix, width);
        if rank < width {
            return Err(ConformalError::Unresolved(
                "the coefficient space has a kernel for generic a".into(),
            ));
        }
        let determinant = diagonal
            .iter()
            .fold(UniPoly::constant(Scalar::one()), |acc, d| acc.mul(d));
        let (roots, rest) = rational_roots(&determinant);
        if rest.degree() > 0 {
            return Err(ConformalError::Unresolved(format!(
                "candidate values of a outside ℚ (factor of degree {})",
                rest.degree()
            )));
        }

        let mut out = Vec::new();
        for a in roots {
            let numeric: Matrix = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|p| p.evaluate(A, &a).as_constant().expect("only a occurs"))
                        .collect()
                })
                .collect();
            let k = columns(&linalg::kernel(&numeric, width), width);
            let dim = k.first().map_or(0, Vec::len);
            if dim == 0 {
                continue;
            }
            let full = linalg::mul(&basis, &k, dim);
            out.push(self.family(a, &nonzero, &full, dim)?);
        }
        Ok(out)
    }

    fn family(&self, a: Scalar, nonzero: &[Var], full: &Matrix, dim: usize) -> Result<SolutionFamily, ConformalError> {
        if !nonzero.is_empty() {
            return Err(ConformalError::Unresolved(
                "a family survives with b or c free and nonzero".into(),
            ));
        }
        // Canonical basis: reduced row echelon form of the spanning vectors.
        let mut vectors: Matrix = (0..dim)
            .map(|j| full.iter().map(|row| row[j].clone()).collect())
            .collect();
        linalg::rref(&mut vectors, full.len());
        let half = self.monomials.len();
        let mut phi = Poly::zero();
        let mut psi = Poly::zero();
        for (t, v) in vectors.iter().enumerate() {
            let param = Monomial::var(FIRST_UNKNOWN + t as Var, 1);
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let target = if k < half { &mut phi } else { &mut psi };
                target.add_term(self.monomials[k % half].mul(&param), x);
            }
        }
        let parameters = if vectors.len() == 1 {
            vec!["Δ".to_string()]
        } else {
            (1..=vectors.len()).map(|i| format!("Δ{i}")).collect()
        };
        Ok(SolutionFamily {
            a,
            b: Scalar::zero(),
            c: Scalar::zero(),
            phi,
            psi,
            parameters,
        })
    }
}

/// If every entry is a rational multiple of one monomial in the nonzero
/// parameters, the row divided by that monomial.
fn numeric_row(row: &[Poly], nonzero: &[Var]) -> Option<Vec<Scalar>> {
    let mut common: Option<&Monomial> = None;
    let mut out = Vec::with_capacity(row.len());
    for p in row {
        if p.is_zero() {
            out.push(Scalar::zero());
            continue;
        }
        if p.len() != 1 {
            return None;
        }
        let (m, k) = p.terms().next().expect("one term");
        if m.pairs().iter().any(|(v, _)| !nonzero.contains(v)) {
            return None;
        }
        match common {
            None => common = Some(m),
            Some(c) if c != m => return None,
            _ => {}
        }
        out.push(k.clone());
    }
    common.map(|_| out)
}

/// Kernel vectors as the columns of a matrix with `width` rows.
fn columns(vectors: &[Vec<Scalar>], width: usize) -> Matrix {
    (0..width)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect()
}

fn restrict(row: &[Poly], k: &Matrix, new_width: usize) -> Vec<Poly> {
    (0..new_width)
        .map(|j| {
            let mut acc = Poly::zero();
            for (p, krow) in row.iter().zip(k) {
                if !p.is_zero() && !krow[j].is_zero() {
                    acc.add_assign_scaled(p, &krow[j]);
                }
            }
            acc
        })
        .collect()
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct UniPoly(Vec<Scalar>);

impl UniPoly {
    fn constant(c: Scalar) -> Self {
        UniPoly(vec![c]).trimmed()
    }

    fn from_poly(p: &Poly, v: Var) -> Self {
        let mut coeffs = vec![Scalar::zero(); p.degree_in(v) as usize + 1];
        for (m, k) in p.terms() {
            coeffs[m.exponent(v) as usize] += k;
        }
        UniPoly(coeffs).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Scalar::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Scalar {
        self.0.last().expect("nonzero polynomial")
    }

    fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in other.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UniPoly(out).trimmed()
    }

    fn sub_scaled(&self, other: &UniPoly, q: &UniPoly) -> UniPoly {
        let prod = other.mul(q);
        let len = self.0.len().max(prod.0.len());
        let mut out = vec![Scalar::zero(); len];
        for (i, x) in self.0.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in prod.0.iter().enumerate() {
            out[i] -= x;
        }
        UniPoly(out).trimmed()
    }

    fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let mut rem = self.clone();
        let mut quot = vec![Scalar::zero(); self.0.len().saturating_sub(divisor.degree()).max(1)];
        while !rem.is_zero() && rem.degree() >= divisor.degree() {
            let shift = rem.degree() - divisor.degree();
            let k = rem.lead() / divisor.lead();
            quot[shift] += &k;
            let mut mono = vec![Scalar::zero(); shift + 1];
            mono[shift] = k;
            rem = rem.sub_scaled(divisor, &UniPoly(mono));
        }
        (UniPoly(quot).trimmed(), rem)
    }

    fn eval(&self, x: &Scalar) -> Scalar {
        self.0.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }
}

/// Row echelon form over `ℚ[a]` by the Euclidean algorithm; returns the rank
/// and the pivots.
fn hermite_diagonal(mut m: Vec<Vec<UniPoly>>, width: usize) -> (usize, Vec<UniPoly>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        loop {
            let candidates: Vec<usize> = (r..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
            let Some(&best) = candidates.iter().min_by_key(|&&i| m[i][col].degree()) else {
                break;
            };
            if candidates.len() == 1 {
                m.swap(r, best);
                pivots.push(m[r][col].clone());
                r += 1;
                break;
            }
            m.swap(r, best);
            let pivot_row = m[r].clone();
            for row in m.iter_mut().skip(r + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let (q, _) = row[col].div_rem(&pivot_row[col]);
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub_scaled(p, &q);
                }
            }
        }
        if r == m.len() {
            break;
        }
    }
    (pivots.len(), pivots)
}

/// Distinct rational roots and the cofactor left after dividing them out.
fn rational_roots(p: &UniPoly) -> (Vec<Scalar>, UniPoly) {
    let mut rest = p.clone();
    let mut roots = Vec::new();
    if rest.is_zero() {
        return (roots, rest);
    }
    while let Some(root) = find_rational_root(&rest) {
        let divisor = UniPoly(vec![-&root, Scalar::one()]);
        while rest.eval(&root).is_zero() {
            rest = rest.div_rem(&divisor).0;
        }
        roots.push(root);
    }
    roots.sort();
    (roots, rest)
}

fn find_rational_root(p: &UniPoly) -> Option<Scalar> {
    if p.degree() == 0 {
        return None;
    }
    if p.0[0].is_zero() {
        return Some(Scalar::zero());
    }
    let lcm = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> =
        p.0.iter()
            .map(|c| (Scalar::from_bigint(lcm.clone()) * c).numer().clone())
            .collect();
    for q in divisors(ints.last().expect("nonzero")) {
        for num in divisors(&ints[0]) {
            for sign in [1i64, -1] {
                let candidate = Scalar::from_bigint(num.clone() * sign) / Scalar::from_bigint(q.clone());
                if p.eval(&candidate).is_zero() {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots_of_a_cubic() {
        // (2a - 1)(a + 3)(a² + 1)
        let p = UniPoly(vec![
            Scalar::from_int(-3),
            Scalar::from_int(5),
            Scalar::from_int(-1),
            Scalar::from_int(5),
            Scalar::from_int(2),
        ]);
        let (roots, rest) = rational_roots(&p);
        assert_eq!(roots, vec![Scalar::from_int(-3), Scalar::ratio(1, 2)]);
        assert_eq!(rest.degree(), 2);
    }

    #[test]
    fn degree_zero_gives_the_single_family() {
        let families = classify_rank_one_extension(0).unwrap();
        assert_eq!(families.len(), 1);
        let f = &families[0];
        assert_eq!(f.a, Scalar::one());
        assert!(f.b.is_zero() && f.c.is_zero() && f.phi.is_zero());
        assert_eq!(f.render_psi(), "Δ");
    }

    #[test]
    fn c_nonzero_branch_is_empty() {
        let branch = Branch {
            b: ParamValue::Any,
            c: ParamValue::NonZero,
        };
        assert!(classify_rank_one_extension_in(3, branch).unwrap().is_empty());
    }
}
