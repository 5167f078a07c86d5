use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{
    generator_name, int_field, parse_generator, scalar_field, BaseModule, BasisKey, ConditionsReport, Coords,
    InducedError,
};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use crate::superalgebra::{generator_bracket, Family, Generator, SubalgebraSpec};
use crate::Parity;

/// A finite-dimensional module over `𝔖_{α,β}` given by one matrix per
/// generator with nonzero action. `matrix[r][c]` is the coefficient of basis
/// element `r` in the image of basis element `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTableModule {
    alpha: i64,
    beta: i64,
    z: i64,
    c0: Scalar,
    parities: Vec<Parity>,
    actions: BTreeMap<Generator, Matrix>,
    verma: Option<Scalar>,
}

/// The highest weight module of weight `(h, c₀)` over `𝔖₀`: the Clifford
/// module `{v, w}` with `G₀v = w`, `G₀w = c₀v`, extended by zero.
pub fn verma(h: Scalar, c0: Scalar) -> FiniteTableModule {
    let (zero, one) = (Scalar::zero(), Scalar::one());
    let mut actions = BTreeMap::new();
    actions.insert(
        Generator::int(Family::L, 0),
        vec![vec![h.clone(), zero.clone()], vec![zero.clone(), h.clone()]],
    );
    actions.insert(
        Generator::int(Family::G, 0),
        vec![vec![zero.clone(), c0.clone()], vec![one, zero]],
    );
    let mut m = FiniteTableModule::new(0, 0, 0, c0, vec![Parity::Even, Parity::Odd], actions)
        .expect("the Clifford module satisfies the relations");
    m.verma = Some(h);
    m
}

impl FiniteTableModule {
    /// Validates dimensions, parity, `I₀ = c₀·id` and every bracket relation
    /// of `𝔖_{α,β}` that can involve a stored matrix. A missing `I₀` is
    /// filled in as `c₀·id`.
    pub fn new(
        alpha: i64,
        beta: i64,
        z: i64,
        c0: Scalar,
        parities: Vec<Parity>,
        actions: BTreeMap<Generator, Matrix>,
    ) -> Result<Self, InducedError> {
        let sub = SubalgebraSpec::alpha_beta(alpha, beta)?;
        if z < 0 {
            return Err(InducedError::InvalidModule(format!("z must be non-negative, got {z}")));
        }
        let n = parities.len();
        let scalar_id = |c: &Scalar| -> Matrix {
            let mut m = linalg::identity(n);
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = c.clone();
            }
            m
        };
        let i0 = Generator::int(Family::I, 0);
        let mut actions: BTreeMap<Generator, Matrix> = actions
            .into_iter()
            .filter(|(_, m)| m.iter().flatten().any(|x| !x.is_zero()))
            .collect();
        match actions.get(&i0) {
            Some(m) if *m != scalar_id(&c0) => {
                return Err(InducedError::InvalidModule(
                    "I_0 must act as c0 times the identity".into(),
                ))
            }
            None if !c0.is_zero() && n > 0 => {
                actions.insert(i0, scalar_id(&c0));
            }
            _ => {}
        }
        for (g, m) in &actions {
            if !sub.contains(g) {
                return Err(InducedError::NotInSubalgebra(*g));
            }
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(InducedError::InvalidModule(format!(
                    "matrix of {} must be {n}×{n}",
                    generator_name(g)
                )));
            }
            for (r, row) in m.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    if !x.is_zero() && parities[r] != parities[c].sum(g.parity()) {
                        return Err(InducedError::InvalidModule(format!(
                            "{} does not respect parity",
                            generator_name(g)
                        )));
                    }
                }
            }
        }
        let module = FiniteTableModule {
            alpha,
            beta,
            z,
            c0,
            parities,
            actions,
            verma: None,
        };
        module.check_relations(&sub)?;
        Ok(module)
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn matrix(&self, g: &Generator) -> Option<&Matrix> {
        self.actions.get(g)
    }

    fn product(&self, a: &Generator, b: &Generator) -> Option<Matrix> {
        let (x, y) = (self.actions.get(a)?, self.actions.get(b)?);
        Some(linalg::mul(x, y, self.dim()))
    }

    /// `ρ(x)ρ(y) - (-1)^{|x||y|} ρ(y)ρ(x) = ρ([x, y])` on a window large
    /// enough that every bracket outside it involves only zero matrices.
    fn check_relations(&self, sub: &SubalgebraSpec) -> Result<(), InducedError> {
        let n = self.dim();
        let top = self
            .actions
            .keys()
            .filter_map(|g| g.index.as_int())
            .max()
            .unwrap_or(0)
            .max(self.z + self.alpha)
            + self.alpha
            + self.beta
            + 1;
        let window: Vec<Generator> = Family::ALL
            .iter()
            .flat_map(|&f| (sub.lower_bound(f)..=top).map(move |i| Generator::int(f, i)))
            .collect();
        let zero = vec![vec![Scalar::zero(); n]; n];
        for x in &window {
            for y in &window {
                let xy = self.product(x, y);
                let yx = self.product(y, x);
                let target = generator_bracket(*x, *y).and_then(|(c, g)| {
                    self.actions.get(&g).map(|m| {
                        m.iter()
                            .map(|row| row.iter().map(|v| v * &c).collect())
                            .collect::<Matrix>()
                    })
                });
                if xy.is_none() && yx.is_none() && target.is_none() {
                    continue;
                }
                let sign = Parity::swap_sign(x.parity(), y.parity());
                let xy = xy.unwrap_or_else(|| zero.clone());
                let yx = yx.unwrap_or_else(|| zero.clone());
                let target = target.unwrap_or_else(|| zero.clone());
                for r in 0..n {
                    for c in 0..n {
                        if &xy[r][c] - &(&sign * &yx[r][c]) != target[r][c] {
                            return Err(InducedError::InvalidModule(format!(
                                "relation for [{}, {}] fails",
                                generator_name(x),
                                generator_name(y)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(doc: &Value) -> Result<Self, InducedError> {
        let parities = doc
            .get("parities")
            .and_then(Value::as_array)
            .ok_or_else(|| InducedError::InvalidModule("missing \"parities\"".into()))?
            .iter()
            .map(|p| match p.as_str() {
                Some("even") => Ok(Parity::Even),
                Some("odd") => Ok(Parity::Odd),
                _ => Err(InducedError::InvalidModule(format!("invalid parity {p}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut actions = BTreeMap::new();
        if let Some(obj) = doc.get("actions") {
            let obj = obj
                .as_object()
                .ok_or_else(|| InducedError::InvalidModule("\"actions\" must be an object".into()))?;
            for (name, rows) in obj {
                let g = parse_generator(name)?;
                let m = rows
                    .as_array()
                    .ok_or_else(|| InducedError::InvalidModule(format!("matrix of {name} must be an array")))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| InducedError::InvalidModule(format!("row of {name} must be an array")))?
                            .iter()
                            .map(|x| {
                                scalar_field(&json!({ "x": x }), "x")
                                    .map_err(|_| InducedError::InvalidModule(format!("invalid entry {x} in {name}")))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Matrix, _>>()?;
                actions.insert(g, m);
            }
        }
        FiniteTableModule::new(
            int_field(doc, "alpha", Some(0))?,
            int_field(doc, "beta", Some(0))?,
            int_field(doc, "z", Some(0))?,
            scalar_field(doc, "c0")?,
            parities,
            actions,
        )
    }
}

impl BaseModule for FiniteTableModule {
    fn kind(&self) -> &'static str {
        if self.verma.is_some() {
            "verma"
        } else {
            "table"
        }
    }

    fn alpha(&self) -> i64 {
        self.alpha
    }

    fn beta(&self) -> i64 {
        self.beta
    }

    fn z(&self) -> i64 {
        self.z
    }

    fn c0(&self) -> Scalar {
        self.c0.clone()
    }

    fn parity(&self, key: &BasisKey) -> Parity {
        match key {
            BasisKey::Index(i) => self.parities[*i],
            BasisKey::Word(_) => unreachable!("finite modules use indexed keys"),
        }
    }

    fn contains_key(&self, key: &BasisKey) -> bool {
        matches!(key, BasisKey::Index(i) if *i < self.dim())
    }

    fn act_basis(&self, g: Generator, key: &BasisKey) -> Result<Coords, InducedError> {
        let sub = SubalgebraSpec::alpha_beta(self.alpha, self.beta)?;
        if !sub.contains(&g) {
            return Err(InducedError::NotInSubalgebra(g));
        }
        let BasisKey::Index(c) = key else {
            return Err(InducedError::Domain(format!("{key:?} is not a basis element")));
        };
        let mut out = Coords::new();
        if let Some(m) = self.actions.get(&g) {
            for (r, row) in m.iter().enumerate() {
                if !row[*c].is_zero() {
                    out.insert(BasisKey::Index(r), row[*c].clone());
                }
            }
        }
        Ok(out)
    }

    fn basis_sample(&self, _bound: usize) -> Vec<BasisKey> {
        (0..self.dim()).map(BasisKey::Index).collect()
    }

    fn action_ceiling(&self, _key: &BasisKey) -> i64 {
        self.actions
            .keys()
            .filter_map(|g| g.index.as_int())
            .max()
            .unwrap_or(0)
            .max(0)
    }

    fn generating_key(&self) -> BasisKey {
        BasisKey::Index(0)
    }

    fn describe(&self) -> Value {
        if let Some(h) = &self.verma {
            return json!({ "kind": "verma", "h": h.to_string(), "c0": self.c0.to_string() });
        }
        let mut actions = Map::new();
        for (g, m) in &self.actions {
            let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect();
            actions.insert(generator_name(g), json!(rows));
        }
        json!({
            "kind": "table",
            "alpha": self.alpha,
            "beta": self.beta,
            "z": self.z,
            "c0": self.c0.to_string(),
            "parities": self.parities.iter().map(|p| if p.is_odd() { "odd" } else { "even" }).collect::<Vec<_>>(),
            "actions": actions,
        })
    }

    fn validate(&self, _sample_bound: usize) -> ConditionsReport {
        let iz = Generator::int(Family::I, self.z);
        let injective = match self.actions.get(&iz) {
            Some(m) => linalg::rank(m, self.dim()) == self.dim(),
            None => self.dim() == 0,
        };
        let violations = self
            .actions
            .keys()
            .filter(|g| {
                let i = g.index.as_int().expect("Ramond index");
                match g.family {
                    Family::L => i > self.z + self.alpha,
                    Family::G => i > self.z + self.beta,
                    Family::I => i > self.z,
                }
            })
            .copied()
            .collect();
        ConditionsReport::new(self.z, iz, injective, violations)
    }
}
