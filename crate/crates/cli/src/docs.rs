//! JSON documents: parsing and canonical rendering.
//!
//! Scalars are exact strings (`"p/q"`), indices are integers except for
//! half-integer `G` indices, which are strings such as `"3/2"`.

use std::io::Read;

use serde_json::{json, Map, Value};
use shv_core::conformal::ExtensionAnsatz;
use shv_core::induced::{
    generator_name, module_from_json, parse_generator, BaseModule, BasisKey, Coords, InducedModule, InducedVector,
};
use shv_core::order::{BoolIndex, IndexVector, MonoIndex, PbwIndex};
use shv_core::poly::{Monomial, Poly, D, LAMBDA};
use shv_core::superalgebra::{AlgebraTag, Family, GenIndex, Generator, SuperElement};
use shv_core::Scalar;

use crate::CliError;

/// A document given inline (`{...}` or `[...]`), as `-` for standard input,
/// or as a file path.
pub fn load(arg: &str, stdin: &mut dyn Read) -> Result<Value, CliError> {
    let text = match arg.trim_start().chars().next() {
        Some('{') | Some('[') => arg.to_string(),
        _ if arg == "-" => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
            s
        }
        _ => std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed JSON: {e}")))
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_scalar(v: &Value) -> Result<Scalar, CliError> {
    match v {
        Value::String(s) => s.parse().map_err(|e| bad(format!("invalid scalar {s:?}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::from_int)
            .ok_or_else(|| bad(format!("scalar {n} must be an integer or a \"p/q\" string"))),
        _ => Err(bad(format!("invalid scalar {v}"))),
    }
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, CliError> {
    v.get(name).ok_or_else(|| bad(format!("missing field {name:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn uint(v: &Value, what: &str) -> Result<u32, CliError> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

pub fn parse_tag(name: &str) -> Result<AlgebraTag, CliError> {
    match name {
        "ramond" => Ok(AlgebraTag::Ramond),
        "ns" => Ok(AlgebraTag::NeveuSchwarz),
        _ => Err(bad(format!("unknown algebra {name:?}"))),
    }
}

fn render_gen_index(i: GenIndex) -> Value {
    match i.as_int() {
        Some(n) => json!(n),
        None => json!(i.to_string()),
    }
}

fn parse_gen_index(v: &Value) -> Result<GenIndex, CliError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(GenIndex::int)
            .ok_or_else(|| bad(format!("invalid index {n}"))),
        Value::String(s) => s.parse().map_err(bad),
        _ => Err(bad(format!("invalid index {v}"))),
    }
}

/// `{"terms":[{"coeff":"1","family":"L","index":5}]}`, optionally with an
/// `"algebra"` field that overrides `default`.
pub fn parse_element(doc: &Value, default: AlgebraTag) -> Result<SuperElement, CliError> {
    let tag = match doc.get("algebra") {
        Some(Value::String(s)) => parse_tag(s)?,
        Some(_) => return Err(bad("\"algebra\" must be a string")),
        None => default,
    };
    let mut out = SuperElement::zero(tag);
    for term in array(field(doc, "terms")?, "\"terms\"")? {
        let family = field(term, "family")?
            .as_str()
            .and_then(Family::from_name)
            .ok_or_else(|| bad(format!("invalid family in {term}")))?;
        let g = Generator::new(family, parse_gen_index(field(term, "index")?)?);
        let c = parse_scalar(field(term, "coeff")?)?;
        out.add_term(g, c).map_err(|e| bad(e.to_string()))?;
    }
    Ok(out)
}

pub fn render_element(x: &SuperElement) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(g, c)| json!({ "coeff": c.to_string(), "family": g.family.name(), "index": render_gen_index(g.index) }))
        .collect();
    json!({ "terms": terms })
}

pub fn parse_module(doc: &Value) -> Result<std::sync::Arc<dyn BaseModule>, CliError> {
    module_from_json(doc).map_err(CliError::from)
}

fn render_key(key: &BasisKey) -> Value {
    match key {
        BasisKey::Index(i) => json!(i),
        BasisKey::Word(w) => json!(w.iter().map(generator_name).collect::<Vec<_>>()),
    }
}

fn parse_key(v: &Value) -> Result<BasisKey, CliError> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(|i| BasisKey::Index(i as usize))
            .ok_or_else(|| bad(format!("invalid basis index {n}"))),
        Value::Array(items) => items
            .iter()
            .map(|g| {
                let name = g.as_str().ok_or_else(|| bad(format!("invalid basis letter {g}")))?;
                parse_generator(name).map_err(CliError::from)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BasisKey::Word),
        _ => Err(bad(format!("invalid basis element {v}"))),
    }
}

pub fn render_coords(coords: &Coords) -> Value {
    let items: Vec<Value> = coords
        .iter()
        .map(|(k, c)| json!({ "basis": render_key(k), "coeff": c.to_string() }))
        .collect();
    json!(items)
}

fn parse_coords(v: &Value) -> Result<Vec<(BasisKey, Scalar)>, CliError> {
    array(v, "\"coords\"")?
        .iter()
        .map(|item| Ok((parse_key(field(item, "basis")?)?, parse_scalar(field(item, "coeff")?)?)))
        .collect()
}

fn parse_mono(v: Option<&Value>, what: &str) -> Result<MonoIndex, CliError> {
    let Some(v) = v else {
        return Ok(MonoIndex::zero());
    };
    let mut entries = Vec::new();
    for pair in array(v, what)? {
        match pair.as_array().map(Vec::as_slice) {
            Some([p, e]) => entries.push((uint(p, what)?, uint(e, what)?)),
            _ => return Err(bad(format!("{what} entries must be [position, exponent]"))),
        }
    }
    if entries.iter().any(|&(p, _)| p == 0) {
        return Err(bad(format!("{what} positions start at 1")));
    }
    Ok(MonoIndex::from_entries(entries))
}

fn parse_bool(v: Option<&Value>) -> Result<BoolIndex, CliError> {
    let Some(v) = v else {
        return Ok(BoolIndex::zero());
    };
    let positions = array(v, "\"j\"")?
        .iter()
        .map(|p| uint(p, "\"j\""))
        .collect::<Result<Vec<_>, _>>()?;
    if positions.contains(&0) {
        return Err(bad("\"j\" positions start at 1"));
    }
    Ok(BoolIndex::from_positions(positions))
}

/// `{"terms":[{"i":[[p,e]],"j":[p],"k":[[p,e]],"coords":[...]}]}`. A term may
/// give `"word":["I_-1", ...]` instead of `i`, `j`, `k`; the word is applied
/// to the base coordinates and straightened.
pub fn parse_vector(doc: &Value, module: &InducedModule) -> Result<InducedVector, CliError> {
    let mut out = module.zero();
    for term in array(field(doc, "terms")?, "\"terms\"")? {
        let coords = parse_coords(field(term, "coords")?)?;
        if let Some((key, _)) = coords.iter().find(|(k, _)| !module.base().contains_key(k)) {
            return Err(bad(format!(
                "{} is not a basis element of the base module",
                render_key(key)
            )));
        }
        if let Some(word) = term.get("word") {
            let letters = array(word, "\"word\"")?
                .iter()
                .map(|g| {
                    let name = g.as_str().ok_or_else(|| bad(format!("invalid letter {g}")))?;
                    parse_generator(name).map_err(CliError::from)
                })
                .collect::<Result<Vec<_>, _>>()?;
            for (key, c) in coords {
                let v = module.word_on_base(&letters, key)?;
                out = out.add(&v.scale(&c));
            }
        } else {
            let index = PbwIndex::new(
                parse_mono(term.get("i"), "\"i\"")?,
                parse_bool(term.get("j"))?,
                parse_mono(term.get("k"), "\"k\"")?,
            );
            for (key, c) in coords {
                out.add_term(index.clone(), key, &c);
            }
        }
    }
    Ok(out)
}

fn render_mono(m: &MonoIndex) -> Value {
    json!(m.entries().into_iter().map(|(p, e)| json!([p, e])).collect::<Vec<_>>())
}

pub fn render_pbw(index: &PbwIndex) -> Value {
    json!({
        "i": render_mono(&index.i),
        "j": index.j.positions().collect::<Vec<_>>(),
        "k": render_mono(&index.k),
    })
}

pub fn render_vector(v: &InducedVector) -> Value {
    let terms: Vec<Value> = v
        .terms()
        .map(|(idx, coords)| {
            let mut t = render_pbw(idx);
            t["coords"] = render_coords(coords);
            t
        })
        .collect();
    json!({ "terms": terms })
}

fn key_text(base: &dyn BaseModule, key: &BasisKey) -> String {
    match key {
        BasisKey::Index(0) if base.kind() == "verma" => "v".to_string(),
        BasisKey::Index(1) if base.kind() == "verma" => "w".to_string(),
        BasisKey::Index(i) => format!("b{i}"),
        BasisKey::Word(w) => w.iter().map(|g| format!("{}·", generator_name(g))).collect::<String>() + "v",
    }
}

fn term_text(c: &Scalar, letters: &str) -> String {
    if c.is_integer() {
        format!("{c}·{letters}")
    } else {
        format!("({c})·{letters}")
    }
}

fn join_terms(terms: Vec<(Scalar, String)>) -> String {
    let mut out = String::new();
    for (n, (c, letters)) in terms.into_iter().enumerate() {
        if n == 0 {
            out.push_str(&term_text(&c, &letters));
        } else if c.is_negative() {
            out.push_str(" - ");
            out.push_str(&term_text(&-c, &letters));
        } else {
            out.push_str(" + ");
            out.push_str(&term_text(&c, &letters));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// Human-readable form such as `-1·v + 2·I_-1·w`.
pub fn vector_text(module: &InducedModule, v: &InducedVector) -> String {
    let base = module.base().as_ref();
    let mut terms = Vec::new();
    for (idx, coords) in v.terms() {
        let prefix: String = module
            .word_of(idx)
            .iter()
            .map(|g| format!("{}·", generator_name(g)))
            .collect();
        for (key, c) in coords {
            terms.push((c.clone(), format!("{prefix}{}", key_text(base, key))));
        }
    }
    join_terms(terms)
}

pub fn coords_text(base: &dyn BaseModule, coords: &Coords) -> String {
    join_terms(coords.iter().map(|(k, c)| (c.clone(), key_text(base, k))).collect())
}

/// A polynomial in `∂` and `λ`: a scalar, or a list of
/// `{"coeff": .., "d": .., "lambda": ..}` terms.
fn parse_poly(v: &Value) -> Result<Poly, CliError> {
    if let Some(items) = v.as_array() {
        let mut p = Poly::zero();
        for item in items {
            let d = item.get("d").map(|x| uint(x, "\"d\"")).transpose()?.unwrap_or(0);
            let l = item
                .get("lambda")
                .map(|x| uint(x, "\"lambda\""))
                .transpose()?
                .unwrap_or(0);
            let mono = Monomial::from_pairs(vec![(D, d), (LAMBDA, l)]);
            p.add_term(mono, &parse_scalar(field(item, "coeff")?)?);
        }
        Ok(p)
    } else {
        Ok(Poly::constant(parse_scalar(v)?))
    }
}

fn render_poly(p: &Poly) -> Value {
    let items: Vec<Value> = p
        .terms()
        .map(|(m, c)| json!({ "coeff": c.to_string(), "d": m.exponent(D), "lambda": m.exponent(LAMBDA) }))
        .collect();
    json!(items)
}

/// `{"a":"1","b":"0","c":"0","phi":..,"psi":..}`.
pub fn parse_ansatz(doc: &Value) -> Result<ExtensionAnsatz, CliError> {
    let a = ExtensionAnsatz {
        a: parse_scalar(field(doc, "a")?)?,
        b: parse_scalar(field(doc, "b")?)?,
        c: parse_scalar(field(doc, "c")?)?,
        phi: parse_poly(field(doc, "phi")?)?,
        psi: parse_poly(field(doc, "psi")?)?,
    };
    a.validate().map_err(|e| bad(e.to_string()))?;
    Ok(a)
}

pub fn render_ansatz(a: &ExtensionAnsatz) -> Value {
    let mut m = Map::new();
    m.insert("a".into(), json!(a.a.to_string()));
    m.insert("b".into(), json!(a.b.to_string()));
    m.insert("c".into(), json!(a.c.to_string()));
    m.insert("phi".into(), render_poly(&a.phi));
    m.insert("psi".into(), render_poly(&a.psi));
    Value::Object(m)
}
