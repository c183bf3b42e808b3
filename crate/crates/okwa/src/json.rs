//! JSON serialization for fields, elements, ideals, pseudo-matrices and
//! automata.
//!
//! Every number is a decimal string (`"-12"`, `"3/4"`), never a JSON number,
//! so arbitrary-precision values survive any parser. Deserialization
//! validates through the same constructors the library uses, so a file that
//! parses is a value that satisfies the type's invariants.

use crate::ideals::Ideal;
use crate::numfield::{AlgNum, FieldRef, NumberField};
use crate::okmodules::{PseudoElement, PseudoMatrix};
use crate::wautomata::{KMat, WeightedAutomaton};
use crate::zlattice::{IntMatrix, QMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed number: {0}")]
    BadNumber(String),
    #[error("missing or malformed key: {0}")]
    BadKey(String),
    #[error("{0}")]
    Invalid(String),
}

fn bad(key: &str) -> JsonError {
    JsonError::BadKey(key.to_string())
}

pub fn parse_rational(s: &str) -> Result<BigRational, JsonError> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(|_| JsonError::BadNumber(s.into()))?;
            let d = BigInt::from_str(den.trim()).map_err(|_| JsonError::BadNumber(s.into()))?;
            if d == BigInt::from(0) {
                return Err(JsonError::BadNumber(s.into()));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(s).map_err(|_| JsonError::BadNumber(s.into()))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_integer(s: &str) -> Result<BigInt, JsonError> {
    BigInt::from_str(s.trim()).map_err(|_| JsonError::BadNumber(s.into()))
}

fn as_str(v: &Value, key: &str) -> Result<String, JsonError> {
    v.as_str().map(str::to_string).ok_or_else(|| bad(key))
}

fn as_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| bad(key))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| bad(key))
}

// ---- fields ----

/// `{"min_poly": ["c0", …, "c_{d−1}", "1"], "integral_basis": [[…], …]}`
pub fn field_to_json(f: &NumberField) -> Value {
    let d = f.degree();
    let mut poly: Vec<Value> = f.min_poly().iter().map(|c| Value::String(c.to_string())).collect();
    poly.push(Value::String("1".into()));
    let basis: Vec<Value> = (0..d)
        .map(|i| {
            Value::Array(
                (0..d)
                    .map(|j| Value::String(format_rational(&f.basis_over_power()[(i, j)])))
                    .collect(),
            )
        })
        .collect();
    json!({ "min_poly": poly, "integral_basis": basis })
}

pub fn field_from_json(v: &Value) -> Result<FieldRef, JsonError> {
    let poly = as_array(get(v, "min_poly")?, "min_poly")?;
    if poly.is_empty() {
        return Err(JsonError::Invalid("min_poly must be nonempty".into()));
    }
    let lead = parse_integer(&as_str(&poly[poly.len() - 1], "min_poly")?)?;
    if !lead.is_one() {
        return Err(JsonError::Invalid("min_poly must be monic".into()));
    }
    let low: Vec<BigInt> = poly[..poly.len() - 1]
        .iter()
        .map(|c| parse_integer(&as_str(c, "min_poly")?))
        .collect::<Result<_, _>>()?;
    let d = low.len();
    let rows = as_array(get(v, "integral_basis")?, "integral_basis")?;
    if rows.len() != d {
        return Err(JsonError::Invalid("integral_basis must have d rows".into()));
    }
    let mut basis = QMatrix::zero(d, d);
    for (i, row) in rows.iter().enumerate() {
        let row = as_array(row, "integral_basis")?;
        if row.len() != d {
            return Err(JsonError::Invalid("integral_basis rows must have d entries".into()));
        }
        for (j, e) in row.iter().enumerate() {
            basis[(i, j)] = parse_rational(&as_str(e, "integral_basis")?)?;
        }
    }
    NumberField::load(low, basis).map_err(|e| JsonError::Invalid(e.to_string()))
}

// ---- elements ----

/// An element is an array of `d` rational strings over the integral basis.
pub fn algnum_to_json(a: &AlgNum) -> Value {
    Value::Array(a.coords.iter().map(|c| Value::String(format_rational(c))).collect())
}

pub fn algnum_from_json(f: &FieldRef, v: &Value) -> Result<AlgNum, JsonError> {
    let arr = as_array(v, "element")?;
    if arr.len() != f.degree() {
        return Err(JsonError::Invalid("element has wrong number of coordinates".into()));
    }
    let coords = arr
        .iter()
        .map(|c| parse_rational(&as_str(c, "element")?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(f.from_coords(coords))
}

// ---- matrices ----

/// Row-major array of arrays of integer strings.
pub fn intmatrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| {
                Value::Array((0..m.cols).map(|j| Value::String(m[(i, j)].to_string())).collect())
            })
            .collect(),
    )
}

pub fn intmatrix_from_json(v: &Value) -> Result<IntMatrix, JsonError> {
    let rows = as_array(v, "matrix")?;
    let r = rows.len();
    let mut parsed: Vec<Vec<BigInt>> = Vec::with_capacity(r);
    for row in rows {
        let row = as_array(row, "matrix")?;
        parsed.push(
            row.iter()
                .map(|e| parse_integer(&as_str(e, "matrix")?))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let c = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|row| row.len() != c) {
        return Err(JsonError::Invalid("ragged matrix".into()));
    }
    Ok(IntMatrix::from_fn(r, c, |i, j| parsed[i][j].clone()))
}

// ---- ideals ----

/// `{"den": "k", "basis": [column, …]}` with columns of integer strings, or
/// `{"gens": [element, …]}`.
pub fn ideal_to_json(a: &Ideal) -> Value {
    let d = a.field().degree();
    let cols: Vec<Value> = (0..d)
        .map(|j| {
            Value::Array((0..d).map(|i| Value::String(a.mat()[(i, j)].to_string())).collect())
        })
        .collect();
    json!({ "den": a.den().to_string(), "basis": cols })
}

pub fn ideal_from_json(f: &FieldRef, v: &Value) -> Result<Ideal, JsonError> {
    if let Some(gens) = v.get("gens") {
        let arr = as_array(gens, "gens")?;
        let gens = arr
            .iter()
            .map(|g| algnum_from_json(f, g))
            .collect::<Result<Vec<_>, _>>()?;
        return Ideal::from_generators(f, &gens).map_err(|e| JsonError::Invalid(e.to_string()));
    }
    let den = parse_integer(&as_str(get(v, "den")?, "den")?)?;
    let cols = as_array(get(v, "basis")?, "basis")?;
    let d = f.degree();
    if cols.len() != d {
        return Err(JsonError::Invalid("ideal basis must have d columns".into()));
    }
    let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for col in cols {
        let col = as_array(col, "basis")?;
        if col.len() != d {
            return Err(JsonError::Invalid("ideal basis columns must have d entries".into()));
        }
        columns.push(
            col.iter()
                .map(|e| parse_integer(&as_str(e, "basis")?))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let mat = IntMatrix::from_columns(d, &columns);
    Ideal::from_parts(f, den, mat).map_err(|e| JsonError::Invalid(e.to_string()))
}

// ---- pseudo-matrices ----

/// `{"dim": n, "elems": [{"ideal": …, "vec": [element, …]}, …]}`
pub fn pseudomatrix_to_json(m: &PseudoMatrix) -> Value {
    let elems: Vec<Value> = m
        .elems
        .iter()
        .map(|e| {
            json!({
                "ideal": ideal_to_json(&e.coeff),
                "vec": Value::Array(e.vec.iter().map(algnum_to_json).collect()),
            })
        })
        .collect();
    json!({ "dim": m.ambient_dim, "elems": elems })
}

pub fn pseudomatrix_from_json(f: &FieldRef, v: &Value) -> Result<PseudoMatrix, JsonError> {
    let dim = get(v, "dim")?
        .as_u64()
        .ok_or_else(|| bad("dim"))? as usize;
    let elems = as_array(get(v, "elems")?, "elems")?;
    let mut out = Vec::with_capacity(elems.len());
    for e in elems {
        let coeff = ideal_from_json(f, get(e, "ideal")?)?;
        let vecj = as_array(get(e, "vec")?, "vec")?;
        if vecj.len() != dim {
            return Err(JsonError::Invalid("pseudo-element vector has wrong length".into()));
        }
        let vec = vecj
            .iter()
            .map(|x| algnum_from_json(f, x))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(PseudoElement { coeff, vec });
    }
    Ok(PseudoMatrix::new(f.clone(), dim, out))
}

// ---- automata ----

/// `{"field": …, "alphabet": ["a","b"], "n": 3, "init": […], "final": […],
/// "trans": {"a": [[…]]}}`; matrices are row-major arrays of elements.
pub fn automaton_to_json(a: &WeightedAutomaton) -> Value {
    let row_major = |m: &KMat| -> Value {
        Value::Array(
            (0..m.rows)
                .map(|i| Value::Array((0..m.cols).map(|j| algnum_to_json(&m[(i, j)])).collect()))
                .collect(),
        )
    };
    let mut trans = Map::new();
    for (s, c) in a.alphabet.iter().enumerate() {
        trans.insert(c.to_string(), row_major(&a.trans[s]));
    }
    json!({
        "field": field_to_json(&a.field),
        "alphabet": a.alphabet.iter().map(|c| Value::String(c.to_string())).collect::<Vec<_>>(),
        "n": a.n_states,
        "init": Value::Array(a.init.iter().map(algnum_to_json).collect()),
        "final": Value::Array(a.final_.iter().map(algnum_to_json).collect()),
        "trans": Value::Object(trans),
    })
}

/// How an automaton document names its field.
pub enum FieldSource {
    Inline(Value),
    Path(String),
    Absent,
}

pub fn automaton_field_source(v: &Value) -> FieldSource {
    match v.get("field") {
        Some(Value::String(p)) => FieldSource::Path(p.clone()),
        Some(obj) if obj.is_object() => FieldSource::Inline(obj.clone()),
        _ => FieldSource::Absent,
    }
}

pub fn automaton_from_json(v: &Value, field: &FieldRef) -> Result<WeightedAutomaton, JsonError> {
    let alphabet: Vec<char> = as_array(get(v, "alphabet")?, "alphabet")?
        .iter()
        .map(|c| {
            let s = as_str(c, "alphabet")?;
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(ch), None) => Ok(ch),
                _ => Err(JsonError::Invalid("alphabet symbols must be single characters".into())),
            }
        })
        .collect::<Result<_, _>>()?;
    let n = get(v, "n")?.as_u64().ok_or_else(|| bad("n"))? as usize;
    let parse_vec = |key: &str| -> Result<Vec<AlgNum>, JsonError> {
        let arr = as_array(get(v, key)?, key)?;
        if arr.len() != n {
            return Err(JsonError::Invalid(format!("{key} must have n entries")));
        }
        arr.iter().map(|x| algnum_from_json(field, x)).collect()
    };
    let init = parse_vec("init")?;
    let final_ = parse_vec("final")?;
    let transobj = get(v, "trans")?.as_object().ok_or_else(|| bad("trans"))?;
    let mut trans = Vec::with_capacity(alphabet.len());
    for c in &alphabet {
        let mj = transobj.get(&c.to_string()).ok_or_else(|| bad("trans"))?;
        let rows = as_array(mj, "trans")?;
        if rows.len() != n {
            return Err(JsonError::Invalid("transition matrix must have n rows".into()));
        }
        let mut parsed: Vec<Vec<AlgNum>> = Vec::with_capacity(n);
        for row in rows {
            let row = as_array(row, "trans")?;
            if row.len() != n {
                return Err(JsonError::Invalid("transition matrix must have n columns".into()));
            }
            parsed.push(
                row.iter().map(|x| algnum_from_json(field, x)).collect::<Result<Vec<_>, _>>()?,
            );
        }
        trans.push(KMat::from_rows(field, &parsed));
    }
    WeightedAutomaton::new(field.clone(), alphabet, init, trans, final_)
        .map_err(|e| JsonError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::okmodules;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rational_strings() {
        for s in ["0", "-12", "3/4", "-7/5"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // Normalization on parse.
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational("2/-4").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn field_roundtrip() {
        for f in [
            NumberField::rationals(),
            NumberField::quadratic(-1).unwrap(),
            NumberField::quadratic(-5).unwrap(),
        ] {
            let j = field_to_json(&f);
            let back = field_from_json(&j).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn ideal_roundtrip_and_gens() {
        let f = fixtures::example1_field();
        let a = fixtures::example1_ideal(&f);
        let j = ideal_to_json(&a);
        assert_eq!(ideal_from_json(&f, &j).unwrap(), a);
        let from_gens = serde_json::json!({ "gens": [["3", "0"], ["2", "-1"]] });
        assert_eq!(ideal_from_json(&f, &from_gens).unwrap(), a);
        // Non-closed lattices are rejected.
        let bad = serde_json::json!({ "den": "1", "basis": [["1", "0"], ["0", "2"]] });
        assert!(ideal_from_json(&f, &bad).is_err());
    }

    #[test]
    fn pseudomatrix_roundtrip() {
        let f = fixtures::example1_field();
        let m = PseudoMatrix::new(
            f.clone(),
            2,
            vec![
                PseudoElement {
                    coeff: fixtures::example1_ideal(&f),
                    vec: vec![f.one(), f.from_int(2)],
                },
                PseudoElement { coeff: Ideal::one(&f), vec: vec![f.zero(), f.one()] },
            ],
        );
        let j = pseudomatrix_to_json(&m);
        let back = pseudomatrix_from_json(&f, &j).unwrap();
        assert_eq!(back.elems, m.elems);
        assert!(okmodules::module_equals(&m, &back).unwrap());
    }

    #[test]
    fn automaton_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = fixtures::example1_field();
        let a = fixtures::random_okwa(&f, &['a', 'b'], 3, 3, &mut rng);
        let j = automaton_to_json(&a);
        let field = match automaton_field_source(&j) {
            FieldSource::Inline(v) => field_from_json(&v).unwrap(),
            _ => panic!("inline field expected"),
        };
        let back = automaton_from_json(&j, &field).unwrap();
        assert_eq!(back, a);
    }
}
