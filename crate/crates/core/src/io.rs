//! JSON interchange.
//!
//! Matrices are `{"n": n, "entries": [[[re, im], ...], ...]}` with row-major
//! entries. Float parts are JSON numbers; exact parts are `"p/q"` strings, and
//! the backend of a document is inferred from which of the two it uses.
//! Writers emit compact JSON with a trailing newline, so equal values give
//! equal bytes.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, RankEvidence, TolerancePolicy};
use crate::opsys::OperatorTuple;
use crate::rigidity::RigidityCertificate;
use crate::scalar::{Backend, GaussRational, Scalar, C64};
use crate::superop::{ChoiMatrix, KrausTuple, Superoperator};

/// Version tag carried by every top-level document the CLI writes.
pub const SCHEMA: u32 = 1;

/// Compact serialization plus newline.
pub fn canonical<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

/// A matrix whose backend was read from the document.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Exact(Matrix<GaussRational>),
    Float(Matrix<C64>),
}

fn leaves<'a>(v: &'a Value, out: &mut Vec<&'a Value>) {
    match v {
        Value::Array(xs) => xs.iter().for_each(|x| leaves(x, out)),
        Value::Object(m) => m.values().for_each(|x| leaves(x, out)),
        leaf => out.push(leaf),
    }
}

/// Backend of a matrix-entry tree: all strings is exact, all numbers is float.
pub fn detect_backend(entries: &Value) -> Result<Backend> {
    let mut ls = Vec::new();
    leaves(entries, &mut ls);
    let strings = ls.iter().filter(|v| v.is_string()).count();
    let numbers = ls.iter().filter(|v| v.is_number()).count();
    match (strings, numbers) {
        (0, 0) => Err(Error::EmptyInput),
        (s, 0) if s == ls.len() => Ok(Backend::Exact),
        (0, k) if k == ls.len() => Ok(Backend::Float),
        (s, k) if s + k == ls.len() => Err(Error::BackendMismatch),
        _ => Err(Error::InvalidInput(
            "matrix entries must be numbers or rational strings".into(),
        )),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing field {key:?}")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidInput(format!("field {key:?} must be a nonnegative integer")))
}

/// `[[[re, im], ...], ...]`.
pub fn entries_to_value<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        (0..m.n())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|z| Value::Array(z.to_json_pair().to_vec()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn entries_from_value<S: Scalar>(v: &Value, n: usize) -> Result<Matrix<S>> {
    let bad = || Error::InvalidInput("entries must be an n×n array of [re, im] pairs".into());
    let rows = v.as_array().ok_or_else(bad)?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rows.len(),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        let row = row.as_array().ok_or_else(bad)?;
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        for z in row {
            match z.as_array().map(Vec::as_slice) {
                Some([re, im]) => data.push(S::from_json_pair(re, im)?),
                _ => return Err(bad()),
            }
        }
    }
    Ok(Matrix::from_fn(n, |i, j| data[i * n + j].clone()))
}

pub fn matrix_to_value<S: Scalar>(m: &Matrix<S>) -> Value {
    json!({"n": m.n(), "entries": entries_to_value(m)})
}

pub fn matrix_from_value<S: Scalar>(v: &Value) -> Result<Matrix<S>> {
    entries_from_value(field(v, "entries")?, usize_field(v, "n")?)
}

pub fn any_matrix_from_value(v: &Value) -> Result<AnyMatrix> {
    match detect_backend(field(v, "entries")?)? {
        Backend::Exact => matrix_from_value(v).map(AnyMatrix::Exact),
        Backend::Float => matrix_from_value(v).map(AnyMatrix::Float),
    }
}

pub fn parse(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

/// `{"n", "d", "matrices": [entries, ...], "hermitian", "traceless"}`; the two
/// flags are informational and recomputed on write.
pub fn tuple_to_value<S: Scalar>(t: &OperatorTuple<S>, tol: &TolerancePolicy) -> Value {
    json!({
        "n": t.n(),
        "d": t.d(),
        "matrices": t.matrices().iter().map(entries_to_value).collect::<Vec<_>>(),
        "hermitian": t.is_hermitian(tol),
        "traceless": t.is_traceless(tol),
    })
}

fn matrix_list<S: Scalar>(v: &Value, key: &str, n: usize, d: Option<usize>) -> Result<Vec<Matrix<S>>> {
    let list = field(v, key)?
        .as_array()
        .ok_or_else(|| Error::InvalidInput(format!("field {key:?} must be an array")))?;
    if let Some(d) = d {
        if list.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: list.len(),
            });
        }
    }
    list.iter().map(|m| entries_from_value(m, n)).collect()
}

pub fn tuple_from_value<S: Scalar>(v: &Value) -> Result<OperatorTuple<S>> {
    let n = usize_field(v, "n")?;
    let d = v.get("d").and_then(Value::as_u64).map(|d| d as usize);
    OperatorTuple::new(matrix_list(v, "matrices", n, d)?)
}

/// Backend of a tuple, Kraus or superoperator document.
pub fn document_backend(v: &Value) -> Result<Backend> {
    for key in ["matrices", "operators", "rep", "entries"] {
        if let Some(x) = v.get(key) {
            return detect_backend(x);
        }
    }
    Err(Error::InvalidInput("no matrix data found".into()))
}

/// `{"n", "d", "operators": [entries, ...]}`.
pub fn kraus_to_value<S: Scalar>(k: &KrausTuple<S>) -> Value {
    json!({
        "n": k.n(),
        "d": k.operators().len(),
        "operators": k.operators().iter().map(entries_to_value).collect::<Vec<_>>(),
    })
}

/// Reads `"operators"`, or `"matrices"` so that tuple files also work.
pub fn kraus_from_value<S: Scalar>(v: &Value) -> Result<KrausTuple<S>> {
    let n = usize_field(v, "n")?;
    let d = v.get("d").and_then(Value::as_u64).map(|d| d as usize);
    let key = if v.get("operators").is_some() {
        "operators"
    } else {
        "matrices"
    };
    KrausTuple::new(matrix_list(v, key, n, d)?)
}

/// `{"n", "rep": entries}` with `rep` of size `n² × n²`.
pub fn superop_to_value<S: Scalar>(phi: &Superoperator<S>) -> Value {
    json!({"n": phi.n(), "rep": entries_to_value(phi.rep())})
}

pub fn superop_from_value<S: Scalar>(v: &Value) -> Result<Superoperator<S>> {
    let n = usize_field(v, "n")?;
    let rep = entries_from_value(field(v, "rep")?, n * n)?;
    Superoperator::from_rep(rep)
}

/// A matrix document of size `n²` flagged `"bipartite": true`.
pub fn choi_to_value<S: Scalar>(c: &ChoiMatrix<S>) -> Value {
    let m = c.matrix();
    json!({"n": m.n(), "bipartite": true, "entries": entries_to_value(m)})
}

pub fn choi_from_value<S: Scalar>(v: &Value) -> Result<ChoiMatrix<S>> {
    ChoiMatrix::new(matrix_from_value(v)?)
}

/// Exact rational text `p/q` of a JSON number's decimal representation,
/// so `0.125` becomes `1/8` and `1e-3` becomes `1/1000`.
pub fn decimal_to_rational(text: &str) -> Result<String> {
    let bad = || Error::InvalidInput(format!("not a decimal literal: {text:?}"));
    let lower = text.trim().to_ascii_lowercase();
    let (mantissa, exp) = match lower.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().map_err(|_| bad())?),
        None => (lower.clone(), 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m.to_string()),
        None => (false, mantissa.trim_start_matches('+').to_string()),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
    let digits = format!("{int}{frac}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let scale = exp - frac.len() as i64;
    let mut num: num_bigint::BigInt = digits.parse().map_err(|_| bad())?;
    let mut den = num_bigint::BigInt::from(1);
    let ten = num_bigint::BigInt::from(10);
    if scale >= 0 {
        num *= num_traits::pow(ten, scale as usize);
    } else {
        den = num_traits::pow(ten, (-scale) as usize);
    }
    if neg {
        num = -num;
    }
    Ok(num_rational::BigRational::new(num, den).to_string())
}

/// Rewrites every number in a matrix document as the exact rational it denotes.
pub fn exactify(v: &Value) -> Result<Value> {
    Ok(match v {
        Value::Number(x) => Value::String(decimal_to_rational(&x.to_string())?),
        Value::Array(xs) => Value::Array(xs.iter().map(exactify).collect::<Result<_>>()?),
        Value::Object(m) => Value::Object(
            m.iter()
                .map(|(k, x)| {
                    let keep = matches!(
                        k.as_str(),
                        "n" | "d" | "schema" | "hermitian" | "traceless" | "bipartite"
                    );
                    Ok((k.clone(), if keep { x.clone() } else { exactify(x)? }))
                })
                .collect::<Result<_>>()?,
        ),
        other => other.clone(),
    })
}

fn complex_pair<S: Scalar>(z: &S) -> Value {
    Value::Array(z.to_json_pair().to_vec())
}

pub fn evidence_to_value(e: &RankEvidence) -> Value {
    match e {
        RankEvidence::Exact { determinant } => json!({
            "kind": "exact",
            "determinant": determinant.as_ref().map(complex_pair),
        }),
        RankEvidence::Float { sigma_min, sigma_max } => json!({
            "kind": "float",
            "sigma_min": sigma_min,
            "sigma_max": sigma_max,
            "ratio": e.margin(),
        }),
    }
}

pub fn certificate_to_value<S: Scalar>(c: &RigidityCertificate<S>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("n".into(), json!(c.n));
    m.insert("d".into(), json!(c.d));
    m.insert("backend".into(), json!(c.backend));
    m.insert("mode".into(), json!(c.mode));
    m.insert("power_basis".into(), json!(c.power_basis));
    m.insert("verdict".into(), json!(c.verdict));
    m.insert("rank".into(), json!(c.rank));
    m.insert("evidence".into(), evidence_to_value(&c.evidence));
    m.insert("closure_dimension".into(), json!(c.closure_dimension));
    m.insert("tolerance".into(), json!(c.tolerance));
    m.insert("gram".into(), matrix_to_value(&c.gram));
    m.insert("degree".into(), matrix_to_value(&c.degree));
    m.insert("second_degree".into(), matrix_to_value(&c.second_degree));
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss_ratio;

    #[test]
    fn matrix_round_trip_both_backends() {
        let e = Matrix::from_fn(2, |i, j| gauss_ratio(i as i64 + 1, 3, j as i64 - 1, 2));
        let v = matrix_to_value(&e);
        assert_eq!(any_matrix_from_value(&v).unwrap(), AnyMatrix::Exact(e));
        let f = Matrix::from_fn(2, |i, j| C64::new(i as f64 + 0.25, -(j as f64)));
        let v = matrix_to_value(&f);
        assert_eq!(any_matrix_from_value(&v).unwrap(), AnyMatrix::Float(f.clone()));
        let text = canonical(&v);
        assert_eq!(canonical(&parse(&text).unwrap()), text);
    }

    #[test]
    fn mixed_backends_rejected() {
        let v = json!({"n": 1, "entries": [[["1/2", 0.5]]]});
        assert!(matches!(any_matrix_from_value(&v), Err(Error::BackendMismatch)));
        assert!(matches!(
            matrix_from_value::<C64>(&json!({"n": 1, "entries": [[["1", "0"]]]})),
            Err(Error::BackendMismatch)
        ));
    }

    #[test]
    fn malformed_shapes_rejected() {
        assert!(matrix_from_value::<C64>(&json!({"n": 2, "entries": [[[1.0, 0.0]]]})).is_err());
        assert!(matrix_from_value::<C64>(&json!({"n": 1, "entries": [[[1.0]]]})).is_err());
        assert!(matrix_from_value::<C64>(&json!({"entries": []})).is_err());
        assert!(parse("{not json").is_err());
    }

    #[test]
    fn decimals_become_exact_rationals() {
        assert_eq!(decimal_to_rational("0.125").unwrap(), "1/8");
        assert_eq!(decimal_to_rational("-0.0251255").unwrap(), "-50251/2000000");
        assert_eq!(decimal_to_rational("1e-3").unwrap(), "1/1000");
        assert_eq!(decimal_to_rational("2.5E2").unwrap(), "250");
        assert_eq!(decimal_to_rational("0.0").unwrap(), "0");
        assert!(decimal_to_rational("abc").is_err());
        let v = exactify(&json!({"n": 1, "entries": [[[0.5, -2.0]]]})).unwrap();
        assert_eq!(v, json!({"n": 1, "entries": [[["1/2", "-2"]]]}));
    }

    #[test]
    fn tuple_and_superop_round_trip() {
        let tol = TolerancePolicy::default();
        let x = Matrix::diag(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        let t = OperatorTuple::new(vec![x]).unwrap();
        let v = tuple_to_value(&t, &tol);
        assert_eq!(v["hermitian"], json!(true));
        assert_eq!(v["traceless"], json!(true));
        assert_eq!(tuple_from_value::<C64>(&v).unwrap(), t);
        let phi = Superoperator::<C64>::transpose_map(2);
        assert_eq!(superop_from_value::<C64>(&superop_to_value(&phi)).unwrap(), phi);
        let wrong_d = json!({"n": 2, "d": 3, "matrices": v["matrices"].clone()});
        assert!(tuple_from_value::<C64>(&wrong_d).is_err());
    }
}
