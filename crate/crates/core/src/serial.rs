//! JSON encoding of exact data: rationals as `"p/q"` strings, Gaussian
//! rationals as `{"re": …, "im": …}`, matrices as arrays of rows, and the
//! monodromy datum file read by the command line tool.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::error::L2Error;
use crate::exactla::Direction;
use crate::hodgestruct::Bigrading;
use crate::l2complex::{MonodromyDatum, Weights};
use crate::sl2rep::FactorKind;
use crate::{q, Qi, QiFiltration, QiMatrix, QiSubspace, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SerialError {
    #[error("{path}: {detail}")]
    Invalid { path: String, detail: String },
}

fn invalid(path: &str, detail: impl Into<String>) -> SerialError {
    SerialError::Invalid { path: path.into(), detail: detail.into() }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// Accepts integers and strings `"p"` or `"p/q"`.
pub fn parse_rational(v: &Value, path: &str) -> Result<Rational, SerialError> {
    match v {
        Value::Number(n) => n.as_i64().map(|i| q(i, 1)).ok_or_else(|| invalid(path, "expected an integer or a \"p/q\" string")),
        Value::String(s) => {
            let r: Rational = s.trim().parse().map_err(|_| invalid(path, format!("not a rational: {s:?}")))?;
            Ok(r)
        }
        _ => Err(invalid(path, "expected an integer or a \"p/q\" string")),
    }
}

pub fn qi_to_json(z: &Qi) -> Value {
    json!({ "re": rational_to_json(&z.re), "im": rational_to_json(&z.im) })
}

/// Accepts a real rational or `{"re": …, "im": …}` with `im` optional.
pub fn parse_qi(v: &Value, path: &str) -> Result<Qi, SerialError> {
    match v {
        Value::Object(o) => {
            let re = o.get("re").map_or(Ok(q(0, 1)), |x| parse_rational(x, &format!("{path}.re")))?;
            let im = o.get("im").map_or(Ok(q(0, 1)), |x| parse_rational(x, &format!("{path}.im")))?;
            if o.keys().any(|k| k != "re" && k != "im") {
                return Err(invalid(path, "unexpected key in complex number"));
            }
            Ok(Complex::new(re, im))
        }
        _ => Ok(Complex::new(parse_rational(v, path)?, q(0, 1))),
    }
}

pub fn vector_to_json(v: &[Qi]) -> Value {
    Value::Array(v.iter().map(qi_to_json).collect())
}

pub fn parse_vector(v: &Value, dim: usize, path: &str) -> Result<Vec<Qi>, SerialError> {
    let items = v.as_array().ok_or_else(|| invalid(path, "expected an array"))?;
    if items.len() != dim {
        return Err(invalid(path, format!("expected {dim} entries, found {}", items.len())));
    }
    items.iter().enumerate().map(|(i, x)| parse_qi(x, &format!("{path}[{i}]"))).collect()
}

pub fn matrix_to_json(m: &QiMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| vector_to_json(m.row(r))).collect())
}

/// A square matrix of the given size, as an array of rows.
pub fn parse_matrix(v: &Value, dim: usize, path: &str) -> Result<QiMatrix, SerialError> {
    let rows = v.as_array().ok_or_else(|| invalid(path, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(invalid(path, format!("expected {dim} rows, found {}", rows.len())));
    }
    let rows = rows.iter().enumerate().map(|(i, r)| parse_vector(r, dim, &format!("{path}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    QiMatrix::from_rows(rows).map_err(|e| invalid(path, e.to_string()))
}

pub fn subspace_to_json(s: &QiSubspace) -> Value {
    Value::Array(s.basis().iter().map(|b| vector_to_json(b)).collect())
}

pub fn parse_subspace(v: &Value, dim: usize, path: &str) -> Result<QiSubspace, SerialError> {
    let vs = v.as_array().ok_or_else(|| invalid(path, "expected an array of vectors"))?;
    let vs = vs.iter().enumerate().map(|(i, x)| parse_vector(x, dim, &format!("{path}[{i}]"))).collect::<Result<Vec<_>, _>>()?;
    Ok(QiSubspace::span(dim, &vs))
}

/// `[{"index": p, "basis": [...]}, …]` in increasing index order.
pub fn filtration_to_json(f: &QiFiltration) -> Value {
    Value::Array(f.steps().iter().map(|(p, s)| json!({ "index": p, "basis": subspace_to_json(s) })).collect())
}

pub fn parse_filtration(v: &Value, dim: usize, direction: Direction, path: &str) -> Result<QiFiltration, SerialError> {
    let steps = v.as_array().ok_or_else(|| invalid(path, "expected an array of steps"))?;
    let steps = steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = format!("{path}[{i}]");
            let index = s.get("index").and_then(Value::as_i64).ok_or_else(|| invalid(&p, "missing integer \"index\""))?;
            let basis = parse_subspace(s.get("basis").ok_or_else(|| invalid(&p, "missing \"basis\""))?, dim, &format!("{p}.basis"))?;
            Ok((index, basis))
        })
        .collect::<Result<Vec<_>, SerialError>>()?;
    QiFiltration::new(dim, direction, steps).map_err(|e| invalid(path, e.to_string()))
}

pub fn bigrading_to_json(b: &Bigrading) -> Value {
    Value::Array(b.iter().map(|((p, q), s)| json!({ "p": p, "q": q, "basis": subspace_to_json(s) })).collect())
}

pub fn factor_kind_to_json(k: &FactorKind) -> Value {
    match *k {
        FactorKind::Tate { l } => json!({ "kind": "H", "l": l, "m": 0, "n": 0 }),
        FactorKind::Symmetric { l, m, n } => json!({ "kind": "S", "l": l, "m": m, "n": n }),
        FactorKind::EType { p, q, m, n } => json!({ "kind": "E", "p": p, "q": q, "m": m, "n": n }),
    }
}

/// `{"kind": "H"|"S"|"E", "l"|"p","q", "m", "n"}`.
pub fn parse_factor_kind(v: &Value, path: &str) -> Result<FactorKind, SerialError> {
    let int = |key: &str| -> Result<i64, SerialError> {
        v.get(key).map_or(Ok(0), |x| x.as_i64().ok_or_else(|| invalid(path, format!("\"{key}\" must be an integer"))))
    };
    let size = |key: &str| -> Result<usize, SerialError> {
        let x = int(key)?;
        usize::try_from(x).map_err(|_| invalid(path, format!("\"{key}\" must be nonnegative")))
    };
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| invalid(path, "missing \"kind\""))?;
    match kind {
        "H" => Ok(FactorKind::Tate { l: int("l")? }),
        "S" => Ok(FactorKind::symmetric(int("l")?, size("m")?, size("n")?)),
        "E" => {
            let (p, q) = (int("p")?, int("q")?);
            if p == q {
                return Err(invalid(path, "E(p,q) needs p != q"));
            }
            Ok(FactorKind::e_type(p, q, size("m")?, size("n")?))
        }
        other => Err(invalid(path, format!("unknown factor kind {other:?}"))),
    }
}

pub fn weights_to_json(w: &Weights) -> Value {
    match w.second {
        Some(s) => json!([w.first, w.total, s]),
        None => json!([w.first, w.total]),
    }
}

fn parse_weights(v: &Value, path: &str) -> Result<Weights, SerialError> {
    let a = v.as_array().ok_or_else(|| invalid(path, "expected [l1, l2] or [l1, l2, l1']"))?;
    let ints = a.iter().map(Value::as_i64).collect::<Option<Vec<_>>>().ok_or_else(|| invalid(path, "weights must be integers"))?;
    match ints[..] {
        [l1, l2] => Ok(Weights::new(l1, l2, None)),
        [l1, l2, l1p] => Ok(Weights::new(l1, l2, Some(l1p))),
        _ => Err(invalid(path, "expected two or three weights")),
    }
}

/// Monodromy data as read from disk: `N₁`, `N₂`, the weight, and optional
/// Hodge filtration, polarization, Hodge numbers, gradings and labelled
/// frame.
#[derive(Clone, Debug, PartialEq)]
pub struct DatumFile {
    pub name: String,
    pub dimension: usize,
    pub weight: i64,
    pub n: [QiMatrix; 2],
    pub f: Option<QiFiltration>,
    pub s: Option<QiMatrix>,
    pub hodge_numbers: Option<BTreeMap<(i64, i64), usize>>,
    pub gradings: Option<[QiMatrix; 2]>,
    pub frame: Option<Vec<(Vec<Qi>, Weights)>>,
}

impl DatumFile {
    pub fn from_json(v: &Value) -> Result<Self, SerialError> {
        let o = v.as_object().ok_or_else(|| invalid("$", "expected an object"))?;
        let dimension = o.get("dimension").and_then(Value::as_u64).ok_or_else(|| invalid("$.dimension", "missing positive integer"))? as usize;
        if dimension == 0 {
            return Err(invalid("$.dimension", "must be positive"));
        }
        let weight = o.get("weight").and_then(Value::as_i64).ok_or_else(|| invalid("$.weight", "missing integer"))?;
        let name = o.get("name").and_then(Value::as_str).unwrap_or("datum").to_string();
        let mat = |key: &str| -> Result<QiMatrix, SerialError> {
            let path = format!("$.{key}");
            parse_matrix(o.get(key).ok_or_else(|| invalid(&path, "missing"))?, dimension, &path)
        };
        let n = [mat("N1")?, mat("N2")?];
        let f = o.get("F").map(|x| parse_filtration(x, dimension, Direction::Decreasing, "$.F")).transpose()?;
        let s = o.get("S").map(|x| parse_matrix(x, dimension, "$.S")).transpose()?;
        let hodge_numbers = o
            .get("hodge_numbers")
            .map(|x| {
                let items = x.as_array().ok_or_else(|| invalid("$.hodge_numbers", "expected [[p, q, h], …]"))?;
                items
                    .iter()
                    .map(|t| match t.as_array().map(|a| a.iter().map(Value::as_i64).collect::<Option<Vec<_>>>()) {
                        Some(Some(a)) if a.len() == 3 && a[2] >= 0 => Ok(((a[0], a[1]), a[2] as usize)),
                        _ => Err(invalid("$.hodge_numbers", "expected [[p, q, h], …]")),
                    })
                    .collect::<Result<BTreeMap<_, _>, _>>()
            })
            .transpose()?;
        let gradings = match o.get("gradings") {
            None => None,
            Some(g) => {
                let a = g.as_array().filter(|a| a.len() == 2).ok_or_else(|| invalid("$.gradings", "expected [Y_first, Y_total]"))?;
                Some([parse_matrix(&a[0], dimension, "$.gradings[0]")?, parse_matrix(&a[1], dimension, "$.gradings[1]")?])
            }
        };
        let frame = o
            .get("frame")
            .map(|x| {
                let items = x.as_array().ok_or_else(|| invalid("$.frame", "expected an array"))?;
                items
                    .iter()
                    .enumerate()
                    .map(|(i, e)| {
                        let p = format!("$.frame[{i}]");
                        let v = parse_vector(e.get("vector").ok_or_else(|| invalid(&p, "missing \"vector\""))?, dimension, &format!("{p}.vector"))?;
                        let w = parse_weights(e.get("weights").ok_or_else(|| invalid(&p, "missing \"weights\""))?, &format!("{p}.weights"))?;
                        Ok((v, w))
                    })
                    .collect::<Result<Vec<_>, SerialError>>()
            })
            .transpose()?;
        Ok(DatumFile { name, dimension, weight, n, f, s, hodge_numbers, gradings, frame })
    }

    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        o.insert("name".into(), json!(self.name));
        o.insert("dimension".into(), json!(self.dimension));
        o.insert("weight".into(), json!(self.weight));
        o.insert("N1".into(), matrix_to_json(&self.n[0]));
        o.insert("N2".into(), matrix_to_json(&self.n[1]));
        if let Some(f) = &self.f {
            o.insert("F".into(), filtration_to_json(f));
        }
        if let Some(s) = &self.s {
            o.insert("S".into(), matrix_to_json(s));
        }
        if let Some(h) = &self.hodge_numbers {
            o.insert("hodge_numbers".into(), Value::Array(h.iter().map(|((p, q), n)| json!([p, q, n])).collect()));
        }
        if let Some([a, b]) = &self.gradings {
            o.insert("gradings".into(), json!([matrix_to_json(a), matrix_to_json(b)]));
        }
        if let Some(fr) = &self.frame {
            o.insert(
                "frame".into(),
                Value::Array(fr.iter().map(|(v, w)| json!({ "vector": vector_to_json(v), "weights": weights_to_json(w) })).collect()),
            );
        }
        Value::Object(o)
    }

    /// Validates commutativity and nilpotency.
    pub fn to_datum(&self) -> Result<MonodromyDatum, L2Error> {
        let mut d = MonodromyDatum::new(self.name.clone(), self.n[0].clone(), self.n[1].clone(), self.weight)?;
        d.gradings = self.gradings.clone();
        d.frame = self.frame.clone();
        Ok(d)
    }

    pub fn from_datum(d: &MonodromyDatum) -> Self {
        DatumFile {
            name: d.name.clone(),
            dimension: d.dim(),
            weight: d.weight,
            n: d.n.clone(),
            f: None,
            s: None,
            hodge_numbers: None,
            gradings: d.gradings.clone(),
            frame: d.frame.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{corpus, qi};

    #[test]
    fn rationals_round_trip() {
        for r in [q(0, 1), q(-3, 4), q(7, 1)] {
            assert_eq!(parse_rational(&rational_to_json(&r), "x").unwrap(), r);
        }
        assert_eq!(rational_to_json(&q(-6, 8)), json!("-3/4"));
        assert_eq!(parse_rational(&json!(5), "x").unwrap(), q(5, 1));
        assert!(parse_rational(&json!(0.5), "x").is_err());
        assert!(parse_rational(&json!("1/0"), "x").is_err());
    }

    #[test]
    fn gaussian_rationals_round_trip() {
        let z = Complex::new(q(1, 2), q(-5, 3));
        assert_eq!(parse_qi(&qi_to_json(&z), "z").unwrap(), z);
        assert_eq!(parse_qi(&json!("2/3"), "z").unwrap(), Complex::new(q(2, 3), q(0, 1)));
        assert!(parse_qi(&json!({"re": 1, "j": 2}), "z").is_err());
    }

    #[test]
    fn datum_round_trip() {
        for d in corpus::standard() {
            let file = DatumFile::from_datum(&d);
            let back = DatumFile::from_json(&file.to_json()).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_datum().unwrap(), d);
        }
    }

    #[test]
    fn non_commuting_pair_is_rejected_at_load() {
        let v = json!({
            "dimension": 2, "weight": 1,
            "N1": [[0, 1], [0, 0]],
            "N2": [[0, 0], [1, 0]]
        });
        let f = DatumFile::from_json(&v).unwrap();
        assert!(matches!(f.to_datum(), Err(L2Error::NonCommuting)));
    }

    #[test]
    fn wrong_sizes_are_reported_with_a_path() {
        let v = json!({ "dimension": 2, "weight": 0, "N1": [[0, 1]], "N2": [[0, 0], [0, 0]] });
        let err = DatumFile::from_json(&v).unwrap_err();
        assert!(err.to_string().starts_with("$.N1"), "{err}");
    }

    #[test]
    fn filtration_round_trip() {
        let f = QiFiltration::new(2, Direction::Decreasing, vec![(0, QiSubspace::full(2)), (1, QiSubspace::span(2, &[vec![qi(1, 0), qi(0, 1)]]))]).unwrap();
        assert_eq!(parse_filtration(&filtration_to_json(&f), 2, Direction::Decreasing, "$.F").unwrap(), f);
    }
}
