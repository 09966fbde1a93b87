//! Permuton interchange format.
//!
//! ```json
//! {"type":"stepup","sigma":"2,4,3,1","weights":["1/6","1/4","1/12","1/4"]}
//! {"type":"dsum","parts":[{"weight":"1/3","permuton":{"type":"uniform"}}]}
//! {"type":"uniform"} {"type":"identity"} {"type":"reverse"}
//! ```
//!
//! Weights are `"a/b"` or decimal strings (bare JSON numbers are accepted
//! too). Load errors carry a JSONPath-like location of the offending node.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use super::{DirectSum, Permuton, StepUp, MAX_DEPTH};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::{format_rational, parse_rational, Rational};

fn weight_from(value: &Value, path: &str) -> Result<Rational> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::permuton(path, "weight must be a string or number")),
    };
    parse_rational(&text).map_err(|_| Error::permuton(path, format!("bad weight {text:?}")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::permuton(path, format!("missing field {key:?}")))
}

impl Permuton {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::permuton("$", format!("invalid JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let phi = parse_node(v, "$", 0)?;
        phi.validate()?;
        Ok(phi)
    }

    pub fn to_value(&self) -> Value {
        match self {
            Permuton::StepUp(s) => json!({
                "type": "stepup",
                "sigma": s.sigma.to_string(),
                "weights": s.weights.iter().map(format_rational).collect::<Vec<_>>(),
            }),
            Permuton::DirectSum(d) => json!({
                "type": "dsum",
                "parts": d.parts.iter().map(|(w, p)| json!({
                    "weight": format_rational(w),
                    "permuton": p.to_value(),
                })).collect::<Vec<_>>(),
            }),
            Permuton::Uniform => json!({"type": "uniform"}),
            Permuton::Identity => json!({"type": "identity"}),
            Permuton::Reverse => json!({"type": "reverse"}),
        }
    }

    pub fn to_json_string(&self) -> String {
        self.to_value().to_string()
    }
}

fn parse_node(v: &Value, path: &str, depth: usize) -> Result<Permuton> {
    if depth > MAX_DEPTH {
        return Err(Error::permuton(path, format!("nesting deeper than {MAX_DEPTH}")));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| Error::permuton(path, "expected an object"))?;
    let ty = field(obj, "type", path)?
        .as_str()
        .ok_or_else(|| Error::permuton(&format!("{path}.type"), "expected a string"))?;
    match ty {
        "stepup" => {
            let spath = format!("{path}.sigma");
            let sigma: Permutation = field(obj, "sigma", path)?
                .as_str()
                .ok_or_else(|| Error::permuton(&spath, "expected a one-line string"))?
                .parse()
                .map_err(|e| Error::permuton(&spath, e))?;
            let wpath = format!("{path}.weights");
            let weights = field(obj, "weights", path)?
                .as_array()
                .ok_or_else(|| Error::permuton(&wpath, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, w)| weight_from(w, &format!("{wpath}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            StepUp::new(sigma, weights)
                .map(Permuton::StepUp)
                .map_err(|e| relocate(e, "$", path))
        }
        "dsum" => {
            let ppath = format!("{path}.parts");
            let parts = field(obj, "parts", path)?
                .as_array()
                .ok_or_else(|| Error::permuton(&ppath, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, part)| {
                    let here = format!("{ppath}[{i}]");
                    let pobj = part
                        .as_object()
                        .ok_or_else(|| Error::permuton(&here, "expected an object"))?;
                    let w = weight_from(field(pobj, "weight", &here)?, &format!("{here}.weight"))?;
                    let child = parse_node(
                        field(pobj, "permuton", &here)?,
                        &format!("{here}.permuton"),
                        depth + 1,
                    )?;
                    Ok((w, child))
                })
                .collect::<Result<Vec<_>>>()?;
            // weight checks only; children were validated while parsing
            let weights: Vec<Rational> = parts.iter().map(|(w, _)| w.clone()).collect();
            super::check_weights(&weights, &ppath)?;
            Ok(Permuton::DirectSum(DirectSum { parts }))
        }
        "uniform" => Ok(Permuton::Uniform),
        "identity" => Ok(Permuton::Identity),
        "reverse" => Ok(Permuton::Reverse),
        other => Err(Error::permuton(
            &format!("{path}.type"),
            format!("unknown permuton type {other:?}"),
        )),
    }
}

fn relocate(e: Error, from: &str, to: &str) -> Error {
    match e {
        Error::Permuton { path, reason } => Error::Permuton {
            path: path.replacen(from, to, 1),
            reason,
        },
        other => other,
    }
}

impl Serialize for Permuton {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permuton {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Permuton::from_value(&v).map_err(D::Error::custom)
    }
}
