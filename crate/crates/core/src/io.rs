//! JSON formats for paths and moments.
//!
//! Path: `{"T": "1", "segments": [{"len": "1/2", "coeffs": {"1": "1"}}, ...]}`
//! with `T` defaulting to 1. Moment: `{"factors": [{"powers": [[1, 1]], "coeff": 2}]}`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::paths::{MomentFactor, MomentSpec, PathSpec, Segment};
use crate::scalar::Scalar;

#[derive(Deserialize)]
#[serde(untagged)]
enum Num {
    Text(String),
    Int(i64),
}

impl Num {
    fn to_scalar(&self, field: &str) -> Result<Scalar> {
        match self {
            Num::Int(n) => Ok(Scalar::from_int(*n)),
            Num::Text(s) => s.parse::<Scalar>().map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position,
                    message: format!("{field}: {message} in {s:?}"),
                },
                other => other,
            }),
        }
    }

    fn to_rational(&self, field: &str) -> Result<BigRational> {
        let s = self.to_scalar(field)?;
        if !s.is_real() {
            return Err(Error::Precondition(format!("{field} must be real")));
        }
        Ok(s.re().clone())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    len: Num,
    #[serde(default)]
    coeffs: BTreeMap<String, Num>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPath {
    #[serde(rename = "T")]
    t: Option<Num>,
    segments: Vec<RawSegment>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    powers: Vec<(u32, u32)>,
    coeff: u32,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawMoment {
    factors: Vec<RawFactor>,
}

/// Byte offset of a serde_json error within `text`.
fn json_error(text: &str, e: serde_json::Error) -> Error {
    let line = e.line().max(1);
    let column = e.column();
    let offset: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum::<usize>()
        + column.saturating_sub(1);
    Error::parse(offset, format!("invalid JSON: {e}"))
}

pub fn parse_path(text: &str) -> Result<PathSpec> {
    let raw: RawPath = serde_json::from_str(text).map_err(|e| json_error(text, e))?;
    let t = match &raw.t {
        Some(n) => n.to_rational("T")?,
        None => BigRational::one(),
    };
    let mut segments = Vec::with_capacity(raw.segments.len());
    for (k, s) in raw.segments.iter().enumerate() {
        let len = s.len.to_rational(&format!("segments[{k}].len"))?;
        if len.is_zero() {
            return Err(Error::Precondition(format!("segments[{k}] has zero length")));
        }
        let mut coeffs = BTreeMap::new();
        for (key, v) in &s.coeffs {
            let field = format!("segments[{k}].coeffs[{key}]");
            let i: u32 = key
                .parse()
                .ok()
                .filter(|&i| i > 0)
                .ok_or_else(|| Error::parse(0, format!("{field}: index must be a positive integer")))?;
            coeffs.insert(i, v.to_scalar(&field)?);
        }
        segments.push(Segment::new(len, coeffs));
    }
    PathSpec::new(t, segments)
}

pub fn path_to_json(a: &PathSpec) -> Value {
    let segments: Vec<Value> = a
        .segments()
        .iter()
        .map(|s| {
            let coeffs: serde_json::Map<String, Value> = s
                .coeffs
                .iter()
                .map(|(i, c)| (i.to_string(), Value::String(c.to_string())))
                .collect();
            json!({"len": Scalar::from_rational(s.len.clone()).to_string(), "coeffs": coeffs})
        })
        .collect();
    json!({"T": Scalar::from_rational(a.t().clone()).to_string(), "segments": segments})
}

pub fn parse_moment(text: &str) -> Result<MomentSpec> {
    let raw: RawMoment = serde_json::from_str(text).map_err(|e| json_error(text, e))?;
    MomentSpec::new(
        raw.factors
            .into_iter()
            .map(|f| MomentFactor {
                powers: f.powers,
                coeff: f.coeff,
            })
            .collect(),
    )
}

pub fn moment_to_json(m: &MomentSpec) -> Value {
    let raw = RawMoment {
        factors: m
            .factors
            .iter()
            .map(|f| RawFactor {
                powers: f.powers.clone(),
                coeff: f.coeff,
            })
            .collect(),
    };
    serde_json::to_value(raw).expect("plain data serializes")
}
