//! JSON encodings shared by the CLI and the web demo.
//!
//! Big integers and rationals travel as strings so nothing is lost to floats.
//! Decoders also accept plain JSON integers where an integer is expected.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};

use crate::cones::{ConeDescriptor, ConeTag};
use crate::equivalence::{DigitWord, TailDecision};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::numeric::{format_rat, parse_rat, NAdic, Rat};
use crate::reals::{builtin_stream, BasePoint, QuadSurd};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn as_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| bad(format!("bad integer {s:?}"))),
        Value::Number(x) => x
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| bad(format!("bad integer {x}"))),
        _ => Err(bad("expected an integer")),
    }
}

fn as_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        _ => as_bigint(v).map(Rat::from_integer),
    }
}

/// `{"m": string, "k": int}`.
pub fn nadic_to_json(x: &NAdic) -> Value {
    json!({ "m": x.mantissa().to_string(), "k": x.exponent() })
}

/// Accepts the object form or the text form `"m/n^k"`.
pub fn nadic_from_json(v: &Value, n: u32) -> Result<NAdic> {
    if let Value::String(s) = v {
        return NAdic::parse(s, n);
    }
    let m = as_bigint(field(v, "m")?)?;
    let k = field(v, "k")?
        .as_u64()
        .and_then(|k| u32::try_from(k).ok())
        .ok_or_else(|| bad("bad exponent"))?;
    Ok(NAdic::normalize(m, k, n))
}

/// `{"r": "m/n^k", "s": int}`.
pub fn element_to_json(g: &GroupElement) -> Value {
    json!({ "r": g.r().to_text(), "s": g.s() })
}

pub fn element_from_json(v: &Value, n: u32) -> Result<GroupElement> {
    let r = nadic_from_json(field(v, "r")?, n)?;
    let s = field(v, "s")?.as_i64().ok_or_else(|| bad("bad s"))?;
    Ok(GroupElement::new(r, s))
}

pub fn base_point_to_json(x: &BasePoint) -> Value {
    match x {
        BasePoint::Rational(q) => json!({
            "kind": "rat",
            "p": q.numer().to_string(),
            "q": q.denom().to_string(),
        }),
        BasePoint::Quadratic(q) => json!({
            "kind": "quad",
            "u": format_rat(q.u()),
            "v": format_rat(q.v()),
            "d": q.d().to_string(),
        }),
        BasePoint::Stream(s) => {
            let mut m = Map::new();
            m.insert("kind".into(), json!("stream"));
            m.insert("ref".into(), json!(s.source().name()));
            if !s.is_untransformed() {
                m.insert("slope".into(), json!(format_rat(s.slope())));
                m.insert("offset".into(), json!(format_rat(s.offset())));
            }
            Value::Object(m)
        }
    }
}

/// Streams are rebuilt from their `ref` name, in base `n` with the given budget.
pub fn base_point_from_json(v: &Value, n: u32, budget: usize) -> Result<BasePoint> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("kind must be a string"))?;
    match kind {
        "rat" => {
            let p = as_bigint(field(v, "p")?)?;
            let q = as_bigint(field(v, "q")?)?;
            if q == BigInt::from(0) {
                return Err(bad("zero denominator"));
            }
            Ok(BasePoint::Rational(Rat::new(p, q)))
        }
        "quad" => {
            let u = as_rat(field(v, "u")?)?;
            let w = as_rat(field(v, "v")?)?;
            let d = as_bigint(field(v, "d")?)?;
            Ok(BasePoint::Quadratic(QuadSurd::new(u, w, d)?))
        }
        "stream" => {
            let name = field(v, "ref")?.as_str().ok_or_else(|| bad("ref must be a string"))?;
            let point = BasePoint::stream(builtin_stream(name, n, budget)?);
            let slope = v.get("slope").map(as_rat).transpose()?.unwrap_or_else(Rat::one);
            let offset = v.get("offset").map(as_rat).transpose()?.unwrap_or_default();
            Ok(point.affine_image(&slope, &offset))
        }
        other => Err(bad(format!("unknown base point kind {other:?}"))),
    }
}

/// `{"tag": string, "base": BasePoint?}`.
pub fn cone_to_json(c: &ConeDescriptor) -> Value {
    let mut m = Map::new();
    m.insert("tag".into(), json!(c.tag().to_string()));
    if let Some(b) = c.base() {
        m.insert("base".into(), base_point_to_json(b));
    }
    Value::Object(m)
}

pub fn cone_from_json(v: &Value, n: u32, budget: usize) -> Result<ConeDescriptor> {
    let tag: ConeTag = field(v, "tag")?
        .as_str()
        .ok_or_else(|| bad("tag must be a string"))?
        .parse()?;
    let base = match v.get("base") {
        None | Some(Value::Null) => None,
        Some(b) => Some(base_point_from_json(b, n, budget)?),
    };
    ConeDescriptor::new(tag, base)
}

fn digits_value(d: &[u32], n: u32) -> Value {
    if n <= 10 {
        json!(DigitWord::render(d, n))
    } else {
        json!(d)
    }
}

fn digits_from_value(v: &Value, n: u32) -> Result<Vec<u32>> {
    let d: Vec<u32> = match v {
        Value::String(s) => s
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(|| bad(format!("bad digit {c:?}"))))
            .collect::<Result<_>>()?,
        Value::Array(a) => a
            .iter()
            .map(|x| {
                x.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| bad("bad digit"))
            })
            .collect::<Result<_>>()?,
        _ => return Err(bad("digits must be a string or an array")),
    };
    if let Some(bad_digit) = d.iter().find(|&&x| x >= n) {
        return Err(bad(format!("digit {bad_digit} out of range for base {n}")));
    }
    Ok(d)
}

/// `{"pre", "period"}` for exact words, `{"prefix"}` for stream prefixes.
/// Digits are strings for `n <= 10` and arrays otherwise.
pub fn digit_word_to_json(w: &DigitWord, n: u32) -> Value {
    match w {
        DigitWord::Periodic { pre, period } => json!({
            "pre": digits_value(pre, n),
            "period": digits_value(period, n),
        }),
        DigitWord::Prefix(d) => json!({ "prefix": digits_value(d, n) }),
    }
}

pub fn digit_word_from_json(v: &Value, n: u32) -> Result<DigitWord> {
    if let Some(p) = v.get("prefix") {
        return Ok(DigitWord::Prefix(digits_from_value(p, n)?));
    }
    let pre = digits_from_value(field(v, "pre")?, n)?;
    let period = digits_from_value(field(v, "period")?, n)?;
    if period.is_empty() {
        return Err(bad("period must be nonempty"));
    }
    Ok(DigitWord::periodic(pre, period))
}

pub fn tail_decision_to_json(d: &TailDecision) -> Value {
    match d {
        TailDecision::Equivalent { witness, exact } => json!({
            "decision": "equivalent",
            "p": witness.p,
            "q": witness.q,
            "exact": exact,
        }),
        TailDecision::NotEquivalent => json!({ "decision": "not-equivalent" }),
        TailDecision::Unknown => json!({ "decision": "unknown" }),
    }
}
