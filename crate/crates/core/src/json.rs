//! JSON encodings.
//!
//! * dyadic: the string `"p/2^k"`
//! * clopen set: `{"depth": d, "prefixes": [s₀, s₁, …]}`, prefixes ascending
//! * odometer element: `{"system": "dyadic_odometer", "depth": d, "cocycle": [n₀, …]}`
//! * tower element: `{"system": "skyscraper", "towers": [{"height": h, "base": "p/2^k"}, …],
//!   "shifts": [[n(t,0), …], …]}`
//!
//! Integers are JSON numbers when `|n| < 2^53` and decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::{
    ClopenSet, Dyadic, Error, EscapeIntegral, EscapeTime, Factor, FactorizationCertificate,
    FullGroupElement, Result, TowerElement, TowerSystem,
};

pub const ODOMETER_SYSTEM: &str = "dyadic_odometer";
pub const SKYSCRAPER_SYSTEM: &str = "skyscraper";

const SAFE_INTEGER: i64 = 1 << 53;

/// Either kind of element accepted by [`element_from_json`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Element {
    Odometer(FullGroupElement),
    Tower(TowerElement),
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) if v.abs() < SAFE_INTEGER => Value::from(v),
        _ => Value::String(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(num) => num
            .as_i64()
            .map(BigInt::from)
            .or_else(|| num.as_u64().map(BigInt::from))
            .ok_or_else(|| parse_err(format!("not an integer: {num}"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| parse_err(format!("not an integer: {s:?}"))),
        other => Err(parse_err(format!("expected an integer, got {other}"))),
    }
}

fn u64_field(obj: &Map<String, Value>, key: &str) -> Result<u64> {
    obj.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err(format!("missing or invalid {key:?}")))
}

fn depth_field(obj: &Map<String, Value>) -> Result<u32> {
    u32::try_from(u64_field(obj, "depth")?).map_err(|_| parse_err("depth out of range"))
}

fn array_field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    obj.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(format!("missing or invalid {key:?}")))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err("expected a JSON object"))
}

pub fn dyadic_to_json(d: &Dyadic) -> Value {
    Value::String(d.to_string())
}

pub fn dyadic_from_json(v: &Value) -> Result<Dyadic> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(_) => int_from_json(v).map(Dyadic::from_integer),
        other => Err(parse_err(format!("expected a dyadic, got {other}"))),
    }
}

pub fn set_to_json(a: &ClopenSet) -> Value {
    json!({ "depth": a.depth(), "prefixes": a.members().collect::<Vec<_>>() })
}

pub fn set_from_json(v: &Value) -> Result<ClopenSet> {
    let obj = object(v)?;
    let depth = depth_field(obj)?;
    let prefixes = array_field(obj, "prefixes")?
        .iter()
        .map(|p| p.as_u64().ok_or_else(|| parse_err(format!("bad prefix {p}"))))
        .collect::<Result<Vec<_>>>()?;
    ClopenSet::new(depth, prefixes)
}

pub fn element_to_json(u: &FullGroupElement) -> Value {
    json!({
        "system": ODOMETER_SYSTEM,
        "depth": u.depth(),
        "cocycle": u.cocycle().iter().map(int_to_json).collect::<Vec<_>>(),
    })
}

pub fn tower_element_to_json(u: &TowerElement) -> Value {
    let towers: Vec<Value> = u
        .system()
        .towers()
        .iter()
        .map(|t| json!({ "height": t.height, "base": dyadic_to_json(&t.base) }))
        .collect();
    let shifts: Vec<Value> = (0..towers.len())
        .map(|t| Value::from(u.dense_shifts(t)))
        .collect();
    json!({ "system": SKYSCRAPER_SYSTEM, "towers": towers, "shifts": shifts })
}

/// Parses and validates an element of either system.
pub fn element_from_json(v: &Value) -> Result<Element> {
    let obj = object(v)?;
    match obj.get("system").and_then(Value::as_str) {
        Some(ODOMETER_SYSTEM) => {
            let depth = depth_field(obj)?;
            let cocycle = array_field(obj, "cocycle")?
                .iter()
                .map(int_from_json)
                .collect::<Result<Vec<_>>>()?;
            FullGroupElement::validate(depth, cocycle).map(Element::Odometer)
        }
        Some(SKYSCRAPER_SYSTEM) => {
            let towers = array_field(obj, "towers")?
                .iter()
                .map(|t| {
                    let t = object(t)?;
                    let base = t.get("base").ok_or_else(|| parse_err("tower without base"))?;
                    Ok((u64_field(t, "height")?, dyadic_from_json(base)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let system = TowerSystem::new(towers)?;
            let shifts = array_field(obj, "shifts")?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| parse_err("shift table must be an array"))?
                        .iter()
                        .map(|n| n.as_i64().ok_or_else(|| parse_err(format!("bad shift {n}"))))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            TowerElement::new(system, shifts).map(Element::Tower)
        }
        Some(other) => Err(parse_err(format!("unknown system {other:?}"))),
        None => Err(parse_err("missing \"system\"")),
    }
}

/// Parses an odometer element, rejecting tower elements.
pub fn odometer_element_from_json(v: &Value) -> Result<FullGroupElement> {
    match element_from_json(v)? {
        Element::Odometer(u) => Ok(u),
        Element::Tower(_) => Err(parse_err("expected a dyadic_odometer element")),
    }
}

pub fn factor_to_json(f: &Factor) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), Value::from(f.kind()));
    match f {
        Factor::InducedOn(a) | Factor::Transposition(a) => {
            obj.insert("set".into(), set_to_json(a));
        }
        Factor::Periodic(e) | Factor::Involution(e) => {
            obj.insert("element".into(), element_to_json(e));
        }
        Factor::PowerOfT(k) => {
            obj.insert("exponent".into(), int_to_json(k));
        }
    }
    Value::Object(obj)
}

pub fn certificate_to_json(c: &FactorizationCertificate) -> Value {
    json!({
        "target": element_to_json(&c.target),
        "word": c.word.iter().map(factor_to_json).collect::<Vec<_>>(),
        "verified": c.verified,
    })
}

pub fn escape_time_to_json(e: &EscapeTime) -> Value {
    let table: Vec<Value> = e
        .table
        .iter()
        .map(|&(s, t)| json!({ "prefix": s, "tau": t.map_or(Value::from("infinite"), Value::from) }))
        .collect();
    let integral = match &e.integral {
        EscapeIntegral::Finite(v) => dyadic_to_json(v),
        EscapeIntegral::Infinite => Value::from("infinite"),
    };
    json!({ "depth": e.depth, "table": table, "integral": integral })
}
