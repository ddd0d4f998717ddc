//! Text and JSON formats, all carrying format version 1.
//!
//! Sets are plain text, one integer per line, after a `# format: 1` header;
//! other lines starting with `#` and blank lines are ignored. Structured data
//! is JSON. Integers are written as JSON numbers when they fit in an `i64`
//! and as decimal strings otherwise; readers accept both.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::coincide::CoincidencePair;
use crate::construct::{TargetFn, TargetValue};
use crate::error::{Error, Result};
use crate::intset::{EventuallyPeriodicSet, FiniteIntSet};
use crate::modular::ResidueSet;
use crate::repfn::{RepKind, RepTable};
use crate::scalar::Int;

pub const FORMAT: u64 = 1;

const SET_HEADER: &str = "# format: 1";

fn bad(msg: impl Into<String>) -> Error {
    Error::invalid(msg)
}

pub fn int_to_json<T: Int>(n: &T) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

pub fn int_from_json<T: Int>(v: &Value) -> Result<T> {
    let parsed = match v {
        Value::Number(num) => num.as_i64().and_then(T::from_i64).or_else(|| num.as_u64().and_then(T::from_u64)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    };
    parsed.ok_or_else(|| bad(format!("expected an integer, found {v}")))
}

fn ints_to_json<'a, T: Int>(xs: impl IntoIterator<Item = &'a T>) -> Value {
    Value::Array(xs.into_iter().map(int_to_json).collect())
}

fn ints_from_json<T: Int>(v: &Value, what: &str) -> Result<Vec<T>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))?
        .iter()
        .map(int_from_json)
        .collect()
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn parse_json(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
    if let Some(f) = v.get("format") {
        if f.as_u64() != Some(FORMAT) {
            return Err(bad(format!("unsupported format {f}")));
        }
    }
    Ok(v)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn write_set<T: Int>(set: &FiniteIntSet<T>) -> String {
    let mut out = String::from(SET_HEADER);
    out.push('\n');
    for a in set {
        out.push_str(&a.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_set<T: Int>(text: &str) -> Result<FiniteIntSet<T>> {
    let mut elems = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("format:") {
                if v.trim() != "1" {
                    return Err(bad(format!("unsupported set format {}", v.trim())));
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let n = line
            .parse()
            .map_err(|_| bad(format!("line {}: not an integer: {line:?}", i + 1)))?;
        elems.push(n);
    }
    Ok(elems.into_iter().collect())
}

pub fn periodic_to_json<T: Int>(s: &EventuallyPeriodicSet<T>) -> Value {
    json!({
        "format": FORMAT,
        "n0": int_to_json(s.n0()),
        "m": int_to_json(s.modulus()),
        "residues": ints_to_json(s.residues()),
        "head": ints_to_json(s.head()),
    })
}

pub fn periodic_from_json<T: Int>(v: &Value) -> Result<EventuallyPeriodicSet<T>> {
    let head: FiniteIntSet<T> = ints_from_json::<T>(field(v, "head")?, "head")?.into_iter().collect();
    EventuallyPeriodicSet::new(
        int_from_json(field(v, "n0")?)?,
        int_from_json(field(v, "m")?)?,
        ints_from_json(field(v, "residues")?, "residues")?,
        head,
    )
}

/// A set file: finite text, or periodic JSON when it starts with `{`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetFile<T> {
    Finite(FiniteIntSet<T>),
    Periodic(EventuallyPeriodicSet<T>),
}

pub fn parse_set_file<T: Int>(text: &str) -> Result<SetFile<T>> {
    if text.trim_start().starts_with('{') {
        Ok(SetFile::Periodic(periodic_from_json(&parse_json(text)?)?))
    } else {
        Ok(SetFile::Finite(parse_set(text)?))
    }
}

pub fn write_periodic<T: Int>(s: &EventuallyPeriodicSet<T>) -> String {
    pretty(&periodic_to_json(s))
}

pub fn table_to_json<T: Int>(t: &RepTable<T>, kind: RepKind, h: usize) -> Value {
    json!({
        "format": FORMAT,
        "kind": kind.name(),
        "order": h,
        "lo": int_to_json(t.lo()),
        "hi": int_to_json(t.hi()),
        "counts": t.counts(),
    })
}

pub fn write_table<T: Int>(t: &RepTable<T>, kind: RepKind, h: usize) -> String {
    pretty(&table_to_json(t, kind, h))
}

/// `(table, kind, order)`.
pub fn parse_table<T: Int>(text: &str) -> Result<(RepTable<T>, RepKind, usize)> {
    let v = parse_json(text)?;
    let kind: RepKind = field(&v, "kind")?.as_str().ok_or_else(|| bad("kind must be a string"))?.parse()?;
    let h = field(&v, "order")?.as_u64().ok_or_else(|| bad("order must be a positive integer"))? as usize;
    let counts = field(&v, "counts")?
        .as_array()
        .ok_or_else(|| bad("counts must be an array"))?
        .iter()
        .map(|c| c.as_u64().ok_or_else(|| bad("counts must be nonnegative integers")))
        .collect::<Result<Vec<u64>>>()?;
    let t = RepTable::new(int_from_json(field(&v, "lo")?)?, int_from_json(field(&v, "hi")?)?, counts)?;
    Ok((t, kind, h))
}

fn target_value_to_json(v: TargetValue) -> Value {
    match v {
        TargetValue::Finite(n) => Value::from(n),
        TargetValue::Infinite => Value::from("inf"),
    }
}

fn target_value_from_json(v: &Value) -> Result<TargetValue> {
    match v {
        Value::String(s) if s == "inf" => Ok(TargetValue::Infinite),
        _ => v
            .as_u64()
            .map(TargetValue::Finite)
            .ok_or_else(|| bad(format!("target value must be a nonnegative integer or \"inf\", found {v}"))),
    }
}

pub fn target_to_json<T: Int>(f: &TargetFn<T>) -> Value {
    let overrides: Map<String, Value> = f
        .overrides()
        .iter()
        .map(|(n, v)| (n.to_string(), target_value_to_json(*v)))
        .collect();
    json!({
        "format": FORMAT,
        "default": target_value_to_json(f.default_value()),
        "overrides": overrides,
    })
}

pub fn write_target<T: Int>(f: &TargetFn<T>) -> String {
    pretty(&target_to_json(f))
}

pub fn parse_target<T: Int>(text: &str) -> Result<TargetFn<T>> {
    let v = parse_json(text)?;
    let default = target_value_from_json(field(&v, "default")?)?;
    let mut overrides = BTreeMap::new();
    if let Some(o) = v.get("overrides") {
        let o = o.as_object().ok_or_else(|| bad("overrides must be an object"))?;
        for (k, val) in o {
            let n: T = k.trim().parse().map_err(|_| bad(format!("override key {k:?} is not an integer")))?;
            overrides.insert(n, target_value_from_json(val)?);
        }
    }
    TargetFn::new(default, overrides)
}

pub fn pair_to_json<T: Int>(p: &CoincidencePair<T>) -> Value {
    json!({
        "format": FORMAT,
        "n0": int_to_json(p.n0()),
        "m": int_to_json(p.modulus()),
        "T": ints_to_json(p.residues()),
        "Astar": ints_to_json(p.astar()),
        "Bstar": ints_to_json(p.bstar()),
    })
}

pub fn write_pair<T: Int>(p: &CoincidencePair<T>) -> String {
    pretty(&pair_to_json(p))
}

pub fn parse_pair<T: Int>(text: &str) -> Result<CoincidencePair<T>> {
    let v = parse_json(text)?;
    let set = |key: &str| -> Result<FiniteIntSet<T>> {
        Ok(ints_from_json::<T>(field(&v, key)?, key)?.into_iter().collect())
    };
    CoincidencePair::new(
        int_from_json(field(&v, "n0")?)?,
        int_from_json(field(&v, "m")?)?,
        set("T")?,
        set("Astar")?,
        set("Bstar")?,
    )
}

pub fn residues_to_json(a: &ResidueSet) -> Value {
    json!({ "format": FORMAT, "m": a.modulus(), "members": a.members() })
}

pub fn write_residues(a: &ResidueSet) -> String {
    pretty(&residues_to_json(a))
}

pub fn parse_residues(text: &str) -> Result<ResidueSet> {
    let v = parse_json(text)?;
    let m = field(&v, "m")?.as_u64().ok_or_else(|| bad("m must be a positive integer"))?;
    let members = field(&v, "members")?
        .as_array()
        .ok_or_else(|| bad("members must be an array"))?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| bad("members must be nonnegative integers")))
        .collect::<Result<Vec<u64>>>()?;
    ResidueSet::new(m, members)
}
