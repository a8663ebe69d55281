//! JSON documents: instances, allocations, certificates and numbers.
//!
//! Items and agents are 1-based in every document and 0-based in the library.
//! Table valuations index subsets by bitmask with bit `j-1` standing for item
//! `j`, which is also the library's internal layout.

use std::str::FromStr;

use fairdiv::{Allocation, Instance, Kind, Valuation, Value};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, Serializer};
use serde_json::{Map, Value as Json};

use crate::CliError;

/// Exact number as written in documents: bare integers, `"p/q"` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Num(pub Value);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(x) = self.0.numer().to_i64() {
                return s.serialize_i64(x);
            }
            return s.serialize_str(&self.0.numer().to_string());
        }
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

/// Bundles as 1-based item lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundles(pub Vec<Vec<usize>>);

impl From<&Allocation> for Bundles {
    fn from(x: &Allocation) -> Self {
        Bundles(
            x.bundles()
                .iter()
                .map(|b| b.iter().map(|g| g + 1).collect())
                .collect(),
        )
    }
}

impl Serialize for Bundles {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::input(msg)
}

/// Parses JSON text, reporting syntax errors with their line and column.
pub fn parse_json(text: &str, what: &str) -> Result<Json, CliError> {
    serde_json::from_str(text).map_err(|e| input(format!("{what}: {e}")))
}

pub fn parse_number(v: &Json, path: &str) -> Result<Value, CliError> {
    match v {
        Json::Number(n) => {
            if let Some(x) = n.as_i64() {
                Ok(Value::from_integer(x.into()))
            } else if let Some(x) = n.as_u64() {
                Ok(Value::from_integer(x.into()))
            } else {
                Err(input(format!(
                    "{path}: {n} is not an integer; write fractions as \"p/q\" strings"
                )))
            }
        }
        Json::String(s) => parse_rational(s).map_err(|e| input(format!("{path}: {e}"))),
        other => Err(input(format!("{path}: expected a number, found {other}"))),
    }
}

/// `"n"`, `"-n"` or `"p/q"` with `q != 0`.
pub fn parse_rational(s: &str) -> Result<Value, String> {
    let s = s.trim();
    let int = |t: &str| BigInt::from_str(t.trim()).map_err(|_| format!("{s:?} is not a rational number"));
    match s.split_once('/') {
        None => Ok(Value::from_integer(int(s)?)),
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(format!("{s:?} has a zero denominator"));
            }
            Ok(Value::new(int(p)?, q))
        }
    }
}

fn get<'a>(obj: &'a Map<String, Json>, key: &str, path: &str) -> Result<&'a Json, CliError> {
    obj.get(key).ok_or_else(|| input(format!("{path}: missing key {key:?}")))
}

fn as_count(v: &Json, path: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| input(format!("{path}: expected a non-negative integer, found {v}")))
}

fn as_array<'a>(v: &'a Json, path: &str) -> Result<&'a Vec<Json>, CliError> {
    v.as_array().ok_or_else(|| input(format!("{path}: expected an array, found {v}")))
}

fn row(v: &Json, len: usize, path: &str) -> Result<Vec<Value>, CliError> {
    let a = as_array(v, path)?;
    if a.len() != len {
        return Err(input(format!("{path}: expected {len} entries, found {}", a.len())));
    }
    a.iter()
        .enumerate()
        .map(|(k, x)| parse_number(x, &format!("{path}[{k}]")))
        .collect()
}

const INSTANCE_KEYS: [&str; 6] = ["agents", "items", "kind", "valuations", "alpha_correlation", "comment"];

pub fn parse_instance(text: &str) -> Result<Instance<Value>, CliError> {
    instance_from_json(&parse_json(text, "instance")?)
}

pub fn instance_from_json(doc: &Json) -> Result<Instance<Value>, CliError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| input("instance: expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !INSTANCE_KEYS.contains(&k.as_str())) {
        return Err(input(format!("instance: unknown key {k:?}")));
    }
    let n = as_count(get(obj, "agents", "instance")?, "agents")?;
    let m = as_count(get(obj, "items", "instance")?, "items")?;
    if n == 0 {
        return Err(input("agents: must be at least 1"));
    }
    let kind = match get(obj, "kind", "instance")?.as_str() {
        Some("goods") => Kind::Goods,
        Some("chores") => Kind::Chores,
        _ => return Err(input("kind: expected \"goods\" or \"chores\"")),
    };
    let vals = get(obj, "valuations", "instance")?
        .as_object()
        .ok_or_else(|| input("valuations: expected an object with \"additive\" or \"tables\""))?;
    let valuations = match (vals.get("additive"), vals.get("tables"), vals.len()) {
        (Some(a), None, 1) => {
            let rows = as_array(a, "valuations.additive")?;
            if rows.len() != n {
                return Err(input(format!("valuations.additive: expected {n} rows, found {}", rows.len())));
            }
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    let path = format!("valuations.additive[{i}]");
                    Valuation::additive(row(r, m, &path)?).map_err(|e| input(format!("{path}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        (None, Some(t), 1) => {
            if m > fairdiv::DEFAULT_TABLE_LIMIT {
                return Err(input(format!(
                    "valuations.tables: {m} items exceed the table limit of {}",
                    fairdiv::DEFAULT_TABLE_LIMIT
                )));
            }
            let rows = as_array(t, "valuations.tables")?;
            if rows.len() != n {
                return Err(input(format!("valuations.tables: expected {n} tables, found {}", rows.len())));
            }
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    let path = format!("valuations.tables[{i}]");
                    Valuation::table(m, row(r, 1 << m, &path)?).map_err(|e| input(format!("{path}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        _ => {
            return Err(input(
                "valuations: expected exactly one of \"additive\" or \"tables\"",
            ))
        }
    };
    for (i, v) in valuations.iter().enumerate() {
        check_signs(kind, v, i)?;
    }
    Instance::new(kind, valuations).map_err(|e| input(format!("instance: {e}")))
}

/// Reports sign errors with 1-based agent and item numbers.
fn check_signs(kind: Kind, v: &Valuation<Value>, agent: usize) -> Result<(), CliError> {
    let bad = |x: &Value| match kind {
        Kind::Goods => x.is_negative(),
        Kind::Chores => x.is_positive(),
    };
    let expected = match kind {
        Kind::Goods => "goods need non-negative values",
        Kind::Chores => "chores need non-positive values",
    };
    let offending = match v {
        Valuation::Additive(a) => a
            .item_values()
            .iter()
            .position(bad)
            .map(|g| format!("item {}", g + 1)),
        Valuation::Table(t) => t.values().iter().position(bad).map(|s| format!("subset with bitmask {s}")),
    };
    match offending {
        Some(what) => Err(input(format!(
            "valuations: agent {}, {what}: {expected}",
            agent + 1
        ))),
        None => Ok(()),
    }
}

pub fn bundles_from_json(v: &Json, path: &str) -> Result<Vec<Vec<usize>>, CliError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, b)| {
            as_array(b, &format!("{path}[{i}]"))?
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let p = format!("{path}[{i}][{k}]");
                    match g.as_u64() {
                        Some(g) if g >= 1 => Ok(g as usize - 1),
                        _ => Err(input(format!("{p}: expected a 1-based item number, found {g}"))),
                    }
                })
                .collect()
        })
        .collect()
}

/// Converts 1-based JSON bundles into an allocation of `inst`.
pub fn allocation_from_json<T>(v: &Json, inst: &Instance<T>, path: &str) -> Result<Allocation, CliError>
where
    T: fairdiv::Scalar,
{
    let lists = bundles_from_json(v, path)?;
    if lists.len() != inst.num_agents() {
        return Err(input(format!(
            "{path}: expected {} bundles, found {}",
            inst.num_agents(),
            lists.len()
        )));
    }
    Allocation::from_lists(inst.num_items(), &lists).map_err(|e| input(format!("{path}: {e}")))
}

/// An allocation document: either a bare list of bundles or an object with an
/// `"allocation"` key, such as the output of `solve`, which may also carry
/// `"stage1"` and `"certificates"`.
#[derive(Debug, Clone)]
pub struct AllocationDoc {
    pub allocation: Allocation,
    pub stage1: Option<Allocation>,
    pub certificates: Vec<(usize, Allocation)>,
}

pub fn parse_allocation<T: fairdiv::Scalar>(text: &str, inst: &Instance<T>) -> Result<AllocationDoc, CliError> {
    let doc = parse_json(text, "allocation")?;
    match &doc {
        Json::Array(_) => Ok(AllocationDoc {
            allocation: allocation_from_json(&doc, inst, "allocation")?,
            stage1: None,
            certificates: Vec::new(),
        }),
        Json::Object(obj) => {
            let allocation = allocation_from_json(get(obj, "allocation", "allocation document")?, inst, "allocation")?;
            let stage1 = obj
                .get("stage1")
                .map(|s| allocation_from_json(s, inst, "stage1"))
                .transpose()?;
            let certificates = match obj.get("certificates") {
                Some(c) => certificates_from_json(c, inst)?,
                None => Vec::new(),
            };
            Ok(AllocationDoc {
                allocation,
                stage1,
                certificates,
            })
        }
        _ => Err(input("allocation: expected an array of bundles or an object")),
    }
}

fn certificate_from_json<T: fairdiv::Scalar>(
    v: &Json,
    inst: &Instance<T>,
    path: &str,
) -> Result<(usize, Allocation), CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| input(format!("{path}: expected an object with \"agent\" and \"witness\"")))?;
    let agent = as_count(get(obj, "agent", path)?, &format!("{path}.agent"))?;
    if agent == 0 || agent > inst.num_agents() {
        return Err(input(format!("{path}.agent: no agent {agent}")));
    }
    let witness = allocation_from_json(get(obj, "witness", path)?, inst, &format!("{path}.witness"))?;
    Ok((agent - 1, witness))
}

fn certificates_from_json<T: fairdiv::Scalar>(
    v: &Json,
    inst: &Instance<T>,
) -> Result<Vec<(usize, Allocation)>, CliError> {
    as_array(v, "certificates")?
        .iter()
        .enumerate()
        .map(|(k, c)| certificate_from_json(c, inst, &format!("certificates[{k}]")))
        .collect()
}

/// Certificates from a `solve` report, a `certify` output, or a list of
/// either kind of entry. Agents are returned 0-based.
pub fn parse_certificates<T: fairdiv::Scalar>(
    text: &str,
    inst: &Instance<T>,
) -> Result<Vec<(usize, Allocation)>, CliError> {
    let doc = parse_json(text, "certificates")?;
    match &doc {
        Json::Array(_) => certificates_from_json(&doc, inst),
        Json::Object(obj) if obj.contains_key("certificates") => certificates_from_json(&obj["certificates"], inst),
        Json::Object(_) => Ok(vec![certificate_from_json(&doc, inst, "certificate")?]),
        _ => Err(input("certificates: expected an object or an array")),
    }
}

/// The instance document for integer (or rational) additive valuations.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InstanceDoc {
    pub agents: usize,
    pub items: usize,
    pub kind: &'static str,
    pub valuations: AdditiveDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_correlation: Option<Option<Num>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct AdditiveDoc {
    pub additive: Vec<Vec<Num>>,
}
