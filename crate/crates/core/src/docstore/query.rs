//! The query subset: equality, `$lt`, `$lte`, `$gt`, `$gte`, `$ne`, `$in`,
//! `$and`, `$or` over dotted field paths.

use std::cmp::Ordering;

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed query: {0}")]
pub struct QueryError(pub String);

#[derive(Clone, Debug, PartialEq)]
pub enum Condition {
    Eq(Value),
    Ne(Value),
    Lt(Value),
    Lte(Value),
    Gt(Value),
    Gte(Value),
    In(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    And(Vec<Query>),
    Or(Vec<Query>),
    Field { path: String, condition: Condition },
}

impl Query {
    /// Matches every document.
    pub fn all() -> Self {
        Query::And(Vec::new())
    }

    pub fn parse(value: &Value) -> Result<Self, QueryError> {
        let Value::Object(map) = value else {
            return Err(QueryError(format!("expected an object, found {value}")));
        };
        let mut parts = Vec::with_capacity(map.len());
        for (key, v) in map {
            match key.as_str() {
                "$and" => parts.push(Query::And(parse_list(key, v)?)),
                "$or" => parts.push(Query::Or(parse_list(key, v)?)),
                k if k.starts_with('$') => return Err(QueryError(format!("unknown operator {k}"))),
                "" => return Err(QueryError("empty field name".into())),
                path => parse_field(path, v, &mut parts)?,
            }
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Query::And(parts) })
    }

    pub fn parse_str(text: &str) -> Result<Self, QueryError> {
        let value: Value = serde_json::from_str(text).map_err(|e| QueryError(e.to_string()))?;
        Self::parse(&value)
    }

    pub fn matches(&self, doc: &Value) -> bool {
        match self {
            Query::And(qs) => qs.iter().all(|q| q.matches(doc)),
            Query::Or(qs) => qs.iter().any(|q| q.matches(doc)),
            Query::Field { path, condition } => condition.matches(lookup(doc, path)),
        }
    }

    /// Top-level equality constraints usable for an index lookup.
    pub(crate) fn equalities(&self) -> Vec<(&str, Vec<&Value>)> {
        match self {
            Query::And(qs) => qs.iter().flat_map(Query::equalities).collect(),
            Query::Field { path, condition: Condition::Eq(v) } => vec![(path.as_str(), vec![v])],
            Query::Field { path, condition: Condition::In(vs) } => vec![(path.as_str(), vs.iter().collect())],
            _ => Vec::new(),
        }
    }
}

fn parse_list(op: &str, v: &Value) -> Result<Vec<Query>, QueryError> {
    match v {
        Value::Array(items) if !items.is_empty() => items.iter().map(Query::parse).collect(),
        _ => Err(QueryError(format!("{op} needs a non-empty array"))),
    }
}

fn parse_field(path: &str, v: &Value, parts: &mut Vec<Query>) -> Result<(), QueryError> {
    let field = |condition| Query::Field { path: path.to_string(), condition };
    match v {
        Value::Object(ops) if ops.keys().any(|k| k.starts_with('$')) => {
            for (op, arg) in ops {
                let condition = match op.as_str() {
                    "$eq" => Condition::Eq(arg.clone()),
                    "$ne" => Condition::Ne(arg.clone()),
                    "$lt" => Condition::Lt(arg.clone()),
                    "$lte" => Condition::Lte(arg.clone()),
                    "$gt" => Condition::Gt(arg.clone()),
                    "$gte" => Condition::Gte(arg.clone()),
                    "$in" => match arg {
                        Value::Array(items) => Condition::In(items.clone()),
                        _ => return Err(QueryError(format!("$in on {path} needs an array"))),
                    },
                    other if other.starts_with('$') => return Err(QueryError(format!("unknown operator {other}"))),
                    other => return Err(QueryError(format!("cannot mix operators and field {other} under {path}"))),
                };
                parts.push(field(condition));
            }
        }
        _ => parts.push(field(Condition::Eq(v.clone()))),
    }
    Ok(())
}

/// Follows a dotted path; numeric segments index arrays.
pub fn lookup<'a>(doc: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(doc, |cur, seg| match cur {
        Value::Object(m) => m.get(seg),
        Value::Array(items) => seg.parse::<usize>().ok().and_then(|i| items.get(i)),
        _ => None,
    })
}

impl Condition {
    fn matches(&self, field: Option<&Value>) -> bool {
        match self {
            Condition::Ne(v) => !field.is_some_and(|f| values_equal(f, v)),
            Condition::Eq(v) => field.is_some_and(|f| values_equal(f, v)),
            Condition::In(vs) => field.is_some_and(|f| vs.iter().any(|v| values_equal(f, v))),
            Condition::Lt(v) => compare(field, v).is_some_and(Ordering::is_lt),
            Condition::Lte(v) => compare(field, v).is_some_and(Ordering::is_le),
            Condition::Gt(v) => compare(field, v).is_some_and(Ordering::is_gt),
            Condition::Gte(v) => compare(field, v).is_some_and(Ordering::is_ge),
        }
    }
}

/// Structural equality with numbers compared by value (`5 == 5.0`).
pub fn values_equal(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(_), Value::Number(_)) => compare_numbers(a, b) == Some(Ordering::Equal),
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| values_equal(p, q)),
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| values_equal(v, w)))
        }
        _ => a == b,
    }
}

/// Ordering between two numbers or two strings; other pairs are incomparable.
fn compare(field: Option<&Value>, v: &Value) -> Option<Ordering> {
    match (field?, v) {
        (a @ Value::Number(_), b @ Value::Number(_)) => compare_numbers(a, b),
        (Value::String(a), Value::String(b)) => Some(a.cmp(b)),
        _ => None,
    }
}

fn compare_numbers(a: &Value, b: &Value) -> Option<Ordering> {
    match (exact_integer(a), exact_integer(b)) {
        (Some(x), Some(y)) => Some(x.cmp(&y)),
        _ => a.as_f64()?.partial_cmp(&b.as_f64()?),
    }
}

/// Integer value of a number, including floats with no fractional part.
pub(crate) fn exact_integer(v: &Value) -> Option<i128> {
    let Value::Number(n) = v else { return None };
    if let Some(i) = n.as_i64() {
        return Some(i as i128);
    }
    if let Some(u) = n.as_u64() {
        return Some(u as i128);
    }
    let f = n.as_f64()?;
    (f.fract() == 0.0 && f.abs() < 1e18).then_some(f as i128)
}
