//! Wire formats for groups, cocycles, G-sets and classes.
//!
//! Documents are validated strictly: unknown keys are rejected and every
//! diagnostic carries the JSON path of the offending value.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cocycle::{Cochain2, Cochain3, Qz};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_SIZE_BOUND};
use crate::gset::GSet;
use crate::qell::ClassTermJson;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Table(Vec<Vec<usize>>),
    Perms { degree: usize, gens: Vec<Vec<usize>> },
    Builtin(String),
    Product(Vec<GroupSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CocycleSpec {
    Zero,
    Cyclic { n: usize, k: i64 },
    Explicit(Vec<([usize; 3], Qz)>),
    Coboundary(Vec<([usize; 2], Qz)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSpec {
    Point,
    Regular,
    Trivial(usize),
    Action(Vec<Vec<usize>>),
}

/// Names accepted by [`schema_validate`].
pub const SCHEMA_NAMES: &[&str] = &["group", "cocycle", "gset", "class"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

/// Strict validation of a document against one of [`SCHEMA_NAMES`].
///
/// Structural checks only, plus index ranges that can be decided without
/// building the group (table and permutation entries).
pub fn schema_validate(doc: &Value, schema: &str) -> (bool, Vec<Diagnostic>) {
    let res = match schema {
        "group" => GroupSpec::from_value(doc).map(drop),
        "cocycle" => CocycleSpec::from_value(doc).map(drop),
        "gset" => SpaceSpec::from_value(doc).map(drop),
        "class" => class_from_value(doc).map(drop),
        other => Err(Error::schema("$", format!("unknown schema `{other}`"))),
    };
    match res {
        Ok(()) => (true, Vec::new()),
        Err(Error::Schema { path, message }) => (false, vec![Diagnostic { path, message }]),
        Err(e) => (false, vec![Diagnostic { path: "$".into(), message: e.to_string() }]),
    }
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let m = v.as_object().ok_or_else(|| Error::schema(path, "expected an object"))?;
    if let Some(k) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::schema(format!("{path}.{k}"), "unknown key"));
    }
    Ok(m)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| Error::schema(path, format!("missing key `{key}`")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(path, "expected an array"))
}

fn index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| Error::schema(path, "expected a non-negative integer"))
}

fn integer(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::schema(path, "expected an integer"))
}

fn index_matrix(v: &Value, path: &str) -> Result<Vec<Vec<usize>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let p = format!("{path}[{i}]");
            array(row, &p)?
                .iter()
                .enumerate()
                .map(|(j, x)| index(x, &format!("{p}[{j}]")))
                .collect()
        })
        .collect()
}

fn in_range(rows: &[Vec<usize>], bound: usize, path: &str) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        if let Some(j) = row.iter().position(|&x| x >= bound) {
            return Err(Error::schema(format!("{path}[{i}][{j}]"), format!("index {} is out of range (< {bound})", row[j])));
        }
    }
    Ok(())
}

fn fraction(v: &Value, path: &str) -> Result<Qz> {
    let s = v.as_str().ok_or_else(|| Error::schema(path, "expected a fraction string \"p/q\""))?;
    Qz::parse_canonical(s).map_err(|m| Error::schema(path, m))
}

impl GroupSpec {
    pub fn from_value(v: &Value) -> Result<Self> {
        Self::parse(v, "$")
    }

    fn parse(v: &Value, path: &str) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::schema(path, "missing string key `kind`"))?;
        match kind {
            "table" => {
                let m = object(v, path, &["kind", "table"])?;
                let p = format!("{path}.table");
                let table = index_matrix(field(m, "table", path)?, &p)?;
                let n = table.len();
                if n == 0 || n > DEFAULT_SIZE_BOUND {
                    return Err(Error::schema(p, format!("table must have between 1 and {DEFAULT_SIZE_BOUND} rows")));
                }
                if let Some(i) = table.iter().position(|r| r.len() != n) {
                    return Err(Error::schema(format!("{p}[{i}]"), format!("row must have {n} entries")));
                }
                in_range(&table, n, &p)?;
                Ok(GroupSpec::Table(table))
            }
            "perms" => {
                let m = object(v, path, &["kind", "degree", "gens"])?;
                let degree = index(field(m, "degree", path)?, &format!("{path}.degree"))?;
                let p = format!("{path}.gens");
                let gens = index_matrix(field(m, "gens", path)?, &p)?;
                if let Some(i) = gens.iter().position(|g| g.len() != degree) {
                    return Err(Error::schema(format!("{p}[{i}]"), format!("permutation must have {degree} entries")));
                }
                in_range(&gens, degree, &p)?;
                for (i, g) in gens.iter().enumerate() {
                    if g.iter().collect::<BTreeSet<_>>().len() != degree {
                        return Err(Error::schema(format!("{p}[{i}]"), "not a permutation"));
                    }
                }
                Ok(GroupSpec::Perms { degree, gens })
            }
            "builtin" => {
                let m = object(v, path, &["kind", "name"])?;
                let name = field(m, "name", path)?
                    .as_str()
                    .ok_or_else(|| Error::schema(format!("{path}.name"), "expected a string"))?;
                Ok(GroupSpec::Builtin(name.to_string()))
            }
            "product" => {
                let m = object(v, path, &["kind", "factors"])?;
                let p = format!("{path}.factors");
                let factors = array(field(m, "factors", path)?, &p)?
                    .iter()
                    .enumerate()
                    .map(|(i, f)| Self::parse(f, &format!("{p}[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                if factors.is_empty() {
                    return Err(Error::schema(p, "needs at least one factor"));
                }
                Ok(GroupSpec::Product(factors))
            }
            other => Err(Error::schema(format!("{path}.kind"), format!("unknown group kind `{other}`"))),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            GroupSpec::Table(t) => json!({"kind": "table", "table": t}),
            GroupSpec::Perms { degree, gens } => json!({"kind": "perms", "degree": degree, "gens": gens}),
            GroupSpec::Builtin(name) => json!({"kind": "builtin", "name": name}),
            GroupSpec::Product(f) => json!({"kind": "product", "factors": f.iter().map(Self::to_value).collect::<Vec<_>>()}),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone()),
            GroupSpec::Perms { degree, gens } => FiniteGroup::from_permutations(*degree, gens, DEFAULT_SIZE_BOUND),
            GroupSpec::Builtin(name) => FiniteGroup::builtin(name),
            GroupSpec::Product(f) => {
                let mut it = f.iter().map(Self::build);
                let first = it.next().ok_or_else(|| Error::schema("$.factors", "needs at least one factor"))??;
                it.try_fold(first, |acc, g| FiniteGroup::direct_product(&acc, &g?))
            }
        }
    }
}

impl CocycleSpec {
    pub fn from_value(v: &Value) -> Result<Self> {
        let path = "$";
        let tag = |key: &str| v.get(key).and_then(Value::as_str);
        match (tag("family"), tag("kind")) {
            (Some("zero"), None) => {
                object(v, path, &["family"])?;
                Ok(CocycleSpec::Zero)
            }
            (Some("cyclic"), None) => {
                let m = object(v, path, &["family", "n", "k"])?;
                let n = index(field(m, "n", path)?, "$.n")?;
                let k = integer(field(m, "k", path)?, "$.k")?;
                if n == 0 {
                    return Err(Error::schema("$.n", "must be at least 1"));
                }
                if k < 0 || k >= n as i64 {
                    return Err(Error::schema("$.k", format!("must satisfy 0 ≤ k < {n}")));
                }
                Ok(CocycleSpec::Cyclic { n, k })
            }
            (Some(other), None) => Err(Error::schema("$.family", format!("unknown family `{other}`"))),
            (None, Some("explicit")) => {
                let m = object(v, path, &["kind", "entries"])?;
                Ok(CocycleSpec::Explicit(entries::<3>(field(m, "entries", path)?, "$.entries")?))
            }
            (None, Some("coboundary")) => {
                let m = object(v, path, &["kind", "beta"])?;
                Ok(CocycleSpec::Coboundary(entries::<2>(field(m, "beta", path)?, "$.beta")?))
            }
            (None, Some(other)) => Err(Error::schema("$.kind", format!("unknown cocycle kind `{other}`"))),
            (Some(_), Some(_)) => Err(Error::schema(path, "`family` and `kind` are mutually exclusive")),
            (None, None) => Err(Error::schema(path, "missing string key `family` or `kind`")),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            CocycleSpec::Zero => json!({"family": "zero"}),
            CocycleSpec::Cyclic { n, k } => json!({"family": "cyclic", "n": n, "k": k}),
            CocycleSpec::Explicit(e) => json!({"kind": "explicit", "entries": entries_value(e)}),
            CocycleSpec::Coboundary(b) => json!({"kind": "coboundary", "beta": entries_value(b)}),
        }
    }

    /// The cochain on `group`. The cocycle condition is not checked here.
    pub fn build(&self, group: &Arc<FiniteGroup>) -> Result<Cochain3> {
        let n = group.order();
        let check = |idx: &[usize], i: usize, key: &str| -> Result<()> {
            match idx.iter().position(|&x| x >= n) {
                Some(j) => Err(Error::schema(format!("$.{key}[{i}][0][{j}]"), format!("index {} is out of range (< {n})", idx[j]))),
                None => Ok(()),
            }
        };
        match self {
            CocycleSpec::Zero => Ok(Cochain3::zero(group.clone())),
            CocycleSpec::Cyclic { n: m, k } => {
                if **group != FiniteGroup::cyclic(*m) {
                    return Err(Error::schema("$", format!("cyclic family needs the group builtin:Z{m}")));
                }
                let c = Cochain3::cyclic(*m, *k)?;
                Ok(Cochain3::from_fn(group.clone(), |a, b, x| c.get(a, b, x)))
            }
            CocycleSpec::Explicit(e) => {
                let mut c = Cochain3::zero(group.clone());
                for (i, (t, v)) in e.iter().enumerate() {
                    check(t, i, "entries")?;
                    c.set(t[0], t[1], t[2], *v);
                }
                Ok(c)
            }
            CocycleSpec::Coboundary(b) => {
                let mut beta = Cochain2::zero(group.clone(), group.elements().collect());
                for (i, (t, v)) in b.iter().enumerate() {
                    check(t, i, "beta")?;
                    beta.set(t[0], t[1], *v);
                }
                Cochain3::coboundary(&beta)
            }
        }
    }
}

fn entries<const K: usize>(v: &Value, path: &str) -> Result<Vec<([usize; K], Qz)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, e) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let pair = array(e, &p)?;
        if pair.len() != 2 {
            return Err(Error::schema(p, "expected [indices, \"p/q\"]"));
        }
        let ip = format!("{p}[0]");
        let idx = array(&pair[0], &ip)?;
        if idx.len() != K {
            return Err(Error::schema(ip, format!("expected {K} indices")));
        }
        let mut t = [0usize; K];
        for (j, x) in idx.iter().enumerate() {
            t[j] = index(x, &format!("{ip}[{j}]"))?;
        }
        if !seen.insert(t) {
            return Err(Error::schema(ip, "duplicate entry"));
        }
        out.push((t, fraction(&pair[1], &format!("{p}[1]"))?));
    }
    Ok(out)
}

fn entries_value<const K: usize>(e: &[([usize; K], Qz)]) -> Value {
    Value::Array(e.iter().map(|(t, v)| json!([t.to_vec(), v.to_string()])).collect())
}

impl SpaceSpec {
    /// Accepts `"pt"`, `"regular"`, `{"trivial": n}` or `{"size": n, "action": [...]}`.
    pub fn from_value(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "pt" => Ok(SpaceSpec::Point),
            Value::String(s) if s == "regular" => Ok(SpaceSpec::Regular),
            Value::String(s) => Err(Error::schema("$", format!("unknown space `{s}`"))),
            Value::Object(m) if m.contains_key("trivial") => {
                let m = object(v, "$", &["trivial"])?;
                Ok(SpaceSpec::Trivial(index(field(m, "trivial", "$")?, "$.trivial")?))
            }
            _ => {
                let m = object(v, "$", &["size", "action"])?;
                let size = index(field(m, "size", "$")?, "$.size")?;
                let action = index_matrix(field(m, "action", "$")?, "$.action")?;
                if action.len() != size {
                    return Err(Error::schema("$.action", format!("expected {size} rows")));
                }
                in_range(&action, size, "$.action")?;
                Ok(SpaceSpec::Action(action))
            }
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            SpaceSpec::Point => json!("pt"),
            SpaceSpec::Regular => json!("regular"),
            SpaceSpec::Trivial(n) => json!({"trivial": n}),
            SpaceSpec::Action(a) => json!({"size": a.len(), "action": a}),
        }
    }

    pub fn build(&self, group: &Arc<FiniteGroup>) -> Result<GSet> {
        match self {
            SpaceSpec::Point => Ok(GSet::point(group.clone())),
            SpaceSpec::Regular => Ok(GSet::regular(group.clone())),
            SpaceSpec::Trivial(n) => Ok(GSet::trivial(group.clone(), *n)),
            SpaceSpec::Action(a) => GSet::new(group.clone(), a.clone()).map_err(|e| Error::schema("$.action", e.to_string())),
        }
    }
}

/// A class as a list of `{sigma, orbit, irrep, q_shift, coeff}` terms.
pub fn class_from_value(v: &Value) -> Result<Vec<ClassTermJson>> {
    array(v, "$")?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("$[{i}]");
            let m = object(t, &p, &["sigma", "orbit", "irrep", "q_shift", "coeff"])?;
            let get_index = |k: &str| index(field(m, k, &p)?, &format!("{p}.{k}"));
            let get_int = |k: &str| integer(field(m, k, &p)?, &format!("{p}.{k}"));
            Ok(ClassTermJson {
                sigma: get_index("sigma")?,
                orbit: get_index("orbit")?,
                irrep: get_index("irrep")?,
                q_shift: get_int("q_shift")?,
                coeff: get_int("coeff")?,
            })
        })
        .collect()
}

/// Parses a JSON document, reporting syntax errors as schema errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::schema("$", format!("invalid JSON: {e}")))
}

/// Command-line group shorthand: `builtin:NAME` or a JSON document.
pub fn parse_group_arg(s: &str) -> Result<GroupSpec> {
    match s.strip_prefix("builtin:") {
        Some(name) => Ok(GroupSpec::Builtin(name.to_string())),
        None => GroupSpec::from_value(&parse_json(s)?),
    }
}

/// Command-line cocycle shorthand: `zero`, `cyclic:n:k`, `explicit:<entries>`,
/// `coboundary:<beta>` or a JSON document.
pub fn parse_cocycle_arg(s: &str) -> Result<CocycleSpec> {
    if s == "zero" {
        return Ok(CocycleSpec::Zero);
    }
    if let Some(rest) = s.strip_prefix("cyclic:") {
        let bad = || Error::schema("$", format!("expected cyclic:n:k, got `{s}`"));
        let (n, k) = rest.split_once(':').ok_or_else(bad)?;
        let v = json!({"family": "cyclic", "n": n.parse::<u64>().map_err(|_| bad())?, "k": k.parse::<i64>().map_err(|_| bad())?});
        return CocycleSpec::from_value(&v);
    }
    if let Some(rest) = s.strip_prefix("explicit:") {
        let entries = parse_json(rest)?;
        return CocycleSpec::from_value(&json!({"kind": "explicit", "entries": entries}));
    }
    if let Some(rest) = s.strip_prefix("coboundary:") {
        let beta = parse_json(rest)?;
        return CocycleSpec::from_value(&json!({"kind": "coboundary", "beta": beta}));
    }
    CocycleSpec::from_value(&parse_json(s)?)
}

/// Command-line space shorthand: `pt`, `regular`, `trivial:n` or a JSON document.
pub fn parse_space_arg(s: &str) -> Result<SpaceSpec> {
    match s {
        "pt" => Ok(SpaceSpec::Point),
        "regular" => Ok(SpaceSpec::Regular),
        _ => match s.strip_prefix("trivial:") {
            Some(n) => n
                .parse()
                .map(SpaceSpec::Trivial)
                .map_err(|_| Error::schema("$", format!("expected trivial:n, got `{s}`"))),
            None => SpaceSpec::from_value(&parse_json(s)?),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_group_documents_pass() {
        for doc in [
            json!({"kind": "builtin", "name": "S3"}),
            json!({"kind": "table", "table": [[0, 1], [1, 0]]}),
            json!({"kind": "perms", "degree": 3, "gens": [[1, 2, 0], [1, 0, 2]]}),
            json!({"kind": "product", "factors": [{"kind": "builtin", "name": "Z2"}, {"kind": "builtin", "name": "Z3"}]}),
        ] {
            assert_eq!(schema_validate(&doc, "group"), (true, vec![]), "{doc}");
            let spec = GroupSpec::from_value(&doc).unwrap();
            assert_eq!(GroupSpec::from_value(&spec.to_value()).unwrap(), spec);
            spec.build().unwrap();
        }
    }

    #[test]
    fn out_of_range_action_reports_its_path() {
        let doc = json!({"size": 2, "action": [[0, 1], [1, 2]]});
        let (ok, d) = schema_validate(&doc, "gset");
        assert!(!ok);
        assert_eq!(d[0].path, "$.action[1][1]");
    }

    #[test]
    fn unreduced_fraction_is_rejected() {
        let doc = json!({"kind": "explicit", "entries": [[[1, 1, 1], "2/4"]]});
        let (ok, d) = schema_validate(&doc, "cocycle");
        assert!(!ok);
        assert_eq!(d[0].path, "$.entries[0][1]");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let (ok, d) = schema_validate(&json!({"kind": "builtin", "name": "Z2", "extra": 1}), "group");
        assert!(!ok);
        assert_eq!(d[0].path, "$.extra");
        assert!(!schema_validate(&json!({"family": "zero", "n": 1}), "cocycle").0);
    }

    #[test]
    fn shorthands_match_documents() {
        assert_eq!(parse_cocycle_arg("cyclic:4:1").unwrap(), CocycleSpec::Cyclic { n: 4, k: 1 });
        assert!(parse_cocycle_arg("cyclic:4:4").is_err());
        assert_eq!(parse_space_arg("trivial:3").unwrap(), SpaceSpec::Trivial(3));
        assert_eq!(parse_group_arg("builtin:Q8").unwrap(), GroupSpec::Builtin("Q8".into()));
        let e = parse_cocycle_arg(r#"explicit:[[[1,1,1],"1/2"]]"#).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        assert_eq!(e.build(&g).unwrap().get(1, 1, 1), Qz::new(1, 2));
    }

    #[test]
    fn cyclic_family_needs_its_group() {
        let g = Arc::new(FiniteGroup::builtin("Z2xZ2").unwrap());
        assert!(CocycleSpec::Cyclic { n: 4, k: 1 }.build(&g).is_err());
        let z4 = Arc::new(FiniteGroup::cyclic(4));
        assert_eq!(CocycleSpec::Cyclic { n: 4, k: 1 }.build(&z4).unwrap(), Cochain3::cyclic(4, 1).unwrap());
    }
}
