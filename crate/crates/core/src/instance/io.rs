//! Instance JSON:
//!
//! ```json
//! { "name": "...", "n": 2,
//!   "vars": [{"kind": "int", "lb": "0", "ub": "3"}, {"kind": "cont", "lb": "0", "ub": "inf"}],
//!   "rows": [{"coeffs": ["1", "1/2"], "sense": "<=", "rhs": "5/2"}],
//!   "objective": ["1", "1"],
//!   "tags": ["packing"] }
//! ```
//!
//! Optional keys: `partition` (list of index blocks) and `meta` (ignored).
//! Tags are recomputed on read; a listed tag that does not hold is an error.

use std::path::Path;

use serde_json::{json, Map, Value};

use super::model::{MilpInstance, Partition, Tag, VarKind, Variable};
use crate::error::{Error, Result};
use crate::geometry::polytope::{Constraint, Sense, VPolytope};
use crate::rational::{self, Rational};

fn field_err(path: &str, msg: impl Into<String>) -> Error {
    Error::Field {
        field: path.to_string(),
        msg: msg.into(),
    }
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| field_err(&join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| field_err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| field_err(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| field_err(path, "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| field_err(path, "expected a nonnegative integer"))
}

/// A rational written as a `"p/q"` string; bare JSON integers are accepted.
fn as_rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s).map_err(|e| field_err(path, e)),
        Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap_or_default())),
        _ => Err(field_err(path, "expected a rational string such as \"5/2\"")),
    }
}

fn rational_vec(v: &Value, path: &str) -> Result<Vec<Rational>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_var(v: &Value, path: &str) -> Result<Variable> {
    let obj = as_object(v, path)?;
    let kind = match as_str(get(obj, "kind", path)?, &join(path, "kind"))? {
        "int" => VarKind::Integer,
        "cont" => VarKind::Continuous,
        other => {
            return Err(field_err(
                &join(path, "kind"),
                format!("unknown variable kind {other:?}"),
            ))
        }
    };
    let lb = match obj.get("lb") {
        Some(x) => as_rational(x, &join(path, "lb"))?,
        None => rational::int(0),
    };
    let ub = match obj.get("ub") {
        None => None,
        Some(Value::String(s)) if s.trim() == "inf" || s.trim() == "+inf" => None,
        Some(x) => Some(as_rational(x, &join(path, "ub"))?),
    };
    Ok(Variable { kind, lb, ub })
}

fn parse_row(v: &Value, path: &str) -> Result<Constraint> {
    let obj = as_object(v, path)?;
    let coeffs = rational_vec(get(obj, "coeffs", path)?, &join(path, "coeffs"))?;
    let token = as_str(get(obj, "sense", path)?, &join(path, "sense"))?;
    let sense = Sense::from_token(token).ok_or_else(|| {
        field_err(&join(path, "sense"), format!("unknown sense token {token:?}"))
    })?;
    let rhs = as_rational(get(obj, "rhs", path)?, &join(path, "rhs"))?;
    Ok(Constraint::new(coeffs, sense, rhs))
}

fn from_value(root: &Value) -> Result<MilpInstance> {
    let obj = as_object(root, "")?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "name" | "n" | "vars" | "rows" | "objective" | "tags" | "partition" | "meta"
        ) {
            return Err(field_err(key, "unknown field"));
        }
    }
    let name = as_str(get(obj, "name", "")?, "name")?.to_string();
    let n = as_usize(get(obj, "n", "")?, "n")?;
    let vars = as_array(get(obj, "vars", "")?, "vars")?
        .iter()
        .enumerate()
        .map(|(j, v)| parse_var(v, &format!("vars[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let rows = as_array(get(obj, "rows", "")?, "rows")?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_row(v, &format!("rows[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let objective = rational_vec(get(obj, "objective", "")?, "objective")?;
    let mut claimed = std::collections::BTreeSet::new();
    if let Some(tags) = obj.get("tags") {
        for (i, t) in as_array(tags, "tags")?.iter().enumerate() {
            let path = format!("tags[{i}]");
            let s = as_str(t, &path)?;
            claimed.insert(Tag::from_name(s).ok_or_else(|| field_err(&path, format!("unknown tag {s:?}")))?);
        }
    }
    let partition = match obj.get("partition") {
        None | Some(Value::Null) => None,
        Some(p) => {
            let blocks = as_array(p, "partition")?
                .iter()
                .enumerate()
                .map(|(b, block)| {
                    let path = format!("partition[{b}]");
                    as_array(block, &path)?
                        .iter()
                        .enumerate()
                        .map(|(k, j)| as_usize(j, &format!("{path}[{k}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Partition { blocks })
        }
    };

    let mut inst = MilpInstance {
        name,
        n,
        vars,
        rows,
        objective,
        tags: claimed,
        partition,
    };
    inst.validate()?;
    inst.tags = super::classify(&inst);
    Ok(inst)
}

pub fn parse_instance(text: &str) -> Result<MilpInstance> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    from_value(&root)
}

fn fmt_vec(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(rational::format(q))).collect())
}

pub fn to_value(inst: &MilpInstance) -> Value {
    let vars: Vec<Value> = inst
        .vars
        .iter()
        .map(|v| {
            json!({
                "kind": match v.kind { VarKind::Integer => "int", VarKind::Continuous => "cont" },
                "lb": rational::format(&v.lb),
                "ub": v.ub.as_ref().map_or_else(|| "inf".to_string(), rational::format),
            })
        })
        .collect();
    let rows: Vec<Value> = inst
        .rows
        .iter()
        .map(|r| {
            json!({
                "coeffs": fmt_vec(&r.coeffs),
                "sense": r.sense.token(),
                "rhs": rational::format(&r.rhs),
            })
        })
        .collect();
    let mut root = json!({
        "name": inst.name,
        "n": inst.n,
        "vars": vars,
        "rows": rows,
        "objective": fmt_vec(&inst.objective),
        "tags": inst.tags.iter().map(|t| t.name()).collect::<Vec<_>>(),
    });
    if let Some(p) = &inst.partition {
        root["partition"] = json!(p.blocks);
    }
    root
}

pub fn to_json(inst: &MilpInstance) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(inst)).expect("serializable");
    s.push('\n');
    s
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<MilpInstance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn write_instance(inst: &MilpInstance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(inst))?;
    Ok(())
}

#[derive(serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    #[serde(default)]
    name: Option<String>,
    dim: usize,
    #[serde(with = "rational::serde_str::nested")]
    vertices: Vec<Vec<Rational>>,
}

/// V-polytope JSON: `{"name": "...", "dim": 2, "vertices": [["0", "1"], ["1", "0"]]}`.
pub fn parse_polytope(text: &str) -> Result<(Option<String>, VPolytope)> {
    let f: PolytopeFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    Ok((f.name, VPolytope::new(f.dim, f.vertices)?))
}

pub fn polytope_to_json(name: Option<&str>, p: &VPolytope) -> String {
    let f = PolytopeFile {
        name: name.map(str::to_string),
        dim: p.dim,
        vertices: p.vertices.clone(),
    };
    let mut s = serde_json::to_string_pretty(&f).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    const SAMPLE: &str = r#"{
        "name": "s", "n": 2,
        "vars": [{"kind": "int", "lb": "0", "ub": "3"}, {"kind": "cont", "lb": "0", "ub": "inf"}],
        "rows": [{"coeffs": ["1", "1/2"], "sense": "<=", "rhs": "5/2"}],
        "objective": ["1", "1"],
        "tags": ["packing"],
        "meta": {"anything": true}
    }"#;

    #[test]
    fn parses_rationals() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.rows[0].rhs, rat(5, 2));
        assert_eq!(inst.vars[1].ub, None);
        assert!(inst.has_tag(Tag::Packing));
    }

    #[test]
    fn round_trip() {
        let inst = parse_instance(SAMPLE).unwrap();
        let again = parse_instance(&to_json(&inst)).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn bad_sense_names_row() {
        let text = SAMPLE.replace("\"<=\"", "\"<\"");
        match parse_instance(&text) {
            Err(Error::Field { field, msg }) => {
                assert_eq!(field, "rows[0].sense");
                assert!(msg.contains("\"<\""));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_instance("{\n  \"name\": }") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn false_tag_rejected() {
        let text = SAMPLE.replace("\"packing\"", "\"covering\"");
        assert!(matches!(parse_instance(&text), Err(Error::Field { .. })));
    }

    #[test]
    fn polytope_round_trip() {
        let text = r#"{"name": "antidiagonal", "dim": 2, "vertices": [["0", "1"], ["1", "0"]]}"#;
        let (name, p) = parse_polytope(text).unwrap();
        assert_eq!(name.as_deref(), Some("antidiagonal"));
        assert_eq!(p.vertices[0], vec![int(0), int(1)]);
        assert_eq!(parse_polytope(&polytope_to_json(Some("antidiagonal"), &p)).unwrap().1, p);
        assert!(parse_polytope(r#"{"dim": 2, "vertices": [["0"]]}"#).is_err());
    }

    #[test]
    fn bare_integers_accepted() {
        let text = SAMPLE.replace("\"rhs\": \"5/2\"", "\"rhs\": 3");
        assert_eq!(parse_instance(&text).unwrap().rows[0].rhs, int(3));
    }
}
