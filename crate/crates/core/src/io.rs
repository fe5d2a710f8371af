//! JSON system documents and reports.
//!
//! Set document:
//!
//! ```json
//! {"kind": "set", "n": 2, "d": 2, "tuples": [[[1], [2]]], "partition": [[1], [2]]}
//! ```
//!
//! Subspace document (each subspace is a list of rows of scalar strings):
//!
//! ```json
//! {"kind": "subspace", "n": 2, "d": 2, "field": "rational",
//!  "tuples": [[[["1", "0"]], []]], "decomposition": [[["1", "0"]], [["0", "1"]]]}
//! ```
//!
//! Reports carry every rational as an exact string.

use serde_json::{json, Map, Value};

use crate::arith::{format_rational, BigRational, Field};
use crate::error::{Error, Result};
use crate::saturation::{Extension, FullSystemCertificate, SaturationTrace};
use crate::search::{ConjectureFinding, ExplorationMode, SearchResult};
use crate::subspace::{Decomposition, Subspace};
use crate::system::{elements_of, Partition, SetSystem, SetTuple, SubspaceSystem, SubspaceTuple, System};
use crate::verify::{Certificate, VerificationReport};
use crate::weight::InequalityVerdict;

fn at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("at {path}: {msg}"))
}

fn field_of<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| at("$", format!("missing field {key:?}")))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| at(path, "expected a nonnegative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| at(path, "expected an array"))
}

fn elements(v: &Value, path: &str) -> Result<Vec<usize>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{path}[{i}]")))
        .collect()
}

fn scalar(field: Field, v: &Value, path: &str) -> Result<BigRational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(at(path, "expected a scalar string or integer")),
    };
    field.parse_scalar(&text).map_err(|e| at(path, e))
}

fn subspace(n: usize, field: Field, v: &Value, path: &str) -> Result<Subspace> {
    let rows = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let row_path = format!("{path}[{r}]");
            as_array(row, &row_path)?
                .iter()
                .enumerate()
                .map(|(c, x)| scalar(field, x, &format!("{row_path}[{c}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Subspace::canonicalize(n, field, rows).map_err(|e| at(path, e))
}

fn infer_arity(obj: &Map<String, Value>, tuples: &[Value]) -> Result<usize> {
    match obj.get("d") {
        Some(d) => as_usize(d, "$.d"),
        None => match tuples.first() {
            Some(t) => Ok(as_array(t, "$.tuples[0]")?.len()),
            None => Ok(2),
        },
    }
}

fn tuple_parts<'a>(t: &'a Value, d: usize, path: &str) -> Result<&'a Vec<Value>> {
    let parts = as_array(t, path)?;
    if parts.len() != d {
        return Err(at(path, format!("expected {d} parts, found {}", parts.len())));
    }
    Ok(parts)
}

/// Parses a system document. Syntax errors report line and column; semantic
/// errors report the JSON path of the offending value.
pub fn parse_system(text: &str) -> Result<System> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    system_from_value(&value)
}

pub fn system_from_value(value: &Value) -> Result<System> {
    let obj = value.as_object().ok_or_else(|| at("$", "expected an object"))?;
    let kind = field_of(obj, "kind")?
        .as_str()
        .ok_or_else(|| at("$.kind", "expected a string"))?;
    let n = as_usize(field_of(obj, "n")?, "$.n")?;
    let tuples = as_array(field_of(obj, "tuples")?, "$.tuples")?;
    let d = infer_arity(obj, tuples)?;
    match kind {
        "set" => {
            let parsed = tuples
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let path = format!("$.tuples[{i}]");
                    let parts = tuple_parts(t, d, &path)?
                        .iter()
                        .enumerate()
                        .map(|(l, p)| elements(p, &format!("{path}[{l}]")))
                        .collect::<Result<Vec<_>>>()?;
                    SetTuple::from_elements(&parts, n).map_err(|e| at(&path, e))
                })
                .collect::<Result<Vec<_>>>()?;
            let partition = obj
                .get("partition")
                .filter(|v| !v.is_null())
                .map(|v| {
                    let blocks = as_array(v, "$.partition")?
                        .iter()
                        .enumerate()
                        .map(|(k, b)| elements(b, &format!("$.partition[{k}]")))
                        .collect::<Result<Vec<_>>>()?;
                    Partition::new(n, &blocks).map_err(|e| at("$.partition", e))
                })
                .transpose()?;
            Ok(System::Set(SetSystem::new(n, d, parsed, partition).map_err(|e| at("$", e))?))
        }
        "subspace" => {
            let field: Field = match obj.get("field") {
                Some(f) => f
                    .as_str()
                    .ok_or_else(|| at("$.field", "expected a string"))?
                    .parse()
                    .map_err(|e| at("$.field", e))?,
                None => Field::Rational,
            };
            let parsed = tuples
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let path = format!("$.tuples[{i}]");
                    tuple_parts(t, d, &path)?
                        .iter()
                        .enumerate()
                        .map(|(l, p)| subspace(n, field, p, &format!("{path}[{l}]")))
                        .collect::<Result<Vec<_>>>()
                        .map(SubspaceTuple::new)
                })
                .collect::<Result<Vec<_>>>()?;
            let decomposition = obj
                .get("decomposition")
                .filter(|v| !v.is_null())
                .map(|v| {
                    let blocks = as_array(v, "$.decomposition")?
                        .iter()
                        .enumerate()
                        .map(|(k, b)| subspace(n, field, b, &format!("$.decomposition[{k}]")))
                        .collect::<Result<Vec<_>>>()?;
                    Decomposition::new(n, field, blocks).map_err(|e| at("$.decomposition", e))
                })
                .transpose()?;
            Ok(System::Subspace(
                SubspaceSystem::new(n, field, d, parsed, decomposition).map_err(|e| at("$", e))?,
            ))
        }
        other => Err(at("$.kind", format!("expected \"set\" or \"subspace\", found {other:?}"))),
    }
}

fn subspace_value(s: &Subspace) -> Value {
    let field = s.field();
    Value::Array(
        s.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(plain_scalar(field, x))).collect()))
            .collect(),
    )
}

/// Scalars in documents: rationals as `a/b`, `GF(p)` entries as residues.
fn plain_scalar(field: Field, x: &BigRational) -> String {
    match field {
        Field::Rational => format_rational(x),
        Field::Prime(_) => x.to_integer().to_string(),
    }
}

pub fn system_to_value(system: &System) -> Value {
    match system {
        System::Set(s) => {
            let mut doc = json!({
                "kind": "set",
                "n": s.n(),
                "d": s.d(),
                "tuples": s.tuples().iter().map(|t| t.elements()).collect::<Vec<_>>(),
            });
            if let Some(p) = s.partition() {
                doc["partition"] = json!(p.blocks().iter().map(|&b| elements_of(b)).collect::<Vec<_>>());
            }
            doc
        }
        System::Subspace(s) => {
            let mut doc = json!({
                "kind": "subspace",
                "n": s.n(),
                "d": s.d(),
                "field": s.field().to_string(),
                "tuples": s
                    .tuples()
                    .iter()
                    .map(|t| Value::Array(t.parts().iter().map(subspace_value).collect()))
                    .collect::<Vec<_>>(),
            });
            if let Some(dec) = s.decomposition() {
                doc["decomposition"] = Value::Array(dec.blocks().iter().map(subspace_value).collect());
            }
            doc
        }
    }
}

/// Canonical text of a system document: one key per line, one tuple or
/// block per line.
pub fn serialize_system(system: &System) -> String {
    document_text(&system_to_value(system))
}

/// Formats a document value in the canonical layout.
pub fn document_text(doc: &Value) -> String {
    let compact = |v: &Value| serde_json::to_string(v).expect("plain JSON");
    let Value::Object(obj) = doc else {
        return compact(doc);
    };
    let fields: Vec<String> = obj
        .iter()
        .map(|(k, v)| match v {
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_array) => {
                let lines: Vec<String> = items.iter().map(|x| format!("    {}", compact(x))).collect();
                format!("  {}: [\n{}\n  ]", compact(&Value::String(k.clone())), lines.join(",\n"))
            }
            _ => format!("  {}: {}", compact(&Value::String(k.clone())), compact(v)),
        })
        .collect();
    format!("{{\n{}\n}}\n", fields.join(",\n"))
}

fn q(x: &BigRational) -> Value {
    Value::String(format_rational(x))
}

pub fn verification_json(report: &VerificationReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "claim": c.claim,
        "value": q(&c.value),
        "bound": q(&c.bound),
        "holds": c.holds,
        "tight": c.tight,
        "field_caveat": c.field_caveat,
    })
}

pub fn inequality_json(v: &InequalityVerdict) -> Value {
    json!({
        "functional": v.functional.to_string(),
        "value": q(&v.value),
        "bound": q(&v.bound),
        "holds": v.holds,
        "tight": v.tight,
        "licensed_by": v.licensed_by,
        "field_caveat": v.field_caveat,
    })
}

pub fn trace_json(trace: &SaturationTrace, with_steps: bool) -> Value {
    let omega = |ws: &[BigRational]| -> Value {
        Value::Object(
            trace
                .tracked
                .iter()
                .zip(ws)
                .map(|(k, w)| (k.to_string(), q(w)))
                .collect(),
        )
    };
    let mut out = json!({
        "flavor": trace.flavor.to_string(),
        "steps": trace.steps.len(),
        "omega": omega(&trace.initial_omega),
        "phi_initial": trace.initial_phi.to_string(),
        "phi_final": trace.steps.last().map_or(trace.initial_phi.to_string(), |s| s.phi_after.to_string()),
        "phi_bound": trace.phi_bound.to_string(),
        "omega_constant": trace.omega_constant(),
        "phi_increments_exact": trace.phi_increments_exact(),
        "within_bound": trace.within_bound(),
        "final_system": system_to_value(&trace.final_system),
    });
    if with_steps {
        let field = match &trace.final_system {
            System::Subspace(s) => s.field(),
            System::Set(_) => Field::Rational,
        };
        out["trace"] = Value::Array(
            trace
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "index": s.index + 1,
                        "block": s.block.map(|k| k + 1),
                        "x": match &s.extension {
                            Extension::Element(x) => json!(x),
                            Extension::Vector(v) => json!(v.iter().map(|c| plain_scalar(field, c)).collect::<Vec<_>>()),
                        },
                        "omega": omega(&s.omega_after),
                        "phi": s.phi_after.to_string(),
                        "phi_increment": s.expected_phi_increment.to_string(),
                    })
                })
                .collect(),
        );
    }
    out
}

pub fn full_certificate_json(c: &FullSystemCertificate) -> Value {
    json!({
        "functional": c.functional.to_string(),
        "classes": c.classes.iter().map(|cl| json!({
            "profile": cl.profile.0,
            "count": cl.members.len(),
            "bound": cl.bound.to_string(),
            "weight": q(&cl.weight),
            "within_bound": cl.within_bound,
        })).collect::<Vec<_>>(),
        "omega": q(&c.omega),
        "chain_value": q(&c.chain_value),
        "bound": q(&c.bound),
        "holds": c.holds,
        "field_caveat": c.field_caveat,
    })
}

pub fn search_json(r: &SearchResult) -> Value {
    json!({
        "best_value": q(&r.best_value),
        "witness": system_to_value(&r.witness),
        "nodes": r.nodes,
        "exhaustive": r.exhaustive,
        "pruned": r.pruned,
        "candidates": r.candidates,
        "field_caveat": r.field_caveat,
    })
}

pub fn finding_json(f: &ConjectureFinding) -> Value {
    json!({
        "mode": match f.mode {
            ExplorationMode::Exhaustive => "exhaustive",
            ExplorationMode::Randomized => "randomized",
        },
        "result": search_json(&f.result),
        "exceeds_one": f.exceeds_one,
        "note": "finding only: no claim is made about the inequality over the reals",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_set_document() {
        let s = parse_system(r#"{"kind":"set","n":2,"tuples":[[[1],[2]]]}"#).unwrap();
        assert_eq!(s, System::Set(SetSystem::pairs(2, &[(vec![1], vec![2])]).unwrap()));
        let text = serialize_system(&s);
        assert_eq!(
            text,
            "{\n  \"kind\": \"set\",\n  \"n\": 2,\n  \"d\": 2,\n  \"tuples\": [\n    [[1],[2]]\n  ]\n}\n"
        );
        assert_eq!(parse_system(&text).unwrap(), s);
    }

    #[test]
    fn subspace_document_canonicalizes() {
        let text = r#"{"kind":"subspace","n":2,"d":2,"field":"rational",
            "tuples":[[[["2","2"],["1","0"]], []]]}"#;
        let s = parse_system(text).unwrap();
        let canonical = serialize_system(&s);
        assert!(canonical.contains(r#"[[["1","0"],["0","1"]],[]]"#), "{canonical}");
        let again = parse_system(&canonical).unwrap();
        assert_eq!(again, s);
        assert_eq!(serialize_system(&again), canonical);
        let System::Subspace(sub) = &s else { unreachable!() };
        assert!(sub.tuples()[0].parts()[0].is_full());
    }

    #[test]
    fn prime_field_document() {
        let text = r#"{"kind":"subspace","n":2,"field":"gf(3)",
            "tuples":[[[["4","1 mod 3"]], [[0,1]]]],
            "decomposition":[[["1","0"]],[["0","1"]]]}"#;
        let s = parse_system(text).unwrap();
        let out = serialize_system(&s);
        assert!(out.contains("gf(3)"));
        assert_eq!(parse_system(&out).unwrap(), s);
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_system("{\"kind\": \"set\",\n \"n\": }").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_system(r#"{"kind":"set","n":2,"tuples":[[[1],[2]]],"partition":[[1],[1,2]]}"#).unwrap_err();
        assert!(e.to_string().contains("blocks overlap"), "{e}");
        let e = parse_system(r#"{"kind":"set","n":2,"tuples":[[[1],[5]]]}"#).unwrap_err();
        assert!(e.to_string().contains("$.tuples[0]"), "{e}");
        let e = parse_system(r#"{"kind":"subspace","n":2,"tuples":[[[["1","0","0"]],[]]]}"#).unwrap_err();
        assert!(e.to_string().contains("$.tuples[0][0]"), "{e}");
        assert!(parse_system(r#"{"kind":"graph","n":1,"tuples":[]}"#).is_err());
    }
}
