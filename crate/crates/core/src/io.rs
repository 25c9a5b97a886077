//! Canonical file formats for structures and partitions.
//!
//! Both formats are JSON-shaped UTF-8 text. The writers are byte-
//! deterministic: keys in a fixed order, relations in signature order,
//! tuples and element lists sorted, two-space indentation. The readers
//! accept any key order and whitespace and reject every invariant violation
//! with a distinguishable error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::decomp::Partition;
use crate::error::{Error, Result};
use crate::structure::{Signature, Structure, Violation};

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json(path: &str, text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn bad_field(path: &str, field: &str) -> Error {
    Error::BadField {
        path: path.to_string(),
        field: field.to_string(),
    }
}

fn as_usize(path: &str, field: &str, v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| bad_field(path, field))
}

fn as_id_list(path: &str, field: &str, v: &Value) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| bad_field(path, field))?
        .iter()
        .map(|e| as_usize(path, field, e))
        .collect()
}

/// Parse a structure from its canonical (or any JSON-equivalent) text form,
/// rejecting any invariant violation.
pub fn structure_from_str(text: &str, origin: &str) -> Result<Structure> {
    let structure = structure_from_str_unchecked(text, origin)?;
    if let Some(violation) = structure.validate().into_iter().next() {
        let size = structure.size();
        return Err(match violation {
            Violation::OutOfRange { element, .. } => Error::OutOfRange { element, size },
            Violation::ArityMismatch {
                relation,
                tuple,
                expected,
            } => Error::ArityMismatch {
                got: tuple.len(),
                relation,
                tuple,
                expected,
            },
            other => Error::InvalidStructure {
                detail: other.to_string(),
            },
        });
    }
    Ok(structure)
}

/// Parse a structure without running invariant validation, so that callers
/// can report every violation rather than the first.
pub fn structure_from_str_unchecked(text: &str, origin: &str) -> Result<Structure> {
    let value = parse_json(origin, text)?;
    let obj = value.as_object().ok_or_else(|| bad_field(origin, "root"))?;
    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(bad_field(origin, "name")),
    };
    let size = as_usize(
        origin,
        "size",
        obj.get("size").ok_or_else(|| bad_field(origin, "size"))?,
    )?;
    let sig_value = obj
        .get("signature")
        .and_then(Value::as_array)
        .ok_or_else(|| bad_field(origin, "signature"))?;
    let mut decls = Vec::new();
    for entry in sig_value {
        let entry = entry
            .as_object()
            .ok_or_else(|| bad_field(origin, "signature"))?;
        let rel_name = entry
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| bad_field(origin, "signature.name"))?;
        let arity = as_usize(
            origin,
            "signature.arity",
            entry
                .get("arity")
                .ok_or_else(|| bad_field(origin, "signature.arity"))?,
        )?;
        decls.push((rel_name.to_string(), arity));
    }
    let signature = Signature::new(decls)?;
    let mut relations: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    if let Some(rels) = obj.get("relations") {
        let rels = rels
            .as_object()
            .ok_or_else(|| bad_field(origin, "relations"))?;
        for (rel_name, tuples) in rels {
            if !signature.contains(rel_name) {
                return Err(Error::UnknownRelation {
                    name: rel_name.clone(),
                });
            }
            let tuples = tuples
                .as_array()
                .ok_or_else(|| bad_field(origin, "relations"))?
                .iter()
                .map(|t| as_id_list(origin, rel_name, t))
                .collect::<Result<Vec<_>>>()?;
            relations.insert(rel_name.clone(), tuples);
        }
    }
    Ok(Structure::new(signature, size, relations).with_name(name))
}

/// Canonical text form of a structure.
pub fn structure_to_string(s: &Structure) -> String {
    let mut out = String::from("{\n");
    if let Some(name) = s.name() {
        let _ = writeln!(out, "  \"name\": {},", Value::String(name.to_string()));
    }
    let _ = writeln!(out, "  \"size\": {},", s.size());
    let relations = s.signature().relations();
    if relations.is_empty() {
        out.push_str("  \"signature\": [],\n  \"relations\": {}\n}\n");
        return out;
    }
    out.push_str("  \"signature\": [\n");
    for (i, (name, arity)) in relations.iter().enumerate() {
        let comma = if i + 1 < relations.len() { "," } else { "" };
        let _ = writeln!(
            out,
            "    {{\"name\": {}, \"arity\": {arity}}}{comma}",
            Value::String(name.clone())
        );
    }
    out.push_str("  ],\n  \"relations\": {\n");
    for (i, (name, _)) in relations.iter().enumerate() {
        let comma = if i + 1 < relations.len() { "," } else { "" };
        let tuples: Vec<&Vec<usize>> = s.relation(name).into_iter().flatten().collect();
        if tuples.is_empty() {
            let _ = writeln!(out, "    {}: []{comma}", Value::String(name.clone()));
            continue;
        }
        let _ = writeln!(out, "    {}: [", Value::String(name.clone()));
        for (j, tuple) in tuples.iter().enumerate() {
            let inner = if j + 1 < tuples.len() { "," } else { "" };
            let ids: Vec<String> = tuple.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "      [{}]{inner}", ids.join(", "));
        }
        let _ = writeln!(out, "    ]{comma}");
    }
    out.push_str("  }\n}\n");
    out
}

/// Load and validate a structure file.
pub fn load_structure(path: &Path) -> Result<Structure> {
    let text = read_file(path)?;
    structure_from_str(&text, &path.display().to_string())
}

/// Load a structure file without invariant validation.
pub fn load_structure_unchecked(path: &Path) -> Result<Structure> {
    let text = read_file(path)?;
    structure_from_str_unchecked(&text, &path.display().to_string())
}

/// Write a structure in canonical form.
pub fn save_structure(s: &Structure, path: &Path) -> Result<()> {
    write_file(path, &structure_to_string(s))
}

/// Parse a partition from text and validate it against a universe size.
pub fn partition_from_str(text: &str, size: usize, origin: &str) -> Result<Partition> {
    let value = parse_json(origin, text)?;
    let obj = value.as_object().ok_or_else(|| bad_field(origin, "root"))?;
    let base: BTreeSet<usize> = as_id_list(
        origin,
        "base",
        obj.get("base").ok_or_else(|| bad_field(origin, "base"))?,
    )?
    .into_iter()
    .collect();
    let parts = obj
        .get("parts")
        .and_then(Value::as_array)
        .ok_or_else(|| bad_field(origin, "parts"))?
        .iter()
        .map(|p| Ok(as_id_list(origin, "parts", p)?.into_iter().collect()))
        .collect::<Result<Vec<BTreeSet<usize>>>>()?;
    Partition::new(size, base, parts)
}

/// Canonical text form of a partition: base ascending, parts in canonical
/// order, each on its own line.
pub fn partition_to_string(part: &Partition) -> String {
    let ids = |set: &BTreeSet<usize>| {
        let v: Vec<String> = set.iter().map(ToString::to_string).collect();
        format!("[{}]", v.join(", "))
    };
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"base\": {},", ids(part.base()));
    if part.parts().is_empty() {
        out.push_str("  \"parts\": []\n}\n");
        return out;
    }
    out.push_str("  \"parts\": [\n");
    for (i, p) in part.parts().iter().enumerate() {
        let comma = if i + 1 < part.parts().len() { "," } else { "" };
        let _ = writeln!(out, "    {}{comma}", ids(p));
    }
    out.push_str("  ]\n}\n");
    out
}

/// Load a partition file, validating disjoint cover of `0..size`.
pub fn load_partition(path: &Path, size: usize) -> Result<Partition> {
    let text = read_file(path)?;
    partition_from_str(&text, size, &path.display().to_string())
}

/// Write a partition in canonical form.
pub fn save_partition(part: &Partition, path: &Path) -> Result<()> {
    write_file(path, &partition_to_string(part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, FamilyParams};

    #[test]
    fn minimal_structure_parses() {
        let text = r#"{"size": 2, "signature": [{"name": "R", "arity": 2}],
                       "relations": {"R": [[0, 1]]}}"#;
        let s = structure_from_str(text, "test").unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.relation("R").unwrap().len(), 1);
    }

    #[test]
    fn out_of_range_tuple_rejected() {
        let text = r#"{"size": 2, "signature": [{"name": "R", "arity": 2}],
                       "relations": {"R": [[0, 5]]}}"#;
        assert!(matches!(
            structure_from_str(text, "test"),
            Err(Error::OutOfRange { element: 5, .. })
        ));
    }

    #[test]
    fn arity_mismatch_rejected() {
        let text = r#"{"size": 3, "signature": [{"name": "R", "arity": 2}],
                       "relations": {"R": [[0, 1, 2]]}}"#;
        assert!(matches!(
            structure_from_str(text, "test"),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn duplicate_relation_name_rejected() {
        let text = r#"{"size": 1, "signature": [{"name": "R", "arity": 1},
                       {"name": "R", "arity": 2}], "relations": {}}"#;
        assert!(matches!(
            structure_from_str(text, "test"),
            Err(Error::DuplicateRelation { .. })
        ));
    }

    #[test]
    fn malformed_json_reports_position() {
        match structure_from_str("{\"size\": ", "test") {
            Err(Error::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_relation_rejected() {
        let text = r#"{"size": 1, "signature": [], "relations": {"R": []}}"#;
        assert!(matches!(
            structure_from_str(text, "test"),
            Err(Error::UnknownRelation { .. })
        ));
    }

    #[test]
    fn round_trip_is_identity() {
        for p in [
            FamilyParams::MatedPairs { m: 3 },
            FamilyParams::UnaryCube { u: 2 },
            FamilyParams::Equivalence { m: 2, s: 3 },
        ] {
            let s = generate(p).unwrap();
            let text = structure_to_string(&s);
            let reloaded = structure_from_str(&text, "round-trip").unwrap();
            assert_eq!(s, reloaded, "{p:?}");
            assert_eq!(text, structure_to_string(&reloaded));
        }
    }

    #[test]
    fn empty_structure_round_trips() {
        let s = Structure::new(Signature::new::<_, String>([]).unwrap(), 0, BTreeMap::new());
        let text = structure_to_string(&s);
        let reloaded = structure_from_str(&text, "empty").unwrap();
        assert_eq!(s, reloaded);
    }

    #[test]
    fn partition_round_trip_and_validation() {
        let part = Partition::new(
            5,
            [0].into_iter().collect(),
            vec![
                [1, 2].into_iter().collect(),
                [3, 4].into_iter().collect(),
            ],
        )
        .unwrap();
        let text = partition_to_string(&part);
        let reloaded = partition_from_str(&text, 5, "test").unwrap();
        assert_eq!(part, reloaded);
        // Missing element 4: not a cover.
        let bad = r#"{"base": [0], "parts": [[1, 2], [3]]}"#;
        assert!(partition_from_str(bad, 5, "test").is_err());
    }
}
