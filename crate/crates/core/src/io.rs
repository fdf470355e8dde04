//! The JSON arrangement file format.
//!
//! ```json
//! {"n": 2, "hyperplanes": [{"normal": [1, 0]}, {"normal": ["1/2", "-1"], "multiplicity": 2, "label": "H"}]}
//! ```
//!
//! Normal entries are integers or rational strings `"p/q"`. A hyperplane with
//! multiplicity `k` expands to `k` adjacent copies, in listed order; this
//! order is the total order used for activities.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arrangement::{default_label, Arrangement, Hyperplane};
use crate::rational::Rational;
use crate::{Error, Result};

/// Subset computations index hyperplanes by bits of a `u64`.
pub const MAX_HYPERPLANES: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneEntry {
    pub normal: Vec<Rational>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn one() -> usize {
    1
}

fn is_one(m: &usize) -> bool {
    *m == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub n: usize,
    pub hyperplanes: Vec<HyperplaneEntry>,
}

fn field_error(field: String, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{field}: {msg}"))
}

/// Walks the raw JSON so that errors name the offending field.
fn check_shape(v: &Value) -> Result<()> {
    let obj = v.as_object().ok_or_else(|| field_error("top level".into(), "expected an object"))?;
    for key in obj.keys() {
        if key != "n" && key != "hyperplanes" {
            return Err(field_error(key.clone(), "unknown field"));
        }
    }
    match obj.get("n") {
        Some(n) if n.as_u64().is_some_and(|n| n >= 1) => {}
        Some(_) => return Err(field_error("n".into(), "expected a positive integer")),
        None => return Err(field_error("n".into(), "missing")),
    }
    let hs = match obj.get("hyperplanes") {
        Some(Value::Array(hs)) => hs,
        Some(_) => return Err(field_error("hyperplanes".into(), "expected an array")),
        None => return Err(field_error("hyperplanes".into(), "missing")),
    };
    for (i, h) in hs.iter().enumerate() {
        let at = |f: &str| format!("hyperplanes[{i}]{f}");
        let h = h.as_object().ok_or_else(|| field_error(at(""), "expected an object"))?;
        for key in h.keys() {
            if !matches!(key.as_str(), "normal" | "multiplicity" | "label") {
                return Err(field_error(at(&format!(".{key}")), "unknown field"));
            }
        }
        let normal = match h.get("normal") {
            Some(Value::Array(v)) => v,
            Some(_) => return Err(field_error(at(".normal"), "expected an array")),
            None => return Err(field_error(at(".normal"), "missing")),
        };
        for (j, c) in normal.iter().enumerate() {
            let ok = match c {
                Value::Number(num) => num.is_i64(),
                Value::String(s) => s.parse::<Rational>().is_ok(),
                _ => false,
            };
            if !ok {
                return Err(field_error(at(&format!(".normal[{j}]")), format!("{c} is not an integer or \"p/q\" string")));
            }
        }
        if let Some(m) = h.get("multiplicity") {
            if !m.as_u64().is_some_and(|m| m >= 1) {
                return Err(field_error(at(".multiplicity"), "expected an integer >= 1"));
            }
        }
        if let Some(l) = h.get("label") {
            if !l.is_string() {
                return Err(field_error(at(".label"), "expected a string"));
            }
        }
    }
    Ok(())
}

impl ArrangementFile {
    /// Parses and validates JSON text. Syntax errors report line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        check_shape(&raw)?;
        let file: ArrangementFile = serde_json::from_value(raw).map_err(|e| Error::Parse(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<()> {
        let mut total = 0;
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if h.normal.len() != self.n {
                return Err(field_error(
                    format!("hyperplanes[{i}].normal"),
                    format!("has {} entries but n = {}", h.normal.len(), self.n),
                ));
            }
            if h.normal.iter().all(Rational::is_zero) {
                return Err(field_error(format!("hyperplanes[{i}].normal"), "zero normal vector"));
            }
            if h.multiplicity == 0 {
                return Err(field_error(format!("hyperplanes[{i}].multiplicity"), "must be at least 1"));
            }
            total += h.multiplicity;
        }
        if total > MAX_HYPERPLANES {
            return Err(field_error("hyperplanes".into(), format!("{total} hyperplanes exceed the limit of {MAX_HYPERPLANES}")));
        }
        Ok(())
    }

    /// Expands multiplicities into adjacent copies.
    pub fn to_arrangement(&self) -> Result<Arrangement> {
        self.validate()?;
        let hs = self
            .hyperplanes
            .iter()
            .flat_map(|h| {
                let label = h.label.clone().unwrap_or_else(|| default_label(&h.normal));
                std::iter::repeat(Hyperplane::new(h.normal.clone(), label)).take(h.multiplicity)
            })
            .collect();
        Arrangement::new(self.n, hs)
    }

    /// Canonical form: runs of equal adjacent hyperplanes become one entry,
    /// default labels are omitted, rationals are written as strings.
    pub fn from_arrangement(a: &Arrangement) -> Self {
        let mut hyperplanes: Vec<HyperplaneEntry> = Vec::new();
        for h in a.hyperplanes() {
            let label = (h.label != default_label(&h.normal)).then(|| h.label.clone());
            match hyperplanes.last_mut() {
                Some(last) if last.normal == h.normal && last.label == label => last.multiplicity += 1,
                _ => hyperplanes.push(HyperplaneEntry { normal: h.normal.clone(), multiplicity: 1, label }),
            }
        }
        ArrangementFile { n: a.dim(), hyperplanes }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    ArrangementFile::parse(text)?.to_arrangement()
}

pub fn read_arrangement(path: &std::path::Path) -> Result<Arrangement> {
    let text = std::fs::read_to_string(path)?;
    parse_arrangement(&text)
}

/// Canonical JSON text for an arrangement.
pub fn canonical_json(a: &Arrangement) -> String {
    ArrangementFile::from_arrangement(a).to_json()
}

/// Parses `"1-2,2-3,1-3"` into 1-based vertex pairs.
pub fn parse_edges(spec: &str) -> Result<Vec<(usize, usize)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|e| {
            let (u, v) = e.split_once('-').ok_or_else(|| Error::Parse(format!("edge {e:?}: expected u-v")))?;
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("edge {e:?}: bad vertex {s:?}")));
            Ok((parse(u)?, parse(v)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_and_rationals() {
        let a = parse_arrangement(r#"{"n": 2, "hyperplanes": [{"normal": [1, 0], "multiplicity": 2}, {"normal": ["1/2", "-1"], "label": "H"}]}"#)
            .unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.normal(0), a.normal(1));
        assert_eq!(a.normal(2), &[Rational::new(1, 2), Rational::from(-1)]);
        assert_eq!(a.hyperplanes()[2].label, "H");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let cases = [
            (r#"{"n": 2, "hyperplanes": [{"normal": [0, 0]}]}"#, "hyperplanes[0].normal"),
            (r#"{"n": 2, "hyperplanes": [{"normal": [1, 0]}, {"normal": [1]}]}"#, "hyperplanes[1].normal"),
            (r#"{"n": 2, "hyperplanes": [{"normal": [1, "x"]}]}"#, "hyperplanes[0].normal[1]"),
            (r#"{"n": 2, "hyperplanes": [{"normal": [1, 0], "multiplicity": 0}]}"#, "hyperplanes[0].multiplicity"),
            (r#"{"hyperplanes": []}"#, "n: missing"),
            (r#"{"n": 2, "hyperplanes": [], "extra": 1}"#, "extra"),
            ("{\"n\": 2,\n \"hyperplanes\": [}", "line 2"),
        ];
        for (text, needle) in cases {
            let err = parse_arrangement(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err:?} should mention {needle:?}");
        }
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"n": 3, "hyperplanes": [{"normal": [1, 0, 0]}, {"normal": [1, 0, 0]}, {"normal": [2, "-2/4", 0], "label": "h"}]}"#;
        let a = parse_arrangement(text).unwrap();
        let canon = canonical_json(&a);
        assert!(canon.contains("\"multiplicity\": 2"));
        let b = parse_arrangement(&canon).unwrap();
        assert_eq!(a, b);
        assert_eq!(canonical_json(&b), canon);
    }

    #[test]
    fn edges() {
        assert_eq!(parse_edges("1-2, 2-3,1-3").unwrap(), vec![(1, 2), (2, 3), (1, 3)]);
        assert!(parse_edges("1-2,3").is_err());
        assert_eq!(parse_edges("").unwrap(), vec![]);
    }
}
