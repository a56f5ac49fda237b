//! JSON quiver documents.
//!
//! ```json
//! {
//!   "vertices": ["1", "2", "3"],
//!   "arrows": [{"name": "α", "from": "1", "to": "2"}, {"name": "β", "from": "2", "to": "3"}],
//!   "relations": [[{"coeff": "1", "path": ["α", "β"]}]],
//!   "n": 1
//! }
//! ```
//!
//! Each relation is a list of terms. A term's `path` lists arrow names in the
//! order they are traversed, so `["α", "β"]` is the path rendered `β·α`.
//! Coefficients are exact rationals written `"p/q"` or `"p"`; both `-` and
//! `−` are accepted as minus signs. Mixed relations are split into their
//! homogeneous components on parsing.

use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{normalize_relations, PathCombination, Presentation};
use crate::error::{Error, Result};
use crate::linalg::{fmt_scalar, Scalar};
use crate::quiver::Quiver;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub coeff: String,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDocument {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowEntry>,
    #[serde(default)]
    pub relations: Vec<Vec<TermEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

fn parse_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { location: location.into(), message: message.into() }
}

/// Parses `"p/q"`, `"p"`, with `−` (U+2212) accepted for `-`.
pub fn parse_scalar(s: &str) -> std::result::Result<Scalar, String> {
    let cleaned: String = s.trim().replace('\u{2212}', "-").chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err("empty coefficient".into());
    }
    if let Some((_, d)) = cleaned.split_once('/') {
        if d.trim_start_matches('+').chars().all(|c| c == '0') {
            return Err(format!("zero denominator in `{s}`"));
        }
    }
    Scalar::from_str(&cleaned).map_err(|_| format!("malformed rational `{s}`"))
}

impl QuiverDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| parse_error(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        let q = Quiver::new(
            self.vertices.iter().cloned(),
            self.arrows.iter().map(|a| (a.name.clone(), a.from.clone(), a.to.clone())),
        )
        .map_err(|e| parse_error("arrows", e.to_string()))?;
        let mut combos = Vec::new();
        for (r, terms) in self.relations.iter().enumerate() {
            let mut combo = PathCombination::new();
            for (k, term) in terms.iter().enumerate() {
                let here = format!("relations[{r}][{k}]");
                let coeff = parse_scalar(&term.coeff).map_err(|m| parse_error(format!("{here}.coeff"), m))?;
                if term.path.is_empty() {
                    return Err(parse_error(format!("{here}.path"), "empty path"));
                }
                for (a, name) in term.path.iter().enumerate() {
                    if q.arrow_id(name).is_err() {
                        return Err(parse_error(format!("{here}.path[{a}]"), format!("unknown arrow `{name}`")));
                    }
                }
                let names: Vec<&str> = term.path.iter().map(String::as_str).collect();
                let path = q.path(&names).map_err(|e| parse_error(format!("{here}.path"), e.to_string()))?;
                combo.add_term(path, coeff);
            }
            if combo.is_zero() {
                return Err(parse_error(format!("relations[{r}]"), "relation is zero"));
            }
            combos.push(combo);
        }
        normalize_relations(&q, &combos).map_err(|e| parse_error("relations", e.to_string()))
    }

    /// Canonical document: declared vertex and arrow order, relation terms in
    /// path order.
    pub fn from_presentation(p: &Presentation, n: Option<usize>) -> Self {
        let q = p.quiver();
        let vertices = q.vertex_names().to_vec();
        let arrows = q
            .arrows()
            .iter()
            .map(|a| ArrowEntry {
                name: a.name.clone(),
                from: q.vertex_name(a.source).to_string(),
                to: q.vertex_name(a.target).to_string(),
            })
            .collect();
        let relations = p
            .relations()
            .iter()
            .map(|r| {
                r.terms()
                    .iter()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(path, x)| TermEntry { coeff: fmt_scalar(x), path: q.arrow_names(path) })
                    .collect()
            })
            .collect();
        QuiverDocument { vertices, arrows, relations, n }
    }
}

pub fn parse(text: &str) -> Result<Presentation> {
    QuiverDocument::from_json(text)?.to_presentation()
}

pub fn serialize(p: &Presentation, n: Option<usize>) -> String {
    QuiverDocument::from_presentation(p, n).to_json()
}
