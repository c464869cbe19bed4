//! JSON instance files.
//!
//! ```json
//! {
//!   "items":  [{"id": "p1", "cost": 2}, {"id": "p2", "cost": 1}],
//!   "voters": [{"id": "v1", "utils": [3, 1]}],
//!   "budget": 2, "rule": "median", "lambda": 1,
//!   "target": 3, "sc_order": ["v1"], "sp_axis": ["p2", "p1"]
//! }
//! ```
//!
//! `lambda` defaults to 1; `target`, `sc_order` and `sp_axis` are optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemEntry {
    pub id: String,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterEntry {
    pub id: String,
    pub utils: Vec<u64>,
}

fn one() -> usize {
    1
}

/// The on-disk shape, before any semantic validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub items: Vec<ItemEntry>,
    pub voters: Vec<VoterEntry>,
    pub budget: u64,
    pub rule: Rule,
    #[serde(default = "one")]
    pub lambda: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sc_order: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sp_axis: Option<Vec<String>>,
}

/// A validated instance with its optional structure hints as indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub instance: Instance,
    pub sc_order: Option<Vec<usize>>,
    pub sp_axis: Option<Vec<usize>>,
}

impl Document {
    pub fn new(instance: Instance) -> Self {
        Document {
            instance,
            sc_order: None,
            sp_axis: None,
        }
    }
}

impl From<crate::generate::Generated> for Document {
    fn from(g: crate::generate::Generated) -> Self {
        Document {
            instance: g.instance,
            sc_order: g.sc_order,
            sp_axis: g.sp_axis,
        }
    }
}

fn resolve(field: &str, ids: &[String], lookup: impl Fn(&str) -> Option<usize>) -> Result<Vec<usize>> {
    ids.iter()
        .enumerate()
        .map(|(k, id)| lookup(id).ok_or_else(|| Error::input(format!("{field}[{k}]: unknown id `{id}`"))))
        .collect()
}

impl InstanceFile {
    pub fn into_document(self) -> Result<Document> {
        for (k, v) in self.voters.iter().enumerate() {
            if v.utils.len() != self.items.len() {
                return Err(Error::input(format!(
                    "voters[{k}].utils: {} entries for {} items",
                    v.utils.len(),
                    self.items.len()
                )));
            }
        }
        for (k, item) in self.items.iter().enumerate() {
            if item.cost == 0 {
                return Err(Error::input(format!("items[{k}].cost: must be at least 1")));
            }
        }
        let instance = Instance::new(
            self.items.into_iter().map(|i| (i.id, i.cost)).collect(),
            self.voters.into_iter().map(|v| (v.id, v.utils)).collect(),
            self.budget,
            self.rule,
            self.lambda,
            self.target,
        )?;
        let sc_order = self
            .sc_order
            .map(|ids| resolve("sc_order", &ids, |id| instance.voter_index(id)))
            .transpose()?;
        let sp_axis = self
            .sp_axis
            .map(|ids| resolve("sp_axis", &ids, |id| instance.item_index(id)))
            .transpose()?;
        Ok(Document {
            instance,
            sc_order,
            sp_axis,
        })
    }

    pub fn from_document(doc: &Document) -> Self {
        let inst = &doc.instance;
        let ids = |perm: &Vec<usize>, names: &[String]| perm.iter().map(|&i| names[i].clone()).collect();
        InstanceFile {
            items: inst
                .item_ids()
                .iter()
                .zip(inst.costs())
                .map(|(id, &cost)| ItemEntry { id: id.clone(), cost })
                .collect(),
            voters: (0..inst.num_voters())
                .map(|v| VoterEntry {
                    id: inst.voter_ids()[v].clone(),
                    utils: inst.utils(v).to_vec(),
                })
                .collect(),
            budget: inst.budget(),
            rule: inst.rule(),
            lambda: inst.lambda(),
            target: inst.target(),
            sc_order: doc.sc_order.as_ref().map(|s| ids(s, inst.voter_ids())),
            sp_axis: doc.sp_axis.as_ref().map(|a| ids(a, inst.item_ids())),
        }
    }
}

/// Parses and validates a document. Syntax and schema errors name the line,
/// column and JSON path.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        let path = e.path().to_string();
        Error::input(format!(
            "line {} column {}, at `{}`: {}",
            inner.line(),
            inner.column(),
            path,
            inner
        ))
    })?;
    de.end().map_err(|e| Error::input(format!("trailing content: {e}")))?;
    file.into_document()
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| match e {
        Error::Input(msg) => Error::input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn to_json(doc: &Document) -> String {
    let mut text = serde_json::to_string_pretty(&InstanceFile::from_document(doc)).expect("plain data serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "items": [{"id": "a", "cost": 2}, {"id": "b", "cost": 1}],
        "voters": [{"id": "x", "utils": [3, 1]}, {"id": "y", "utils": [0, 4]}],
        "budget": 3, "rule": "median", "lambda": 2, "target": 1,
        "sc_order": ["y", "x"], "sp_axis": ["b", "a"]
    }"#;

    #[test]
    fn parses_sample() {
        let d = parse_document(SAMPLE).unwrap();
        assert_eq!(d.instance.lambda(), 2);
        assert_eq!(d.instance.target(), Some(1));
        assert_eq!(d.sc_order, Some(vec![1, 0]));
        assert_eq!(d.sp_axis, Some(vec![1, 0]));
    }

    #[test]
    fn round_trip() {
        let d = parse_document(SAMPLE).unwrap();
        assert_eq!(parse_document(&to_json(&d)).unwrap(), d);
    }

    #[test]
    fn lambda_defaults_to_one() {
        let text = r#"{"items":[{"id":"a","cost":1}],"voters":[{"id":"x","utils":[1]}],"budget":1,"rule":"diverse"}"#;
        assert_eq!(parse_document(text).unwrap().instance.lambda(), 1);
    }

    #[test]
    fn diagnostics_name_location() {
        let bad = SAMPLE.replace(r#""cost": 1"#, r#""cost": "one""#);
        let msg = parse_document(&bad).unwrap_err().to_string();
        assert!(msg.contains("items[1].cost") && msg.contains("line 2"), "{msg}");

        let short = SAMPLE.replace("[0, 4]", "[0]");
        let msg = parse_document(&short).unwrap_err().to_string();
        assert!(msg.contains("voters[1].utils"), "{msg}");

        let unknown = SAMPLE.replace(r#"["y", "x"]"#, r#"["y", "z"]"#);
        assert!(parse_document(&unknown).unwrap_err().to_string().contains("sc_order[1]"));
    }
}
