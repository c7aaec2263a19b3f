//! On-disk instance format shared by the CLI and the test harnesses:
//!
//! ```json
//! {
//!   "source": {"vertices": [...], "edges": [...], "loops": [...]},
//!   "target": {"vertices": [...], "edges": [...], "loops": [...]},
//!   "costs": {"u": {"w1": 3, "w2": "inf"}}
//! }
//! ```
//!
//! Parsing validates the schema and names the offending key on failure.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::graph::Graph;
use crate::solver::{Cost, CostTable, SolverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
}

/// A full problem instance: source graph, target graph, complete cost table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub source: Graph,
    pub target: Graph,
    pub costs: CostTable,
}

impl Instance {
    pub fn new(source: Graph, target: Graph, costs: CostTable) -> Result<Self, InstanceError> {
        if !costs.matches(&source, &target) {
            return Err(InstanceError::Schema(
                "cost table does not cover the instance graphs".into(),
            ));
        }
        Ok(Instance {
            source,
            target,
            costs,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, InstanceError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| InstanceError::Parse(e.to_string()))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self, InstanceError> {
        let obj = value
            .as_object()
            .ok_or_else(|| InstanceError::Schema("instance must be a JSON object".into()))?;
        let source = graph_field(obj, "source")?;
        let target = graph_field(obj, "target")?;
        let costs_value = obj
            .get("costs")
            .ok_or_else(|| InstanceError::Schema("missing `costs`".into()))?;
        let costs_obj = costs_value
            .as_object()
            .ok_or_else(|| InstanceError::Schema("`costs` must be an object".into()))?;

        let mut entries: BTreeMap<String, BTreeMap<String, Cost>> = BTreeMap::new();
        for (u, row) in costs_obj {
            let row_obj = row.as_object().ok_or_else(|| {
                InstanceError::Schema(format!("costs for `{u}` must be an object"))
            })?;
            let mut parsed = BTreeMap::new();
            for (i, cell) in row_obj {
                parsed.insert(i.clone(), parse_cost(u, i, cell)?);
            }
            entries.insert(u.clone(), parsed);
        }
        let costs = CostTable::from_named(&source, &target, &entries).map_err(|e| match e {
            SolverError::MissingCost {
                source_vertex,
                target_vertex,
            } => InstanceError::Schema(format!(
                "missing cost for ({source_vertex}, {target_vertex})"
            )),
            other => InstanceError::Schema(other.to_string()),
        })?;
        Instance::new(source, target, costs)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, InstanceError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InstanceError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("instances serialize")
    }
}

impl Serialize for Instance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("source", &self.source)?;
        map.serialize_entry("target", &self.target)?;
        map.serialize_entry("costs", &self.costs.entries_named())?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        Instance::from_json_value(&value).map_err(serde::de::Error::custom)
    }
}

fn graph_field(
    obj: &serde_json::Map<String, serde_json::Value>,
    key: &str,
) -> Result<Graph, InstanceError> {
    let value = obj
        .get(key)
        .ok_or_else(|| InstanceError::Schema(format!("missing `{key}`")))?;
    serde_json::from_value(value.clone())
        .map_err(|e| InstanceError::Schema(format!("`{key}`: {e}")))
}

fn parse_cost(u: &str, i: &str, cell: &serde_json::Value) -> Result<Cost, InstanceError> {
    match cell {
        serde_json::Value::String(s) if s == "inf" => Ok(Cost::Infinite),
        serde_json::Value::Number(num) => {
            if let Some(v) = num.as_u64() {
                Ok(Cost::Finite(v))
            } else if num.as_i64().is_some() || num.as_f64().is_some_and(|f| f < 0.0) {
                Err(InstanceError::Schema(format!(
                    "negative cost at ({u}, {i})"
                )))
            } else {
                Err(InstanceError::Schema(format!(
                    "cost at ({u}, {i}) must be a nonnegative integer"
                )))
            }
        }
        _ => Err(InstanceError::Schema(format!(
            "cost at ({u}, {i}) must be a nonnegative integer or \"inf\""
        ))),
    }
}
