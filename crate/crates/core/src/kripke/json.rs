//! JSON interchange for pointed models.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{KripkeModel, ModelError, PointedModel};

/// On-disk shape: `{"worlds", "edges", "valuation", "point"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    pub point: String,
}

impl ModelFile {
    pub fn into_pointed(self) -> Result<PointedModel, ModelError> {
        let model = KripkeModel::new(self.worlds, self.edges, self.valuation)?;
        PointedModel::new(Arc::new(model), &self.point)
    }

    pub fn from_pointed(pm: &PointedModel) -> Self {
        let m = &pm.model;
        ModelFile {
            worlds: m.worlds().map(|w| m.name(w).to_string()).collect(),
            edges: m.edges().map(|(a, b)| (m.name(a).to_string(), m.name(b).to_string())).collect(),
            valuation: m
                .valuation()
                .iter()
                .map(|(p, ws)| (p.clone(), ws.iter().map(|&w| m.name(w).to_string()).collect()))
                .collect(),
            point: pm.point_name().to_string(),
        }
    }
}

pub fn pointed_from_json(text: &str) -> Result<PointedModel, ModelError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
    file.into_pointed()
}

pub fn pointed_to_json(pm: &PointedModel) -> String {
    serde_json::to_string_pretty(&ModelFile::from_pointed(pm)).expect("model serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"worlds":["a","b"],"edges":[["a","b"]],"valuation":{"p":["b"]},"point":"a"}"#;
        let pm = pointed_from_json(text).unwrap();
        assert_eq!(pointed_from_json(&pointed_to_json(&pm)).unwrap(), pm);
        assert!(pointed_from_json(r#"{"worlds":["a"],"point":"z"}"#).is_err());
        assert!(pointed_from_json(r#"{"worlds":[],"point":"a"}"#).is_err());
        assert!(pointed_from_json("[").is_err());
    }
}
