//! Reading models and graphs from disk.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use fsg::kripke::{pointed_from_json, PointedModel};
use fsg::succinctness::SimpleGraph;

use crate::error::{CliError, CliResult};

pub fn load_model(path: &Path) -> CliResult<PointedModel> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    pointed_from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Loads every path; a directory contributes its `*.json` files in name order.
pub fn load_models(paths: &[PathBuf]) -> CliResult<Vec<PointedModel>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<Result<_, _>>()?;
            files.retain(|f| f.extension().is_some_and(|x| x == "json"));
            files.sort();
            if files.is_empty() {
                return Err(CliError::Input(format!("{}: no .json model files", p.display())));
            }
            for f in files {
                out.push(load_model(&f)?);
            }
        } else {
            out.push(load_model(p)?);
        }
    }
    Ok(out)
}

#[derive(Deserialize, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
#[serde(untagged)]
enum VertexName {
    Num(i64),
    Str(String),
}

impl VertexName {
    fn render(&self) -> String {
        match self {
            VertexName::Num(i) => i.to_string(),
            VertexName::Str(s) => s.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<VertexName>,
    #[serde(default)]
    edges: Vec<(VertexName, VertexName)>,
}

/// A graph file `{vertices: [id], edges: [[id, id]]}`; ids are strings or
/// integers. Returns the graph and the vertex names in file order.
pub fn load_graph(path: &Path) -> CliResult<(SimpleGraph, Vec<String>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file: GraphFile = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut index = BTreeMap::new();
    for (i, v) in file.vertices.iter().enumerate() {
        if index.insert(v.clone(), i).is_some() {
            return Err(CliError::Input(format!("vertex {} listed twice", v.render())));
        }
    }
    let lookup = |v: &VertexName| index.get(v).copied().ok_or_else(|| CliError::Input(format!("edge names unknown vertex {}", v.render())));
    let edges = file.edges.iter().map(|(u, v)| Ok((lookup(u)?, lookup(v)?))).collect::<CliResult<Vec<_>>>()?;
    let g = SimpleGraph::new(file.vertices.len(), edges)?;
    Ok((g, file.vertices.iter().map(VertexName::render).collect()))
}
