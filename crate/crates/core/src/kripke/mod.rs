//! Kripke models, pointed and clocked models, and the cumulative hierarchy.

mod clocked;
mod hfset;
mod json;
mod model;

pub use clocked::{Age, ClockedModel};
pub use hfset::{level as hf_level, HFSet, MAX_LEVEL};
pub use json::{pointed_from_json, pointed_to_json, ModelFile};
pub use model::{cumulative_level, join, KripkeModel, PointedModel, WorldId, ROOT_PREFIX};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    EmptyDomain,
    #[error("world `{0}` listed twice")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("proposition names must start with a lowercase letter: `{0}`")]
    BadProposition(String),
    #[error("models disagree on shared world `{0}`")]
    IncompatibleJoin(String),
    #[error("cycle through world `{0}`")]
    Cyclic(String),
    #[error("malformed set encoding `{0}`")]
    BadSetEncoding(String),
    #[error("hierarchy level {0} is too large to build")]
    LevelTooLarge(usize),
    #[error("bad model JSON: {0}")]
    Json(String),
}
