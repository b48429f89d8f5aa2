//! The cumulative-hierarchy model families, their separation graphs, and the
//! lower-bound experiments built on them.

mod experiments;
mod families;
mod graph;

pub use experiments::{
    experiment_fo_ml2_sizes, experiment_ml_lower_bound, experiment_mu_lower_bound, experiment_notbisim, rows_to_csv, rows_to_json,
    default_max_parts, size_table, size_table_csv, ExperimentConfig, ReportRow, SizeRow, Status,
};
pub use families::{build_c, build_d, hierarchy_point, verify_notbisim, MAX_FAMILY_LEVEL};
pub use graph::{
    build_graph, check_coloring_inequalities, chromatic_number, InequalityReport, SeparationGraph, SimpleGraph, Split,
    MAX_COLOR_VERTICES,
};

use crate::kripke::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, exact coloring is limited to 64")]
    TooLarge(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex-side model has {0} successors, expected 1")]
    VertexShape(usize),
    #[error("edge-side model has {0} distinct successors, expected 2")]
    EdgeShape(usize),
    #[error("split does not cover the graph")]
    NotACover,
    #[error("family level {0} is outside 1..=3")]
    LevelOutOfRange(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}
