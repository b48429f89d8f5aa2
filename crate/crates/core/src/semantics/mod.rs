//! Truth of formulas in pointed models, fixed-point approximants and
//! bisimulation.

mod bisim;
mod ml;
mod mu;

pub use bisim::{bisim_quotient, bisimilar, in_class_an, n_bisimilar, Universe};
pub use ml::{box_pre, denote_ml, dia_pre, eval_ml, eval_ml2, eval_ml2_diagonal, WorldSet};
pub use mu::{
    approximant_holds, approximant_set, denote_mu, eval_mu, eval_mu_with, fixpoint_iterates, least_stage,
    ApproximantContext, Valuation,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` has no value")]
    FreeVariable(String),
    #[error("formula is not a fixed point")]
    NotAFixpoint,
    #[error("clock domain {got:?} does not match the fixed points above the vertex {expected:?}")]
    ClockDomain { expected: Vec<String>, got: Vec<String> },
}
