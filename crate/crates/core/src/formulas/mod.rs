//! Formula syntax: basic modal logic, the modal mu-calculus, a
//! two-dimensional modal logic and a first-order skeleton used only for size
//! comparisons.

mod ast;
mod families;
mod parse;
mod tree;

pub use ast::{Dim, FOFormula, Fixpoint, Literal, ML2Formula, MLFormula, MuFormula};
pub use families::{build_phi, build_psi, build_rho, build_zeta, tower};
pub use parse::{parse_ml, parse_ml2, parse_mu};
pub use tree::{NodeId, NodeLabel, SyntaxTree, TreeNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable `{0}` is bound more than once")]
    DuplicateBinder(String),
    #[error("variable `{0}` is not bound")]
    FreeVariable(String),
    #[error("index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("tower({0}) does not fit in 64 bits")]
    Overflow(usize),
}
