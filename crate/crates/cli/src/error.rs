use std::fmt;

use fsg::formulas::FormulaError;
use fsg::game::{Fault, GameError};
use fsg::kripke::ModelError;
use fsg::semantics::EvalError;
use fsg::succinctness::GraphError;

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Budget(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Input(m) => ("input", m),
            CliError::Budget(m) => ("budget", m),
            CliError::Internal(m) => ("internal", m),
        };
        write!(f, "error ({kind}): {msg}")
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::TooLarge(_) => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        let msg = e.to_string();
        match e {
            GameError::BudgetExceeded(_) | GameError::TooManyMoves(_) => CliError::Budget(msg),
            GameError::Invariant(_) | GameError::Illegal { fault: Fault::Engine, .. } => CliError::Internal(msg),
            GameError::Graph(g) => g.into(),
            // a move typed or scripted by a person, or a model that does
            // not fit the chosen strategy
            GameError::Illegal { .. } | GameError::Precondition(_) | GameError::Eval(_) => CliError::Input(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
