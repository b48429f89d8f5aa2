//! Types shared by both games.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::semantics::EvalError;
use crate::succinctness::GraphError;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Player {
    /// Tries to show the two sides can be separated within the budget.
    Spoiler,
    /// Tries to show they cannot.
    Duplicator,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Spoiler => "S",
            Player::Duplicator => "D",
        })
    }
}

/// Which continuation the duplicator picks after a connective move.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Branch {
    First,
    Second,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: Player,
    pub reason: String,
}

impl Outcome {
    pub fn spoiler(reason: impl Into<String>) -> Self {
        Outcome { winner: Player::Spoiler, reason: reason.into() }
    }

    pub fn duplicator(reason: impl Into<String>) -> Self {
        Outcome { winner: Player::Duplicator, reason: reason.into() }
    }
}

/// Which side of a play misbehaved.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Fault {
    Spoiler,
    Duplicator,
    Engine,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fault::Spoiler => "spoiler",
            Fault::Duplicator => "duplicator",
            Fault::Engine => "engine",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("illegal move by {fault}: {reason}")]
    Illegal { fault: Fault, reason: String },
    #[error("node budget of {0} exhausted before the game was decided")]
    BudgetExceeded(u64),
    #[error("more than {0} moves to enumerate")]
    TooManyMoves(usize),
    #[error("strategy precondition fails: {0}")]
    Precondition(String),
    #[error("strategy invariant broken: {0}")]
    Invariant(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl GameError {
    pub fn spoiler(reason: impl Into<String>) -> Self {
        GameError::Illegal { fault: Fault::Spoiler, reason: reason.into() }
    }

    pub fn duplicator(reason: impl Into<String>) -> Self {
        GameError::Illegal { fault: Fault::Duplicator, reason: reason.into() }
    }
}
