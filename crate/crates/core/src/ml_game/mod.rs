//! The formula-size game for basic modal logic.
//!
//! From a position `(k, A, B)` the spoiler picks a connective and splits the
//! resource, the duplicator picks which half the play continues in, and a
//! literal move ends the play. [`solve`] decides the game exactly,
//! [`synthesize_min`] is an independent brute-force oracle for the same
//! question.

mod agents;
mod play;
mod position;
mod solver;
mod synth;

pub use agents::{
    BisimDuplicator, ColoringDuplicator, FormulaSpoiler, MlDuplicator, MlSpoiler, RandomDuplicator, RandomSpoiler,
    SolverSpoiler,
};
pub use play::{exhaustive_duplicator, play, play_observed, ExhaustiveReport, Labeller, MoveRecord, Transcript, TranscriptStep};
pub use position::{apply, legal_moves, random_move, validate_move, MLMove, MLPosition, MLStep, ModelSet, MoveMode, MAX_MENU};
pub use solver::{solve, MLSolver, MLVerdict, SolverConfig, WitnessReason};
pub use synth::{synthesize_min, Synthesizer};

pub use crate::game::GameError;
