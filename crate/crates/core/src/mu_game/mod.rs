//! The formula-size game for the modal mu-calculus.

mod agents;
mod collections;
mod play;
mod position;
mod search;
mod uniform;

pub use crate::game::GameError;
pub use agents::{
    greedy_response, BisimilarMuDuplicator, GreedyMuDuplicator, MuDuplicator, MuSpoiler, RandomMuDuplicator, RandomMuSpoiler,
    SuccinctnessMuDuplicator, SuccinctnessStats,
};
pub use collections::{collections_defined, left_collection, right_collection, suitable, Side, Suitability};
pub use play::{
    play_mu, play_mu_with, ClockedLabel, MuMoveRecord, MuResponseRecord, MuTranscript, MuTranscriptStep, PlayOptions, PositionDump,
    VertexDump, MAX_PLAY_MOVES,
};
pub use position::{
    aging_holds, apply_initial, apply_mu, check_response, clock_assignments, d_responses, expect, initial_position, jump_target,
    legal_s_moves, progress_decreases, progress_multiset, ClockedSet, Expect, GameVertex, LitRule, MuMove, MuPosition, MuResponse,
    MuStep, ResponseMode, SpoilerAlphabet, VertexId, MAX_MU_MENU,
};
pub use search::{bounded_exhaustive_spoiler, exhaustive_duplicator, SearchReport};
pub use uniform::UniformStrategy;
