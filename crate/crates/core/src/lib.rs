//! Formula-size games for basic modal logic and the modal mu-calculus.
//!
//! A position of a formula-size game pairs a resource `k` with two sets of
//! pointed Kripke models. The spoiler wins exactly when some formula of size
//! at most `k` is true on every model of the first set and false on every
//! model of the second. The crate provides models, formulas and their
//! semantics, engines and solvers for both games, strategy agents, and the
//! succinctness experiments built on top of them.

pub mod exec;
pub mod formulas;
pub mod game;
pub mod kripke;
pub mod ml_game;
pub mod mu_game;
pub mod semantics;
pub mod succinctness;

pub use exec::Exec;
