//! Solver suite for the longest filled common subsequence problem (LFCSP).
//!
//! Given two strings `A` and `B` and a multiset `M` of fill symbols, the task
//! is to delete from `A` a set of positions whose symbols are covered by `M`
//! and to maximize the number of deletions plus the length of a longest common
//! subsequence of the residual string and `B`.
//!
//! The crate provides:
//! - the problem model and objective evaluation ([`instance`], [`solution`]),
//! - an LCS engine with traceback and chain routines ([`lcs`]),
//! - the literature baselines: 3/5-approximation, randomized sampling and
//!   windowed local search ([`baselines`]),
//! - an exact branch-and-bound over matching chains for the full model and
//!   for restricted component pools ([`solver`]),
//! - the self-adaptive construct-merge-solve-adapt loop ([`cmsa`]),
//! - a seeded synthetic instance generator ([`generator`]),
//! - an audio energy-profile pipeline for song identification ([`audio`]).

pub mod audio;
pub mod baselines;
pub mod clock;
pub mod cmsa;
pub mod error;
pub mod generator;
pub mod instance;
pub mod lcs;
pub mod solution;
pub mod solver;

pub use clock::{Stopwatch, TimeMode};
pub use error::Error;
pub use instance::Instance;
pub use solution::{evaluate, in_conflict, Solution};
pub use solver::{ComponentPool, SolveStatus, SolverOutcome};
