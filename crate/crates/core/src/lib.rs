//! CURB sets of two-player normal-form games.
//!
//! A strategy set is *closed under rational behaviour* (CURB) when it holds
//! every best response to every belief over itself. This crate finds all
//! minimal CURB sets, one minimal CURB set, or a smallest one, deciding
//! best-response questions with linear feasibility programs solved exactly
//! over rationals or approximately over `f64`. It also ships the game
//! families used to study them, support-enumeration equilibria, and a batch
//! experiment harness.
//!
//! ```
//! use curbkit::{all_minimal_curb, gamma_game};
//!
//! let game = gamma_game(3, 4).unwrap();
//! let found = all_minimal_curb(&game).unwrap();
//! assert_eq!(found.reports.len(), 1);
//! assert_eq!(found.reports[0].size(), 7);
//! ```

pub mod best_response;
pub mod curb;
pub mod error;
pub mod experiments;
pub mod feasibility;
pub mod format;
pub mod game;
pub mod generators;
pub mod linalg;
pub mod nash;
pub mod scalar;

#[cfg(test)]
mod test_games;

pub use best_response::{all_conditionally_rational, best_responses_to_mixture, is_never_best_response, LfpCounter};
pub use curb::{
    all_minimal_curb, find_size_two_curbs, is_curb, min_containing_curb, one_minimal_curb, smallest_minimal_curb,
    CurbReport, MinimalCurbSets,
};
pub use error::{CurbError, Result};
pub use experiments::{run_distribution_experiment, run_runtime_experiment, Algorithm, ExperimentSpec};
pub use feasibility::{solve_feasibility, FeasibilityOutcome, FeasibilityProblem};
pub use format::{parse_game, serialize_game};
pub use game::{expected_utility, restrict, AnyGame, Game, GameView, MixedStrategy, Player, StrategyRef, StrategySet};
pub use generators::{covariant_game, gamma_game, omega_game, padded_game, random_game, Family, GeneratorSpec};
pub use nash::{nash_via_curb_preprocessing, support_enumeration_nash, verify_equilibrium, NashProfile};
pub use scalar::{NumericMode, Rational, Scalar};
