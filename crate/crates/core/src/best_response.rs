//! Best responses to a mixture and conditionally rational strategies.

use std::collections::BTreeSet;

use crate::error::{CurbError, Result};
use crate::feasibility::{phase_one, solve_feasibility, FeasibilityProblem};
use crate::game::{Game, MixedStrategy, Player};
use crate::scalar::{max_of, weakly_exceeds, Scalar};

/// Counts linear feasibility programs solved on behalf of a search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LfpCounter {
    calls: usize,
}

impl LfpCounter {
    pub fn calls(&self) -> usize {
        self.calls
    }

    fn bump(&mut self) {
        self.calls += 1;
    }
}

/// The argmax set of `player`'s pure strategies against `opponent_mix`.
///
/// Ties are kept. In float mode anything within the feasibility tolerance
/// of the maximum counts as a tie.
pub fn best_responses_to_mixture<T: Scalar>(
    game: &Game<T>,
    player: Player,
    opponent_mix: &MixedStrategy<T>,
) -> Result<BTreeSet<usize>> {
    game.check_mixture(opponent_mix, player.opponent())?;
    let values: Vec<T> =
        (0..game.strategy_count(player)).map(|s| game.utility_against(player, s, opponent_mix)).collect();
    let best = max_of(&values).expect("a game has at least one strategy per player");
    Ok(values.iter().enumerate().filter(|(_, v)| weakly_exceeds(*v, &best)).map(|(s, _)| s).collect())
}

fn check_indices<'a, T: Scalar>(
    game: &Game<T>,
    player: Player,
    indices: impl IntoIterator<Item = &'a usize>,
) -> Result<()> {
    let count = game.strategy_count(player);
    match indices.into_iter().find(|&&i| i >= count) {
        Some(&index) => Err(CurbError::IndexOutOfRange { player, index, count }),
        None => Ok(()),
    }
}

/// The LFP asking whether `candidate` is a best response within `comparison`
/// to some mixture over `opponent` (in the order of the slice).
pub fn conditional_rationality_problem<T: Scalar>(
    game: &Game<T>,
    player: Player,
    candidate: usize,
    comparison: &[usize],
    opponent: &[usize],
) -> Result<FeasibilityProblem<T>> {
    let rows = comparison
        .iter()
        .filter(|&&other| other != candidate)
        .map(|&other| {
            opponent
                .iter()
                .map(|&t| game.utility(player, candidate, t).clone() - game.utility(player, other, t).clone())
                .collect()
        })
        .collect();
    FeasibilityProblem::new(opponent.len(), rows)
}

/// Every strategy of `comparison` that is a weak best response (among
/// `comparison`) to at least one mixture over the opponent's `opponent` set.
///
/// One LFP is solved per member of `comparison`; an empty `opponent` set
/// admits no mixtures and yields the empty set without solving anything.
pub fn all_conditionally_rational<T: Scalar>(
    game: &Game<T>,
    player: Player,
    comparison: &BTreeSet<usize>,
    opponent: &BTreeSet<usize>,
    counter: &mut LfpCounter,
) -> Result<BTreeSet<usize>> {
    check_indices(game, player, comparison)?;
    check_indices(game, player.opponent(), opponent)?;
    if opponent.is_empty() {
        return Ok(BTreeSet::new());
    }
    let pool: Vec<usize> = comparison.iter().copied().collect();
    let beliefs: Vec<usize> = opponent.iter().copied().collect();
    let mut rational = BTreeSet::new();
    for &s in &pool {
        let problem = conditional_rationality_problem(game, player, s, &pool, &beliefs)?;
        counter.bump();
        if solve_feasibility(&problem)?.is_feasible() {
            rational.insert(s);
        }
    }
    Ok(rational)
}

/// True iff some mixture over `comparison \ {s}` earns strictly more than
/// `s` against every opponent strategy in `opponent`.
///
/// This is the dominance side of the best-response duality and is decided
/// by a different LP than [`all_conditionally_rational`]: find `q ≥ 0` with
/// `Σ_t q_t (u(t, c) − u(s, c)) ≥ 1` for every `c`, which is solvable exactly
/// when a strictly dominating mixture exists (scale `q` onto the simplex).
/// With no opponent strategies there are no beliefs, so `s` is never a best
/// response.
pub fn is_never_best_response<T: Scalar>(
    game: &Game<T>,
    player: Player,
    s: usize,
    comparison: &BTreeSet<usize>,
    opponent: &BTreeSet<usize>,
) -> Result<bool> {
    check_indices(game, player, comparison)?;
    check_indices(game, player.opponent(), opponent)?;
    check_indices(game, player, [&s])?;
    if opponent.is_empty() {
        return Ok(true);
    }
    let others: Vec<usize> = comparison.iter().copied().filter(|&t| t != s).collect();
    if others.is_empty() {
        return Ok(false);
    }
    // Columns: q_t for each competitor, then a surplus per opponent strategy.
    let width = others.len() + opponent.len();
    let mut a = Vec::with_capacity(opponent.len());
    for (k, &c) in opponent.iter().enumerate() {
        let mut row: Vec<T> =
            others.iter().map(|&t| game.utility(player, t, c).clone() - game.utility(player, s, c).clone()).collect();
        row.resize(width, T::zero());
        row[others.len() + k] = -T::one();
        a.push(row);
    }
    let b = vec![T::one(); opponent.len()];
    let hint = vec![None; opponent.len()];
    Ok(phase_one(a, b, &hint)?.is_some())
}
