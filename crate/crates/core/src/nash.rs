//! Support-enumeration equilibria and CURB-restricted equilibrium search.

use itertools::Itertools;
use log::warn;

use crate::curb::{smallest_minimal_curb, CurbReport};
use crate::error::{CurbError, Result};
use crate::game::{expected_utility, Game, MixedStrategy, Player, StrategySet};
use crate::linalg::solve_particular;
use crate::scalar::{max_of, strictly_exceeds, NumericMode, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct NashProfile<T> {
    pub row_mix: MixedStrategy<T>,
    pub col_mix: MixedStrategy<T>,
    /// Largest gain either player could get by deviating.
    pub regret: T,
}

impl<T: Scalar> NashProfile<T> {
    pub fn new(game: &Game<T>, row_mix: MixedStrategy<T>, col_mix: MixedStrategy<T>) -> Result<Self> {
        let regret = verify_equilibrium(game, &row_mix, &col_mix)?;
        Ok(NashProfile { row_mix, col_mix, regret })
    }

    /// Zero regret in exact mode, at most the equilibrium tolerance in float mode.
    pub fn is_equilibrium(&self) -> bool {
        self.regret <= T::nash_tolerance()
    }

    pub fn supports(&self) -> StrategySet {
        StrategySet::new(self.row_mix.support(), self.col_mix.support())
    }
}

/// `max_i [max_s u_i(s, m_{-i}) − u_i(m_i, m_{-i})]`; zero exactly at equilibria.
pub fn verify_equilibrium<T: Scalar>(
    game: &Game<T>,
    row_mix: &MixedStrategy<T>,
    col_mix: &MixedStrategy<T>,
) -> Result<T> {
    let mut regret = T::zero();
    for (player, opp) in [(Player::Row, col_mix), (Player::Col, row_mix)] {
        let achieved = expected_utility(game, player, row_mix, col_mix)?;
        let values: Vec<T> = (0..game.strategy_count(player)).map(|s| game.utility_against(player, s, opp)).collect();
        let best = max_of(&values).expect("a game has at least one strategy per player");
        let gap = best - achieved;
        if gap > regret {
            regret = gap;
        }
    }
    Ok(regret)
}

/// Mixture over `own` that makes every strategy of the opponent's `opp`
/// support indifferent, together with the opponent's common payoff.
///
/// Unknowns are the probabilities on `own` followed by the payoff value.
fn indifference_mixture<T: Scalar>(
    game: &Game<T>,
    mixer: Player,
    own: &[usize],
    opp: &[usize],
) -> Option<(Vec<T>, T, bool)> {
    let responder = mixer.opponent();
    let width = own.len() + 1;
    let mut a = Vec::with_capacity(opp.len() + 1);
    let mut b = Vec::with_capacity(opp.len() + 1);
    for &t in opp {
        let mut row: Vec<T> = own.iter().map(|&s| game.utility(responder, t, s).clone()).collect();
        row.push(-T::one());
        a.push(row);
        b.push(T::zero());
    }
    let mut norm = vec![T::one(); own.len()];
    norm.push(T::zero());
    a.push(norm);
    b.push(T::one());
    let solution = solve_particular(&a, &b)?;
    let degenerate = !solution.is_unique();
    let mut x = solution.x;
    let value = x.pop().expect("value variable");
    debug_assert_eq!(x.len(), width - 1);
    Some((x, value, degenerate))
}

fn to_mixture<T: Scalar>(player: Player, support: &[usize], probs: Vec<T>) -> Result<MixedStrategy<T>> {
    let mut probs = probs;
    if T::MODE == NumericMode::Float {
        let total = probs.iter().fold(T::zero(), |a, p| a + p.clone());
        for p in probs.iter_mut() {
            *p = p.clone() / total.clone();
        }
    }
    MixedStrategy::new(player, support.iter().copied().zip(probs))
}

/// Tries one support pair; `None` if it carries no equilibrium.
fn equilibrium_on_supports<T: Scalar>(
    game: &Game<T>,
    rows: &[usize],
    cols: &[usize],
    degenerate: &mut usize,
) -> Result<Option<NashProfile<T>>> {
    let Some((y, row_value, deg_c)) = indifference_mixture(game, Player::Col, cols, rows) else {
        return Ok(None);
    };
    let Some((x, col_value, deg_r)) = indifference_mixture(game, Player::Row, rows, cols) else {
        return Ok(None);
    };
    if deg_r || deg_c {
        *degenerate += 1;
    }
    let zero = T::zero();
    if !x.iter().chain(&y).all(|p| strictly_exceeds(p, &zero)) {
        return Ok(None);
    }
    let row_mix = to_mixture(Player::Row, rows, x)?;
    let col_mix = to_mixture(Player::Col, cols, y)?;
    // No profitable deviation anywhere in the full game.
    for (player, value, opp) in [(Player::Row, &row_value, &col_mix), (Player::Col, &col_value, &row_mix)] {
        for s in 0..game.strategy_count(player) {
            if strictly_exceeds(&game.utility_against(player, s, opp), value) {
                return Ok(None);
            }
        }
    }
    let profile = NashProfile::new(game, row_mix, col_mix)?;
    Ok(profile.is_equilibrium().then_some(profile))
}

/// Equilibria whose supports lie inside `within`, found by trying support
/// pairs in increasing total size (then row-support size, then
/// lexicographically). Deviations are checked against the whole game.
///
/// `max_support` caps each player's support size. Degenerate supports are
/// only checked at the particular solution of their indifference system, so
/// in degenerate games some equilibria can be missed.
pub fn support_enumeration_nash<T: Scalar>(
    game: &Game<T>,
    within: &StrategySet,
    max_support: Option<usize>,
    stop_after_first: bool,
) -> Result<Vec<NashProfile<T>>> {
    if !within.both_sides_nonempty() {
        return Err(CurbError::EmptySide);
    }
    within.check_within(game.rows(), game.cols())?;
    let rows: Vec<usize> = within.rows.iter().copied().collect();
    let cols: Vec<usize> = within.cols.iter().copied().collect();
    let cap = max_support.unwrap_or(usize::MAX);
    let (max_r, max_c) = (rows.len().min(cap), cols.len().min(cap));
    let mut found = Vec::new();
    let mut degenerate = 0usize;
    for total in 2..=(max_r + max_c) {
        let lo = total.saturating_sub(max_c).max(1);
        let hi = max_r.min(total - 1);
        for r_size in lo..=hi {
            let c_size = total - r_size;
            for rs in rows.iter().copied().combinations(r_size) {
                for cs in cols.iter().copied().combinations(c_size) {
                    if let Some(profile) = equilibrium_on_supports(game, &rs, &cs, &mut degenerate)? {
                        found.push(profile);
                        if stop_after_first {
                            warn_degenerate(degenerate);
                            return Ok(found);
                        }
                    }
                }
            }
        }
    }
    warn_degenerate(degenerate);
    Ok(found)
}

fn warn_degenerate(count: usize) {
    if count > 0 {
        warn!("{count} support pairs had rank-deficient indifference systems; only their particular solutions were checked");
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessedNash<T> {
    pub curb: CurbReport,
    /// `None` only when degenerate float supports defeat the enumeration.
    pub equilibrium: Option<NashProfile<T>>,
}

/// Finds a smallest minimal CURB set, then the first equilibrium supported
/// inside it.
pub fn nash_via_curb_preprocessing<T: Scalar>(game: &Game<T>) -> Result<PreprocessedNash<T>> {
    let curb = smallest_minimal_curb(game)?;
    let equilibrium = support_enumeration_nash(game, &curb.set, None, true)?.into_iter().next();
    Ok(PreprocessedNash { curb, equilibrium })
}
