//! CURB set algorithms.
//!
//! A strategy set `S` (at least one strategy per player) is CURB when every
//! pure best response to every mixture over `S` lies in `S`. Everything here
//! is built on [`all_conditionally_rational`], and the reports carry the
//! number of LFPs solved so runs can be compared independently of hardware.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use log::debug;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::best_response::{all_conditionally_rational, LfpCounter};
use crate::error::{CurbError, Result};
use crate::game::{Game, GameView, Player, StrategyRef, StrategySet};
use crate::scalar::{max_of, weakly_exceeds, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurbReport {
    pub set: StrategySet,
    /// Seed strategy, when the set was grown from one.
    pub seed: Option<StrategyRef>,
    pub lfp_calls: usize,
    /// Alternation passes for `min_containing_curb`, `min_containing_curb`
    /// calls for `one_minimal_curb`, queue pops for `smallest_minimal_curb`.
    pub iterations: usize,
    /// Set by routines that guarantee minimality.
    pub minimal: bool,
    /// The set had to be recomputed on the full game after the residual
    /// subgame produced a set that is not CURB there.
    pub residual_guard: bool,
}

impl CurbReport {
    pub fn size(&self) -> usize {
        self.set.size()
    }
}

/// Output of [`all_minimal_curb`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalCurbSets {
    /// Sorted by strategy set.
    pub reports: Vec<CurbReport>,
    pub lfp_calls: usize,
    /// How many residual-subgame results failed the full-game CURB check.
    pub guard_triggers: usize,
}

impl MinimalCurbSets {
    pub fn sets(&self) -> Vec<&StrategySet> {
        self.reports.iter().map(|r| &r.set).collect()
    }
}

fn is_curb_counted<T: Scalar>(game: &Game<T>, set: &StrategySet, counter: &mut LfpCounter) -> Result<bool> {
    let full = game.full_set();
    for player in Player::BOTH {
        let responses =
            all_conditionally_rational(game, player, full.side(player), set.side(player.opponent()), counter)?;
        if !responses.is_subset(set.side(player)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff no best response to a mixture over `set` lies outside `set`.
pub fn is_curb<T: Scalar>(game: &Game<T>, set: &StrategySet) -> Result<bool> {
    if !set.both_sides_nonempty() {
        return Err(CurbError::EmptySide);
    }
    set.check_within(game.rows(), game.cols())?;
    is_curb_counted(game, set, &mut LfpCounter::default())
}

/// The unique best response of `player` to the opponent's pure strategy, if
/// there is exactly one (ties within tolerance disqualify).
fn unique_best_response<T: Scalar>(game: &Game<T>, player: Player, opp: usize) -> Option<usize> {
    let values: Vec<&T> = (0..game.strategy_count(player)).map(|s| game.utility(player, s, opp)).collect();
    let best = max_of(values.iter().copied())?;
    let mut argmax = values.iter().enumerate().filter(|(_, v)| weakly_exceeds(**v, &best)).map(|(s, _)| s);
    let first = argmax.next()?;
    argmax.next().is_none().then_some(first)
}

/// Strict pure equilibria, i.e. all CURB sets of size two, ordered by row.
pub fn find_size_two_curbs<T: Scalar>(game: &Game<T>) -> Vec<StrategySet> {
    let row_for_col: Vec<Option<usize>> =
        (0..game.cols()).map(|c| unique_best_response(game, Player::Row, c)).collect();
    (0..game.rows())
        .filter_map(|r| {
            let c = unique_best_response(game, Player::Col, r)?;
            (row_for_col[c] == Some(r)).then(|| StrategySet::new([r], [c]))
        })
        .collect()
}

/// Size-two CURB set through one seed, found with two scans.
fn size_two_through<T: Scalar>(game: &Game<T>, seed: StrategyRef) -> Option<StrategySet> {
    let partner = unique_best_response(game, seed.player.opponent(), seed.index)?;
    if unique_best_response(game, seed.player, partner)? != seed.index {
        return None;
    }
    let mut set = StrategySet::singleton(seed);
    set.insert(StrategyRef { player: seed.player.opponent(), index: partner });
    Some(set)
}

/// Grows `{seed}` inside `scope` until a full two-player pass adds nothing.
/// Returns the set and the number of passes.
fn grow_from_seed<T: Scalar>(
    game: &Game<T>,
    scope: &StrategySet,
    seed: StrategyRef,
    counter: &mut LfpCounter,
) -> Result<(StrategySet, usize)> {
    let mut star = StrategySet::singleton(seed);
    let mut passes = 0;
    loop {
        passes += 1;
        let mut converged = true;
        for player in Player::BOTH {
            let found =
                all_conditionally_rational(game, player, scope.side(player), star.side(player.opponent()), counter)?;
            if !found.is_subset(star.side(player)) {
                converged = false;
                // Merge, never replace: the new responses need not cover the old ones.
                star.side_mut(player).extend(found);
            }
        }
        if converged {
            return Ok((star, passes));
        }
    }
}

/// The smallest CURB set of `view` containing `seed`.
///
/// Best responses are computed against the view's strategies only, so on a
/// view that is itself CURB in the full game this is the full-game answer.
pub fn min_containing_curb<T: Scalar>(view: &GameView<'_, T>, seed: StrategyRef) -> Result<CurbReport> {
    if !view.contains(seed) {
        return Err(CurbError::InvalidParameter(format!("seed {seed} is not in the game")));
    }
    let mut counter = LfpCounter::default();
    let (set, passes) = grow_from_seed(view.game(), &view.scope(), seed, &mut counter)?;
    Ok(CurbReport {
        set,
        seed: Some(seed),
        lfp_calls: counter.calls(),
        iterations: passes,
        minimal: false,
        residual_guard: false,
    })
}

struct Candidate {
    set: StrategySet,
    lfp_calls: usize,
    guarded: bool,
}

/// All minimal CURB sets of the game.
///
/// Strict pure equilibria are recorded first and their strategies removed
/// from the working subgame. Each remaining row then seeds
/// [`min_containing_curb`] inside the smallest CURB set known to contain it,
/// or inside the working subgame if none is known yet. A set grown in the
/// working subgame is checked against the full game and regrown there when
/// the check fails. Candidates that strictly contain another CURB set found
/// along the way are dropped.
pub fn all_minimal_curb<T: Scalar>(game: &Game<T>) -> Result<MinimalCurbSets> {
    let mut counter = LfpCounter::default();
    let full = game.full_set();
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut smallest_known: BTreeMap<StrategyRef, StrategySet> = BTreeMap::new();
    let mut guard_triggers = 0;

    let mut working = full.clone();
    for pair in find_size_two_curbs(game) {
        working = working.difference(&pair);
        for s in pair.iter() {
            smallest_known.insert(s, pair.clone());
        }
        candidates.push(Candidate { set: pair, lfp_calls: 0, guarded: false });
    }

    for r in working.rows.clone() {
        let seed = StrategyRef::row(r);
        let before = counter.calls();
        let known = smallest_known.get(&seed).cloned();
        let verified_scope = known.is_some();
        let scope = known.unwrap_or_else(|| working.clone());
        let (mut found, _) = grow_from_seed(game, &scope, seed, &mut counter)?;
        let mut guarded = false;
        if !verified_scope && !(found.both_sides_nonempty() && is_curb_counted(game, &found, &mut counter)?) {
            debug!("residual result {found} for seed {seed} is not CURB in the full game; regrowing");
            guard_triggers += 1;
            guarded = true;
            found = grow_from_seed(game, &full, seed, &mut counter)?.0;
        }
        let cost = counter.calls() - before;

        for s in found.iter() {
            let better = smallest_known.get(&s).is_none_or(|k| found.size() < k.size());
            if better {
                smallest_known.insert(s, found.clone());
            }
        }
        if candidates.iter().any(|c| c.set.is_subset(&found)) {
            continue;
        }
        candidates.retain(|c| !found.is_strict_subset(&c.set));
        candidates.push(Candidate { set: found, lfp_calls: cost, guarded });
    }

    let mut reports: Vec<CurbReport> = candidates
        .into_iter()
        .map(|c| CurbReport {
            set: c.set,
            seed: None,
            lfp_calls: c.lfp_calls,
            iterations: 0,
            minimal: true,
            residual_guard: c.guarded,
        })
        .collect();
    reports.sort_by(|a, b| a.set.cmp(&b.set));
    Ok(MinimalCurbSets { reports, lfp_calls: counter.calls(), guard_triggers })
}

/// One minimal CURB set, starting from a random seed.
///
/// The seed first gets a cheap strict-equilibrium check. Otherwise its
/// minimal containing set is computed on the full game, and the search
/// recurs inside the current set with contained strategies that have not
/// seeded yet, moving to any strictly smaller set that turns up.
pub fn one_minimal_curb<T: Scalar, R: Rng + ?Sized>(game: &Game<T>, rng: &mut R) -> Result<CurbReport> {
    let strategies: Vec<StrategyRef> = game.full_set().iter().collect();
    let seed = *strategies.choose(rng).expect("a game has strategies");
    if let Some(pair) = size_two_through(game, seed) {
        return Ok(CurbReport {
            set: pair,
            seed: Some(seed),
            lfp_calls: 0,
            iterations: 0,
            minimal: true,
            residual_guard: false,
        });
    }

    let mut counter = LfpCounter::default();
    let (mut current, _) = grow_from_seed(game, &game.full_set(), seed, &mut counter)?;
    let mut used: BTreeSet<StrategyRef> = BTreeSet::from([seed]);
    let mut calls = 1;
    loop {
        let unused: Vec<StrategyRef> = current.iter().filter(|s| !used.contains(s)).collect();
        let Some(&next) = unused.choose(rng) else { break };
        used.insert(next);
        let (found, _) = grow_from_seed(game, &current, next, &mut counter)?;
        calls += 1;
        if found != current {
            debug_assert!(found.is_strict_subset(&current));
            current = found;
        }
    }
    Ok(CurbReport {
        set: current,
        seed: Some(seed),
        lfp_calls: counter.calls(),
        iterations: calls,
        minimal: true,
        residual_guard: false,
    })
}

/// A smallest minimal CURB set.
///
/// Candidates start as single rows and are expanded in order of size (ties
/// by insertion order): column responses to the rows first, then row
/// responses to the columns. The first candidate that does not grow is
/// returned.
pub fn smallest_minimal_curb<T: Scalar>(game: &Game<T>) -> Result<CurbReport> {
    if let Some(pair) = find_size_two_curbs(game).into_iter().next() {
        return Ok(CurbReport {
            set: pair,
            seed: None,
            lfp_calls: 0,
            iterations: 0,
            minimal: true,
            residual_guard: false,
        });
    }

    let full = game.full_set();
    let mut counter = LfpCounter::default();
    let mut queue: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    let mut pending: BTreeMap<usize, StrategySet> = BTreeMap::new();
    let mut next_tick = 0usize;
    for r in 0..game.rows() {
        pending.insert(next_tick, StrategySet::new([r], []));
        queue.push(Reverse((1, next_tick)));
        next_tick += 1;
    }

    let mut pops = 0;
    while let Some(Reverse((_, tick))) = queue.pop() {
        pops += 1;
        let mut candidate = pending.remove(&tick).expect("queued candidate is pending");
        let mut grew = false;
        for player in [Player::Col, Player::Row] {
            let found = all_conditionally_rational(
                game,
                player,
                full.side(player),
                candidate.side(player.opponent()),
                &mut counter,
            )?;
            if !found.is_subset(candidate.side(player)) {
                grew = true;
                candidate.side_mut(player).extend(found);
            }
        }
        if grew {
            queue.push(Reverse((candidate.size(), next_tick)));
            pending.insert(next_tick, candidate);
            next_tick += 1;
        } else if candidate.both_sides_nonempty() {
            return Ok(CurbReport {
                set: candidate,
                seed: None,
                lfp_calls: counter.calls(),
                iterations: pops,
                minimal: true,
                residual_guard: false,
            });
        }
    }
    unreachable!("the full game is CURB, so some candidate must close")
}
