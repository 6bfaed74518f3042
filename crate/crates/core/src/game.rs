//! Two-player normal-form games, strategy sets and mixtures.
//!
//! Indices are 0-based everywhere in the API. Human-facing labels
//! (`Display` on [`StrategyRef`] and [`StrategySet`]) are 1-based, so
//! `r:1` is the first row.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CurbError, Result};
use crate::scalar::{NumericMode, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Player {
    Row,
    Col,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }

    /// Short label used in strategy labels (`r`, `c`).
    pub fn tag(self) -> &'static str {
        match self {
            Player::Row => "r",
            Player::Col => "c",
        }
    }

    pub const BOTH: [Player; 2] = [Player::Row, Player::Col];
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Row => write!(f, "row"),
            Player::Col => write!(f, "column"),
        }
    }
}

/// A pure strategy of one player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StrategyRef {
    pub player: Player,
    pub index: usize,
}

impl StrategyRef {
    pub fn row(index: usize) -> Self {
        StrategyRef { player: Player::Row, index }
    }

    pub fn col(index: usize) -> Self {
        StrategyRef { player: Player::Col, index }
    }
}

impl fmt::Display for StrategyRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.player.tag(), self.index + 1)
    }
}

/// Parses the 1-based `r:K` / `c:K` label form.
impl FromStr for StrategyRef {
    type Err = CurbError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CurbError::InvalidParameter(format!("bad strategy label `{s}`, expected r:K or c:K"));
        let (tag, num) = s.trim().split_once(':').ok_or_else(bad)?;
        let player = match tag {
            "r" | "R" => Player::Row,
            "c" | "C" => Player::Col,
            _ => return Err(bad()),
        };
        let k: usize = num.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(StrategyRef { player, index: k - 1 })
    }
}

/// Per-player sets of pure strategies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrategySet {
    pub rows: BTreeSet<usize>,
    pub cols: BTreeSet<usize>,
}

impl StrategySet {
    pub fn new(rows: impl IntoIterator<Item = usize>, cols: impl IntoIterator<Item = usize>) -> Self {
        StrategySet { rows: rows.into_iter().collect(), cols: cols.into_iter().collect() }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self::new(0..rows, 0..cols)
    }

    pub fn singleton(s: StrategyRef) -> Self {
        let mut set = StrategySet::default();
        set.insert(s);
        set
    }

    pub fn side(&self, player: Player) -> &BTreeSet<usize> {
        match player {
            Player::Row => &self.rows,
            Player::Col => &self.cols,
        }
    }

    pub fn side_mut(&mut self, player: Player) -> &mut BTreeSet<usize> {
        match player {
            Player::Row => &mut self.rows,
            Player::Col => &mut self.cols,
        }
    }

    pub fn insert(&mut self, s: StrategyRef) -> bool {
        self.side_mut(s.player).insert(s.index)
    }

    pub fn contains(&self, s: StrategyRef) -> bool {
        self.side(s.player).contains(&s.index)
    }

    /// Number of strategies over both players.
    pub fn size(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    pub fn both_sides_nonempty(&self) -> bool {
        !self.rows.is_empty() && !self.cols.is_empty()
    }

    pub fn is_subset(&self, other: &StrategySet) -> bool {
        self.rows.is_subset(&other.rows) && self.cols.is_subset(&other.cols)
    }

    pub fn is_strict_subset(&self, other: &StrategySet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(&self, other: &StrategySet) -> bool {
        self.rows.is_disjoint(&other.rows) && self.cols.is_disjoint(&other.cols)
    }

    pub fn intersection(&self, other: &StrategySet) -> StrategySet {
        StrategySet {
            rows: self.rows.intersection(&other.rows).copied().collect(),
            cols: self.cols.intersection(&other.cols).copied().collect(),
        }
    }

    pub fn difference(&self, other: &StrategySet) -> StrategySet {
        StrategySet {
            rows: self.rows.difference(&other.rows).copied().collect(),
            cols: self.cols.difference(&other.cols).copied().collect(),
        }
    }

    /// Rows first, then columns, each ascending.
    pub fn iter(&self) -> impl Iterator<Item = StrategyRef> + '_ {
        self.rows.iter().map(|&i| StrategyRef::row(i)).chain(self.cols.iter().map(|&i| StrategyRef::col(i)))
    }

    pub(crate) fn check_within(&self, rows: usize, cols: usize) -> Result<()> {
        for s in self.iter() {
            let count = match s.player {
                Player::Row => rows,
                Player::Col => cols,
            };
            if s.index >= count {
                return Err(CurbError::IndexOutOfRange { player: s.player, index: s.index, count });
            }
        }
        Ok(())
    }
}

fn fmt_labels(f: &mut fmt::Formatter<'_>, set: &BTreeSet<usize>) -> fmt::Result {
    write!(f, "{{")?;
    for (k, i) in set.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}", i + 1)?;
    }
    write!(f, "}}")
}

impl fmt::Display for StrategySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rows ")?;
        fmt_labels(f, &self.rows)?;
        write!(f, " cols ")?;
        fmt_labels(f, &self.cols)
    }
}

/// A probability distribution over one player's pure strategies.
///
/// Only strategies with positive probability are stored, so the key set
/// is the support.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy<T> {
    player: Player,
    probs: BTreeMap<usize, T>,
}

impl<T: Scalar> MixedStrategy<T> {
    pub fn new(player: Player, probs: impl IntoIterator<Item = (usize, T)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = T::zero();
        for (index, p) in probs {
            if !p.is_finite_value() || p.is_negative() {
                return Err(CurbError::InvalidMixture(format!("probability {p} on strategy {}", index + 1)));
            }
            total = total + p.clone();
            if p.is_zero() {
                continue;
            }
            if map.insert(index, p).is_some() {
                return Err(CurbError::InvalidMixture(format!("strategy {} listed twice", index + 1)));
            }
        }
        if (total.clone() - T::one()).abs() > T::mixture_tolerance() {
            return Err(CurbError::InvalidMixture(format!("probabilities sum to {total}")));
        }
        Ok(MixedStrategy { player, probs: map })
    }

    pub fn point_mass(player: Player, index: usize) -> Self {
        MixedStrategy { player, probs: BTreeMap::from([(index, T::one())]) }
    }

    /// Uniform over the given strategies. Panics on an empty support.
    pub fn uniform(player: Player, support: impl IntoIterator<Item = usize>) -> Self {
        let support: BTreeSet<usize> = support.into_iter().collect();
        assert!(!support.is_empty(), "uniform mixture needs a nonempty support");
        let p = T::from_ratio(1, support.len() as i64);
        MixedStrategy { player, probs: support.into_iter().map(|i| (i, p.clone())).collect() }
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn prob(&self, index: usize) -> T {
        self.probs.get(&index).cloned().unwrap_or_else(T::zero)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.probs.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.probs.iter().map(|(&i, p)| (i, p))
    }
}

impl<T: Scalar> fmt::Display for MixedStrategy<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{", self.player.tag())?;
        for (k, (i, p)) in self.probs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", i + 1, p)?;
        }
        write!(f, "}}")
    }
}

/// Bimatrix game. Payoffs are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Game<T> {
    rows: usize,
    cols: usize,
    payoff_row: Vec<T>,
    payoff_col: Vec<T>,
}

impl<T: Scalar> Game<T> {
    pub fn new(rows: usize, cols: usize, payoff_row: Vec<T>, payoff_col: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(CurbError::DimensionMismatch("a game needs at least one strategy per player".into()));
        }
        for (name, m) in [("row", &payoff_row), ("column", &payoff_col)] {
            if m.len() != rows * cols {
                return Err(CurbError::DimensionMismatch(format!(
                    "{name} payoff matrix has {} entries, expected {rows}x{cols}",
                    m.len()
                )));
            }
            if let Some(v) = m.iter().find(|v| !v.is_finite_value()) {
                return Err(CurbError::InvalidParameter(format!("non-finite payoff {v}")));
            }
        }
        Ok(Game { rows, cols, payoff_row, payoff_col })
    }

    /// Builds a game from row-major `(u_r, u_c)` cells.
    pub fn from_cells(rows: usize, cols: usize, cells: Vec<(T, T)>) -> Result<Self> {
        let (payoff_row, payoff_col) = cells.into_iter().unzip();
        Self::new(rows, cols, payoff_row, payoff_col)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn strategy_count(&self, player: Player) -> usize {
        match player {
            Player::Row => self.rows,
            Player::Col => self.cols,
        }
    }

    /// Game size `rows + cols`.
    pub fn size(&self) -> usize {
        self.rows + self.cols
    }

    pub fn numeric_mode(&self) -> NumericMode {
        T::MODE
    }

    /// Payoff of `player` in cell `(r, c)`.
    pub fn payoff(&self, player: Player, r: usize, c: usize) -> &T {
        let k = r * self.cols + c;
        match player {
            Player::Row => &self.payoff_row[k],
            Player::Col => &self.payoff_col[k],
        }
    }

    /// Payoff of `player` for playing `own` against the opponent's `opp`.
    pub fn utility(&self, player: Player, own: usize, opp: usize) -> &T {
        match player {
            Player::Row => &self.payoff_row[own * self.cols + opp],
            Player::Col => &self.payoff_col[opp * self.cols + own],
        }
    }

    pub fn cell(&self, r: usize, c: usize) -> (&T, &T) {
        (self.payoff(Player::Row, r, c), self.payoff(Player::Col, r, c))
    }

    pub fn full_set(&self) -> StrategySet {
        StrategySet::full(self.rows, self.cols)
    }

    pub fn view(&self) -> GameView<'_, T> {
        GameView { game: self, rows: (0..self.rows).collect(), cols: (0..self.cols).collect() }
    }

    pub fn check_strategy(&self, s: StrategyRef) -> Result<()> {
        let count = self.strategy_count(s.player);
        if s.index >= count {
            return Err(CurbError::IndexOutOfRange { player: s.player, index: s.index, count });
        }
        Ok(())
    }

    pub(crate) fn check_mixture(&self, mix: &MixedStrategy<T>, expected: Player) -> Result<()> {
        if mix.player() != expected {
            return Err(CurbError::PlayerMismatch { expected, found: mix.player() });
        }
        let count = self.strategy_count(expected);
        if let Some(index) = mix.support().into_iter().find(|&i| i >= count) {
            return Err(CurbError::IndexOutOfRange { player: expected, index, count });
        }
        Ok(())
    }

    /// Expected payoff of `player`'s pure strategy `own` against an opponent mixture.
    pub fn utility_against(&self, player: Player, own: usize, opponent_mix: &MixedStrategy<T>) -> T {
        opponent_mix.iter().fold(T::zero(), |acc, (opp, p)| acc + p.clone() * self.utility(player, own, opp).clone())
    }
}

/// `Σ_r Σ_c row_mix(r) · col_mix(c) · u_player(r, c)`.
pub fn expected_utility<T: Scalar>(
    game: &Game<T>,
    player: Player,
    row_mix: &MixedStrategy<T>,
    col_mix: &MixedStrategy<T>,
) -> Result<T> {
    game.check_mixture(row_mix, Player::Row)?;
    game.check_mixture(col_mix, Player::Col)?;
    let mut total = T::zero();
    for (r, pr) in row_mix.iter() {
        for (c, pc) in col_mix.iter() {
            total = total + pr.clone() * pc.clone() * game.payoff(player, r, c).clone();
        }
    }
    Ok(total)
}

/// A subgame that keeps ambient strategy indices.
///
/// Local index `k` of a player maps to ambient index `strategies(player)[k]`;
/// payoffs are read through to the underlying game.
#[derive(Debug, Clone)]
pub struct GameView<'g, T> {
    game: &'g Game<T>,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

/// Restricts `game` to the strategies in `set`.
pub fn restrict<'g, T: Scalar>(game: &'g Game<T>, set: &StrategySet) -> Result<GameView<'g, T>> {
    if !set.both_sides_nonempty() {
        return Err(CurbError::EmptySide);
    }
    set.check_within(game.rows(), game.cols())?;
    Ok(GameView { game, rows: set.rows.iter().copied().collect(), cols: set.cols.iter().copied().collect() })
}

impl<'g, T: Scalar> GameView<'g, T> {
    pub fn game(&self) -> &'g Game<T> {
        self.game
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn size(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    /// Ambient indices of `player`'s strategies in this view, ascending.
    pub fn strategies(&self, player: Player) -> &[usize] {
        match player {
            Player::Row => &self.rows,
            Player::Col => &self.cols,
        }
    }

    pub fn ambient(&self, player: Player, local: usize) -> usize {
        self.strategies(player)[local]
    }

    /// Payoff of `player` at local cell `(r, c)`.
    pub fn payoff(&self, player: Player, r: usize, c: usize) -> &T {
        self.game.payoff(player, self.rows[r], self.cols[c])
    }

    pub fn contains(&self, s: StrategyRef) -> bool {
        self.strategies(s.player).binary_search(&s.index).is_ok()
    }

    /// The view's strategies as an ambient strategy set.
    pub fn scope(&self) -> StrategySet {
        StrategySet::new(self.rows.iter().copied(), self.cols.iter().copied())
    }

    /// Copies the view into a standalone game with local indices.
    pub fn to_game(&self) -> Game<T> {
        let mut cells = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                cells.push((self.payoff(Player::Row, r, c).clone(), self.payoff(Player::Col, r, c).clone()));
            }
        }
        Game::from_cells(self.rows(), self.cols(), cells).expect("restriction of a valid game is valid")
    }
}

/// A game in either numeric mode, as read from a file or produced by a
/// generator.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyGame {
    Rational(Game<crate::scalar::Rational>),
    Float(Game<f64>),
}

impl AnyGame {
    pub fn numeric_mode(&self) -> NumericMode {
        match self {
            AnyGame::Rational(_) => NumericMode::Rational,
            AnyGame::Float(_) => NumericMode::Float,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            AnyGame::Rational(g) => g.rows(),
            AnyGame::Float(g) => g.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            AnyGame::Rational(g) => g.cols(),
            AnyGame::Float(g) => g.cols(),
        }
    }

    pub fn size(&self) -> usize {
        self.rows() + self.cols()
    }
}

impl From<Game<crate::scalar::Rational>> for AnyGame {
    fn from(g: Game<crate::scalar::Rational>) -> Self {
        AnyGame::Rational(g)
    }
}

impl From<Game<f64>> for AnyGame {
    fn from(g: Game<f64>) -> Self {
        AnyGame::Float(g)
    }
}
