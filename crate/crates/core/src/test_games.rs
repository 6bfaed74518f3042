//! Hand-authored games shared by unit tests.

use crate::game::Game;
use crate::scalar::{Rational, Scalar};

pub(crate) fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// The 2x2 game where replacing instead of merging would lose the seed:
/// `(1,1) (0,0) / (0,1) (1,0)`.
pub(crate) fn merge_example() -> Game<Rational> {
    Game::from_cells(2, 2, vec![(q(1, 1), q(1, 1)), (q(0, 1), q(0, 1)), (q(0, 1), q(1, 1)), (q(1, 1), q(0, 1))])
        .unwrap()
}

pub(crate) fn constant_game(rows: usize, cols: usize) -> Game<Rational> {
    Game::new(rows, cols, vec![q(1, 1); rows * cols], vec![q(1, 1); rows * cols]).unwrap()
}
