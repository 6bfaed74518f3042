use thiserror::Error;

use crate::game::Player;

#[derive(Debug, Error)]
pub enum CurbError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("strategy set must contain at least one strategy for each player")]
    EmptySide,

    #[error("{player} strategy index {index} out of range ({count} strategies)")]
    IndexOutOfRange { player: Player, index: usize, count: usize },

    #[error("expected a mixture for the {expected} player, got one for the {found} player")]
    PlayerMismatch { expected: Player, found: Player },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("simplex did not terminate within {0} pivots")]
    PivotLimit(usize),

    #[error("instance {game_id}: {source}")]
    Instance {
        game_id: usize,
        #[source]
        source: Box<CurbError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CurbError>;
