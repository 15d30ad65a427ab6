use thiserror::Error;

use crate::game::{ActionLabel, PlayerId, ValidationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the game representations and solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid play at position {position}: {}", match label {
        Some(l) => format!("no branch labeled `{l}`"),
        None => "play ends before reaching a leaf".to_string(),
    })]
    InvalidPlay {
        position: usize,
        label: Option<ActionLabel>,
    },
    #[error("profile does not match the game: {0}")]
    ShapeMismatch(String),
    #[error("solvers require exactly two players")]
    NotTwoPlayer,
    #[error("malformed game: {0}")]
    Malformed(ValidationReport),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("search space of {size} profiles exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("auctioned value must be at least 1, got {0}")]
    InvalidValue(i64),
    #[error("no equilibrium is available to select beliefs from")]
    NoEquilibria,
    #[error("belief held by player {0} is not an equilibrium")]
    BeliefNotEquilibrium(PlayerId),
    #[error("matrix game of size {rows}x{cols} exceeds the 9x9 support enumeration bound")]
    TooLarge { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid mixed strategy: {0}")]
    InvalidDistribution(String),
}
