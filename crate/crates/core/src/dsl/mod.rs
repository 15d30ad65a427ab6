//! The `.game` text format.
//!
//! ```text
//! doc     := header? (finite | cyclic | param | matrix)
//! header  := "players" NAME NAME
//! finite  := "finite" "{" tree "}"
//! tree    := "leaf" "(" INT "," INT ")" | NAME "{" (LABEL "->" tree ";"?)+ "}"
//! cyclic  := "cyclic" "start" "=" ID "{" (ID ":" NAME "{" (LABEL "->" (ID | leaf) ";"?)+ "}")+ "}"
//! param   := "param" "start" "=" ID "{" (ID ":" NAME "{" (LABEL "->" ("advance" ID | aleaf) ";"?)+ "}")+ "}"
//! aleaf   := "leaf" "(" AFFINE "," AFFINE ")"
//! AFFINE  := INT (("+" | "-") INT "*" "n")?
//! matrix  := "matrix" "sum" "=" RAT "{" RAT+ (";" RAT+)* ";"? "}"
//! RAT     := INT ("/" INT)?
//! ```
//!
//! Integers may carry a leading `-`. `#` starts a comment that runs to the
//! end of the line. Player names default to `Alice` and `Bertrand`.
//!
//! [`serialize`] writes the canonical form: two-space indentation, one
//! branch per line, branch order preserved, a header line always present,
//! LF line endings and a final newline.

mod dot;
mod lexer;
mod parser;
mod profile;
mod write;

use std::fmt;

use thiserror::Error;

use crate::cyclic::CyclicGame;
use crate::error::Error as GameError;
use crate::game::{FiniteGame, ValidationReport};
use crate::matrix::MatrixGame;
use crate::parametric::ParametricGame;

pub use dot::{to_dot, Highlight};
pub use parser::parse;
pub use profile::{parse_profile, positional_profile_text, tree_profile_text, ProfileDoc};
pub use write::serialize;

pub const DEFAULT_PLAYERS: [&str; 2] = ["Alice", "Bertrand"];

/// A parsed `.game` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameDoc {
    pub players: [String; 2],
    pub body: GameBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameBody {
    Finite(FiniteGame),
    Cyclic(CyclicGame),
    Parametric(ParametricGame),
    Matrix(MatrixGame),
}

impl GameBody {
    pub fn kind(&self) -> &'static str {
        match self {
            GameBody::Finite(_) => "finite",
            GameBody::Cyclic(_) => "cyclic",
            GameBody::Parametric(_) => "param",
            GameBody::Matrix(_) => "matrix",
        }
    }
}

impl GameDoc {
    /// A document with the default player names.
    pub fn new(body: GameBody) -> Self {
        GameDoc {
            players: DEFAULT_PLAYERS.map(String::from),
            body,
        }
    }

    pub fn player_name(&self, player: crate::game::PlayerId) -> &str {
        &self.players[player.index()]
    }
}

/// Syntax error with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid game: {0}")]
    Validation(ValidationReport),
    #[error(transparent)]
    Game(#[from] GameError),
}

impl fmt::Display for GameDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
