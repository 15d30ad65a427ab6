//! Equilibria of two-player games in extensive form: finite trees solved by
//! backward induction, infinite games folded into cyclic graphs or
//! stage-parametric shapes, the escalation that arises when each player
//! acts on a different equilibrium, and exact solutions of constant-sum
//! matrix games.
//!
//! The runnable programs under `examples/` walk through each part:
//!
//! | example | topic |
//! |---|---|
//! | `sequential_matching_pennies` | backward induction and tie handling |
//! | `zero_one_finite` | enumerating every subgame-perfect profile |
//! | `cyclic_coinduction` | positional equilibria of the infinite 0,1 game |
//! | `non_extrapolation` | why finite truncations mislead |
//! | `dollar_auction` | stationary equilibria with stage-dependent payoffs |
//! | `escalation` | composing two equilibria into an escalating play |
//! | `memoryless_simulation` | seeded simulation of memoryless players |
//! | `matrix_games` | mixed strategies in rock-paper-scissors |
//! | `dot_export` | Graphviz output |

pub mod catalog;
pub mod cli;
pub mod cyclic;
pub mod dsl;
pub mod error;
pub mod escalation;
pub mod finite;
pub mod game;
pub mod matrix;
pub mod parametric;
pub mod report;

pub use cyclic::{check_spe_cyclic, enumerate_positional_spe, CyclicGame, InducedResult, PositionalProfile, Target};
pub use error::{Error, Result};
pub use escalation::{
    compose_beliefs, detect_escalation, simulate, stopping_frequency, BeliefPair, BeliefSelection, EscalationVerdict,
    SimTrace, StationaryGame,
};
pub use finite::{check_spe, enumerate_equilibria, solve, Equilibria, TiePolicy};
pub use game::{ActionLabel, FiniteGame, Outcome, PlayLine, PlayerId, TreeProfile, Utility};
pub use matrix::{best_response_value, solve_constant_sum, MatrixGame, MixedProfile, Rational, Side};
pub use parametric::{
    affine_leq, check_spe_param, dollar_auction, enumerate_stationary_spe, AffineOutcome, AffineValue, ParamResult,
    ParametricGame, StationaryProfile,
};
pub use report::{Payoff, SpeReport, Violation};
