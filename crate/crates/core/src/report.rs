use std::fmt;

use serde::Serialize;

use crate::game::{ActionLabel, PlayerId, Utility};
use crate::parametric::AffineValue;

/// The value a player gets along some play, as reported by the checkers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Payoff {
    Utility(Utility),
    /// Value as a function of the stage `n` at which a shape is entered.
    Affine(AffineValue),
    /// The play never reaches a leaf.
    Divergent,
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payoff::Utility(u) => write!(f, "{u}"),
            Payoff::Affine(a) => write!(f, "{a}"),
            Payoff::Divergent => write!(f, "divergent"),
        }
    }
}

/// A one-shot deviation that strictly improves on the profile for the
/// owner of the position where it happens.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// `/p/f`-style path in a tree, node or shape name in a graph.
    pub at: String,
    pub owner: PlayerId,
    pub action: ActionLabel,
    pub profile_value: Payoff,
    pub deviation_value: Payoff,
    /// For stage-parametric games: the first entry stage at which the
    /// deviation is strictly better.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_stage: Option<u64>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {}: player {} deviating to `{}` gets {} > {}",
            self.at, self.owner, self.action, self.deviation_value, self.profile_value
        )?;
        if let Some(n) = self.witness_stage {
            write!(f, " (first at n = {n})")?;
        }
        Ok(())
    }
}

/// Result of a subgame-perfection check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SpeReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// Positions from which the profile's play never reaches a leaf.
    /// Always empty for finite trees.
    pub divergent_from: Vec<String>,
}

impl SpeReport {
    pub fn new(violations: Vec<Violation>, divergent_from: Vec<String>) -> Self {
        SpeReport {
            ok: violations.is_empty() && divergent_from.is_empty(),
            violations,
            divergent_from,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn violation_at(&self, at: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.at == at)
    }
}

impl fmt::Display for SpeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return writeln!(f, "subgame perfect: yes");
        }
        writeln!(f, "subgame perfect: no")?;
        for node in &self.divergent_from {
            writeln!(f, "  divergent play from {node}")?;
        }
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}
