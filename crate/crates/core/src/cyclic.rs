//! Infinite games given as finite graphs, with positional profiles.
//!
//! A profile is checked coinductively: it must reach a leaf from every node
//! (admissibility), and no one-shot deviation followed by the profile may
//! strictly improve the deviating player's outcome. Deviations that never
//! reach a leaf rank below every reached outcome.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{ActionLabel, FiniteGame, Outcome, PlayerId, TreeProfile, PLAYER_COUNT};
use crate::report::{Payoff, SpeReport, Violation};

/// Default bound on the number of positional profiles searched exhaustively.
pub const DEFAULT_SEARCH_LIMIT: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Node(String),
    Leaf(Outcome),
}

impl Target {
    pub fn node(name: &str) -> Self {
        Target::Node(name.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicNode {
    pub owner: PlayerId,
    pub edges: Vec<(ActionLabel, Target)>,
}

impl CyclicNode {
    pub fn edge(&self, label: &ActionLabel) -> Option<&Target> {
        self.edges.iter().find(|(l, _)| l == label).map(|(_, t)| t)
    }
}

/// A finite directed graph of decision nodes and payoff leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicGame {
    nodes: IndexMap<String, CyclicNode>,
    start: String,
}

impl CyclicGame {
    pub fn new<'a, L: Into<ActionLabel>>(
        start: &str,
        nodes: impl IntoIterator<Item = (&'a str, PlayerId, Vec<(L, Target)>)>,
    ) -> Result<Self> {
        let nodes = nodes
            .into_iter()
            .map(|(name, owner, edges)| {
                let edges = edges.into_iter().map(|(l, t)| (l.into(), t)).collect();
                (name.to_string(), CyclicNode { owner, edges })
            })
            .collect();
        CyclicGame::from_parts(start.to_string(), nodes)
    }

    /// Checks that references resolve, nodes have distinct nonempty edge
    /// lists, and there are exactly two players.
    pub fn from_parts(start: String, nodes: IndexMap<String, CyclicNode>) -> Result<Self> {
        if !nodes.contains_key(&start) {
            return Err(Error::UnknownNode(start));
        }
        for (name, node) in &nodes {
            if node.edges.is_empty() {
                return Err(Error::ShapeMismatch(format!("node `{name}` has no edges")));
            }
            if node.owner.index() >= PLAYER_COUNT {
                return Err(Error::NotTwoPlayer);
            }
            for (i, (l, t)) in node.edges.iter().enumerate() {
                if node.edges[..i].iter().any(|(m, _)| m == l) {
                    return Err(Error::ShapeMismatch(format!("duplicate label `{l}` at node `{name}`")));
                }
                match t {
                    Target::Node(m) if !nodes.contains_key(m) => return Err(Error::UnknownNode(m.clone())),
                    Target::Leaf(o) if o.arity() != PLAYER_COUNT => return Err(Error::NotTwoPlayer),
                    _ => {}
                }
            }
        }
        Ok(CyclicGame { nodes, start })
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn nodes(&self) -> &IndexMap<String, CyclicNode> {
        &self.nodes
    }

    pub fn node(&self, name: &str) -> Result<&CyclicNode> {
        self.nodes.get(name).ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Number of positional profiles.
    pub fn profile_count(&self) -> u128 {
        self.nodes.values().map(|n| n.edges.len() as u128).product()
    }

    /// Follows `profile` from `from` until a leaf or a repeated node.
    pub fn induced_outcome(&self, profile: &PositionalProfile, from: &str) -> Result<InducedResult> {
        profile.check_for(self)?;
        self.node(from)?;
        Ok(self.follow(profile, from))
    }

    fn follow(&self, profile: &PositionalProfile, from: &str) -> InducedResult {
        let mut path: Vec<String> = Vec::new();
        let mut here = from.to_string();
        loop {
            if let Some(i) = path.iter().position(|n| *n == here) {
                let cycle = path.split_off(i);
                return InducedResult::Diverges { stem: path, cycle };
            }
            let node = &self.nodes[&here];
            let target = node.edge(profile.choice(&here).expect("checked")).expect("checked");
            path.push(here);
            match target {
                Target::Leaf(o) => {
                    return InducedResult::Converges {
                        path,
                        outcome: o.clone(),
                    }
                }
                Target::Node(next) => here = next.clone(),
            }
        }
    }

    /// Unrolls the graph from the start node into a tree of `depth` decision
    /// layers; a decision node that would sit at layer `depth + 1` becomes
    /// `Leaf(terminal)`.
    pub fn unfold(&self, depth: usize, terminal: &Outcome) -> FiniteGame {
        self.unfold_from(&self.start, depth, terminal)
    }

    fn unfold_from(&self, name: &str, remaining: usize, terminal: &Outcome) -> FiniteGame {
        if remaining == 0 {
            return FiniteGame::Leaf(terminal.clone());
        }
        let node = &self.nodes[name];
        let branches = node.edges.iter().map(|(l, t)| {
            let sub = match t {
                Target::Leaf(o) => FiniteGame::Leaf(o.clone()),
                Target::Node(m) => self.unfold_from(m, remaining - 1, terminal),
            };
            (l.clone(), sub)
        });
        FiniteGame::Node {
            owner: node.owner,
            branches: branches.collect(),
        }
    }

    /// The tree profile on `self.unfold(depth, _)` that plays `profile` at
    /// every copy of every node.
    pub fn unfold_profile(&self, profile: &PositionalProfile, depth: usize) -> Result<TreeProfile> {
        profile.check_for(self)?;
        Ok(self.unfold_profile_from(profile, &self.start, depth))
    }

    fn unfold_profile_from(&self, profile: &PositionalProfile, name: &str, remaining: usize) -> TreeProfile {
        if remaining == 0 {
            return TreeProfile::Leaf;
        }
        let node = &self.nodes[name];
        let children = node
            .edges
            .iter()
            .map(|(_, t)| match t {
                Target::Leaf(_) => TreeProfile::Leaf,
                Target::Node(m) => self.unfold_profile_from(profile, m, remaining - 1),
            })
            .collect();
        TreeProfile::Node {
            choice: profile.choice(name).expect("checked").clone(),
            children,
        }
    }
}

/// A memoryless strategy profile: one action per named decision point.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PositionalProfile(BTreeMap<String, ActionLabel>);

impl PositionalProfile {
    pub fn new<'a, L: Into<ActionLabel>>(choices: impl IntoIterator<Item = (&'a str, L)>) -> Self {
        PositionalProfile(choices.into_iter().map(|(n, l)| (n.to_string(), l.into())).collect())
    }

    pub fn from_map(choices: BTreeMap<String, ActionLabel>) -> Self {
        PositionalProfile(choices)
    }

    pub fn choice(&self, point: &str) -> Option<&ActionLabel> {
        self.0.get(point)
    }

    pub fn set(&mut self, point: &str, action: ActionLabel) {
        self.0.insert(point.to_string(), action);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ActionLabel)> {
        self.0.iter().map(|(n, l)| (n.as_str(), l))
    }

    pub fn check_for(&self, game: &CyclicGame) -> Result<()> {
        check_choices(
            self,
            game.nodes
                .iter()
                .map(|(n, node)| (n.as_str(), node.edges.iter().map(|(l, _)| l))),
        )
    }

    /// Renders the choices in the given point order, e.g. `{A: a, B: c}`.
    pub fn display_in<'a>(&self, order: impl IntoIterator<Item = &'a str>) -> String {
        let parts: Vec<_> = order
            .into_iter()
            .filter_map(|n| self.0.get(n).map(|l| format!("{n}: {l}")))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for PositionalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(self.0.keys().map(String::as_str)))
    }
}

/// Checks that `profile` names exactly the given points, each with one of
/// its labels.
pub(crate) fn check_choices<'a, L>(
    profile: &PositionalProfile,
    points: impl Iterator<Item = (&'a str, L)>,
) -> Result<()>
where
    L: Iterator<Item = &'a ActionLabel>,
{
    let mut names = Vec::new();
    for (name, mut labels) in points {
        names.push(name);
        let choice = profile
            .choice(name)
            .ok_or_else(|| Error::ShapeMismatch(format!("no choice given for `{name}`")))?;
        if !labels.any(|l| l == choice) {
            return Err(Error::ShapeMismatch(format!("`{choice}` is not a move of `{name}`")));
        }
    }
    if let Some(extra) = profile.0.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(Error::ShapeMismatch(format!(
            "`{extra}` is not a decision point of the game"
        )));
    }
    Ok(())
}

/// Where a positional profile leads from a given node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InducedResult {
    /// Reaches a leaf after visiting `path` (no node repeated).
    Converges { path: Vec<String>, outcome: Outcome },
    /// Loops forever: `stem` is walked once, then `cycle` repeats.
    Diverges { stem: Vec<String>, cycle: Vec<String> },
}

impl InducedResult {
    pub fn outcome(&self) -> Option<&Outcome> {
        match self {
            InducedResult::Converges { outcome, .. } => Some(outcome),
            InducedResult::Diverges { .. } => None,
        }
    }

    fn value_for(&self, player: PlayerId) -> Option<i64> {
        self.outcome().map(|o| o.utility(player))
    }
}

impl fmt::Display for InducedResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InducedResult::Converges { path, outcome } => {
                write!(f, "converges via {} to {outcome}", path.join(" -> "))
            }
            InducedResult::Diverges { stem, cycle } => {
                let mut walk: Vec<&str> = stem.iter().chain(cycle).map(String::as_str).collect();
                walk.push(&cycle[0]);
                write!(f, "diverges: {} -> ...", walk.join(" -> "))
            }
        }
    }
}

/// Coinductive subgame-perfection check of a positional profile.
pub fn check_spe_cyclic(game: &CyclicGame, profile: &PositionalProfile) -> Result<SpeReport> {
    profile.check_for(game)?;
    let induced: IndexMap<&str, InducedResult> = game
        .nodes
        .keys()
        .map(|n| (n.as_str(), game.follow(profile, n)))
        .collect();
    let divergent_from = induced
        .iter()
        .filter(|(_, r)| r.outcome().is_none())
        .map(|(n, _)| n.to_string())
        .collect();
    let mut violations = Vec::new();
    for (name, node) in &game.nodes {
        let owner = node.owner;
        let mine = induced[name.as_str()].value_for(owner);
        for (label, target) in &node.edges {
            if Some(label) == profile.choice(name) {
                continue;
            }
            let theirs = match target {
                Target::Leaf(o) => Some(o.utility(owner)),
                Target::Node(m) => induced[m.as_str()].value_for(owner),
            };
            // `None` (divergence) orders below every `Some`.
            if theirs > mine {
                violations.push(Violation {
                    at: name.clone(),
                    owner,
                    action: label.clone(),
                    profile_value: mine.map_or(Payoff::Divergent, Payoff::Utility),
                    deviation_value: theirs.map_or(Payoff::Divergent, Payoff::Utility),
                    witness_stage: None,
                });
            }
        }
    }
    Ok(SpeReport::new(violations, divergent_from))
}

/// All positional profiles in canonical order: nodes in declaration order,
/// the first node varying slowest, edges in declaration order.
pub fn all_profiles<'a>(points: &[(&'a str, Vec<&'a ActionLabel>)]) -> Vec<PositionalProfile> {
    let mut out = vec![PositionalProfile::default()];
    for (name, labels) in points.iter().rev() {
        out = labels
            .iter()
            .flat_map(|l| {
                out.iter().map(move |p| {
                    let mut p = p.clone();
                    p.set(name, (*l).clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Every positional profile accepted by [`check_spe_cyclic`], in canonical order.
pub fn enumerate_positional_spe(game: &CyclicGame) -> Result<Vec<PositionalProfile>> {
    enumerate_positional_spe_bounded(game, DEFAULT_SEARCH_LIMIT)
}

pub fn enumerate_positional_spe_bounded(game: &CyclicGame, limit: u128) -> Result<Vec<PositionalProfile>> {
    let size = game.profile_count();
    if size > limit {
        return Err(Error::SearchSpaceTooLarge { size, limit });
    }
    let points: Vec<_> = game
        .nodes
        .iter()
        .map(|(n, node)| (n.as_str(), node.edges.iter().map(|(l, _)| l).collect()))
        .collect();
    let mut accepted = Vec::new();
    for p in all_profiles(&points) {
        if check_spe_cyclic(game, &p)?.is_ok() {
            accepted.push(p);
        }
    }
    Ok(accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::zero_one_cyclic;

    #[test]
    fn step_trace_of_mutual_continuation() {
        let g = zero_one_cyclic();
        let p = PositionalProfile::new([("A", "c"), ("B", "c")]);
        assert_eq!(
            g.induced_outcome(&p, "B").unwrap(),
            InducedResult::Diverges {
                stem: vec![],
                cycle: vec!["B".into(), "A".into()]
            }
        );
    }

    #[test]
    fn unknown_node_and_bad_profiles() {
        let g = zero_one_cyclic();
        let p = PositionalProfile::new([("A", "c"), ("B", "c")]);
        assert_eq!(g.induced_outcome(&p, "Z"), Err(Error::UnknownNode("Z".into())));
        let missing = PositionalProfile::new([("A", "c")]);
        assert!(matches!(check_spe_cyclic(&g, &missing), Err(Error::ShapeMismatch(_))));
        let wrong = PositionalProfile::new([("A", "x"), ("B", "c")]);
        assert!(matches!(check_spe_cyclic(&g, &wrong), Err(Error::ShapeMismatch(_))));
        let extra = PositionalProfile::new([("A", "a"), ("B", "c"), ("C", "c")]);
        assert!(matches!(check_spe_cyclic(&g, &extra), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn construction_rejects_dangling_references() {
        let r = CyclicGame::new("A", [("A", PlayerId::ALICE, vec![("c", Target::node("Q"))])]);
        assert_eq!(r.unwrap_err(), Error::UnknownNode("Q".into()));
        let r = CyclicGame::new("Z", [("A", PlayerId::ALICE, vec![("c", Target::node("A"))])]);
        assert_eq!(r.unwrap_err(), Error::UnknownNode("Z".into()));
    }

    #[test]
    fn single_forced_node() {
        let g = CyclicGame::new(
            "X",
            [("X", PlayerId::ALICE, vec![("go", Target::Leaf(Outcome::pair(3, 4)))])],
        )
        .unwrap();
        let eqs = enumerate_positional_spe(&g).unwrap();
        assert_eq!(eqs, vec![PositionalProfile::new([("X", "go")])]);
    }

    #[test]
    fn search_limit_is_enforced() {
        let g = zero_one_cyclic();
        assert_eq!(
            enumerate_positional_spe_bounded(&g, 3),
            Err(Error::SearchSpaceTooLarge { size: 4, limit: 3 })
        );
    }

    #[test]
    fn one_layer_unfold() {
        let g = zero_one_cyclic();
        let t = g.unfold(1, &Outcome::pair(9, 9));
        assert_eq!(
            t,
            FiniteGame::node(
                PlayerId::ALICE,
                [("a", FiniteGame::leaf(0, 1)), ("c", FiniteGame::leaf(9, 9))]
            )
        );
    }
}
