//! Finite game trees, outcomes, play lines and tree-shaped strategy profiles.
//!
//! A [`FiniteGame`] is a rooted tree whose internal nodes belong to a player
//! and carry an ordered list of labeled branches. Branch order matters: it is
//! the tie-breaking order of the solvers and the order used when games are
//! written back to text.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of players every solver in this crate works with.
pub const PLAYER_COUNT: usize = 2;

/// Dense player index. Player 0 moves first in every bundled game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PlayerId(pub usize);

impl PlayerId {
    pub const ALICE: PlayerId = PlayerId(0);
    pub const BERTRAND: PlayerId = PlayerId(1);

    pub fn index(self) -> usize {
        self.0
    }

    /// The opponent in a two-player game.
    pub fn other(self) -> PlayerId {
        PlayerId(1 - self.0.min(1))
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ordinal payoff. Solvers on sequential games only ever compare utilities.
pub type Utility = i64;

/// One utility per player, indexed by [`PlayerId`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Outcome(Vec<Utility>);

impl Outcome {
    pub fn new(values: Vec<Utility>) -> Self {
        Outcome(values)
    }

    pub fn pair(alice: Utility, bertrand: Utility) -> Self {
        Outcome(vec![alice, bertrand])
    }

    pub fn utility(&self, player: PlayerId) -> Utility {
        self.0[player.0]
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Utility] {
        &self.0
    }

    /// Applies `f` to the utility of `player`, leaving the others unchanged.
    pub fn map_player(&self, player: PlayerId, f: impl Fn(Utility) -> Utility) -> Outcome {
        let mut values = self.0.clone();
        values[player.0] = f(values[player.0]);
        Outcome(values)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Parses `"x,y"` (whitespace and surrounding parentheses allowed).
impl FromStr for Outcome {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        inner
            .split(',')
            .map(|t| t.trim().parse::<Utility>().map_err(|e| format!("`{}`: {e}", t.trim())))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Outcome)
    }
}

/// Name of a move, e.g. `p`, `f`, `a`, `c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ActionLabel(String);

impl ActionLabel {
    /// # Panics
    ///
    /// Panics if `label` is empty or contains whitespace; use [`str::parse`]
    /// for untrusted input.
    pub fn new(label: impl Into<String>) -> Self {
        let label = label.into();
        assert!(is_valid_label(&label), "invalid action label {label:?}");
        ActionLabel(label)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_valid_label(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

impl FromStr for ActionLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if is_valid_label(s) {
            Ok(ActionLabel(s.to_string()))
        } else {
            Err(format!("invalid action label {s:?}"))
        }
    }
}

impl From<&str> for ActionLabel {
    fn from(s: &str) -> Self {
        ActionLabel::new(s)
    }
}

impl From<String> for ActionLabel {
    fn from(s: String) -> Self {
        ActionLabel::new(s)
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A sequence of actions from the root, e.g. `p f p`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PlayLine(pub Vec<ActionLabel>);

impl PlayLine {
    pub fn new(actions: Vec<ActionLabel>) -> Self {
        PlayLine(actions)
    }

    pub fn actions(&self) -> &[ActionLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Slash-separated form used for node positions: `/` for the root,
    /// `/p/f` for the node reached by `p f`.
    pub fn as_path(&self) -> String {
        if self.0.is_empty() {
            return "/".to_string();
        }
        self.0.iter().map(|l| format!("/{l}")).collect()
    }

    /// Inverse of [`PlayLine::as_path`].
    pub fn from_path(path: &str) -> std::result::Result<Self, String> {
        let path = path.trim();
        let rest = path
            .strip_prefix('/')
            .ok_or_else(|| format!("path {path:?} must start with `/`"))?;
        if rest.is_empty() {
            return Ok(PlayLine::default());
        }
        rest.split('/')
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map(PlayLine)
    }
}

/// Space-separated labels, e.g. `"p f f"`.
impl FromStr for PlayLine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map(PlayLine)
    }
}

impl fmt::Display for PlayLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A finite game in extensive form with perfect information.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FiniteGame {
    Leaf(Outcome),
    Node {
        owner: PlayerId,
        branches: Vec<(ActionLabel, FiniteGame)>,
    },
}

impl FiniteGame {
    pub fn leaf(alice: Utility, bertrand: Utility) -> Self {
        FiniteGame::Leaf(Outcome::pair(alice, bertrand))
    }

    pub fn node<L: Into<ActionLabel>>(owner: PlayerId, branches: impl IntoIterator<Item = (L, FiniteGame)>) -> Self {
        FiniteGame::Node {
            owner,
            branches: branches.into_iter().map(|(l, g)| (l.into(), g)).collect(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, FiniteGame::Leaf(_))
    }

    pub fn owner(&self) -> Option<PlayerId> {
        match self {
            FiniteGame::Leaf(_) => None,
            FiniteGame::Node { owner, .. } => Some(*owner),
        }
    }

    pub fn branches(&self) -> &[(ActionLabel, FiniteGame)] {
        match self {
            FiniteGame::Leaf(_) => &[],
            FiniteGame::Node { branches, .. } => branches,
        }
    }

    /// The subtree reached by `label` from this node.
    pub fn child(&self, label: &ActionLabel) -> Option<&FiniteGame> {
        self.branches().iter().find(|(l, _)| l == label).map(|(_, g)| g)
    }

    /// Total number of positions, decision nodes and leaves alike.
    pub fn node_count(&self) -> usize {
        1 + self.branches().iter().map(|(_, g)| g.node_count()).sum::<usize>()
    }

    pub fn decision_count(&self) -> usize {
        match self {
            FiniteGame::Leaf(_) => 0,
            FiniteGame::Node { branches, .. } => 1 + branches.iter().map(|(_, g)| g.decision_count()).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            FiniteGame::Leaf(_) => 1,
            FiniteGame::Node { branches, .. } => branches.iter().map(|(_, g)| g.leaf_count()).sum(),
        }
    }

    /// Follows `play` from the root and returns the outcome of the leaf it reaches.
    pub fn outcome_of(&self, play: &PlayLine) -> Result<Outcome> {
        match self.walk(play.actions())? {
            (FiniteGame::Leaf(o), _) => Ok(o.clone()),
            (FiniteGame::Node { .. }, _) => Err(Error::InvalidPlay {
                position: play.len(),
                label: None,
            }),
        }
    }

    /// The subgame rooted at the position reached by `prefix`.
    pub fn subgame_at(&self, prefix: &[ActionLabel]) -> Result<&FiniteGame> {
        self.walk(prefix).map(|(g, _)| g)
    }

    fn walk(&self, actions: &[ActionLabel]) -> Result<(&FiniteGame, usize)> {
        let mut here = self;
        for (position, label) in actions.iter().enumerate() {
            here = here.child(label).ok_or_else(|| Error::InvalidPlay {
                position,
                label: Some(label.clone()),
            })?;
        }
        Ok((here, actions.len()))
    }

    /// Every play line from the root to a leaf, in branch order.
    pub fn play_lines(&self) -> Vec<(PlayLine, Outcome)> {
        fn go(g: &FiniteGame, prefix: &mut Vec<ActionLabel>, out: &mut Vec<(PlayLine, Outcome)>) {
            match g {
                FiniteGame::Leaf(o) => out.push((PlayLine(prefix.clone()), o.clone())),
                FiniteGame::Node { branches, .. } => {
                    for (l, child) in branches {
                        prefix.push(l.clone());
                        go(child, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Structural findings: duplicate sibling labels, leaves of differing
    /// arity, nodes without branches.
    pub fn validate(&self) -> ValidationReport {
        fn go(g: &FiniteGame, path: &mut Vec<ActionLabel>, arity: &mut Option<usize>, findings: &mut Vec<Finding>) {
            match g {
                FiniteGame::Leaf(o) => match *arity {
                    None => *arity = Some(o.arity()),
                    Some(expected) if expected != o.arity() => findings.push(Finding::ArityMismatch {
                        path: PlayLine(path.clone()),
                        expected,
                        found: o.arity(),
                    }),
                    Some(_) => {}
                },
                FiniteGame::Node { branches, .. } => {
                    if branches.is_empty() {
                        findings.push(Finding::EmptyBranches {
                            path: PlayLine(path.clone()),
                        });
                    }
                    for (i, (l, _)) in branches.iter().enumerate() {
                        if branches[..i].iter().any(|(m, _)| m == l) {
                            findings.push(Finding::DuplicateLabel {
                                path: PlayLine(path.clone()),
                                label: l.clone(),
                            });
                        }
                    }
                    for (l, child) in branches {
                        path.push(l.clone());
                        go(child, path, arity, findings);
                        path.pop();
                    }
                }
            }
        }
        let mut findings = Vec::new();
        go(self, &mut Vec::new(), &mut None, &mut findings);
        ValidationReport { findings }
    }

    /// Checks well-formedness and the two-player restriction shared by all solvers.
    pub fn ensure_solvable(&self) -> Result<()> {
        let report = self.validate();
        if !report.is_empty() {
            return Err(Error::Malformed(report));
        }
        fn two_player(g: &FiniteGame) -> bool {
            match g {
                FiniteGame::Leaf(o) => o.arity() == PLAYER_COUNT,
                FiniteGame::Node { owner, branches } => {
                    owner.0 < PLAYER_COUNT && branches.iter().all(|(_, c)| two_player(c))
                }
            }
        }
        if two_player(self) {
            Ok(())
        } else {
            Err(Error::NotTwoPlayer)
        }
    }

    /// Applies `f` to every leaf outcome.
    pub fn map_outcomes(&self, f: &impl Fn(&Outcome) -> Outcome) -> FiniteGame {
        match self {
            FiniteGame::Leaf(o) => FiniteGame::Leaf(f(o)),
            FiniteGame::Node { owner, branches } => FiniteGame::Node {
                owner: *owner,
                branches: branches.iter().map(|(l, g)| (l.clone(), g.map_outcomes(f))).collect(),
            },
        }
    }

    /// Follows `profile` from the root; returns the play line and its outcome.
    pub fn induced_play(&self, profile: &TreeProfile) -> Result<(PlayLine, Outcome)> {
        profile.check_shape(self)?;
        let mut here = (self, profile);
        let mut actions = Vec::new();
        loop {
            match here {
                (FiniteGame::Leaf(o), _) => return Ok((PlayLine(actions), o.clone())),
                (FiniteGame::Node { branches, .. }, TreeProfile::Node { choice, children }) => {
                    let i = branches.iter().position(|(l, _)| l == choice).expect("checked shape");
                    actions.push(choice.clone());
                    here = (&branches[i].1, &children[i]);
                }
                (FiniteGame::Node { .. }, TreeProfile::Leaf) => unreachable!("checked shape"),
            }
        }
    }
}

/// One issue found by [`FiniteGame::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Finding {
    DuplicateLabel {
        path: PlayLine,
        label: ActionLabel,
    },
    ArityMismatch {
        path: PlayLine,
        expected: usize,
        found: usize,
    },
    EmptyBranches {
        path: PlayLine,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DuplicateLabel { path, label } => {
                write!(f, "duplicate label `{label}` at {}", path.as_path())
            }
            Finding::ArityMismatch { path, expected, found } => write!(
                f,
                "leaf at {} has {found} utilities, expected {expected}",
                path.as_path()
            ),
            Finding::EmptyBranches { path } => write!(f, "node at {} has no branches", path.as_path()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, finding) in self.findings.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{finding}")?;
        }
        Ok(())
    }
}

/// A pure strategy profile on a finite game: one chosen label at every
/// decision node, including nodes the induced play never reaches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TreeProfile {
    Leaf,
    Node {
        choice: ActionLabel,
        children: Vec<TreeProfile>,
    },
}

impl TreeProfile {
    /// Builds a profile by asking `choose` for the label at every decision
    /// node, given the path to that node.
    pub fn from_fn(
        game: &FiniteGame,
        choose: &mut impl FnMut(&PlayLine, &FiniteGame) -> Result<ActionLabel>,
    ) -> Result<TreeProfile> {
        fn go(
            g: &FiniteGame,
            path: &mut Vec<ActionLabel>,
            choose: &mut impl FnMut(&PlayLine, &FiniteGame) -> Result<ActionLabel>,
        ) -> Result<TreeProfile> {
            match g {
                FiniteGame::Leaf(_) => Ok(TreeProfile::Leaf),
                FiniteGame::Node { branches, .. } => {
                    let line = PlayLine(path.clone());
                    let choice = choose(&line, g)?;
                    if !branches.iter().any(|(l, _)| *l == choice) {
                        return Err(Error::ShapeMismatch(format!(
                            "`{choice}` is not a branch at {}",
                            line.as_path()
                        )));
                    }
                    let mut children = Vec::with_capacity(branches.len());
                    for (l, child) in branches {
                        path.push(l.clone());
                        children.push(go(child, path, choose)?);
                        path.pop();
                    }
                    Ok(TreeProfile::Node { choice, children })
                }
            }
        }
        go(game, &mut Vec::new(), choose)
    }

    /// Builds a profile from `(path, label)` pairs; every decision node must be covered.
    pub fn from_choices<'a>(
        game: &FiniteGame,
        choices: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<TreeProfile> {
        let table = choices
            .into_iter()
            .map(|(path, label)| {
                let path = PlayLine::from_path(path).map_err(Error::ShapeMismatch)?;
                let label = label.parse::<ActionLabel>().map_err(Error::ShapeMismatch)?;
                Ok((path, label))
            })
            .collect::<Result<std::collections::BTreeMap<_, _>>>()?;
        TreeProfile::from_fn(game, &mut |path, _| {
            table
                .get(path)
                .cloned()
                .ok_or_else(|| Error::ShapeMismatch(format!("no choice given at {}", path.as_path())))
        })
    }

    /// `(path, choice)` for every decision node of `game`, in preorder.
    pub fn choices(&self, game: &FiniteGame) -> Result<Vec<(PlayLine, ActionLabel)>> {
        fn go(p: &TreeProfile, g: &FiniteGame, path: &mut Vec<ActionLabel>, out: &mut Vec<(PlayLine, ActionLabel)>) {
            if let (TreeProfile::Node { choice, children }, FiniteGame::Node { branches, .. }) = (p, g) {
                out.push((PlayLine(path.clone()), choice.clone()));
                for ((l, g), p) in branches.iter().zip(children) {
                    path.push(l.clone());
                    go(p, g, path, out);
                    path.pop();
                }
            }
        }
        self.check_shape(game)?;
        let mut out = Vec::new();
        go(self, game, &mut Vec::new(), &mut out);
        Ok(out)
    }

    /// Branch index of every choice, in preorder. Sorting profiles by this
    /// key gives the canonical enumeration order.
    pub fn choice_indices(&self, game: &FiniteGame) -> Result<Vec<usize>> {
        fn go(p: &TreeProfile, g: &FiniteGame, out: &mut Vec<usize>) {
            if let (TreeProfile::Node { choice, children }, FiniteGame::Node { branches, .. }) = (p, g) {
                out.push(branches.iter().position(|(l, _)| l == choice).unwrap_or(usize::MAX));
                for ((_, g), p) in branches.iter().zip(children) {
                    go(p, g, out);
                }
            }
        }
        self.check_shape(game)?;
        let mut out = Vec::new();
        go(self, game, &mut out);
        Ok(out)
    }

    pub fn check_shape(&self, game: &FiniteGame) -> Result<()> {
        fn go(p: &TreeProfile, g: &FiniteGame, path: &mut Vec<ActionLabel>) -> Result<()> {
            match (g, p) {
                (FiniteGame::Leaf(_), TreeProfile::Leaf) => Ok(()),
                (FiniteGame::Node { branches, .. }, TreeProfile::Node { choice, children }) => {
                    if branches.len() != children.len() {
                        return Err(Error::ShapeMismatch(format!(
                            "node at {} has {} branches but the profile has {}",
                            PlayLine(path.clone()).as_path(),
                            branches.len(),
                            children.len()
                        )));
                    }
                    if !branches.iter().any(|(l, _)| l == choice) {
                        return Err(Error::ShapeMismatch(format!(
                            "`{choice}` is not a branch at {}",
                            PlayLine(path.clone()).as_path()
                        )));
                    }
                    for ((l, g), p) in branches.iter().zip(children) {
                        path.push(l.clone());
                        go(p, g, path)?;
                        path.pop();
                    }
                    Ok(())
                }
                _ => Err(Error::ShapeMismatch(format!(
                    "leaf/node mismatch at {}",
                    PlayLine(path.clone()).as_path()
                ))),
            }
        }
        go(self, game, &mut Vec::new())
    }
}
