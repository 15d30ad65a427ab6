//! Stage-indexed infinite games whose leaf payoffs are affine in the stage.
//!
//! A [`ParametricGame`] is a graph of shapes. Taking an `advance` move moves
//! to another shape and increments the stage `n` by one. Because payoffs are
//! affine in `n`, a stationary profile can be checked for every stage at
//! once: each deviation inequality compares two affine functions.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;

use crate::cyclic::{all_profiles, check_choices, CyclicGame, PositionalProfile, Target};
use crate::error::{Error, Result};
use crate::game::{ActionLabel, FiniteGame, Outcome, PlayerId, TreeProfile, PLAYER_COUNT};
use crate::report::{Payoff, SpeReport, Violation};

/// `a + b·n` over integer stages `n ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineValue {
    pub a: i64,
    pub b: i64,
}

impl AffineValue {
    pub const fn new(a: i64, b: i64) -> Self {
        AffineValue { a, b }
    }

    pub const fn constant(a: i64) -> Self {
        AffineValue { a, b: 0 }
    }

    pub fn eval(self, n: u64) -> i64 {
        self.a + self.b * n as i64
    }

    fn eval_wide(self, n: u64) -> i128 {
        self.a as i128 + self.b as i128 * n as i128
    }

    /// The value at stage `n + k`, as a function of `n`.
    pub fn shift(self, k: u64) -> Self {
        AffineValue::new(self.eval(k), self.b)
    }

    /// First stage `n ≥ from` where `self(n) > other(n)`, if any.
    pub fn first_exceeding(self, other: AffineValue, from: u64) -> Option<u64> {
        let (a, b) = (self.a as i128 - other.a as i128, self.b as i128 - other.b as i128);
        let at = |n: u64| a + b * n as i128;
        if at(from) > 0 {
            Some(from)
        } else if b > 0 {
            let n = (-a).div_euclid(b) + 1;
            Some((n.max(from as i128)) as u64)
        } else {
            None
        }
    }
}

impl fmt::Display for AffineValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            0 => write!(f, "{}", self.a),
            b if b < 0 => write!(f, "{}-{}*n", self.a, b.unsigned_abs()),
            b => write!(f, "{}+{}*n", self.a, b),
        }
    }
}

/// `f(n) ≤ g(n)` for every integer `n ≥ from`.
pub fn affine_leq(f: AffineValue, g: AffineValue, from: u64) -> bool {
    g.b >= f.b && f.eval_wide(from) <= g.eval_wide(from)
}

/// One affine payoff per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct AffineOutcome(Vec<AffineValue>);

impl AffineOutcome {
    pub fn new(values: Vec<AffineValue>) -> Self {
        AffineOutcome(values)
    }

    pub fn pair(alice: AffineValue, bertrand: AffineValue) -> Self {
        AffineOutcome(vec![alice, bertrand])
    }

    pub fn constant(o: &Outcome) -> Self {
        AffineOutcome(o.values().iter().map(|&u| AffineValue::constant(u)).collect())
    }

    pub fn value(&self, player: PlayerId) -> AffineValue {
        self.0[player.index()]
    }

    pub fn values(&self) -> &[AffineValue] {
        &self.0
    }

    pub fn eval(&self, n: u64) -> Outcome {
        Outcome::new(self.0.iter().map(|v| v.eval(n)).collect())
    }

    pub fn shift(&self, k: u64) -> Self {
        AffineOutcome(self.0.iter().map(|v| v.shift(k)).collect())
    }
}

impl fmt::Display for AffineOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Leaf(AffineOutcome),
    /// Continue to the named shape at the next stage.
    Advance(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub owner: PlayerId,
    pub moves: Vec<(ActionLabel, Move)>,
}

impl Shape {
    pub fn get(&self, label: &ActionLabel) -> Option<&Move> {
        self.moves.iter().find(|(l, _)| l == label).map(|(_, m)| m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricGame {
    shapes: IndexMap<String, Shape>,
    start: String,
}

/// Stationary profiles choose one move per shape, whatever the stage.
pub type StationaryProfile = PositionalProfile;

impl ParametricGame {
    pub fn new<'a, L: Into<ActionLabel>>(
        start: &str,
        shapes: impl IntoIterator<Item = (&'a str, PlayerId, Vec<(L, Move)>)>,
    ) -> Result<Self> {
        let shapes = shapes
            .into_iter()
            .map(|(name, owner, moves)| {
                let moves = moves.into_iter().map(|(l, m)| (l.into(), m)).collect();
                (name.to_string(), Shape { owner, moves })
            })
            .collect();
        ParametricGame::from_parts(start.to_string(), shapes)
    }

    pub fn from_parts(start: String, shapes: IndexMap<String, Shape>) -> Result<Self> {
        if !shapes.contains_key(&start) {
            return Err(Error::UnknownShape(start));
        }
        for (name, shape) in &shapes {
            if shape.moves.is_empty() {
                return Err(Error::ShapeMismatch(format!("shape `{name}` has no moves")));
            }
            if shape.owner.index() >= PLAYER_COUNT {
                return Err(Error::NotTwoPlayer);
            }
            for (i, (l, m)) in shape.moves.iter().enumerate() {
                if shape.moves[..i].iter().any(|(k, _)| k == l) {
                    return Err(Error::ShapeMismatch(format!("duplicate label `{l}` in shape `{name}`")));
                }
                match m {
                    Move::Advance(t) if !shapes.contains_key(t) => return Err(Error::UnknownShape(t.clone())),
                    Move::Leaf(o) if o.values().len() != PLAYER_COUNT => return Err(Error::NotTwoPlayer),
                    _ => {}
                }
            }
        }
        Ok(ParametricGame { shapes, start })
    }

    /// The same graph with constant payoffs; every edge between nodes
    /// becomes an advance.
    pub fn from_cyclic(game: &CyclicGame) -> Self {
        let shapes = game
            .nodes()
            .iter()
            .map(|(name, node)| {
                let moves = node
                    .edges
                    .iter()
                    .map(|(l, t)| {
                        let m = match t {
                            Target::Leaf(o) => Move::Leaf(AffineOutcome::constant(o)),
                            Target::Node(n) => Move::Advance(n.clone()),
                        };
                        (l.clone(), m)
                    })
                    .collect();
                (
                    name.clone(),
                    Shape {
                        owner: node.owner,
                        moves,
                    },
                )
            })
            .collect();
        ParametricGame {
            shapes,
            start: game.start().to_string(),
        }
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn shapes(&self) -> &IndexMap<String, Shape> {
        &self.shapes
    }

    pub fn shape(&self, name: &str) -> Result<&Shape> {
        self.shapes
            .get(name)
            .ok_or_else(|| Error::UnknownShape(name.to_string()))
    }

    pub fn check_profile(&self, profile: &StationaryProfile) -> Result<()> {
        check_choices(
            profile,
            self.shapes
                .iter()
                .map(|(n, s)| (n.as_str(), s.moves.iter().map(|(l, _)| l))),
        )
    }

    /// The stages at which each shape can be entered from the start.
    pub fn entry_stages(&self) -> EntryStages {
        let index = |name: &str| self.shapes.get_index_of(name).expect("validated");
        let mut stages: Vec<Vec<bool>> = Vec::new();
        let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut current = vec![false; self.shapes.len()];
        current[index(&self.start)] = true;
        let cycle_start = loop {
            if let Some(&at) = seen.get(&current) {
                break at;
            }
            seen.insert(current.clone(), stages.len());
            let mut next = vec![false; self.shapes.len()];
            for (i, shape) in self.shapes.values().enumerate() {
                if current[i] {
                    for (_, m) in &shape.moves {
                        if let Move::Advance(t) = m {
                            next[index(t)] = true;
                        }
                    }
                }
            }
            stages.push(std::mem::replace(&mut current, next));
        };
        EntryStages {
            names: self.shapes.keys().cloned().collect(),
            stages,
            cycle_start,
        }
    }

    /// Smallest stage at which each shape can be entered. Unreachable
    /// shapes get `None`.
    pub fn min_entry_stages(&self) -> IndexMap<&str, Option<u64>> {
        let entry = self.entry_stages();
        self.shapes.keys().map(|k| (k.as_str(), entry.first(k))).collect()
    }

    /// Follows `profile` from `from` entered at a symbolic stage `n`.
    pub fn induced_outcome(&self, profile: &StationaryProfile, from: &str) -> Result<ParamResult> {
        self.check_profile(profile)?;
        self.shape(from)?;
        Ok(self.follow(profile, from))
    }

    fn follow(&self, profile: &StationaryProfile, from: &str) -> ParamResult {
        let mut path: Vec<String> = Vec::new();
        let mut here = from.to_string();
        loop {
            if let Some(i) = path.iter().position(|n| *n == here) {
                let cycle = path.split_off(i);
                return ParamResult::Divergent { stem: path, cycle };
            }
            let shape = &self.shapes[&here];
            let m = shape.get(profile.choice(&here).expect("checked")).expect("checked");
            path.push(here);
            match m {
                Move::Leaf(o) => {
                    let advances = path.len() as u64 - 1;
                    return ParamResult::ConvergesAffine {
                        outcome: o.shift(advances),
                        path,
                        advances,
                    };
                }
                Move::Advance(t) => here = t.clone(),
            }
        }
    }

    /// Concrete tree for stages `0..=max_stage`; advancing from `max_stage`
    /// yields `Leaf(terminal)`.
    pub fn instantiate(&self, max_stage: u64, terminal: &Outcome) -> FiniteGame {
        self.instantiate_from(&self.start, 0, max_stage, terminal)
    }

    fn instantiate_from(&self, name: &str, n: u64, max_stage: u64, terminal: &Outcome) -> FiniteGame {
        let shape = &self.shapes[name];
        let branches = shape
            .moves
            .iter()
            .map(|(l, m)| {
                let sub = match m {
                    Move::Leaf(o) => FiniteGame::Leaf(o.eval(n)),
                    Move::Advance(_) if n == max_stage => FiniteGame::Leaf(terminal.clone()),
                    Move::Advance(t) => self.instantiate_from(t, n + 1, max_stage, terminal),
                };
                (l.clone(), sub)
            })
            .collect();
        FiniteGame::Node {
            owner: shape.owner,
            branches,
        }
    }

    /// The tree profile on `self.instantiate(max_stage, _)` that plays
    /// `profile` at every stage.
    pub fn instantiate_profile(&self, profile: &StationaryProfile, max_stage: u64) -> Result<TreeProfile> {
        self.check_profile(profile)?;
        Ok(self.instantiate_profile_from(profile, &self.start, 0, max_stage))
    }

    fn instantiate_profile_from(&self, profile: &StationaryProfile, name: &str, n: u64, max_stage: u64) -> TreeProfile {
        let shape = &self.shapes[name];
        let children = shape
            .moves
            .iter()
            .map(|(_, m)| match m {
                Move::Advance(t) if n < max_stage => self.instantiate_profile_from(profile, t, n + 1, max_stage),
                _ => TreeProfile::Leaf,
            })
            .collect();
        TreeProfile::Node {
            choice: profile.choice(name).expect("checked").clone(),
            children,
        }
    }

    /// Shape at which play continues after advancing from the last stage of
    /// `instantiate(max_stage, _)` along `profile`, if the profile advances there.
    pub fn shape_after(&self, profile: &StationaryProfile, max_stage: u64) -> Result<Option<&str>> {
        self.check_profile(profile)?;
        let mut here = self.start.as_str();
        for n in 0..=max_stage {
            match self.shapes[here]
                .get(profile.choice(here).expect("checked"))
                .expect("checked")
            {
                Move::Leaf(_) => return Ok(None),
                Move::Advance(t) if n == max_stage => return Ok(Some(t)),
                Move::Advance(t) => here = t,
            }
        }
        unreachable!()
    }

    /// Like [`instantiate`](Self::instantiate), but each cut leaf holds what
    /// `profile` yields from the cut shape entered at `max_stage + 1`.
    /// `None` if the profile diverges from some cut shape.
    pub fn truncate_along(&self, profile: &StationaryProfile, max_stage: u64) -> Result<Option<FiniteGame>> {
        self.check_profile(profile)?;
        let mut cut: IndexMap<&str, Outcome> = IndexMap::new();
        for name in self.shapes.keys() {
            if let Some(o) = self.follow(profile, name).outcome() {
                cut.insert(name, o.eval(max_stage + 1));
            }
        }
        Ok(self.truncate_from(&self.start, 0, max_stage, &cut))
    }

    fn truncate_from(&self, name: &str, n: u64, max_stage: u64, cut: &IndexMap<&str, Outcome>) -> Option<FiniteGame> {
        let shape = &self.shapes[name];
        let mut branches = Vec::with_capacity(shape.moves.len());
        for (l, m) in &shape.moves {
            let sub = match m {
                Move::Leaf(o) => FiniteGame::Leaf(o.eval(n)),
                Move::Advance(t) if n == max_stage => FiniteGame::Leaf(cut.get(t.as_str())?.clone()),
                Move::Advance(t) => self.truncate_from(t, n + 1, max_stage, cut)?,
            };
            branches.push((l.clone(), sub));
        }
        Some(FiniteGame::Node {
            owner: shape.owner,
            branches,
        })
    }

    pub fn all_profiles(&self) -> Vec<StationaryProfile> {
        let points: Vec<_> = self
            .shapes
            .iter()
            .map(|(n, s)| (n.as_str(), s.moves.iter().map(|(l, _)| l).collect()))
            .collect();
        all_profiles(&points)
    }
}

/// Entry stages of every shape. Shape sets reachable at successive stages
/// repeat eventually, so each shape's stage set is a finite prefix followed
/// by a periodic tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryStages {
    names: Vec<String>,
    /// `stages[n][i]`: shape `i` can be entered at stage `n`.
    stages: Vec<Vec<bool>>,
    /// Stage `stages.len()` repeats this one.
    cycle_start: usize,
}

impl EntryStages {
    fn index(&self, shape: &str) -> Option<usize> {
        self.names.iter().position(|n| n == shape)
    }

    pub fn contains(&self, shape: &str, n: u64) -> bool {
        let Some(i) = self.index(shape) else { return false };
        let len = self.stages.len() as u64;
        let at = if n < len {
            n
        } else {
            let period = len - self.cycle_start as u64;
            self.cycle_start as u64 + (n - self.cycle_start as u64) % period
        };
        self.stages[at as usize][i]
    }

    pub fn first(&self, shape: &str) -> Option<u64> {
        let i = self.index(shape)?;
        self.stages.iter().position(|s| s[i]).map(|n| n as u64)
    }

    pub fn is_reachable(&self, shape: &str) -> bool {
        self.first(shape).is_some()
    }

    /// Smallest entry stage `n` of `shape` with `f(n) > g(n)`.
    pub fn first_exceeding(&self, shape: &str, f: AffineValue, g: AffineValue) -> Option<u64> {
        let i = self.index(shape)?;
        let (a, b) = (f.a as i128 - g.a as i128, f.b as i128 - g.b as i128);
        let positive = |n: u64| a + b * n as i128 > 0;
        let len = self.stages.len() as u64;
        if let Some(n) = (0..len).find(|&n| self.stages[n as usize][i] && positive(n)) {
            return Some(n);
        }
        if b <= 0 {
            return None;
        }
        let period = len - self.cycle_start as u64;
        let threshold = f.first_exceeding(g, len)?;
        (self.cycle_start as u64..len)
            .filter(|&p| self.stages[p as usize][i])
            .map(|p| threshold + (p as i128 - threshold as i128).rem_euclid(period as i128) as u64)
            .min()
    }
}

/// Where a stationary profile leads from a shape entered at stage `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamResult {
    /// Reaches a leaf after `advances` stage increments; `outcome` is affine
    /// in the entry stage.
    ConvergesAffine {
        path: Vec<String>,
        advances: u64,
        outcome: AffineOutcome,
    },
    Divergent {
        stem: Vec<String>,
        cycle: Vec<String>,
    },
}

impl ParamResult {
    pub fn outcome(&self) -> Option<&AffineOutcome> {
        match self {
            ParamResult::ConvergesAffine { outcome, .. } => Some(outcome),
            ParamResult::Divergent { .. } => None,
        }
    }
}

/// Symbolic subgame-perfection check of a stationary profile, for every
/// stage at which each shape can be entered. Shapes the start never leads
/// to are checked at every stage.
pub fn check_spe_param(game: &ParametricGame, profile: &StationaryProfile) -> Result<SpeReport> {
    game.check_profile(profile)?;
    let induced: IndexMap<&str, ParamResult> = game
        .shapes
        .keys()
        .map(|n| (n.as_str(), game.follow(profile, n)))
        .collect();
    let entry = game.entry_stages();
    let divergent_from = induced
        .iter()
        .filter(|(_, r)| r.outcome().is_none())
        .map(|(n, _)| n.to_string())
        .collect();
    let mut violations = Vec::new();
    for (name, shape) in &game.shapes {
        let owner = shape.owner;
        let reachable = entry.is_reachable(name);
        let mine = induced[name.as_str()].outcome().map(|o| o.value(owner));
        for (label, m) in &shape.moves {
            if Some(label) == profile.choice(name) {
                continue;
            }
            let theirs = match m {
                Move::Leaf(o) => Some(o.value(owner)),
                Move::Advance(t) => induced[t.as_str()].outcome().map(|o| o.value(owner).shift(1)),
            };
            let witness = match (theirs, mine) {
                (None, _) => None,
                (Some(_), None) => Some(entry.first(name).unwrap_or(0)),
                (Some(dev), Some(prof)) if reachable => entry.first_exceeding(name, dev, prof),
                (Some(dev), Some(prof)) => dev.first_exceeding(prof, 0),
            };
            if let Some(stage) = witness {
                violations.push(Violation {
                    at: name.clone(),
                    owner,
                    action: label.clone(),
                    profile_value: mine.map_or(Payoff::Divergent, Payoff::Affine),
                    deviation_value: theirs.map_or(Payoff::Divergent, Payoff::Affine),
                    witness_stage: Some(stage),
                });
            }
        }
    }
    Ok(SpeReport::new(violations, divergent_from))
}

/// Every stationary profile accepted by [`check_spe_param`], in canonical order.
pub fn enumerate_stationary_spe(game: &ParametricGame) -> Result<Vec<StationaryProfile>> {
    let size: u128 = game.shapes.values().map(|s| s.moves.len() as u128).product();
    if size > crate::cyclic::DEFAULT_SEARCH_LIMIT {
        return Err(Error::SearchSpaceTooLarge {
            size,
            limit: crate::cyclic::DEFAULT_SEARCH_LIMIT,
        });
    }
    let mut accepted = Vec::new();
    for p in game.all_profiles() {
        if check_spe_param(game, &p)?.is_ok() {
            accepted.push(p);
        }
    }
    Ok(accepted)
}

/// Shape names of [`dollar_auction`].
pub mod auction_shapes {
    /// Alice's opening move at stage 0.
    pub const OPENING: &str = "A0";
    /// Bertrand to move at an odd stage `n ≥ 1`.
    pub const BERTRAND: &str = "B";
    /// Alice to move at an even stage `n ≥ 2`.
    pub const ALICE: &str = "A";
}

/// Two-bidder all-pay ascending auction for an object worth `value`, unit
/// increments. At stage `n` the mover either abandons or bids `n + 1`.
/// Abandoning at `n ≥ 1` costs the mover their standing bid `n − 1` and
/// hands the object to the opponent at price `n`; abandoning at stage 0
/// leaves both with nothing.
pub fn dollar_auction(value: i64) -> Result<ParametricGame> {
    use auction_shapes::*;
    if value < 1 {
        return Err(Error::InvalidValue(value));
    }
    let winner = AffineValue::new(value, -1);
    let loser = AffineValue::new(1, -1);
    ParametricGame::new(
        OPENING,
        [
            (
                OPENING,
                PlayerId::ALICE,
                vec![
                    (
                        "a",
                        Move::Leaf(AffineOutcome::pair(AffineValue::constant(0), AffineValue::constant(0))),
                    ),
                    ("c", Move::Advance(BERTRAND.into())),
                ],
            ),
            (
                BERTRAND,
                PlayerId::BERTRAND,
                vec![
                    ("a", Move::Leaf(AffineOutcome::pair(winner, loser))),
                    ("c", Move::Advance(ALICE.into())),
                ],
            ),
            (
                ALICE,
                PlayerId::ALICE,
                vec![
                    ("a", Move::Leaf(AffineOutcome::pair(loser, winner))),
                    ("c", Move::Advance(BERTRAND.into())),
                ],
            ),
        ],
    )
}

/// The stationary profiles of [`dollar_auction`] in which Alice always bids
/// and Bertrand always drops out, and vice versa, and the one in which
/// nobody ever bids.
pub mod auction_profiles {
    use super::{auction_shapes::*, StationaryProfile};

    pub fn alice_continues() -> StationaryProfile {
        StationaryProfile::new([(OPENING, "c"), (BERTRAND, "a"), (ALICE, "c")])
    }

    pub fn bertrand_continues() -> StationaryProfile {
        StationaryProfile::new([(OPENING, "a"), (BERTRAND, "c"), (ALICE, "a")])
    }

    pub fn never_bid() -> StationaryProfile {
        StationaryProfile::new([(OPENING, "a"), (BERTRAND, "a"), (ALICE, "a")])
    }

    pub fn both_continue() -> StationaryProfile {
        StationaryProfile::new([(OPENING, "c"), (BERTRAND, "c"), (ALICE, "c")])
    }
}
