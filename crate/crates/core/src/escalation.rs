//! Escalation as the composition of two individually rational beliefs.
//!
//! Each player holds a belief: a stationary equilibrium of the game. The
//! player acts according to their own belief at their own decision points.
//! When each believes the *other* will eventually abandon, the composed play
//! never reaches a leaf.
//!
//! The simulator models memoryless agents: at every turn the mover picks
//! one of the equilibria afresh and plays their own move in it.
//!
//! # Randomness
//!
//! Traces are generated with ChaCha8 (`rand_chacha::ChaCha8Rng`), seeded
//! through `SeedableRng::seed_from_u64(seed)`. Under the uniform policy each
//! turn draws one `u32` `x` and picks belief index `(x · k) >> 32` among `k`
//! equilibria. No other draws are made.

use std::fmt;
use std::io::{self, Write};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclic::{check_spe_cyclic, enumerate_positional_spe, CyclicGame, PositionalProfile, Target};
use crate::error::{Error, Result};
use crate::game::{ActionLabel, Outcome, PlayerId};
use crate::parametric::{check_spe_param, enumerate_stationary_spe, Move, ParametricGame};

/// A game with named decision points and memoryless profiles: the cyclic
/// and stage-parametric representations.
pub trait StationaryGame {
    fn start_point(&self) -> &str;

    /// Decision points with their owners, in declaration order.
    fn points(&self) -> Vec<(&str, PlayerId)>;

    fn owner_of(&self, point: &str) -> Result<PlayerId>;

    /// Concrete effect of playing `action` at `point` when the current stage is `stage`.
    fn step(&self, point: &str, action: &ActionLabel, stage: u64) -> Result<Step>;

    fn validate_profile(&self, profile: &PositionalProfile) -> Result<()>;

    fn is_equilibrium(&self, profile: &PositionalProfile) -> Result<bool>;

    fn equilibria(&self) -> Result<Vec<PositionalProfile>>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Leaf(Outcome),
    Next(String),
}

impl StationaryGame for CyclicGame {
    fn start_point(&self) -> &str {
        self.start()
    }

    fn points(&self) -> Vec<(&str, PlayerId)> {
        self.nodes().iter().map(|(n, node)| (n.as_str(), node.owner)).collect()
    }

    fn owner_of(&self, point: &str) -> Result<PlayerId> {
        self.node(point).map(|n| n.owner)
    }

    fn step(&self, point: &str, action: &ActionLabel, _stage: u64) -> Result<Step> {
        let node = self.node(point)?;
        match node.edge(action) {
            Some(Target::Leaf(o)) => Ok(Step::Leaf(o.clone())),
            Some(Target::Node(n)) => Ok(Step::Next(n.clone())),
            None => Err(Error::ShapeMismatch(format!("`{action}` is not a move of `{point}`"))),
        }
    }

    fn validate_profile(&self, profile: &PositionalProfile) -> Result<()> {
        profile.check_for(self)
    }

    fn is_equilibrium(&self, profile: &PositionalProfile) -> Result<bool> {
        Ok(check_spe_cyclic(self, profile)?.is_ok())
    }

    fn equilibria(&self) -> Result<Vec<PositionalProfile>> {
        enumerate_positional_spe(self)
    }
}

impl StationaryGame for ParametricGame {
    fn start_point(&self) -> &str {
        self.start()
    }

    fn points(&self) -> Vec<(&str, PlayerId)> {
        self.shapes().iter().map(|(n, s)| (n.as_str(), s.owner)).collect()
    }

    fn owner_of(&self, point: &str) -> Result<PlayerId> {
        self.shape(point).map(|s| s.owner)
    }

    fn step(&self, point: &str, action: &ActionLabel, stage: u64) -> Result<Step> {
        match self.shape(point)?.get(action) {
            Some(Move::Leaf(o)) => Ok(Step::Leaf(o.eval(stage))),
            Some(Move::Advance(s)) => Ok(Step::Next(s.clone())),
            None => Err(Error::ShapeMismatch(format!("`{action}` is not a move of `{point}`"))),
        }
    }

    fn validate_profile(&self, profile: &PositionalProfile) -> Result<()> {
        self.check_profile(profile)
    }

    fn is_equilibrium(&self, profile: &PositionalProfile) -> Result<bool> {
        Ok(check_spe_param(self, profile)?.is_ok())
    }

    fn equilibria(&self) -> Result<Vec<PositionalProfile>> {
        enumerate_stationary_spe(self)
    }
}

/// What each player believes the whole profile to be.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BeliefPair {
    pub belief_of_alice: PositionalProfile,
    pub belief_of_bertrand: PositionalProfile,
}

impl BeliefPair {
    pub fn new(belief_of_alice: PositionalProfile, belief_of_bertrand: PositionalProfile) -> Self {
        BeliefPair {
            belief_of_alice,
            belief_of_bertrand,
        }
    }

    pub fn of(&self, player: PlayerId) -> &PositionalProfile {
        if player == PlayerId::ALICE {
            &self.belief_of_alice
        } else {
            &self.belief_of_bertrand
        }
    }

    pub fn swapped(&self) -> Self {
        BeliefPair::new(self.belief_of_bertrand.clone(), self.belief_of_alice.clone())
    }
}

/// The profile actually played: every point takes its owner's own choice
/// from its owner's belief.
pub fn compose_beliefs<G: StationaryGame + ?Sized>(game: &G, beliefs: &BeliefPair) -> Result<PositionalProfile> {
    game.validate_profile(&beliefs.belief_of_alice)?;
    game.validate_profile(&beliefs.belief_of_bertrand)?;
    let mut effective = PositionalProfile::default();
    for (point, owner) in game.points() {
        let choice = beliefs.of(owner).choice(point).expect("validated");
        effective.set(point, choice.clone());
    }
    Ok(effective)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EscalationVerdict {
    /// Play walks `stem` once and then repeats `cycle` forever; every pass
    /// through the cycle raises the stage.
    Escalates { stem: Vec<String>, cycle: Vec<String> },
    /// Play reaches a leaf after `stage` moves.
    Terminates { stage: u64, outcome: Outcome },
}

impl EscalationVerdict {
    pub fn escalates(&self) -> bool {
        matches!(self, EscalationVerdict::Escalates { .. })
    }
}

impl fmt::Display for EscalationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EscalationVerdict::Escalates { stem, cycle } => {
                let mut walk: Vec<&str> = stem.iter().chain(cycle).map(String::as_str).collect();
                walk.push(&cycle[0]);
                write!(f, "escalates: {} -> ...", walk.join(" -> "))
            }
            EscalationVerdict::Terminates { stage, outcome } => {
                write!(f, "terminates at stage {stage} with {outcome}")
            }
        }
    }
}

/// Plays the composed profile from the start. A repeated decision point
/// proves divergence, since the profile is memoryless.
pub fn detect_escalation<G: StationaryGame + ?Sized>(
    game: &G,
    beliefs: &BeliefPair,
    require_equilibria: bool,
) -> Result<EscalationVerdict> {
    let effective = compose_beliefs(game, beliefs)?;
    if require_equilibria {
        for player in [PlayerId::ALICE, PlayerId::BERTRAND] {
            if !game.is_equilibrium(beliefs.of(player))? {
                return Err(Error::BeliefNotEquilibrium(player));
            }
        }
    }
    let mut path: Vec<String> = Vec::new();
    let mut here = game.start_point().to_string();
    loop {
        if let Some(i) = path.iter().position(|p| *p == here) {
            let cycle = path.split_off(i);
            return Ok(EscalationVerdict::Escalates { stem: path, cycle });
        }
        let stage = path.len() as u64;
        let step = game.step(&here, effective.choice(&here).expect("composed"), stage)?;
        path.push(here);
        match step {
            Step::Leaf(outcome) => return Ok(EscalationVerdict::Terminates { stage, outcome }),
            Step::Next(next) => here = next,
        }
    }
}

/// How a memoryless mover picks a belief at each turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum BeliefSelection {
    /// Uniformly at random among the equilibria.
    Uniform,
    /// Alice always uses equilibrium `alice`, Bertrand always `bertrand`.
    FixedIndex { alice: usize, bertrand: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimStep {
    pub stage: u64,
    pub mover: PlayerId,
    pub belief_index: usize,
    pub action: ActionLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimEnd {
    Leaf { outcome: Outcome },
    HorizonHit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimTrace {
    pub seed: u64,
    pub steps: Vec<SimStep>,
    pub end: SimEnd,
}

impl SimTrace {
    pub fn hit_horizon(&self) -> bool {
        self.end == SimEnd::HorizonHit
    }

    pub fn outcome(&self) -> Option<&Outcome> {
        match &self.end {
            SimEnd::Leaf { outcome } => Some(outcome),
            SimEnd::HorizonHit => None,
        }
    }

    /// Line-delimited records `stage,mover,belief_index,action`, then one
    /// terminal line: `end,leaf,<u0>,<u1>` or `end,horizon,<steps>`.
    pub fn write_records(&self, mut out: impl Write) -> io::Result<()> {
        for s in &self.steps {
            writeln!(out, "{},{},{},{}", s.stage, s.mover, s.belief_index, s.action)?;
        }
        match &self.end {
            SimEnd::Leaf { outcome } => {
                let values: Vec<_> = outcome.values().iter().map(ToString::to_string).collect();
                writeln!(out, "end,leaf,{}", values.join(","))
            }
            SimEnd::HorizonHit => writeln!(out, "end,horizon,{}", self.steps.len()),
        }
    }

    pub fn to_records(&self) -> String {
        let mut buf = Vec::new();
        self.write_records(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii records")
    }
}

/// Runs memoryless agents for at most `horizon` moves. `equilibria` is the
/// pool both players draw their beliefs from.
pub fn simulate<G: StationaryGame + ?Sized>(
    game: &G,
    equilibria: &[PositionalProfile],
    horizon: u64,
    seed: u64,
    selection: BeliefSelection,
) -> Result<SimTrace> {
    if equilibria.is_empty() {
        return Err(Error::NoEquilibria);
    }
    for e in equilibria {
        game.validate_profile(e)?;
    }
    if let BeliefSelection::FixedIndex { alice, bertrand } = selection {
        let bad = alice.max(bertrand);
        if bad >= equilibria.len() {
            return Err(Error::DimensionMismatch {
                expected: equilibria.len(),
                found: bad + 1,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = Vec::new();
    let mut here = game.start_point().to_string();
    for stage in 0..horizon {
        let mover = game.owner_of(&here)?;
        let belief_index = match selection {
            BeliefSelection::Uniform => pick(&mut rng, equilibria.len()),
            BeliefSelection::FixedIndex { alice, bertrand } => {
                if mover == PlayerId::ALICE {
                    alice
                } else {
                    bertrand
                }
            }
        };
        let action = equilibria[belief_index].choice(&here).expect("validated").clone();
        let step = game.step(&here, &action, stage)?;
        steps.push(SimStep {
            stage,
            mover,
            belief_index,
            action,
        });
        match step {
            Step::Leaf(outcome) => {
                return Ok(SimTrace {
                    seed,
                    steps,
                    end: SimEnd::Leaf { outcome },
                })
            }
            Step::Next(next) => here = next,
        }
    }
    Ok(SimTrace {
        seed,
        steps,
        end: SimEnd::HorizonHit,
    })
}

fn pick(rng: &mut ChaCha8Rng, k: usize) -> usize {
    ((rng.next_u32() as u64 * k as u64) >> 32) as usize
}

/// Fraction of turns that ended the game, over a batch of traces.
pub fn stopping_frequency(traces: &[SimTrace]) -> f64 {
    let turns: usize = traces.iter().map(|t| t.steps.len()).sum();
    let stops = traces.iter().filter(|t| !t.hit_horizon()).count();
    stops as f64 / turns as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::zero_one_cyclic;

    #[test]
    fn horizon_zero_is_an_empty_trace() {
        let g = zero_one_cyclic();
        let eqs = g.equilibria().unwrap();
        let t = simulate(&g, &eqs, 0, 7, BeliefSelection::Uniform).unwrap();
        assert!(t.steps.is_empty());
        assert!(t.hit_horizon());
        assert_eq!(t.to_records(), "end,horizon,0\n");
    }

    #[test]
    fn empty_pool_is_an_error() {
        let g = zero_one_cyclic();
        assert_eq!(
            simulate(&g, &[], 5, 0, BeliefSelection::Uniform),
            Err(Error::NoEquilibria)
        );
    }

    #[test]
    fn fixed_index_out_of_range() {
        let g = zero_one_cyclic();
        let eqs = g.equilibria().unwrap();
        let r = simulate(&g, &eqs, 5, 0, BeliefSelection::FixedIndex { alice: 0, bertrand: 2 });
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn require_equilibria_names_the_offender() {
        let g = zero_one_cyclic();
        let good = PositionalProfile::new([("A", "a"), ("B", "c")]);
        let bad = PositionalProfile::new([("A", "a"), ("B", "a")]);
        let r = detect_escalation(&g, &BeliefPair::new(good.clone(), bad.clone()), true);
        assert_eq!(r, Err(Error::BeliefNotEquilibrium(PlayerId::BERTRAND)));
        let r = detect_escalation(&g, &BeliefPair::new(bad, good), false).unwrap();
        assert!(!r.escalates());
    }

    #[test]
    fn records_format() {
        let g = zero_one_cyclic();
        let eqs = g.equilibria().unwrap();
        let t = simulate(&g, &eqs, 10, 0, BeliefSelection::FixedIndex { alice: 1, bertrand: 1 }).unwrap();
        assert_eq!(t.to_records(), "0,0,1,c\n1,1,1,a\nend,leaf,1,0\n");
    }
}
