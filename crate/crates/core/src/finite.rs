//! Backward induction on finite trees.
//!
//! [`solve`] returns one equilibrium, [`enumerate_equilibria`] returns every
//! subgame-perfect profile (all combinations of tie resolutions), and
//! [`check_spe`] verifies the one-shot deviation property at every node,
//! reachable or not.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::Result;
use crate::game::{ActionLabel, FiniteGame, Outcome, PlayLine, PlayerId, TreeProfile, Utility};
use crate::report::{Payoff, SpeReport, Violation};

pub const DEFAULT_CAP: usize = 1024;

/// Which maximal branch backward induction keeps when several tie.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    FirstBranch,
    LastBranch,
}

/// One backward-induction equilibrium.
pub fn solve(game: &FiniteGame, ties: TiePolicy) -> Result<TreeProfile> {
    game.ensure_solvable()?;
    Ok(solve_node(game, ties).0)
}

fn solve_node(game: &FiniteGame, ties: TiePolicy) -> (TreeProfile, Outcome) {
    match game {
        FiniteGame::Leaf(o) => (TreeProfile::Leaf, o.clone()),
        FiniteGame::Node { owner, branches } => {
            let solved: Vec<_> = branches.iter().map(|(_, g)| solve_node(g, ties)).collect();
            let mut best = 0;
            for (i, (_, o)) in solved.iter().enumerate().skip(1) {
                let (u, b) = (o.utility(*owner), solved[best].1.utility(*owner));
                if u > b || (u == b && ties == TiePolicy::LastBranch) {
                    best = i;
                }
            }
            let outcome = solved[best].1.clone();
            let choice = branches[best].0.clone();
            let children = solved.into_iter().map(|(p, _)| p).collect();
            (TreeProfile::Node { choice, children }, outcome)
        }
    }
}

/// All subgame-perfect profiles of a game, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equilibria {
    pub profiles: Vec<TreeProfile>,
    /// Set when enumeration stopped at the cap.
    pub truncated: bool,
}

impl Equilibria {
    /// Induced play lines and outcomes, deduplicated, in order of first appearance.
    pub fn play_lines(&self, game: &FiniteGame) -> Result<Vec<(PlayLine, Outcome)>> {
        let mut seen = BTreeSet::new();
        let mut lines = Vec::new();
        for p in &self.profiles {
            let (line, outcome) = game.induced_play(p)?;
            if seen.insert(line.clone()) {
                lines.push((line, outcome));
            }
        }
        Ok(lines)
    }
}

/// Every backward-induction profile (one per combination of tie
/// resolutions), ordered lexicographically by the preorder sequence of
/// chosen branch indices, stopping after `cap` profiles.
pub fn enumerate_equilibria(game: &FiniteGame, cap: usize) -> Result<Equilibria> {
    game.ensure_solvable()?;
    let annotated = Annotated::new(game);
    let mut profiles = Vec::new();
    let mut truncated = false;
    if cap == 0 {
        return Ok(Equilibria {
            profiles,
            truncated: true,
        });
    }
    let _ = annotated.enumerate(&|_| true, &mut |p, _| {
        if profiles.len() == cap {
            truncated = true;
            return ControlFlow::Break(());
        }
        profiles.push(p);
        ControlFlow::Continue(())
    });
    Ok(Equilibria { profiles, truncated })
}

/// A game node paired with the set of outcomes some subgame-perfect profile
/// of its subtree induces. Computed once, bottom-up.
struct Annotated<'g> {
    game: &'g FiniteGame,
    reachable: BTreeSet<Outcome>,
    children: Vec<Annotated<'g>>,
}

type Emit<'e> = dyn FnMut(TreeProfile, &Outcome) -> ControlFlow<()> + 'e;

impl<'g> Annotated<'g> {
    fn new(game: &'g FiniteGame) -> Self {
        match game {
            FiniteGame::Leaf(o) => Annotated {
                game,
                reachable: BTreeSet::from([o.clone()]),
                children: Vec::new(),
            },
            FiniteGame::Node { owner, branches } => {
                let children: Vec<_> = branches.iter().map(|(_, g)| Annotated::new(g)).collect();
                let mins: Vec<_> = children.iter().map(|c| c.min_for(*owner)).collect();
                let mut reachable = BTreeSet::new();
                for (c, child) in children.iter().enumerate() {
                    let floor = max_excluding(&mins, c);
                    reachable.extend(child.reachable.iter().filter(|o| o.utility(*owner) >= floor).cloned());
                }
                Annotated {
                    game,
                    reachable,
                    children,
                }
            }
        }
    }

    fn min_for(&self, player: PlayerId) -> Utility {
        self.reachable
            .iter()
            .map(|o| o.utility(player))
            .min()
            .expect("nonempty")
    }

    /// Emits every subgame-perfect profile of this subtree whose outcome
    /// satisfies `allowed`. Constraints passed to children are chosen so that
    /// every partial assignment extends to at least one emitted profile.
    fn enumerate(&self, allowed: &dyn Fn(&Outcome) -> bool, emit: &mut Emit<'_>) -> ControlFlow<()> {
        let (owner, branches) = match self.game {
            FiniteGame::Leaf(o) => {
                return if allowed(o) {
                    emit(TreeProfile::Leaf, o)
                } else {
                    ControlFlow::Continue(())
                };
            }
            FiniteGame::Node { owner, branches } => (*owner, branches),
        };
        let mins: Vec<_> = self.children.iter().map(|c| c.min_for(owner)).collect();
        for c in 0..self.children.len() {
            let floor_others = max_excluding(&mins, c);
            let floor_after = mins[c + 1..].iter().copied().max().unwrap_or(Utility::MIN);
            // Highest value the chosen child can reach under the constraints.
            let Some(ceiling) = self.children[c]
                .reachable
                .iter()
                .filter(|o| allowed(o))
                .map(|o| o.utility(owner))
                .filter(|&u| u >= floor_others)
                .max()
            else {
                continue;
            };
            let ctx = Choice {
                node: self,
                owner,
                chosen: c,
                label: &branches[c].0,
                ceiling,
                floor_after,
                allowed,
            };
            ctx.product(0, &mut Vec::new(), Utility::MIN, None, emit)?;
        }
        ControlFlow::Continue(())
    }
}

/// State for enumerating the children of one node given its chosen branch.
struct Choice<'a, 'g> {
    node: &'a Annotated<'g>,
    owner: PlayerId,
    chosen: usize,
    label: &'a ActionLabel,
    ceiling: Utility,
    floor_after: Utility,
    allowed: &'a dyn Fn(&Outcome) -> bool,
}

impl Choice<'_, '_> {
    fn product(
        &self,
        index: usize,
        picked: &mut Vec<TreeProfile>,
        prev_max: Utility,
        chosen: Option<&Outcome>,
        emit: &mut Emit<'_>,
    ) -> ControlFlow<()> {
        if index == self.node.children.len() {
            let outcome = chosen.expect("chosen child visited");
            let profile = TreeProfile::Node {
                choice: self.label.clone(),
                children: picked.clone(),
            };
            return emit(profile, outcome);
        }
        let owner = self.owner;
        let child = &self.node.children[index];
        if index < self.chosen {
            let ceiling = self.ceiling;
            child.enumerate(&|o| o.utility(owner) <= ceiling, &mut |p, o| {
                picked.push(p);
                let flow = self.product(index + 1, picked, prev_max.max(o.utility(owner)), None, emit);
                picked.pop();
                flow
            })
        } else if index == self.chosen {
            let floor = prev_max.max(self.floor_after);
            let allowed = self.allowed;
            child.enumerate(&|o| allowed(o) && o.utility(owner) >= floor, &mut |p, o| {
                picked.push(p);
                let flow = self.product(index + 1, picked, prev_max, Some(o), emit);
                picked.pop();
                flow
            })
        } else {
            let chosen = chosen.expect("chosen child visited");
            let bound = chosen.utility(owner);
            child.enumerate(&|o| o.utility(owner) <= bound, &mut |p, _| {
                picked.push(p);
                let flow = self.product(index + 1, picked, prev_max, Some(chosen), emit);
                picked.pop();
                flow
            })
        }
    }
}

fn max_excluding(values: &[Utility], skip: usize) -> Utility {
    values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &v)| v)
        .max()
        .unwrap_or(Utility::MIN)
}

/// Checks the one-shot deviation property at every node of `game`.
pub fn check_spe(game: &FiniteGame, profile: &TreeProfile) -> Result<SpeReport> {
    profile.check_shape(game)?;
    let mut violations = Vec::new();
    follow_and_check(game, profile, &mut Vec::new(), &mut violations);
    Ok(SpeReport::new(violations, Vec::new()))
}

/// Returns the outcome `profile` induces from this node, recording
/// violations in preorder.
fn follow_and_check(
    game: &FiniteGame,
    profile: &TreeProfile,
    path: &mut Vec<ActionLabel>,
    violations: &mut Vec<Violation>,
) -> Outcome {
    match (game, profile) {
        (FiniteGame::Leaf(o), _) => o.clone(),
        (FiniteGame::Node { owner, branches }, TreeProfile::Node { choice, children }) => {
            let slot = violations.len();
            let mut values = Vec::with_capacity(branches.len());
            for ((l, g), p) in branches.iter().zip(children) {
                path.push(l.clone());
                values.push(follow_and_check(g, p, path, violations));
                path.pop();
            }
            let chosen = branches.iter().position(|(l, _)| l == choice).expect("checked shape");
            let mine = values[chosen].utility(*owner);
            let here: Vec<_> = branches
                .iter()
                .zip(&values)
                .filter(|(_, o)| o.utility(*owner) > mine)
                .map(|((l, _), o)| Violation {
                    at: PlayLine::new(path.clone()).as_path(),
                    owner: *owner,
                    action: l.clone(),
                    profile_value: Payoff::Utility(mine),
                    deviation_value: Payoff::Utility(o.utility(*owner)),
                    witness_stage: None,
                })
                .collect();
            violations.splice(slot..slot, here);
            values.swap_remove(chosen)
        }
        (FiniteGame::Node { .. }, TreeProfile::Leaf) => unreachable!("checked shape"),
    }
}
