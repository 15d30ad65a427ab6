//! Helpers shared by the integration tests: a seeded generator of small
//! games and a brute-force subgame-perfection oracle that does not use the
//! library's solvers.

#![allow(dead_code)]

use escalade::cyclic::Target;
use escalade::dsl::{GameBody, GameDoc};
use escalade::parametric::Move;
use escalade::{
    ActionLabel, AffineOutcome, AffineValue, CyclicGame, FiniteGame, MatrixGame, Outcome, ParametricGame, PlayerId,
    Rational, TreeProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random two-player tree with at most `max_nodes` nodes (leaves
/// included) and payoffs in `0..=max_payoff`, so ties are common.
pub fn random_game(seed: u64, max_nodes: usize, max_payoff: i64) -> FiniteGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = grow(&mut rng, 0, max_payoff);
        if g.node_count() <= max_nodes {
            return g;
        }
    }
}

fn grow(rng: &mut ChaCha8Rng, depth: usize, max_payoff: i64) -> FiniteGame {
    if depth >= 4 || (depth > 0 && rng.gen_bool(0.4)) {
        return FiniteGame::leaf(rng.gen_range(0..=max_payoff), rng.gen_range(0..=max_payoff));
    }
    let owner = PlayerId(rng.gen_range(0..2));
    let k = rng.gen_range(1..=3);
    let branches: Vec<(String, FiniteGame)> = (0..k)
        .map(|i| (format!("m{i}"), grow(rng, depth + 1, max_payoff)))
        .collect();
    FiniteGame::node(owner, branches.iter().map(|(l, g)| (l.as_str(), g.clone())))
}

/// Every pure profile of `g`.
pub fn all_profiles(g: &FiniteGame) -> Vec<TreeProfile> {
    match g {
        FiniteGame::Leaf(_) => vec![TreeProfile::Leaf],
        FiniteGame::Node { branches, .. } => {
            let mut combos: Vec<Vec<TreeProfile>> = vec![Vec::new()];
            for (_, child) in branches {
                let subs = all_profiles(child);
                combos = combos
                    .into_iter()
                    .flat_map(|prefix| {
                        subs.iter().map(move |s| {
                            let mut v = prefix.clone();
                            v.push(s.clone());
                            v
                        })
                    })
                    .collect();
            }
            combos
                .into_iter()
                .flat_map(|children| {
                    branches.iter().map(move |(l, _)| TreeProfile::Node {
                        choice: l.clone(),
                        children: children.clone(),
                    })
                })
                .collect()
        }
    }
}

/// Outcome reached by following `p` from the root of `g`.
pub fn play_out(g: &FiniteGame, p: &TreeProfile) -> Outcome {
    match (g, p) {
        (FiniteGame::Leaf(o), _) => o.clone(),
        (FiniteGame::Node { branches, .. }, TreeProfile::Node { choice, children }) => {
            let i = branches.iter().position(|(l, _)| l == choice).unwrap();
            play_out(&branches[i].1, &children[i])
        }
        _ => panic!("profile does not fit the game"),
    }
}

/// No player gains by changing their choice at any single node, every node
/// considered, reached or not.
pub fn is_spe(g: &FiniteGame, p: &TreeProfile) -> bool {
    match (g, p) {
        (FiniteGame::Leaf(_), _) => true,
        (FiniteGame::Node { owner, branches }, TreeProfile::Node { children, .. }) => {
            let here = play_out(g, p).utility(*owner);
            let no_gain = branches
                .iter()
                .zip(children)
                .all(|((_, b), c)| play_out(b, c).utility(*owner) <= here);
            no_gain && branches.iter().zip(children).all(|((_, b), c)| is_spe(b, c))
        }
        _ => panic!("profile does not fit the game"),
    }
}

/// Brute-force equilibria, sorted like the library's canonical order
/// (preorder branch indices, lexicographic).
pub fn brute_force_equilibria(g: &FiniteGame) -> Vec<TreeProfile> {
    let mut eq: Vec<TreeProfile> = all_profiles(g).into_iter().filter(|p| is_spe(g, p)).collect();
    eq.sort_by_key(|p| indices(g, p));
    eq
}

pub fn indices(g: &FiniteGame, p: &TreeProfile) -> Vec<usize> {
    let mut out = Vec::new();
    fn go(g: &FiniteGame, p: &TreeProfile, out: &mut Vec<usize>) {
        if let (FiniteGame::Node { branches, .. }, TreeProfile::Node { choice, children }) = (g, p) {
            out.push(branches.iter().position(|(l, _)| l == choice).unwrap());
            for ((_, b), c) in branches.iter().zip(children) {
                go(b, c, out);
            }
        }
    }
    go(g, p, &mut out);
    out
}

/// Choice at the node reached by `path`.
pub fn choice_at<'a>(g: &FiniteGame, p: &'a TreeProfile, path: &[&str]) -> &'a ActionLabel {
    let (mut g, mut p) = (g, p);
    for step in path {
        let (FiniteGame::Node { branches, .. }, TreeProfile::Node { children, .. }) = (g, p) else {
            panic!("path leaves the tree");
        };
        let i = branches.iter().position(|(l, _)| l.as_str() == *step).unwrap();
        g = &branches[i].1;
        p = &children[i];
    }
    match p {
        TreeProfile::Node { choice, .. } => choice,
        TreeProfile::Leaf => panic!("path ends at a leaf"),
    }
}

fn name(rng: &mut ChaCha8Rng, prefix: &str, i: usize) -> String {
    if rng.gen_bool(0.5) {
        format!("{prefix}{i}")
    } else {
        format!("{prefix}_{i}x")
    }
}

/// Name, owner and labelled edges of one node of a random graph.
type Point<T> = (String, PlayerId, Vec<(String, T)>);

/// A random document of any of the four kinds, with varied player and
/// node names, negative payoffs and non-integer matrix entries.
pub fn random_doc(seed: u64) -> GameDoc {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let players = ["Alice", "Bertrand", "Ann", "Bob", "p_1", "Q"];
    let a = rng.gen_range(0..players.len());
    let mut b = rng.gen_range(0..players.len() - 1);
    if b >= a {
        b += 1;
    }
    let body = match rng.gen_range(0..4) {
        0 => {
            GameBody::Finite(random_game(rng.gen(), 15, 9).map_outcomes(&|o| o.map_player(PlayerId::ALICE, |u| u - 4)))
        }
        1 => {
            let n = rng.gen_range(1..=4);
            let names: Vec<String> = (0..n).map(|i| name(&mut rng, "N", i)).collect();
            let nodes: Vec<Point<Target>> = names
                .iter()
                .map(|node| {
                    let edges = (0..rng.gen_range(1..=3))
                        .map(|j| {
                            let t = if rng.gen_bool(0.5) {
                                Target::node(&names[rng.gen_range(0..n)])
                            } else {
                                Target::Leaf(Outcome::pair(rng.gen_range(-9..=9), rng.gen_range(-9..=9)))
                            };
                            (format!("e{j}"), t)
                        })
                        .collect();
                    (node.clone(), PlayerId(rng.gen_range(0..2)), edges)
                })
                .collect();
            let start = names[rng.gen_range(0..n)].clone();
            GameBody::Cyclic(
                CyclicGame::new(&start, nodes.iter().map(|(s, o, e)| (s.as_str(), *o, e.clone()))).unwrap(),
            )
        }
        2 => {
            let n = rng.gen_range(1..=4);
            let names: Vec<String> = (0..n).map(|i| name(&mut rng, "S", i)).collect();
            let affine = |rng: &mut ChaCha8Rng| AffineValue::new(rng.gen_range(-50..=50), rng.gen_range(-3..=3));
            let shapes: Vec<Point<Move>> = names
                .iter()
                .map(|shape| {
                    let moves = (0..rng.gen_range(1..=3))
                        .map(|j| {
                            let m = if rng.gen_bool(0.5) {
                                Move::Advance(names[rng.gen_range(0..n)].clone())
                            } else {
                                Move::Leaf(AffineOutcome::pair(affine(&mut rng), affine(&mut rng)))
                            };
                            (format!("m{j}"), m)
                        })
                        .collect();
                    (shape.clone(), PlayerId(rng.gen_range(0..2)), moves)
                })
                .collect();
            let start = names[rng.gen_range(0..n)].clone();
            GameBody::Parametric(
                ParametricGame::new(&start, shapes.iter().map(|(s, o, m)| (s.as_str(), *o, m.clone()))).unwrap(),
            )
        }
        _ => {
            let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let rat = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-20..=20), rng.gen_range(1..=6));
            let m = (0..rows).map(|_| (0..cols).map(|_| rat(&mut rng)).collect()).collect();
            let sum = rat(&mut rng);
            GameBody::Matrix(MatrixGame::new(m, sum).unwrap())
        }
    };
    GameDoc {
        players: [players[a].to_string(), players[b].to_string()],
        body,
    }
}
