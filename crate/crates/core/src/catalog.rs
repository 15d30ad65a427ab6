//! The bundled games: sequential matching pennies, the 0,1 games in finite,
//! cyclic and stage-parametric form, and the two normal-form examples.

use crate::cyclic::{CyclicGame, Target};
use crate::game::{FiniteGame, Outcome, PlayerId};
use crate::matrix::{MatrixGame, Rational};
use crate::parametric::ParametricGame;

/// Alice plays, then Bertrand, then Alice again; every consecutive match
/// scores a point for Alice, every mismatch a point for Bertrand.
/// Branch order is `p` (heads) before `f` (tails).
pub fn sequential_matching_pennies() -> FiniteGame {
    fn score(moves: &[bool]) -> Outcome {
        let matches = moves.windows(2).filter(|w| w[0] == w[1]).count() as i64;
        Outcome::pair(matches, moves.len() as i64 - 1 - matches)
    }
    fn build(moves: &mut Vec<bool>) -> FiniteGame {
        if moves.len() == 3 {
            return FiniteGame::Leaf(score(moves));
        }
        let owner = if moves.len() == 1 {
            PlayerId::BERTRAND
        } else {
            PlayerId::ALICE
        };
        let mut branches = Vec::new();
        for (label, heads) in [("p", true), ("f", false)] {
            moves.push(heads);
            branches.push((label, build(moves)));
            moves.pop();
        }
        FiniteGame::node(owner, branches)
    }
    build(&mut Vec::new())
}

/// Payoff when `player` abandons the 0,1 game: the opponent gets 1.
pub fn zero_one_abandon(player: PlayerId) -> Outcome {
    if player == PlayerId::ALICE {
        Outcome::pair(0, 1)
    } else {
        Outcome::pair(1, 0)
    }
}

/// The finite 0,1 game with `rounds` decision nodes, Alice first. Each
/// mover abandons (`a`) or continues (`c`); continuing past the last round
/// ends the game as if the next mover had abandoned.
pub fn zero_one(rounds: usize) -> FiniteGame {
    let mut game = FiniteGame::Leaf(zero_one_abandon(mover_at(rounds)));
    for round in (0..rounds).rev() {
        let owner = mover_at(round);
        game = FiniteGame::node(owner, [("a", FiniteGame::Leaf(zero_one_abandon(owner))), ("c", game)]);
    }
    game
}

fn mover_at(round: usize) -> PlayerId {
    PlayerId(round % 2)
}

/// The infinite 0,1 game folded into two nodes `A` and `B` that continue
/// into each other.
pub fn zero_one_cyclic() -> CyclicGame {
    CyclicGame::new(
        "A",
        [
            (
                "A",
                PlayerId::ALICE,
                vec![
                    ("a", Target::Leaf(zero_one_abandon(PlayerId::ALICE))),
                    ("c", Target::node("B")),
                ],
            ),
            (
                "B",
                PlayerId::BERTRAND,
                vec![
                    ("a", Target::Leaf(zero_one_abandon(PlayerId::BERTRAND))),
                    ("c", Target::node("A")),
                ],
            ),
        ],
    )
    .expect("well-formed")
}

/// The infinite 0,1 game as a stage-parametric game with constant payoffs.
pub fn zero_one_parametric() -> ParametricGame {
    ParametricGame::from_cyclic(&zero_one_cyclic())
}

/// Rock-paper-scissors counting wins: 1 for a win, 0 for a loss, 1/2 for a
/// tie, constant sum 1. Strategy order is rock, paper, scissors.
pub fn rock_paper_scissors() -> MatrixGame {
    let h = Rational::new(1, 2);
    let (one, zero) = (Rational::from_integer(1), Rational::from_integer(0));
    MatrixGame::new(
        vec![vec![h, zero, one], vec![one, h, zero], vec![zero, one, h]],
        Rational::from_integer(1),
    )
    .expect("well-formed")
}

/// Rock-paper-scissors as a zero-sum game with win 1, loss -1, tie 0.
pub fn rock_paper_scissors_zero_sum() -> MatrixGame {
    let m = [[0, -1, 1], [1, 0, -1], [-1, 1, 0]];
    MatrixGame::new(
        m.iter()
            .map(|row| row.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect(),
        Rational::from_integer(0),
    )
    .expect("well-formed")
}

/// Simultaneous matching pennies: Alice scores on a match.
pub fn matching_pennies() -> MatrixGame {
    let (one, zero) = (Rational::from_integer(1), Rational::from_integer(0));
    MatrixGame::new(vec![vec![one, zero], vec![zero, one]], one).expect("well-formed")
}
