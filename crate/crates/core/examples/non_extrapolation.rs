//! Cutting the infinite 0,1 game after d rounds: the backward-induction
//! outcome flips with the parity of d, so no finite cut predicts the
//! infinite game.
//!
//! ```bash
//! cargo run --example non_extrapolation
//! ```

use escalade::catalog::{zero_one_abandon, zero_one_cyclic};
use escalade::finite::DEFAULT_CAP;
use escalade::{enumerate_equilibria, PlayerId};

fn main() -> escalade::Result<()> {
    let game = zero_one_cyclic();
    println!("depth  equilibria  outcomes");
    for depth in 1..=12 {
        // the player who would move next abandons at the cut
        let tree = game.unfold(depth, &zero_one_abandon(PlayerId(depth % 2)));
        let eq = enumerate_equilibria(&tree, DEFAULT_CAP)?;
        let mut outcomes: Vec<String> = eq.play_lines(&tree)?.into_iter().map(|(_, o)| o.to_string()).collect();
        outcomes.dedup();
        println!("{depth:>5}  {:>10}  {}", eq.profiles.len(), outcomes.join(" "));
    }
    Ok(())
}
