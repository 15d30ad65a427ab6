//! Every backward-induction profile of the 0,1 game cut after a fixed
//! number of rounds.
//!
//! ```bash
//! cargo run --example zero_one_finite -- 7
//! ```

use std::env;

use escalade::catalog::zero_one;
use escalade::dsl::tree_profile_text;
use escalade::enumerate_equilibria;
use escalade::finite::DEFAULT_CAP;

fn main() -> escalade::Result<()> {
    let rounds: usize = env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(7);
    let game = zero_one(rounds);
    let eq = enumerate_equilibria(&game, DEFAULT_CAP)?;
    println!(
        "{rounds} rounds: {} equilibria{}",
        eq.profiles.len(),
        if eq.truncated { " (truncated)" } else { "" }
    );
    for (i, profile) in eq.profiles.iter().enumerate() {
        let (play, outcome) = game.induced_play(profile)?;
        println!("\n[{i}] play {play}, outcome {outcome}");
        print!("{}", tree_profile_text(&game, profile)?);
    }
    Ok(())
}
