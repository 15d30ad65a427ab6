//! Backward induction on sequential matching pennies.
//!
//! ```bash
//! cargo run --example sequential_matching_pennies
//! ```

use escalade::catalog::sequential_matching_pennies;
use escalade::dsl::{tree_profile_text, GameBody, GameDoc};
use escalade::{check_spe, solve, TiePolicy, TreeProfile};

fn main() -> escalade::Result<()> {
    let game = sequential_matching_pennies();
    print!("{}", GameDoc::new(GameBody::Finite(game.clone())));

    println!("\nplay lines:");
    for (line, outcome) in game.play_lines() {
        println!("  {line}  {outcome}");
    }

    // ties between equally good branches can go either way
    for ties in [TiePolicy::FirstBranch, TiePolicy::LastBranch] {
        let profile = solve(&game, ties)?;
        let (play, outcome) = game.induced_play(&profile)?;
        println!("\n{ties:?}: play {play}, outcome {outcome}");
        print!("{}", tree_profile_text(&game, &profile)?);
    }

    let first = solve(&game, TiePolicy::FirstBranch)?;
    let flipped: Vec<(String, String)> = first
        .choices(&game)?
        .into_iter()
        .map(|(path, label)| {
            let path = path.as_path();
            let label = if path == "/p/f" {
                "p".to_string()
            } else {
                label.to_string()
            };
            (path, label)
        })
        .collect();
    let bad = TreeProfile::from_choices(&game, flipped.iter().map(|(p, l)| (p.as_str(), l.as_str())))?;
    println!("\nafter switching the choice at /p/f:");
    print!("{}", check_spe(&game, &bad)?);
    Ok(())
}
