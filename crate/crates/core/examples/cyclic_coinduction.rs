//! Positional equilibria of the infinite 0,1 game, folded into a graph
//! with two nodes.
//!
//! ```bash
//! cargo run --example cyclic_coinduction
//! ```

use escalade::catalog::zero_one_cyclic;
use escalade::cyclic::all_profiles;
use escalade::{check_spe_cyclic, enumerate_positional_spe};

fn main() -> escalade::Result<()> {
    let game = zero_one_cyclic();
    let points: Vec<_> = game
        .nodes()
        .iter()
        .map(|(name, node)| (name.as_str(), node.edges.iter().map(|(l, _)| l).collect()))
        .collect();
    for profile in all_profiles(&points) {
        let induced = game.induced_outcome(&profile, game.start())?;
        let report = check_spe_cyclic(&game, &profile)?;
        println!("{profile}: {induced}");
        print!("{report}");
    }
    let eq = enumerate_positional_spe(&game)?;
    println!("\n{} positional equilibria", eq.len());
    for p in eq {
        println!("  {p}");
    }
    Ok(())
}
