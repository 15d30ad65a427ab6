//! Two players who each act on a different equilibrium: every local
//! choice is rational, yet play never ends.
//!
//! ```bash
//! cargo run --example escalation
//! ```

use escalade::catalog::zero_one_cyclic;
use escalade::parametric::auction_profiles::{alice_continues, bertrand_continues};
use escalade::{compose_beliefs, detect_escalation, dollar_auction, BeliefPair, PositionalProfile, StationaryGame};

fn report<G: StationaryGame>(name: &str, game: &G, beliefs: &BeliefPair) -> escalade::Result<()> {
    let order: Vec<&str> = game.points().into_iter().map(|(point, _)| point).collect();
    let show = |p: &PositionalProfile| p.display_in(order.iter().copied());
    println!("{name}");
    println!("  Alice believes    {}", show(&beliefs.belief_of_alice));
    println!("  Bertrand believes {}", show(&beliefs.belief_of_bertrand));
    for belief in [&beliefs.belief_of_alice, &beliefs.belief_of_bertrand] {
        println!("  {} is an equilibrium: {}", show(belief), game.is_equilibrium(belief)?);
    }
    println!("  composed: {}", show(&compose_beliefs(game, beliefs)?));
    println!("  {}", detect_escalation(game, beliefs, true)?);
    println!("  swapped: {}\n", detect_escalation(game, &beliefs.swapped(), true)?);
    Ok(())
}

fn main() -> escalade::Result<()> {
    // each expects the other to give up
    let crossed = BeliefPair::new(
        PositionalProfile::new([("A", "c"), ("B", "a")]),
        PositionalProfile::new([("A", "a"), ("B", "c")]),
    );
    report("0,1 game", &zero_one_cyclic(), &crossed)?;
    let auction = dollar_auction(100)?;
    report(
        "dollar auction",
        &auction,
        &BeliefPair::new(alice_continues(), bertrand_continues()),
    )
}
