//! Stationary equilibria of the dollar auction, checked for every stage at
//! once and compared with a finite cut.
//!
//! ```bash
//! cargo run --example dollar_auction -- 100
//! ```

use std::env;

use escalade::dsl::{GameBody, GameDoc};
use escalade::parametric::auction_profiles::never_bid;
use escalade::{check_spe, check_spe_param, dollar_auction, enumerate_stationary_spe, StationaryGame};

const CUT: u64 = 40;

fn main() -> escalade::Result<()> {
    let value: i64 = env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let game = dollar_auction(value)?;
    print!("{}", GameDoc::new(GameBody::Parametric(game.clone())));

    let order: Vec<&str> = game.points().into_iter().map(|(name, _)| name).collect();
    println!("\nstationary profiles:");
    for profile in game.all_profiles() {
        let report = check_spe_param(&game, &profile)?;
        let cut = match game.truncate_along(&profile, CUT)? {
            Some(tree) => {
                let ok = check_spe(&tree, &game.instantiate_profile(&profile, CUT)?)?.is_ok();
                if ok {
                    "equilibrium"
                } else {
                    "rejected"
                }
            }
            None => "diverges",
        };
        let verdict = if report.is_ok() { "equilibrium" } else { "rejected" };
        println!(
            "  {}  {verdict}; cut after {CUT}: {cut}",
            profile.display_in(order.iter().copied())
        );
    }

    println!("\nequilibria: {}", enumerate_stationary_spe(&game)?.len());
    println!("\nnever bid:");
    print!("{}", check_spe_param(&game, &never_bid())?);
    Ok(())
}
