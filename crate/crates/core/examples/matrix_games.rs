//! Exact mixed equilibria of constant-sum matrix games.
//!
//! ```bash
//! cargo run --example matrix_games
//! ```

use escalade::catalog::{matching_pennies, rock_paper_scissors, rock_paper_scissors_zero_sum};
use escalade::{best_response_value, solve_constant_sum, Side};

fn main() -> escalade::Result<()> {
    for (name, game) in [
        ("rock-paper-scissors", rock_paper_scissors()),
        ("rock-paper-scissors, zero sum", rock_paper_scissors_zero_sum()),
        ("matching pennies", matching_pennies()),
    ] {
        let s = solve_constant_sum(&game)?;
        println!("{name}\n{s}");
        // neither side can beat the value against the other's mix
        let row = best_response_value(&game, &s.column, Side::Row)?;
        let column = best_response_value(&game, &s.row, Side::Column)?;
        println!("best replies: row {row}, column {column}\n");
    }
    Ok(())
}
