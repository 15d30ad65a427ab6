//! Graphviz output, with the choices of a profile drawn in bold.
//!
//! ```bash
//! cargo run --example dot_export > zero_one.dot
//! dot -Tsvg zero_one.dot -o zero_one.svg
//! ```

use escalade::catalog::{sequential_matching_pennies, zero_one_cyclic};
use escalade::dsl::{to_dot, GameBody, GameDoc, Highlight};
use escalade::{solve, PositionalProfile, TiePolicy};

fn main() -> escalade::Result<()> {
    let cyclic = GameDoc::new(GameBody::Cyclic(zero_one_cyclic()));
    let profile = PositionalProfile::new([("A", "a"), ("B", "c")]);
    print!("{}", to_dot(&cyclic, Highlight::Positional(&profile))?);

    let game = sequential_matching_pennies();
    let profile = solve(&game, TiePolicy::FirstBranch)?;
    print!(
        "{}",
        to_dot(&GameDoc::new(GameBody::Finite(game)), Highlight::Tree(&profile))?
    );
    Ok(())
}
