//! Memoryless players who draw one of their equilibria afresh at every
//! turn.
//!
//! ```bash
//! cargo run --example memoryless_simulation -- 53
//! ```

use std::env;

use escalade::catalog::zero_one_cyclic;
use escalade::{simulate, stopping_frequency, BeliefSelection, StationaryGame};

const HORIZON: u64 = 1000;
const RUNS: u64 = 10_000;

fn main() -> escalade::Result<()> {
    let seed: u64 = env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(53);
    let game = zero_one_cyclic();
    let equilibria = game.equilibria()?;

    let trace = simulate(&game, &equilibria, HORIZON, seed, BeliefSelection::Uniform)?;
    println!("seed {seed}:");
    print!("{}", trace.to_records());

    let traces = (0..RUNS)
        .map(|s| simulate(&game, &equilibria, HORIZON, s, BeliefSelection::Uniform))
        .collect::<escalade::Result<Vec<_>>>()?;
    let turns: usize = traces.iter().map(|t| t.steps.len()).sum();
    println!(
        "\n{RUNS} runs, {turns} turns, stopping frequency {:.4}",
        stopping_frequency(&traces)
    );

    let pinned = BeliefSelection::FixedIndex { alice: 1, bertrand: 0 };
    let stuck = simulate(&game, &equilibria, 20, seed, pinned)?;
    println!(
        "pinned crossed beliefs: {} turns, reached horizon: {}",
        stuck.steps.len(),
        stuck.hit_horizon()
    );
    Ok(())
}
