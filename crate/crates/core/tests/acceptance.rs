//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};
use std::{fs, process};

use escalade::catalog::{
    matching_pennies, rock_paper_scissors, sequential_matching_pennies, zero_one, zero_one_abandon, zero_one_cyclic,
    zero_one_parametric,
};
use escalade::dsl::{parse, serialize, to_dot, GameBody, Highlight};
use escalade::finite::DEFAULT_CAP;
use escalade::parametric::auction_profiles::{alice_continues, bertrand_continues, never_bid};
use escalade::{
    best_response_value, check_spe, check_spe_cyclic, check_spe_param, detect_escalation, dollar_auction,
    enumerate_equilibria, enumerate_positional_spe, simulate, solve_constant_sum, stopping_frequency, AffineValue,
    BeliefPair, BeliefSelection, FiniteGame, MatrixGame, Outcome, Payoff, PlayLine, PlayerId, PositionalProfile,
    Rational, Side, StationaryGame, TreeProfile,
};

use common::{all_profiles, brute_force_equilibria, choice_at, random_doc, random_game};

/// Allowed distance between the empirical stopping frequency and 1/2.
const STOP_TOLERANCE: f64 = 0.02;
const SIMULATION_RUNS: u64 = 10_000;
const SIMULATION_HORIZON: u64 = 1_000;
const ORACLE_GAMES: u64 = 200;
const ORACLE_MAX_NODES: usize = 12;
const ROUND_TRIP_GAMES: u64 = 500;
const AUCTION_VALUE: i64 = 100;
const AUCTION_MAX_STAGE: u64 = 40;
/// Desk-scale budget for one criterion.
const TIME_BUDGET: Duration = Duration::from_secs(5);

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    }};
}

fn positional(a: &str, b: &str) -> PositionalProfile {
    PositionalProfile::new([("A", a), ("B", b)])
}

fn distinct_lines(g: &FiniteGame, profiles: &[TreeProfile]) -> BTreeSet<(PlayLine, Outcome)> {
    profiles.iter().map(|p| g.induced_play(p).unwrap()).collect()
}

fn sequential_matching_pennies_criterion() -> Check {
    let g = sequential_matching_pennies();
    let eq = enumerate_equilibria(&g, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let lines: Vec<(String, Outcome)> = distinct_lines(&g, &eq.profiles)
        .into_iter()
        .map(|(l, o)| (l.to_string(), o))
        .collect();
    let mut expected = vec![
        ("f p p".to_string(), Outcome::pair(1, 1)),
        ("p f f".to_string(), Outcome::pair(1, 1)),
    ];
    expected.sort();
    ensure!(lines == expected, "equilibrium play lines {lines:?}");
    let all = g.play_lines();
    ensure!(all.len() == 8, "{} play lines", all.len());
    for (line, outcome) in &all {
        // 2 to Alice when all three coins agree, 2 to Bertrand when each differs from the last, else 1 each
        let moves: Vec<&str> = line.0.iter().map(|a| a.as_str()).collect();
        let price = match (moves[0] == moves[1], moves[1] == moves[2]) {
            (true, true) => Outcome::pair(2, 0),
            (false, false) => Outcome::pair(0, 2),
            _ => Outcome::pair(1, 1),
        };
        ensure!(*outcome == price, "{line} priced {outcome}, expected {price}");
    }
    let pfp = g.outcome_of(&"p f p".parse().unwrap()).map_err(|e| e.to_string())?;
    ensure!(pfp == Outcome::pair(0, 2), "p f p gives {pfp}");
    Ok(())
}

fn zero_one_finite_criterion() -> Check {
    for (rounds, continuer, outcome) in [
        (7, PlayerId::ALICE, Outcome::pair(1, 0)),
        (6, PlayerId::BERTRAND, Outcome::pair(0, 1)),
    ] {
        let g = zero_one(rounds);
        let brute = all_profiles(&g);
        ensure!(
            brute.len() == 1 << rounds,
            "{} profiles in the {rounds}-round game",
            brute.len()
        );
        let eq = enumerate_equilibria(&g, DEFAULT_CAP).map_err(|e| e.to_string())?;
        ensure!(
            eq.profiles.len() == 8,
            "{} equilibria in the {rounds}-round game",
            eq.profiles.len()
        );
        ensure!(
            eq.profiles == brute_force_equilibria(&g),
            "{rounds} rounds: enumeration differs from brute force"
        );
        for p in &eq.profiles {
            let mut path = Vec::new();
            for round in 0..rounds {
                if PlayerId(round % 2) == continuer {
                    ensure!(
                        choice_at(&g, p, &path).as_str() == "c",
                        "{rounds} rounds: abandon at round {round}"
                    );
                }
                path.push("c");
            }
            let (_, o) = g.induced_play(p).map_err(|e| e.to_string())?;
            ensure!(o == outcome, "{rounds} rounds: outcome {o}");
        }
    }
    Ok(())
}

fn cyclic_criterion() -> Check {
    let g = zero_one_cyclic();
    let eq = enumerate_positional_spe(&g).map_err(|e| e.to_string())?;
    ensure!(eq == [positional("a", "c"), positional("c", "a")], "equilibria {eq:?}");
    let cc = check_spe_cyclic(&g, &positional("c", "c")).map_err(|e| e.to_string())?;
    ensure!(
        !cc.is_ok() && cc.divergent_from.contains(&"A".to_string()),
        "{{A:c,B:c}} not rejected for divergence"
    );
    let aa = check_spe_cyclic(&g, &positional("a", "a")).map_err(|e| e.to_string())?;
    let v = aa.violation_at("A").ok_or("{A:a,B:a} has no deviation at A")?;
    ensure!(
        v.action.as_str() == "c" && v.deviation_value == Payoff::Utility(1) && v.profile_value == Payoff::Utility(0),
        "deviation at A: {v:?}"
    );
    Ok(())
}

fn non_extrapolation_criterion() -> Check {
    let g = zero_one_cyclic();
    for depth in 1..=12usize {
        let tree = g.unfold(depth, &zero_one_abandon(PlayerId(depth % 2)));
        let eq = enumerate_equilibria(&tree, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let expected = if depth % 2 == 1 {
            Outcome::pair(1, 0)
        } else {
            Outcome::pair(0, 1)
        };
        for (line, o) in distinct_lines(&tree, &eq.profiles) {
            ensure!(o == expected, "depth {depth}: {line} ends in {o}");
        }
    }
    Ok(())
}

fn dollar_auction_criterion() -> Check {
    let g = dollar_auction(AUCTION_VALUE).map_err(|e| e.to_string())?;
    for p in [alice_continues(), bertrand_continues()] {
        let r = check_spe_param(&g, &p).map_err(|e| e.to_string())?;
        ensure!(r.is_ok(), "{p} rejected: {r:?}");
    }
    let r = check_spe_param(&g, &never_bid()).map_err(|e| e.to_string())?;
    let v = r.violation_at("B").ok_or("never-bid has no deviation at B")?;
    // v - n - 1 against 1 - n
    let dev = Payoff::Affine(AffineValue::new(AUCTION_VALUE - 1, -1));
    let prof = Payoff::Affine(AffineValue::new(1, -1));
    ensure!(
        v.deviation_value == dev && v.profile_value == prof,
        "never-bid deviation at B: {v:?}"
    );
    for p in g.all_profiles() {
        let symbolic = check_spe_param(&g, &p).map_err(|e| e.to_string())?.is_ok();
        match g.truncate_along(&p, AUCTION_MAX_STAGE).map_err(|e| e.to_string())? {
            Some(tree) => {
                let tp = g
                    .instantiate_profile(&p, AUCTION_MAX_STAGE)
                    .map_err(|e| e.to_string())?;
                let finite = check_spe(&tree, &tp).map_err(|e| e.to_string())?.is_ok();
                ensure!(
                    finite == symbolic,
                    "{p}: symbolic {symbolic}, cut after {AUCTION_MAX_STAGE} {finite}"
                );
            }
            None => ensure!(!symbolic, "{p} diverges yet was accepted"),
        }
    }
    Ok(())
}

fn escalation_criterion() -> Check {
    fn crossed<G: StationaryGame>(g: &G, alice: PositionalProfile, bertrand: PositionalProfile, what: &str) -> Check {
        let pair = BeliefPair::new(alice, bertrand);
        for player in [PlayerId::ALICE, PlayerId::BERTRAND] {
            ensure!(
                g.is_equilibrium(pair.of(player)).map_err(|e| e.to_string())?,
                "{what}: belief of {player} is not an equilibrium"
            );
        }
        let verdict = detect_escalation(g, &pair, true).map_err(|e| e.to_string())?;
        ensure!(verdict.escalates(), "{what}: {verdict}");
        Ok(())
    }
    crossed(
        &zero_one_cyclic(),
        positional("c", "a"),
        positional("a", "c"),
        "0,1 game",
    )?;
    let auction = dollar_auction(AUCTION_VALUE).map_err(|e| e.to_string())?;
    crossed(&auction, alice_continues(), bertrand_continues(), "dollar auction")
}

fn simulation_criterion() -> Check {
    let g = zero_one_cyclic();
    let eq = g.equilibria().map_err(|e| e.to_string())?;
    ensure!(eq.len() == 2, "{} equilibria to draw from", eq.len());
    let run = |seed| simulate(&g, &eq, SIMULATION_HORIZON, seed, BeliefSelection::Uniform).map_err(|e| e.to_string());
    let traces = (0..SIMULATION_RUNS).map(run).collect::<Result<Vec<_>, _>>()?;
    let f = stopping_frequency(&traces);
    ensure!((f - 0.5).abs() <= STOP_TOLERANCE, "stopping frequency {f}");
    for (seed, t) in traces.iter().enumerate() {
        ensure!(*t == run(seed as u64)?, "seed {seed} is not reproducible");
    }
    Ok(())
}

fn matrix_criterion() -> Check {
    let check = |g: MatrixGame, mix: Vec<Rational>, what: &str| -> Check {
        let s = solve_constant_sum(&g).map_err(|e| e.to_string())?;
        ensure!(s.row == mix && s.column == mix, "{what}: {s}");
        let row_best = best_response_value(&g, &s.column, Side::Row).map_err(|e| e.to_string())?;
        let col_best = best_response_value(&g, &s.row, Side::Column).map_err(|e| e.to_string())?;
        ensure!(
            row_best == s.value && col_best == g.sum() - s.value,
            "{what}: certificate fails"
        );
        Ok(())
    };
    check(
        rock_paper_scissors(),
        vec![Rational::new(1, 3); 3],
        "rock-paper-scissors",
    )?;
    check(matching_pennies(), vec![Rational::new(1, 2); 2], "matching pennies")
}

fn oracle_criterion() -> Check {
    for seed in 0..ORACLE_GAMES {
        let g = random_game(seed, ORACLE_MAX_NODES, 3);
        let eq = enumerate_equilibria(&g, usize::MAX).map_err(|e| e.to_string())?;
        ensure!(
            eq.profiles == brute_force_equilibria(&g),
            "seed {seed}: enumeration differs from brute force"
        );
    }
    let (c, p) = (zero_one_cyclic(), zero_one_parametric());
    for a in ["a", "c"] {
        for b in ["a", "c"] {
            let prof = positional(a, b);
            let rc = check_spe_cyclic(&c, &prof).map_err(|e| e.to_string())?.is_ok();
            let rp = check_spe_param(&p, &prof).map_err(|e| e.to_string())?.is_ok();
            ensure!(rc == rp, "{prof}: cyclic {rc}, parametric {rp}");
        }
    }
    Ok(())
}

fn dsl_criterion() -> Check {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut docs = Vec::new();
    let mut files: Vec<_> = fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    for path in files.iter().filter(|p| p.extension().is_some_and(|x| x == "game")) {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let doc = parse(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(serialize(&doc) == text, "{} does not round-trip", path.display());
        docs.push(doc);
    }
    ensure!(!docs.is_empty(), "empty corpus");
    for seed in 0..ROUND_TRIP_GAMES {
        let doc = random_doc(seed);
        let back = parse(&serialize(&doc)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(back == doc, "seed {seed} does not round-trip");
        docs.push(doc);
    }
    for doc in docs.iter().filter(|d| !matches!(d.body, GameBody::Matrix(_))) {
        let first = to_dot(doc, Highlight::None).map_err(|e| e.to_string())?;
        ensure!(
            first == to_dot(doc, Highlight::None).map_err(|e| e.to_string())?,
            "unstable DOT output"
        );
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sequential matching pennies", sequential_matching_pennies_criterion),
        ("finite 0,1 games", zero_one_finite_criterion),
        ("cyclic 0,1 game", cyclic_criterion),
        ("non-extrapolation", non_extrapolation_criterion),
        ("dollar auction", dollar_auction_criterion),
        ("escalation", escalation_criterion),
        ("memoryless simulation", simulation_criterion),
        ("matrix games", matrix_criterion),
        ("oracle equivalence", oracle_criterion),
        ("dsl round-trip", dsl_criterion),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(e) => Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            if elapsed > TIME_BUDGET {
                Err(format!("took {elapsed:.2?}, budget {TIME_BUDGET:?}"))
            } else {
                Ok(())
            }
        });
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        process::exit(1);
    }
}
