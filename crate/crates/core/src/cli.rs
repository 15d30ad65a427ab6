//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when the analysis answers "no" (a checked
//! profile is not an equilibrium, a game has none), 2 on usage, I/O or
//! parse errors, 3 when a cap or search limit is hit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cyclic::{check_spe_cyclic, enumerate_positional_spe_bounded, PositionalProfile, DEFAULT_SEARCH_LIMIT};
use crate::dsl::{self, GameBody, GameDoc, Highlight};
use crate::error::Error;
use crate::escalation::{
    detect_escalation, simulate, stopping_frequency, BeliefPair, BeliefSelection, SimEnd, StationaryGame,
};
use crate::finite::{check_spe, enumerate_equilibria, solve, TiePolicy, DEFAULT_CAP};
use crate::game::{FiniteGame, Outcome, TreeProfile};
use crate::matrix::{best_response_value, solve_constant_sum, MatrixGame, Rational, Side};
use crate::parametric::{auction_profiles, check_spe_param, dollar_auction, enumerate_stationary_spe, ParametricGame};
use crate::report::SpeReport;

const PROFILE_HELP: &str = "\
Profile files give one choice per line as `KEY = ACTION`. In finite games
KEY is the path to a decision node (`/` for the root, `/p/f` for the node
reached by playing p then f); in cyclic and parametric games it is a node
name. `#` starts a comment.";

#[derive(Parser, Debug)]
#[command(name = "escalade", version, about = "Equilibria of sequential and matrix games", after_help = PROFILE_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for `simulate` (required with `--format json`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest number of finite equilibria to list.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Write the main output to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Ties {
    First,
    Last,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One equilibrium, its play and its outcome.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Ties::First)]
        ties: Ties,
    },
    /// Every equilibrium, with the distinct plays they induce.
    Enumerate { file: PathBuf },
    /// Check whether a profile is subgame perfect.
    Check {
        file: PathBuf,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Unroll a cyclic or parametric game into a finite tree.
    Unfold {
        file: PathBuf,
        /// Number of decision layers.
        #[arg(long)]
        depth: usize,
        /// Outcome placed where the unrolling stops, as `x,y`.
        #[arg(long)]
        terminal: Outcome,
    },
    /// Analyse the dollar auction for an object of the given value.
    Auction {
        #[arg(long)]
        value: i64,
        /// Also compare each verdict with the tree cut after this stage.
        #[arg(long)]
        max_stage: Option<u64>,
    },
    /// Play memoryless agents that draw an equilibrium belief every turn.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        horizon: u64,
        /// `uniform` or `fixed:I,J` (belief indices for Alice and Bertrand).
        #[arg(long, default_value = "uniform", value_parser = parse_policy)]
        policy: BeliefSelection,
        /// Simulate seeds `seed..seed+runs` and report the stopping frequency.
        #[arg(long, default_value_t = 1)]
        runs: u64,
    },
    /// Optimal mixed strategies of a constant-sum matrix game.
    Matrix { file: PathBuf },
    /// Graphviz export.
    Export {
        file: PathBuf,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, required = true)]
        dot: bool,
    },
}

fn parse_policy(s: &str) -> Result<BeliefSelection, String> {
    if s == "uniform" {
        return Ok(BeliefSelection::Uniform);
    }
    let rest = s
        .strip_prefix("fixed:")
        .ok_or_else(|| format!("expected `uniform` or `fixed:I,J`, got `{s}`"))?;
    let (a, b) = rest
        .split_once(',')
        .ok_or_else(|| format!("expected `fixed:I,J`, got `{s}`"))?;
    let index = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad belief index `{t}`: {e}"))
    };
    Ok(BeliefSelection::FixedIndex {
        alice: index(a)?,
        bertrand: index(b)?,
    })
}

/// Why a command stopped early, with its exit status.
enum Failure {
    Usage(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchSpaceTooLarge { .. } | Error::TooLarge { .. } => Failure::Limit(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<dsl::DslError> for Failure {
    fn from(e: dsl::DslError) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// What a command produced: the report and its exit status.
struct Report {
    text: String,
    json: Value,
    status: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, status: 0 }
    }

    fn with_status(mut self, status: i32) -> Self {
        self.status = status;
        self
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.json).expect("valid json")),
            };
            let redirect = cli
                .out
                .as_ref()
                .filter(|_| !matches!(cli.command, Command::Simulate { .. }));
            let written = match redirect {
                Some(path) => fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => report.status,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    2
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Limit(msg)) => {
            let _ = writeln!(err, "limit: {msg}");
            3
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GameDoc, Failure> {
    let text = read(path)?;
    dsl::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_profile(path: &Path) -> Result<dsl::ProfileDoc, Failure> {
    let text = read(path)?;
    dsl::parse_profile(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Solve { file, ties } => {
            let ties = match ties {
                Ties::First => TiePolicy::FirstBranch,
                Ties::Last => TiePolicy::LastBranch,
            };
            cmd_solve(&load(file)?, ties)
        }
        Command::Enumerate { file } => cmd_enumerate(&load(file)?, cli.cap.unwrap_or(DEFAULT_CAP)),
        Command::Check { file, profile } => cmd_check(&load(file)?, &load_profile(profile)?),
        Command::Unfold { file, depth, terminal } => cmd_unfold(&load(file)?, *depth, terminal),
        Command::Auction { value, max_stage } => cmd_auction(*value, *max_stage),
        Command::Simulate {
            file,
            horizon,
            policy,
            runs,
        } => {
            let seed = match (cli.seed, cli.format) {
                (Some(s), _) => s,
                (None, Format::Text) => 0,
                (None, Format::Json) => return Err(Failure::Usage("`simulate --format json` needs `--seed`".into())),
            };
            cmd_simulate(&load(file)?, *horizon, seed, *policy, *runs, cli.out.as_deref())
        }
        Command::Matrix { file } => match load(file)?.body {
            GameBody::Matrix(m) => cmd_matrix(&m),
            other => Err(Failure::Usage(format!(
                "`matrix` needs a matrix game, got a {} game",
                other.kind()
            ))),
        },
        Command::Export { file, profile, .. } => {
            let doc = load(file)?;
            let profile = profile.as_deref().map(load_profile).transpose()?;
            cmd_export(&doc, profile.as_ref())
        }
    }
}

fn finite_profile_json(game: &FiniteGame, p: &TreeProfile) -> Result<Value, Failure> {
    let choices = p.choices(game)?;
    Ok(Value::Array(
        choices
            .iter()
            .map(|(path, l)| json!({"at": path.as_path(), "action": l.as_str()}))
            .collect(),
    ))
}

fn finite_profile_text(game: &FiniteGame, p: &TreeProfile) -> Result<String, Failure> {
    let parts: Vec<_> = p
        .choices(game)?
        .iter()
        .map(|(path, l)| format!("{}: {l}", path.as_path()))
        .collect();
    Ok(format!("{{{}}}", parts.join(", ")))
}

fn outcome_json(o: &Outcome) -> Value {
    json!(o.values())
}

fn positional_json(p: &PositionalProfile) -> Value {
    serde_json::to_value(p).expect("serializable")
}

fn point_order<G: StationaryGame>(g: &G) -> Vec<&str> {
    g.points().into_iter().map(|(n, _)| n).collect()
}

fn cmd_solve(doc: &GameDoc, ties: TiePolicy) -> Result<Report, Failure> {
    match &doc.body {
        GameBody::Finite(g) => {
            let p = solve(g, ties)?;
            let (line, outcome) = g.induced_play(&p)?;
            let text = format!(
                "equilibrium: {}\nplay: {line}\noutcome: {outcome}\n",
                finite_profile_text(g, &p)?
            );
            let json = json!({
                "kind": "finite",
                "profile": finite_profile_json(g, &p)?,
                "play": line.to_string(),
                "outcome": outcome_json(&outcome),
            });
            Ok(Report::ok(text, json))
        }
        GameBody::Cyclic(g) => {
            let all = enumerate_positional_spe_bounded(g, DEFAULT_SEARCH_LIMIT)?;
            let Some(p) = all.first() else {
                return Ok(none_found("cyclic"));
            };
            let induced = g.induced_outcome(p, g.start())?;
            let text = format!(
                "equilibrium: {}\nplay from {}: {induced}\n",
                p.display_in(point_order(g)),
                g.start()
            );
            let json = json!({"kind": "cyclic", "profile": positional_json(p), "induced": induced});
            Ok(Report::ok(text, json))
        }
        GameBody::Parametric(g) => {
            let all = enumerate_stationary_spe(g)?;
            let Some(p) = all.first() else {
                return Ok(none_found("param"));
            };
            let induced = g.induced_outcome(p, g.start())?;
            let text = format!(
                "equilibrium: {}\nplay from {}: {}\n",
                p.display_in(point_order(g)),
                g.start(),
                param_result_text(&induced)
            );
            let json = json!({"kind": "param", "profile": positional_json(p), "induced": induced});
            Ok(Report::ok(text, json))
        }
        GameBody::Matrix(m) => cmd_matrix(m),
    }
}

fn none_found(kind: &str) -> Report {
    Report::ok("no equilibrium\n".into(), json!({"kind": kind, "profile": null})).with_status(1)
}

fn param_result_text(r: &crate::parametric::ParamResult) -> String {
    use crate::parametric::ParamResult;
    match r {
        ParamResult::ConvergesAffine { path, outcome, .. } => {
            format!("{} -> leaf {outcome} (entry stage n)", path.join(" -> "))
        }
        ParamResult::Divergent { stem, cycle } => {
            let walk: Vec<&str> = stem
                .iter()
                .chain(cycle)
                .chain(&cycle[..1])
                .map(String::as_str)
                .collect();
            format!("diverges: {} -> ...", walk.join(" -> "))
        }
    }
}

fn cmd_enumerate(doc: &GameDoc, cap: usize) -> Result<Report, Failure> {
    match &doc.body {
        GameBody::Finite(g) => {
            let eq = enumerate_equilibria(g, cap)?;
            let lines = eq.play_lines(g)?;
            let mut text = format!("equilibria: {}", eq.profiles.len());
            if eq.truncated {
                text.push_str(&format!(" (stopped at cap {cap})"));
            }
            text.push_str(&format!("\ndistinct play lines: {}\n", lines.len()));
            for (line, outcome) in &lines {
                text.push_str(&format!("  {line}  {outcome}\n"));
            }
            let mut profiles = Vec::new();
            for (i, p) in eq.profiles.iter().enumerate() {
                text.push_str(&format!("profile {}: {}\n", i + 1, finite_profile_text(g, p)?));
                profiles.push(finite_profile_json(g, p)?);
            }
            let json = json!({
                "kind": "finite",
                "count": eq.profiles.len(),
                "truncated": eq.truncated,
                "play_lines": lines.iter().map(|(l, o)| json!({"play": l.to_string(), "outcome": outcome_json(o)})).collect::<Vec<_>>(),
                "profiles": profiles,
            });
            Ok(Report::ok(text, json).with_status(if eq.truncated { 3 } else { 0 }))
        }
        GameBody::Cyclic(g) => {
            let all = enumerate_positional_spe_bounded(g, DEFAULT_SEARCH_LIMIT)?;
            let mut text = format!("positional equilibria: {} of {}\n", all.len(), g.profile_count());
            let mut entries = Vec::new();
            for p in &all {
                let induced = g.induced_outcome(p, g.start())?;
                text.push_str(&format!("  {}  {induced}\n", p.display_in(point_order(g))));
                entries.push(json!({"profile": positional_json(p), "induced": induced}));
            }
            let json = json!({"kind": "cyclic", "count": all.len(), "of": g.profile_count().to_string(), "equilibria": entries});
            Ok(Report::ok(text, json))
        }
        GameBody::Parametric(g) => {
            let all = enumerate_stationary_spe(g)?;
            let total = g.all_profiles().len();
            let mut text = format!("stationary equilibria: {} of {total}\n", all.len());
            let mut entries = Vec::new();
            for p in &all {
                let induced = g.induced_outcome(p, g.start())?;
                text.push_str(&format!(
                    "  {}  {}\n",
                    p.display_in(point_order(g)),
                    param_result_text(&induced)
                ));
                entries.push(json!({"profile": positional_json(p), "induced": induced}));
            }
            let json = json!({"kind": "param", "count": all.len(), "of": total, "equilibria": entries});
            Ok(Report::ok(text, json))
        }
        GameBody::Matrix(_) => Err(Failure::Usage(
            "`enumerate` does not apply to matrix games; use `matrix`".into(),
        )),
    }
}

fn report_output(report: &SpeReport, kind: &str) -> Report {
    let json = json!({"kind": kind, "report": report});
    Report::ok(report.to_string(), json).with_status(if report.is_ok() { 0 } else { 1 })
}

fn cmd_check(doc: &GameDoc, profile: &dsl::ProfileDoc) -> Result<Report, Failure> {
    let report = match &doc.body {
        GameBody::Finite(g) => check_spe(g, &profile.to_tree(g)?)?,
        GameBody::Cyclic(g) => check_spe_cyclic(g, &profile.to_positional())?,
        GameBody::Parametric(g) => check_spe_param(g, &profile.to_positional())?,
        GameBody::Matrix(_) => return Err(Failure::Usage("`check` does not apply to matrix games".into())),
    };
    Ok(report_output(&report, doc.body.kind()))
}

fn cmd_unfold(doc: &GameDoc, depth: usize, terminal: &Outcome) -> Result<Report, Failure> {
    if depth == 0 {
        return Err(Failure::Usage("`--depth` must be at least 1".into()));
    }
    if terminal.arity() != 2 {
        return Err(Failure::Usage("`--terminal` needs two values".into()));
    }
    let tree = match &doc.body {
        GameBody::Cyclic(g) => g.unfold(depth, terminal),
        GameBody::Parametric(g) => g.instantiate(depth as u64 - 1, terminal),
        other => return Err(Failure::Usage(format!("cannot unfold a {} game", other.kind()))),
    };
    let unfolded = GameDoc {
        players: doc.players.clone(),
        body: GameBody::Finite(tree),
    };
    let text = dsl::serialize(&unfolded);
    let json = json!({"kind": "finite", "depth": depth, "game": text});
    Ok(Report::ok(text, json))
}

fn cmd_auction(value: i64, max_stage: Option<u64>) -> Result<Report, Failure> {
    let g = dollar_auction(value)?;
    let doc = GameDoc::new(GameBody::Parametric(g.clone()));
    let order = point_order(&g);
    let mut text = format!("dollar auction, value {value}\n\n{}\n", dsl::serialize(&doc));
    let profiles = g.all_profiles();
    let mut rows = Vec::new();
    text.push_str("stationary profiles:\n");
    for p in &profiles {
        let report = check_spe_param(&g, p)?;
        let induced = g.induced_outcome(p, g.start())?;
        let verdict = if report.is_ok() { "equilibrium" } else { "rejected" };
        text.push_str(&format!(
            "  {}  {verdict}; {}\n",
            p.display_in(order.iter().copied()),
            param_result_text(&induced)
        ));
        let mut row = json!({"profile": positional_json(p), "equilibrium": report.is_ok(), "induced": induced});
        if let Some(stage) = max_stage {
            let truncated = truncation_verdict(&g, p, stage)?;
            let shown = match truncated {
                Some(true) => "equilibrium",
                Some(false) => "rejected",
                None => "no finite cut (diverges)",
            };
            text.push_str(&format!("      cut after stage {stage}: {shown}\n"));
            row["truncated_equilibrium"] = json!(truncated);
        }
        rows.push(row);
    }
    let never = check_spe_param(&g, &auction_profiles::never_bid())?;
    text.push_str("\nnever bid:\n");
    for line in never.to_string().lines() {
        text.push_str(&format!("  {line}\n"));
    }
    let json = json!({
        "kind": "auction",
        "value": value,
        "game": dsl::serialize(&doc),
        "profiles": rows,
        "never_bid": never,
    });
    Ok(Report::ok(text, json))
}

/// Verdict of the finite checker on the game cut after `max_stage`, each cut
/// carrying what the profile itself yields there.
fn truncation_verdict(g: &ParametricGame, p: &PositionalProfile, max_stage: u64) -> Result<Option<bool>, Failure> {
    let Some(tree) = g.truncate_along(p, max_stage)? else {
        return Ok(None);
    };
    let tp = g.instantiate_profile(p, max_stage)?;
    Ok(Some(check_spe(&tree, &tp)?.is_ok()))
}

fn cmd_simulate(
    doc: &GameDoc,
    horizon: u64,
    seed: u64,
    policy: BeliefSelection,
    runs: u64,
    records: Option<&Path>,
) -> Result<Report, Failure> {
    fn go<G: StationaryGame>(
        g: &G,
        horizon: u64,
        seed: u64,
        policy: BeliefSelection,
        runs: u64,
        records: Option<&Path>,
    ) -> Result<Report, Failure> {
        if runs == 0 {
            return Err(Failure::Usage("`--runs` must be at least 1".into()));
        }
        let equilibria = g.equilibria()?;
        if equilibria.is_empty() {
            return Ok(Report::ok(
                "no equilibrium to draw beliefs from\n".into(),
                json!({"equilibria": []}),
            )
            .with_status(1));
        }
        let order = point_order(g);
        let mut text = String::from("equilibria:\n");
        for (i, e) in equilibria.iter().enumerate() {
            text.push_str(&format!("  [{i}] {}\n", e.display_in(order.iter().copied())));
        }
        let beliefs: Vec<Value> = equilibria.iter().map(positional_json).collect();
        if runs == 1 {
            let trace = simulate(g, &equilibria, horizon, seed, policy)?;
            if let Some(path) = records {
                fs::write(path, trace.to_records())
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            text.push_str(&format!("seed {seed}\n"));
            text.push_str(&trace.to_records());
            match &trace.end {
                SimEnd::Leaf { outcome } => text.push_str(&format!(
                    "verdict: stopped at stage {} with {outcome}\n",
                    trace.steps.len() - 1
                )),
                SimEnd::HorizonHit => text.push_str(&format!("verdict: no one stopped within {horizon} turns\n")),
            }
            let mut json = json!({"equilibria": beliefs, "policy": policy, "trace": trace});
            // fixed beliefs compose into one stationary profile, decidable without a horizon
            if let BeliefSelection::FixedIndex { alice, bertrand } = policy {
                let pair = BeliefPair::new(equilibria[alice].clone(), equilibria[bertrand].clone());
                let verdict = detect_escalation(g, &pair, true)?;
                text.push_str(&format!("composed beliefs: {verdict}\n"));
                json["escalation"] = json!(verdict);
            }
            return Ok(Report::ok(text, json));
        }
        let traces = (0..runs)
            .map(|k| simulate(g, &equilibria, horizon, seed.wrapping_add(k), policy))
            .collect::<Result<Vec<_>, _>>()?;
        let freq = stopping_frequency(&traces);
        let turns: usize = traces.iter().map(|t| t.steps.len()).sum();
        let hits = traces.iter().filter(|t| t.hit_horizon()).count();
        text.push_str(&format!(
            "runs: {runs} (seeds {seed}..{})\nturns: {turns}\nreached horizon: {hits}\nstopping frequency per turn: {freq:.4}\n",
            seed.wrapping_add(runs - 1)
        ));
        let json = json!({
            "equilibria": beliefs,
            "policy": policy,
            "runs": runs,
            "first_seed": seed,
            "turns": turns,
            "horizon_hits": hits,
            "stopping_frequency": freq,
        });
        Ok(Report::ok(text, json))
    }
    match &doc.body {
        GameBody::Cyclic(g) => go(g, horizon, seed, policy, runs, records),
        GameBody::Parametric(g) => go(g, horizon, seed, policy, runs, records),
        other => Err(Failure::Usage(format!("cannot simulate a {} game", other.kind()))),
    }
}

fn cmd_matrix(m: &MatrixGame) -> Result<Report, Failure> {
    let s = solve_constant_sum(m)?;
    let row_best = best_response_value(m, &s.column, Side::Row)?;
    let col_best = best_response_value(m, &s.row, Side::Column)?;
    let column_value = m.sum() - s.value;
    let certified = row_best == s.value && col_best == column_value;
    let text = format!(
        "{s}\nbest row reply to column strategy: {row_best}\nbest column reply to row strategy: {col_best} (column value {column_value})\ncertified: {}\n",
        if certified { "yes" } else { "no" }
    );
    let strings = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let json = json!({
        "kind": "matrix",
        "row": strings(&s.row),
        "column": strings(&s.column),
        "value": s.value.to_string(),
        "column_value": column_value.to_string(),
        "certified": certified,
    });
    Ok(Report::ok(text, json).with_status(if certified { 0 } else { 1 }))
}

fn cmd_export(doc: &GameDoc, profile: Option<&dsl::ProfileDoc>) -> Result<Report, Failure> {
    if let GameBody::Matrix(_) = doc.body {
        return Err(Failure::Usage("matrix games have no graph to export".into()));
    }
    let tree;
    let positional;
    let highlight = match (profile, &doc.body) {
        (None, _) => Highlight::None,
        (Some(p), GameBody::Finite(g)) => {
            tree = p.to_tree(g)?;
            Highlight::Tree(&tree)
        }
        (Some(p), _) => {
            positional = p.to_positional();
            Highlight::Positional(&positional)
        }
    };
    let dot = dsl::to_dot(doc, highlight)?;
    let json = json!({"kind": doc.body.kind(), "dot": dot});
    Ok(Report::ok(dot, json))
}
