//! The `incrsa` command line.
//!
//! Exit codes: 0 success, 1 golden-suite failure, 2 input or validation
//! error, 3 query error (unknown world, invalid continuation, ...).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use incrsa_core::scenarios::{builtin_scenario, builtin_scenarios, run_scenario, ScenarioReport, SCENARIO_NAMES};
use incrsa_core::tuna::{build_inventory, run_experiment, Domain, ExperimentReport, TunaTrial};
use incrsa_core::{optimal_utterances, Distribution, QueryError, RsaModel, Utterance, DEFAULT_TIE_EPSILON};
use thiserror::Error;

use crate::corpus::{load_fixture, parse_corpus};
use crate::gamefile::{load_game_file, to_json};
use crate::table::{prob, render};

#[derive(Debug, Parser)]
#[command(
    name = "incrsa",
    version,
    about = "Exact global and incremental RSA inference over finite reference games"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Utterance distribution of a pragmatic speaker for one world.
    Speak {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        world: String,
        #[arg(long, value_enum, default_value_t = Mode::Gp)]
        mode: Mode,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// World distribution of an utterance-level listener.
    Listen {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        utterance: String,
        /// Use the literal listener instead of the pragmatic one.
        #[arg(long)]
        literal: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Next-word distribution of the word-level speaker.
    SpeakWord {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        world: String,
        /// Space-separated words already produced.
        #[arg(long, default_value = "")]
        context: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// World distribution of a word-level listener after hearing `--word`.
    ListenWord {
        #[command(flatten)]
        game: GameArg,
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        literal: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Greedy word-by-word utterance for one world.
    Unroll {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        world: String,
    },
    /// Check built-in scenarios against their expected values.
    Scenario {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        scenario: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Count two-word optimal utterances over TUNA trials.
    Tuna {
        #[arg(long, required_unless_present = "fixture", conflicts_with = "fixture")]
        corpus: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, value_enum)]
        domain: DomainArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write a built-in scenario's game as a JSON game document.
    ExportScenario {
        #[arg(long)]
        scenario: String,
        /// Destination file; standard output when absent.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GameArg {
    #[arg(long)]
    pub game: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Also write the result at full precision as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TIE_EPSILON)]
    pub tie_epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Gp,
    Ip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Furniture,
    People,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Furniture => Domain::Furniture,
            DomainArg::People => Domain::People,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Query(#[from] QueryError),
    #[error("{failed} of {total} scenario rows failed")]
    Golden { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Golden { .. } => 1,
            CliError::Input(_) => 2,
            CliError::Query(_) => 3,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn words(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}

fn load_model(game: &GameArg) -> Result<RsaModel, CliError> {
    Ok(RsaModel::new(load_game_file(&game.game).map_err(input)?))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(input)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

fn dist_json(d: &Distribution) -> BTreeMap<&str, f64> {
    d.iter().collect()
}

/// Speaker tables list outcomes by descending probability and star the optimal set.
fn speaker_table(header: &str, d: &Distribution, tie_epsilon: f64) -> String {
    let optimal = optimal_utterances(d, tie_epsilon);
    let rows: Vec<Vec<String>> = d
        .sorted_desc()
        .into_iter()
        .map(|(label, p)| {
            let mut row = vec![label.to_string(), prob(p)];
            if optimal.iter().any(|o| o == label) {
                row.push("*".into());
            }
            row
        })
        .collect();
    render(&[header, "probability"], &rows)
}

/// Listener tables keep the game's world order.
fn listener_table(d: &Distribution) -> String {
    let rows: Vec<Vec<String>> = d.iter().map(|(w, p)| vec![w.to_string(), prob(p)]).collect();
    let mut out = render(&["world", "probability"], &rows);
    if d.is_empty_support() {
        out.push_str("(false of every world)\n");
    }
    out
}

fn scenario_text(report: &ScenarioReport) -> String {
    let mut out = format!("scenario {}\n", report.name);
    for row in &report.rows {
        let status = if row.passed() { "ok  " } else { "FAIL" };
        let _ = writeln!(
            out,
            "  {status} {}  (max dev {:.4}, tol {})",
            row.probe, row.max_deviation, row.tolerance
        );
        if let Some(e) = &row.error {
            let _ = writeln!(out, "       error: {e}");
        }
        for (label, expected, computed) in &row.cells {
            let _ = writeln!(
                out,
                "       {label:<16} expected {}  computed {}",
                prob(*expected),
                prob(*computed)
            );
        }
    }
    out
}

fn experiment_text(report: &ExperimentReport) -> String {
    let mut out = render(
        &["domain", "trials", "gp", "ip"],
        &[vec![
            report.domain.to_string(),
            report.trial_count.to_string(),
            report.gp_two_word_optima.to_string(),
            report.ip_two_word_optima.to_string(),
        ]],
    );
    let _ = writeln!(
        out,
        "trials={} gp={} ip={}",
        report.trial_count, report.gp_two_word_optima, report.ip_two_word_optima
    );
    out
}

/// Runs one command, writing its report to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let text = match cli.command {
        Command::Speak {
            game,
            world,
            mode,
            out: o,
        } => {
            let model = load_model(&game)?;
            let d = match mode {
                Mode::Gp => model.pragmatic_speaker_gp(&world)?,
                Mode::Ip => model.speaker_utt_ip(&world)?,
            };
            if let Some(path) = &o.json {
                write_json(path, &dist_json(&d))?;
            }
            speaker_table("utterance", &d, o.tie_epsilon)
        }
        Command::Listen {
            game,
            utterance,
            literal,
            out: o,
        } => {
            let model = load_model(&game)?;
            let u = words(&utterance);
            let d = if literal {
                model.literal_listener_utt(&u)?
            } else {
                model.pragmatic_listener_utt(&u)?
            };
            if let Some(path) = &o.json {
                write_json(path, &dist_json(&d))?;
            }
            listener_table(&d)
        }
        Command::SpeakWord {
            game,
            world,
            context,
            out: o,
        } => {
            let model = load_model(&game)?;
            let d = model.pragmatic_speaker_word(&words(&context), &world)?;
            if let Some(path) = &o.json {
                write_json(path, &dist_json(&d))?;
            }
            speaker_table("word", &d, o.tie_epsilon)
        }
        Command::ListenWord {
            game,
            context,
            word,
            literal,
            out: o,
        } => {
            let model = load_model(&game)?;
            let c = words(&context);
            let d = if literal {
                model.literal_listener_word(&c, &word)?
            } else {
                model.pragmatic_listener_word(&c, &word)?
            };
            if let Some(path) = &o.json {
                write_json(path, &dist_json(&d))?;
            }
            listener_table(&d)
        }
        Command::Unroll { game, world } => {
            let model = load_model(&game)?;
            let u: Utterance = model.greedy_unroll(&world)?;
            format!("{}\n", u.label())
        }
        Command::Scenario { scenario, all } => {
            let fixtures = if all {
                builtin_scenarios()
            } else {
                let name = scenario.unwrap_or_default();
                let f = builtin_scenario(&name).ok_or_else(|| {
                    input(format!(
                        "unknown scenario '{name}' (known: {})",
                        SCENARIO_NAMES.join(", ")
                    ))
                })?;
                vec![f]
            };
            let reports: Vec<ScenarioReport> = fixtures.iter().map(run_scenario).collect();
            let text: String = reports.iter().map(scenario_text).collect();
            out.write_all(text.as_bytes()).map_err(input)?;
            let total = reports.iter().map(|r| r.rows.len()).sum();
            let failed = reports.iter().map(ScenarioReport::failures).sum();
            if failed > 0 {
                return Err(CliError::Golden { failed, total });
            }
            return Ok(());
        }
        Command::Tuna {
            corpus,
            fixture,
            domain,
            out: o,
        } => {
            let domain = Domain::from(domain);
            let trials: Vec<TunaTrial> = match (corpus, fixture) {
                (Some(root), _) => {
                    let c = parse_corpus(&root).map_err(input)?;
                    if c.multi_target > 0 {
                        let _ = writeln!(err, "dropped {} multi-target trials", c.multi_target);
                    }
                    for (path, e) in &c.errors {
                        let _ = writeln!(err, "skipped {}: {e}", path.display());
                    }
                    c.trials
                }
                (None, Some(path)) => load_fixture(&path).map_err(input)?,
                (None, None) => return Err(input("one of --corpus or --fixture is required")),
            };
            let trials: Vec<TunaTrial> = trials.into_iter().filter(|t| t.domain == domain).collect();
            let inventory = build_inventory(&trials);
            let report = run_experiment(domain, &trials, &inventory, o.tie_epsilon);
            for (trial, reason) in &report.unusable {
                let _ = writeln!(err, "unusable trial {trial}: {reason}");
            }
            if report.trial_count == 0 {
                return Err(input(format!("no usable {domain} trials")));
            }
            if let Some(path) = &o.json {
                write_json(path, &report)?;
            }
            experiment_text(&report)
        }
        Command::ExportScenario { scenario, json } => {
            let fixture = builtin_scenario(&scenario).ok_or_else(|| {
                input(format!(
                    "unknown scenario '{scenario}' (known: {})",
                    SCENARIO_NAMES.join(", ")
                ))
            })?;
            let doc = to_json(&fixture.game);
            match json {
                Some(path) => {
                    fs::write(&path, doc).map_err(|e| input(format!("cannot write {}: {e}", path.display())))?;
                    return Ok(());
                }
                None => doc,
            }
        }
    };
    out.write_all(text.as_bytes()).map_err(input)
}

/// Parses `std::env::args`, runs the command and returns the process exit code.
pub fn main() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (stdout, stderr) = (io::stdout(), io::stderr());
    match run(cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
