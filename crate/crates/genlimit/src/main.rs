use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use genlimit::error::{HarnessError, Result, EXIT_PARTIAL};
use genlimit::{formats, run, sweep};
use genlimit_core::game::GameConfig;
use genlimit_core::metrics::AnalysisOptions;
use genlimit_core::topology::{self, Restriction};
use genlimit_core::{ratio, FamilyHandle, FamilySpec, LanguageIndex, Relation};

#[derive(Parser)]
#[command(
    name = "genlimit",
    version,
    about = "Language generation in the limit: games, towers and levels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and report its metrics as JSON.
    Run {
        #[arg(long)]
        family: String,
        #[arg(long = "true")]
        true_index: LanguageIndex,
        #[arg(long)]
        adversary: String,
        #[arg(long)]
        generator: String,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        density: Option<PathBuf>,
    },
    /// Run a grid of games declared in a TOML file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Verify the first `depth` languages of a tower and estimate the truth index.
    Tower {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        terminal: LanguageIndex,
        #[arg(long, default_value_t = 10)]
        depth: u64,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
    },
    /// Cantor-Bendixson levels of the first `n` languages (plus the terminal).
    Levels {
        #[arg(long)]
        family: String,
        #[arg(long)]
        restrict: u64,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
    },
}

fn config_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(e.to_string())
}

fn load(spec: &str) -> Result<FamilyHandle> {
    formats::load_family(&spec.parse::<FamilySpec>()?)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(HarnessError::io("<stdout>", e))
        }
        _ => Ok(()),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(value).map_err(config_err)?;
    emit(&format!("{s}\n"))
}

/// The declared tower prefix, or else the first proper sublanguages of the terminal.
fn tower_sequence(
    family: &FamilyHandle,
    terminal: LanguageIndex,
    depth: u64,
) -> Vec<LanguageIndex> {
    if family.declared_tower(terminal).is_some() {
        return (1..=depth).map_while(|k| family.tower_member(k)).collect();
    }
    (family.first_index()..)
        .take_while(|&i| family.is_valid_index(i))
        .filter(|&i| i != terminal && family.relation(i, terminal) == Relation::ProperSubset)
        .take(depth as usize)
        .collect()
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Run {
            family,
            true_index,
            adversary,
            generator,
            steps,
            transcript,
            density,
        } => {
            let config = GameConfig::new(
                family.parse()?,
                true_index,
                adversary.parse().map_err(config_err)?,
                generator.parse().map_err(config_err)?,
                steps,
            );
            let out = run::run(&config, &AnalysisOptions::default())?;
            run::persist(&out, transcript.as_deref(), density.as_deref())?;
            print_json(&out.metrics)?;
            Ok(0)
        }
        Command::Sweep { config } => {
            let cfg = sweep::SweepConfig::load(&config)?;
            let report = sweep::sweep(&cfg, &AnalysisOptions::default())?;
            let mut buf = Vec::new();
            sweep::write_rows(&mut buf, &report.rows).map_err(config_err)?;
            emit(&String::from_utf8_lossy(&buf))?;
            Ok(if report.failures() > 0 {
                EXIT_PARTIAL
            } else {
                0
            })
        }
        Command::Tower {
            family,
            terminal,
            depth,
            horizon,
        } => {
            let fam = load(&family)?;
            if !fam.is_valid_index(terminal) {
                return Err(topology::TopologyError::BadIndex(terminal).into());
            }
            let seq = tower_sequence(&fam, terminal, depth);
            let report = topology::verify_tower(&fam, &seq, terminal, horizon)?;
            let truth = topology::estimate_truth_index(&fam, terminal, depth as usize, horizon)?;
            print_json(&serde_json::json!({ "report": report, "truth_index": truth }))?;
            Ok(0)
        }
        Command::Levels {
            family,
            restrict,
            horizon,
        } => {
            let fam = load(&family)?;
            let r = Restriction::prefix(&fam, restrict, horizon)?;
            let map = topology::cb_levels(&fam, &r)?;
            let mut text = format!("rank {} derived_sizes {:?}\n", map.rank, map.derived_sizes);
            text += &format!("{:>8} {:>6} {:>24} kernel\n", "index", "level", "ell");
            for (&i, &lvl) in &map.levels {
                let lvl_text = lvl.map_or("-".to_string(), |l| l.to_string());
                let ell = map.ell.get(&i).map(ratio::format).unwrap_or_default();
                text += &format!("{i:>8} {lvl_text:>6} {ell:>24} {}\n", lvl.is_none());
            }
            emit(&text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
