use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use survnet::error::Error;
use survnet::experiment::{
    run_compare, run_preset, run_selftest, write_csv, write_csv_file, write_preset, Mode,
    ResultRow, SweepSpec, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use survnet::geometry::{ConvexRegion, Point2};
use survnet::montecarlo::SamplerBias;
use survnet::scenario::parse_scenario;

#[derive(Parser)]
#[command(name = "survnet", version, about = "Disaster connection probability of cable networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form disconnection probability
    Theory(ScenarioArgs),
    /// Monte Carlo estimate only
    Simulate(ScenarioArgs),
    /// Closed form and simulation side by side
    Compare(ScenarioArgs),
    /// Run a built-in experiment: example1, example1-protect, nonconvex, realistic
    Preset(PresetArgs),
    /// Check the line sampler against the perimeter ratio law
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Number of sampled disasters
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// NAME=START:STOP:STEP with NAME one of a, b, c, disaster_level, de_level.<link>
    #[arg(long)]
    sweep: Option<String>,
    /// CSV output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct PresetArgs {
    name: String,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SelftestArgs {
    /// Use this scenario's area of interest instead of a radius-2 disk
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, hide = true)]
    debug_bias: bool,
}

const EXIT_USAGE: u8 = 1;
const EXIT_GATE: u8 = 2;
const EXIT_IO: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Io { .. }) => EXIT_IO,
        _ if err.downcast_ref::<std::io::Error>().is_some() => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn with_workers<T>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> anyhow::Result<T>
where
    T: Send,
{
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Validation("--workers must be at least 1".into()).into()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .context("building worker pool")?;
            Ok(pool.install(f))
        }
    }
}

fn gate_code(rows: &[ResultRow]) -> u8 {
    if rows.iter().any(ResultRow::failed) {
        EXIT_GATE
    } else {
        0
    }
}

fn emit(rows: &[ResultRow], out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => write_csv_file(rows, path)?,
        None => write_csv(rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Theory(a) => scenario_command(a, Mode::Theory),
        Command::Simulate(a) => scenario_command(a, Mode::Simulate),
        Command::Compare(a) => scenario_command(a, Mode::Compare),
        Command::Preset(a) => {
            let tables = with_workers(a.run.workers, || run_preset(&a.name, a.run.samples, a.run.seed))??;
            let paths = write_preset(&tables, &a.out)?;
            let mut stdout = std::io::stdout().lock();
            for p in &paths {
                writeln!(stdout, "wrote {}", p.display())?;
            }
            let rows: Vec<ResultRow> = tables.into_iter().flat_map(|(_, r)| r).collect();
            Ok(gate_code(&rows))
        }
        Command::Selftest(a) => {
            let omega = match &a.scenario {
                Some(path) => parse_scenario(path)?.build()?.network().omega().clone(),
                None => ConvexRegion::disk(Point2::ORIGIN, 2.0)?,
            };
            let bias = if a.debug_bias {
                SamplerBias::CrowdCenter
            } else {
                SamplerBias::None
            };
            let entries =
                with_workers(a.run.workers, || run_selftest(&omega, a.run.samples, a.run.seed, bias))??;
            let mut stdout = std::io::stdout().lock();
            let mut ok = true;
            for e in &entries {
                let r = &e.report;
                ok &= r.pass;
                writeln!(
                    stdout,
                    "{:<15} target={:.6} p_hat={:.6} stderr={:.2e} diff={:.2e} gate={:.2e} {}",
                    e.name,
                    r.target,
                    r.estimate.p_hat,
                    r.estimate.stderr,
                    r.abs_diff,
                    r.gate,
                    if r.pass { "PASS" } else { "FAIL" }
                )?;
            }
            Ok(if ok { 0 } else { EXIT_GATE })
        }
    }
}

fn scenario_command(a: ScenarioArgs, mode: Mode) -> anyhow::Result<u8> {
    let spec = parse_scenario(&a.scenario)?;
    let sweep = a.sweep.as_deref().map(str::parse::<SweepSpec>).transpose()?;
    let rows = with_workers(a.run.workers, || {
        run_compare(&spec, sweep.as_ref(), mode, a.run.samples, a.run.seed)
    })??;
    emit(&rows, a.out.as_deref())?;
    Ok(gate_code(&rows))
}
