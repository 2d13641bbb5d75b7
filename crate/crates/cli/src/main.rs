//! `noon-steer`: steering functionals, sweeps, thresholds and Monte Carlo
//! estimates for lossy NOON states.

mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use noon_steering::lossy::LossChannel;
use noon_steering::sampling::{estimate_from_tallies, simulate, write_shot_log, BinSpec, SamplingConfig};
use noon_steering::stats::Which;
use noon_steering::steering::{
    protocol_rhs_for, steering_functional, sweep, threshold_efficiency, EtaGrid, SweepGrid, ThresholdMode,
};

use config::{Command, Format, Phase, Preset, RunConfig};
use output::{ReportRow, SampleRow, ThresholdRow};

#[derive(Debug, Parser)]
#[command(name = "noon-steer", version, about = "EPR steering functionals for lossy NOON states")]
struct Cli {
    /// Directory that relative --output and --shot-log paths are resolved against.
    #[arg(long, global = true, env = "NOON_STEER_OUT_DIR", value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Debug, Subcommand)]
enum Commands {
    /// Evaluate the steering functional at one point.
    Eval(PointArgs),
    /// Tabulate the functional over an efficiency grid.
    Sweep(SweepArgs),
    /// Find the efficiency at which E crosses 1.
    Threshold(ThresholdArgs),
    /// Estimate the functional from simulated shots.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
struct StateArgs {
    /// NOON order N.
    #[arg(long)]
    n: usize,
    /// NOON phase: radians or a multiple of pi (0, pi/2, 3pi/4, ...). Defaults
    /// to 0 for odd N and pi/2 for even N.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<Phase>,
    /// Quadrature criterion.
    #[arg(long, default_value = "p")]
    criterion: Which,
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// Transmission efficiency of mode a.
    #[arg(long, default_value_t = 1.0)]
    eta_a: f64,
    /// Transmission efficiency of mode b.
    #[arg(long, default_value_t = 1.0)]
    eta_b: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Named figure grid; overrides --n, --phi and the grid flags.
    #[arg(long, value_enum, conflicts_with_all = ["n", "phi", "full", "eta_start", "eta_stop", "eta_step", "eta_b_start", "eta_b_stop", "eta_b_step"])]
    preset: Option<Preset>,
    /// NOON orders, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "preset")]
    n: Vec<usize>,
    /// Fixed phase for every order; omitted means 0 for odd N and pi/2 for even N.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<Phase>,
    #[arg(long, default_value = "p")]
    criterion: Which,
    /// Scan the full (eta_a, eta_b) product grid instead of eta_a = eta_b.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 0.8)]
    eta_start: f64,
    #[arg(long, default_value_t = 1.0)]
    eta_stop: f64,
    #[arg(long, default_value_t = 0.005)]
    eta_step: f64,
    /// eta_b axis of a --full grid; each defaults to the eta_a axis value.
    #[arg(long, requires = "full")]
    eta_b_start: Option<f64>,
    #[arg(long, requires = "full")]
    eta_b_stop: Option<f64>,
    #[arg(long, requires = "full")]
    eta_b_step: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
#[group(id = "mode", multiple = false)]
struct ModeArgs {
    /// Scan eta_a = eta_b (default).
    #[arg(long)]
    symmetric: bool,
    /// Hold eta_a at this value and scan eta_b.
    #[arg(long, value_name = "ETA")]
    fix_eta_a: Option<f64>,
    /// Hold eta_b at this value and scan eta_a.
    #[arg(long, value_name = "ETA")]
    fix_eta_b: Option<f64>,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    mode: ModeArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = RunConfig::DEFAULT_SHOTS)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of x-bins before occupancy merging.
    #[arg(long, default_value_t = RunConfig::DEFAULT_BINS)]
    bins: usize,
    /// Also write every simulated shot to this CSV file.
    #[arg(long)]
    shot_log: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

fn point_config(command: Command, state: StateArgs, out: OutputArgs) -> RunConfig {
    let mut c = RunConfig::new(command, vec![state.n]);
    c.phi = state.phi;
    c.criterion = state.criterion;
    c.output = out.output;
    if let Some(f) = out.format {
        c.format = f;
    }
    c
}

impl Cli {
    fn into_config(self) -> Result<RunConfig> {
        let config = match self.command {
            Commands::Eval(a) => {
                let mut c = point_config(Command::Eval, a.state, a.out);
                c.eta_a = a.channel.eta_a;
                c.eta_b = a.channel.eta_b;
                c
            }
            Commands::Sweep(a) => {
                let mut c = RunConfig::new(Command::Sweep, a.n.clone());
                c.criterion = a.criterion;
                c.output = a.out.output;
                if let Some(f) = a.out.format {
                    c.format = f;
                }
                match a.preset {
                    Some(p) => {
                        c.orders = p.orders();
                        c.grid = Some(p.grid());
                    }
                    None => {
                        c.phi = a.phi;
                        let eta = EtaGrid::new(a.eta_start, a.eta_stop, a.eta_step)?;
                        c.grid = Some(if a.full {
                            let eta_b = EtaGrid::new(
                                a.eta_b_start.unwrap_or(a.eta_start),
                                a.eta_b_stop.unwrap_or(a.eta_stop),
                                a.eta_b_step.unwrap_or(a.eta_step),
                            )?;
                            SweepGrid::Full { eta_a: eta, eta_b }
                        } else {
                            SweepGrid::Symmetric { eta }
                        });
                    }
                }
                c
            }
            Commands::Threshold(a) => {
                let mut c = point_config(Command::Threshold, a.state, a.out);
                c.threshold = match (a.mode.fix_eta_a, a.mode.fix_eta_b) {
                    (Some(v), _) => ThresholdMode::FixEtaA(v),
                    (_, Some(v)) => ThresholdMode::FixEtaB(v),
                    _ => ThresholdMode::Symmetric,
                };
                c
            }
            Commands::Sample(a) => {
                let mut c = point_config(Command::Sample, a.state, a.out);
                c.eta_a = a.channel.eta_a;
                c.eta_b = a.channel.eta_b;
                c.shots = a.shots;
                c.seed = a.seed;
                c.bins = a.bins;
                c.shot_log = a.shot_log;
                c
            }
        };
        Ok(config.with_out_dir(self.out_dir.as_deref()))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn sink(config: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run_eval(config: &RunConfig) -> Result<()> {
    let n = config.order();
    let phi = config.phi_rule().phase(n);
    let channel = LossChannel::new(config.eta_a, config.eta_b)?;
    let report = steering_functional(n, phi, channel, config.criterion)?;
    let mut out = sink(config)?;
    match config.format {
        Format::Text => {
            let rhs = protocol_rhs_for(n, phi, channel, config.criterion).ok();
            output::write_report_text(&report, rhs, &mut out)?
        }
        Format::Csv => output::write_report_csv(&[ReportRow::from_report(&report)], &mut out)?,
        Format::Json => output::write_json(&[ReportRow::from_report(&report)], &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn run_sweep(config: &RunConfig) -> Result<()> {
    let Some(grid) = &config.grid else {
        bail!("sweep needs an efficiency grid");
    };
    let rows: Vec<ReportRow> = sweep(&config.orders, config.phi_rule(), config.criterion, grid)?
        .iter()
        .map(ReportRow::from_sweep)
        .collect();
    let mut out = sink(config)?;
    match config.format {
        Format::Csv => output::write_report_csv(&rows, &mut out)?,
        Format::Json => output::write_json(&rows, &mut out)?,
        Format::Text => output::write_report_table(&rows, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn run_threshold(config: &RunConfig) -> Result<()> {
    let n = config.order();
    let phi = config.phi_rule().phase(n);
    let eta = threshold_efficiency(n, phi, config.criterion, config.threshold)?;
    let row = ThresholdRow::new(n, phi, config.criterion, config.threshold, eta);
    let mut out = sink(config)?;
    match config.format {
        Format::Text => row.write_text(&mut out)?,
        Format::Csv => row.write_csv(&mut out)?,
        Format::Json => output::write_json(&row, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn run_sample(config: &RunConfig) -> Result<()> {
    let n = config.order();
    let phi = config.phi_rule().phase(n);
    let channel = LossChannel::new(config.eta_a, config.eta_b)?;
    let mut sampling = SamplingConfig::new(n, phi, channel, config.criterion, config.shots, config.seed);
    sampling.bins = BinSpec::with_bins(config.bins);
    let sim = simulate(&sampling, config.shot_log.is_some())?;
    if let (Some(path), Some(records)) = (&config.shot_log, &sim.records) {
        write_shot_log(records, create(path)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let estimate = estimate_from_tallies(&sampling, &sim.tallies)?;
    let row = SampleRow::new(n, phi, (config.eta_a, config.eta_b), config.criterion, config.seed, &estimate);
    let mut out = sink(config)?;
    match config.format {
        Format::Text => row.write_text(&mut out)?,
        Format::Csv => row.write_csv(&mut out)?,
        Format::Json => output::write_json(&row, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn run(config: &RunConfig) -> Result<()> {
    match config.command {
        Command::Eval => run_eval(config),
        Command::Sweep => run_sweep(config),
        Command::Threshold => run_threshold(config),
        Command::Sample => run_sample(config),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use noon_steering::Error;
    for cause in err.chain() {
        match cause.downcast_ref::<Error>() {
            Some(Error::NondiscriminatingPhase { .. }) => return 2,
            Some(Error::InsufficientBinOccupancy { .. }) => return 3,
            _ => {}
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.into_config().and_then(|c| run(&c)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
