use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fwc_core::harness::{self, ExperimentConfig, ResultTable};
use fwc_core::Error;

#[derive(Parser)]
#[command(name = "fwc", version, about = "Fiber-wireless fronthaul experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dispersion fading vs fiber length per scheme and RF carrier.
    DispersionSweep(Common),
    /// System power vs fiber length, with crossover lengths.
    PowerSweep(Common),
    /// Monte Carlo sum-rate vs number of RAPs under the power budget.
    ThroughputSweep(Common),
    /// Array factor of phase-only vs true-time-delay steering.
    BeamPattern(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path. The metadata sidecar goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    drops: Option<usize>,
    /// Worker threads for Monte Carlo drops (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Report dispersion nulls as infinite values instead of exiting with code 4.
    #[arg(long)]
    allow_null: bool,
}

impl Common {
    fn resolve(&self) -> Result<(ExperimentConfig, PathBuf), Error> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.base_seed = s;
        }
        if let Some(d) = self.drops {
            cfg.monte_carlo_drops = d;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if self.allow_null {
            cfg.allow_null = true;
        }
        if let Some(o) = &self.out {
            cfg.output_path = Some(o.display().to_string());
        }
        let out = cfg
            .output_path
            .clone()
            .map(PathBuf::from)
            .ok_or_else(|| Error::Config("no output path: pass --out or set output_path".into()))?;
        Ok((cfg, out))
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (common, sweep): (&Common, fn(&ExperimentConfig) -> fwc_core::Result<ResultTable>) = match &cli.command {
        Command::DispersionSweep(c) => (c, harness::run_dispersion_sweep),
        Command::PowerSweep(c) => (c, harness::run_power_sweep),
        Command::ThroughputSweep(c) => (c, harness::run_throughput_sweep),
        Command::BeamPattern(c) => (c, harness::run_beam_pattern),
    };
    let (cfg, out) = common.resolve()?;
    let table = sweep(&cfg)?;
    harness::write_outputs(&table, &out)?;
    eprintln!(
        "wrote {} rows to {} (config {})",
        table.rows.len(),
        out.display(),
        table.config_hash
    );
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::exit_code(&e) as u8)
        }
    }
}
