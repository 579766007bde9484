use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use switchsim_core::experiments::records::{FACTOR_HEADER, SWEEP_HEADER};
use switchsim_core::experiments::{factor_experiment, run_sweep_with, write_records, ExperimentRecord, SweepConfig};
use switchsim_core::factorization::optimal_clearing_schedule;
use switchsim_core::par::Execution;
use switchsim_core::policies::{build_policy, Mode, PolicyConstants, PolicyKind};
use switchsim_core::switch::{run_with, RunConfig};
use switchsim_core::QueueMatrix;

/// Input-queued switch simulator and lower-envelope tools.
#[derive(Debug, Parser)]
#[command(name = "switchsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one replication and write a single sweep-schema row.
    Simulate {
        #[arg(long)]
        policy: PolicyKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rho: f64,
        #[arg(long = "horizon-batches")]
        horizon_batches: u64,
        #[arg(long)]
        seed: u64,
        /// `key = value` file with c_b, c_d, c_s, c_f and mode.
        #[arg(long)]
        constants: Option<PathBuf>,
        #[arg(long)]
        mode: Option<Mode>,
        /// Per-slot trace CSV; per-batch rows go to `<stem>.batches.csv` beside it.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every grid point and replication of a TOML sweep file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Largest envelope of random Binomial(m, p) multigraphs against the threshold.
    Factor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        f: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimum-length clearing schedule for a matrix file.
    Clear {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Simulate {
            policy,
            n,
            rho,
            horizon_batches,
            seed,
            constants,
            mode,
            trace,
            out,
        } => simulate(
            policy,
            n,
            rho,
            horizon_batches,
            seed,
            constants.as_deref(),
            mode,
            trace.as_deref(),
            &out,
        ),
        Command::Sweep { config, out } => sweep(&config, &out),
        Command::Factor {
            n,
            m,
            p,
            f,
            trials,
            seed,
            out,
        } => {
            let records = factor_experiment(n, m, p, f, trials, seed)?;
            write_records(create(&out)?, &FACTOR_HEADER, &records)?;
            Ok(())
        }
        Command::Clear { matrix, out } => {
            let text = fs::read_to_string(&matrix).with_context(|| format!("reading {}", matrix.display()))?;
            let q: QueueMatrix = text.parse().with_context(|| format!("parsing {}", matrix.display()))?;
            fs::write(&out, optimal_clearing_schedule(&q).to_text())
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn load_constants(path: Option<&Path>, mode: Option<Mode>) -> Result<PolicyConstants> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(PolicyConstants::parse(&text, mode)?)
        }
        None => Ok(PolicyConstants::preset(mode.unwrap_or_default())),
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    kind: PolicyKind,
    n: usize,
    rho: f64,
    horizon_batches: u64,
    seed: u64,
    constants: Option<&Path>,
    mode: Option<Mode>,
    trace_path: Option<&Path>,
    out: &Path,
) -> Result<()> {
    if horizon_batches == 0 {
        bail!("--horizon-batches must be at least 1");
    }
    let constants = load_constants(constants, mode)?;
    let mut built = build_policy(kind, n, rho, &constants)?;
    let horizon = built.policy.horizon_for_batches(horizon_batches);
    let trace = run_with(&mut built.policy, &RunConfig::new(n, rho, horizon, seed))?;
    let record = ExperimentRecord::from_trace(n, rho, built.label(), seed, &trace);
    write_records(create(out)?, &SWEEP_HEADER, &[record])?;
    if let Some(path) = trace_path {
        trace.write_slot_csv(create(path)?)?;
        trace.write_batch_csv(create(&batch_trace_path(path))?)?;
    }
    Ok(())
}

fn batch_trace_path(slot_trace: &Path) -> PathBuf {
    let stem = slot_trace.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
    slot_trace.with_file_name(format!("{stem}.batches.csv"))
}

fn sweep(config_path: &Path, out: &Path) -> Result<()> {
    let config = SweepConfig::load(config_path).with_context(|| format!("loading {}", config_path.display()))?;
    let constants = config.resolve_constants()?;
    let records = run_sweep_with(&config, &constants, Execution::default())?;
    write_records(create(out)?, &SWEEP_HEADER, &records)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn batch_trace_sits_beside_slot_trace() {
        assert_eq!(
            batch_trace_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.batches.csv")
        );
    }
}
