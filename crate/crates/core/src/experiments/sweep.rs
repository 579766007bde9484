//! Parameter sweeps over `(n, rho)` with seeded replications.
//!
//! Sweep files are TOML:
//!
//! ```toml
//! policy = "lower-envelope"
//! constants = "desk.constants"   # optional, relative to this file
//! mode = "adaptive"              # optional, overrides the constants file
//! horizon_batches = 20
//! replications = 5
//! base_seed = 1
//! output = "sweep.csv"           # optional
//!
//! [[points]]
//! n = 8
//! rho = 0.8
//! ```

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::ExperimentError;
use crate::experiments::records::{write_records, ExperimentRecord, SWEEP_HEADER};
use crate::par::Execution;
use crate::policies::{build_policy, Mode, PolicyConstants, PolicyKind};
use crate::switch::{run_with, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub points: Vec<SweepPoint>,
    pub policy: String,
    #[serde(default)]
    pub constants: Option<PathBuf>,
    #[serde(default)]
    pub mode: Option<String>,
    pub horizon_batches: u64,
    #[serde(default = "one")]
    pub replications: u64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn one() -> u64 {
    1
}

impl SweepConfig {
    /// Reads a sweep file; relative `constants` and `output` paths are
    /// resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)?;
        let mut config: SweepConfig = toml::from_str(&text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        let dir = path.parent().unwrap_or(Path::new(""));
        for p in [&mut config.constants, &mut config.output].into_iter().flatten() {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.replications == 0 {
            return Err(ExperimentError::Config("replications must be at least 1".into()));
        }
        if self.horizon_batches == 0 {
            return Err(ExperimentError::Config("horizon_batches must be at least 1".into()));
        }
        self.policy_kind()?;
        self.mode_override()?;
        Ok(())
    }

    pub fn policy_kind(&self) -> Result<PolicyKind, ExperimentError> {
        Ok(self.policy.parse()?)
    }

    pub fn mode_override(&self) -> Result<Option<Mode>, ExperimentError> {
        Ok(self.mode.as_deref().map(str::parse).transpose()?)
    }

    /// Constants from the configured file, else the preset for the mode.
    pub fn resolve_constants(&self) -> Result<PolicyConstants, ExperimentError> {
        let mode = self.mode_override()?;
        match &self.constants {
            Some(path) => Ok(PolicyConstants::parse(&std::fs::read_to_string(path)?, mode)?),
            None => Ok(PolicyConstants::preset(mode.unwrap_or_default())),
        }
    }
}

/// Seed for grid item `index`: `base_seed + index`, so any row can be
/// rerun on its own with `simulate --seed`.
pub fn item_seed(base_seed: u64, index: u64) -> u64 {
    base_seed.wrapping_add(index)
}

/// Simulates one replication and aggregates its trace.
pub fn run_replication(
    kind: PolicyKind,
    n: usize,
    rho: f64,
    constants: &PolicyConstants,
    horizon_batches: u64,
    seed: u64,
) -> Result<ExperimentRecord, ExperimentError> {
    let mut built = build_policy(kind, n, rho, constants)?;
    let horizon = built.policy.horizon_for_batches(horizon_batches);
    let config = RunConfig::new(n, rho, horizon, seed);
    let trace = run_with(&mut built.policy, &config)?;
    Ok(ExperimentRecord::from_trace(n, rho, built.label(), seed, &trace))
}

/// Runs every `(point, replication)` pair; rows come back in config order
/// whatever the execution mode.
pub fn run_sweep_with(
    config: &SweepConfig,
    constants: &PolicyConstants,
    exec: Execution,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    config.validate()?;
    let kind = config.policy_kind()?;
    let reps = config.replications;
    let items = config.points.len() as u64 * reps;
    exec.map_indices(items as usize, |idx| {
        let point = config.points[idx / reps as usize];
        let seed = item_seed(config.base_seed, idx as u64);
        run_replication(kind, point.n, point.rho, constants, config.horizon_batches, seed)
    })
    .into_iter()
    .collect()
}

/// Runs the sweep and, when `config.output` is set, writes the CSV there.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let constants = config.resolve_constants()?;
    let records = run_sweep_with(config, &constants, Execution::default())?;
    if let Some(path) = &config.output {
        write_records(BufWriter::new(File::create(path)?), &SWEEP_HEADER, &records)?;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(points: Vec<SweepPoint>, policy: &str) -> SweepConfig {
        SweepConfig {
            points,
            policy: policy.into(),
            constants: None,
            mode: None,
            horizon_batches: 2,
            replications: 2,
            base_seed: 10,
            output: None,
        }
    }

    #[test]
    fn empty_grid_gives_no_rows() {
        let c = config(vec![], "max-weight");
        assert!(run_sweep_with(&c, &PolicyConstants::adaptive(), Execution::Sequential)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn rows_follow_config_order_and_seeds() {
        let c = config(
            vec![SweepPoint { n: 4, rho: 0.5 }, SweepPoint { n: 3, rho: 0.6 }],
            "max-weight",
        );
        let k = PolicyConstants::adaptive();
        let seq = run_sweep_with(&c, &k, Execution::Sequential).unwrap();
        let par = run_sweep_with(&c, &k, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 4, 3, 3]);
        assert_eq!(seq.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![10, 11, 12, 13]);
    }

    #[test]
    fn invalid_regime_is_marked_not_fatal() {
        let c = config(vec![SweepPoint { n: 4, rho: 0.5 }], "lower-envelope");
        let rows = run_sweep_with(&c, &PolicyConstants::theoretical(), Execution::Sequential).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.policy == "max-weight(fallback)"));
    }

    #[test]
    fn validation() {
        let mut c = config(vec![], "max-weight");
        c.replications = 0;
        assert!(c.validate().is_err());
        let c = config(vec![], "round-robin");
        assert!(c.validate().is_err());
        let mut c = config(vec![], "max-weight");
        c.mode = Some("fast".into());
        assert!(c.validate().is_err());
    }

    #[test]
    fn parses_toml() {
        let text = r#"
            policy = "max-weight"
            horizon_batches = 3
            replications = 5
            base_seed = 7
            [[points]]
            n = 8
            rho = 0.8
            [[points]]
            n = 16
            rho = 0.8
        "#;
        let c: SweepConfig = toml::from_str(text).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.points[1], SweepPoint { n: 16, rho: 0.8 });
        assert_eq!(c.replications, 5);
        c.validate().unwrap();
    }
}
