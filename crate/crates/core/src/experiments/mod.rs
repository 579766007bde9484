//! Experiment harness: replications, sweeps, and analytic utilities.

pub mod bounds;
pub mod factor;
pub mod records;
pub mod sweep;

pub use bounds::{binomial_tail_bounds, kingman_bound};
pub use factor::{beta0, factor_experiment, rescore_success_fraction, FactorRecord};
pub use records::{read_records, write_records, ExperimentRecord};
pub use sweep::{run_replication, run_sweep, run_sweep_with, SweepConfig, SweepPoint};
