//! Discrete-time simulator and algorithm library for `n x n` input-queued
//! switches.
//!
//! The crate is organized around four layers:
//!
//! - [`factorization`]: lower envelopes of queue matrices via integral
//!   max-flow, decomposition of regular multigraphs into perfect matchings,
//!   and minimum-length clearing schedules.
//! - [`switch`]: the slotted switch model (Bernoulli arrivals, per-cell FIFO
//!   queues, service accounting) and the simulation driver.
//! - [`policies`]: the lower-envelope batching policy with its parameter
//!   derivation, plus Max-Weight and standard batching baselines.
//! - [`experiments`]: seeded replications, parameter sweeps, the random
//!   multigraph factor experiment, and analytic bound utilities.
//!
//! Replications run on a rayon pool when the `parallel` feature is enabled
//! (the default) and sequentially otherwise; results are identical either way.

pub mod error;
pub mod experiments;
pub mod factorization;
pub mod matrix;
pub mod par;
pub mod policies;
pub mod schedule;
pub mod switch;

pub use error::{ExperimentError, FactorError, ParamError, SimError};
pub use matrix::QueueMatrix;
pub use schedule::{MatchingSequence, Schedule};
