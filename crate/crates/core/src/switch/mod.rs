//! The discrete-time switch model.
//!
//! Each slot: the policy observes the queues and picks a schedule (or
//! idles), the schedule is applied, then the slot's Bernoulli arrivals join
//! the queues.

pub mod arrivals;
pub mod metrics;
pub mod sim;
pub mod state;

pub use crate::schedule::Schedule;
pub use arrivals::{generate_arrivals, keyed_rng, ArrivalMatrix, ArrivalStream};
pub use metrics::{BatchRecord, BatchReport, MetricsTrace, SlotRecord};
pub use sim::{run, run_with, Decision, NullPolicy, Policy, RunConfig};
pub use state::{PacketTag, ServiceOutcome, SwitchState, TagFilter};
