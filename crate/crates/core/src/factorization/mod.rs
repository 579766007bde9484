//! Exact algorithms on queue matrices viewed as bipartite multigraphs.

pub mod clearing;
pub mod decompose;
pub mod envelope;
pub mod flow;

pub use clearing::{min_clearance_oracle, optimal_clearing_schedule, pad_to_regular};
pub use decompose::{decompose_regular, decompose_runs};
pub use envelope::{envelope_oracle, envelope_with_degree, has_beta_envelope, largest_envelope, LowerEnvelope};
pub use flow::{max_flow, FlowNetwork, MaxFlow};
