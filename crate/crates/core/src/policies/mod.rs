//! Scheduling policies and their parameters.

pub mod backlog;
pub mod batching;
pub mod lower_envelope;
pub mod max_weight;
pub mod params;
pub mod subintervals;

use std::fmt;
use std::str::FromStr;

pub use backlog::{backlog_update, maximal_matching};
pub use batching::StandardBatchingPolicy;
pub use lower_envelope::{LowerEnvelopePolicy, Phase};
pub use max_weight::{max_weight_schedule, MaxWeightPolicy};
pub use params::{
    batch_length, derive_params, scale_f, theoretical_regime, Mode, PolicyConstants, PolicyParams, RegimeViolation,
};
pub use subintervals::{subintervals_adaptive, subintervals_theoretical};

use crate::error::{ParamError, SimError};
use crate::switch::Policy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    LowerEnvelope,
    MaxWeight,
    StandardBatching,
}

impl PolicyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::LowerEnvelope => "lower-envelope",
            PolicyKind::MaxWeight => "max-weight",
            PolicyKind::StandardBatching => "standard-batching",
        }
    }
}

impl FromStr for PolicyKind {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lower-envelope" => Ok(PolicyKind::LowerEnvelope),
            "max-weight" => Ok(PolicyKind::MaxWeight),
            "standard-batching" => Ok(PolicyKind::StandardBatching),
            other => Err(ParamError::UnknownPolicy(other.to_string())),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A ready-to-run policy plus how it was obtained.
pub struct BuiltPolicy {
    pub policy: Box<dyn Policy + Send>,
    /// Set when the requested lower-envelope policy was outside its valid
    /// regime and Max-Weight was substituted.
    pub fallback: Option<ParamError>,
    /// Batch length used to convert horizons in batches to slots.
    pub batch_len: u64,
}

impl BuiltPolicy {
    /// The name recorded in outputs: `max-weight(fallback)` after a substitution.
    pub fn label(&self) -> String {
        match self.fallback {
            Some(_) => format!("{}(fallback)", self.policy.name()),
            None => self.policy.name().to_string(),
        }
    }
}

/// Instantiates a policy by kind. An invalid lower-envelope regime falls
/// back to Max-Weight, with the reason kept in [`BuiltPolicy::fallback`].
pub fn build_policy(
    kind: PolicyKind,
    n: usize,
    rho: f64,
    constants: &PolicyConstants,
) -> Result<BuiltPolicy, SimError> {
    let batch_len = batch_length(n, rho, constants)?.max(1);
    let built = match kind {
        PolicyKind::MaxWeight => BuiltPolicy {
            policy: Box::new(MaxWeightPolicy::new(batch_len)),
            fallback: None,
            batch_len,
        },
        PolicyKind::StandardBatching => BuiltPolicy {
            policy: Box::new(StandardBatchingPolicy::new(n, batch_len)?),
            fallback: None,
            batch_len,
        },
        PolicyKind::LowerEnvelope => match derive_params(n, rho, constants) {
            Ok(params) => BuiltPolicy {
                policy: Box::new(LowerEnvelopePolicy::new(params)),
                fallback: None,
                batch_len,
            },
            Err(err @ ParamError::InvalidRegime(_)) => {
                log::warn!("lower-envelope policy unavailable at n = {n}, rho = {rho}: {err}; using max-weight");
                BuiltPolicy {
                    policy: Box::new(MaxWeightPolicy::new(batch_len)),
                    fallback: Some(err),
                    batch_len,
                }
            }
            Err(err) => return Err(err.into()),
        },
    };
    Ok(built)
}
