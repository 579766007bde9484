//! The lower-envelope batching policy.
//!
//! Time is cut into batches of `b` slots. Batch `k` (slots `kb+1 ..= (k+1)b`)
//! is served during its service period, slots `kb+d+1 ..= (k+1)b+d`, which
//! runs through three phases:
//!
//! 1. Lower envelope (`b - d` slots, subintervals `I_1 .. I_ell`). At the
//!    start of `I_u` the policy takes `A`, the arrivals of batch `k` during
//!    `I_{u-1}`, finds its largest envelope degree `beta`, and serves
//!    `min(beta, I_u)` full matchings from a regular sub-multigraph of `A`,
//!    touching only packets that arrived in `I_{u-1}`. Remaining slots of
//!    `I_u` idle.
//! 2. Normal clearing (`d + s - b` slots). The unserved packets of batch `k`
//!    are cleared with a minimum-length schedule, truncated to the phase;
//!    whatever is left is the batch's leftover `U_k`.
//! 3. Backlog clearing (`b - s` slots). Every packet of batch `k` or older
//!    is backlog; each slot serves a maximal matching over backlog cells.

use std::collections::{HashMap, VecDeque};

use crate::error::SimError;
use crate::factorization::{decompose_regular, envelope_with_degree, largest_envelope, optimal_clearing_schedule};
use crate::matrix::QueueMatrix;
use crate::policies::backlog::maximal_matching;
use crate::policies::params::PolicyParams;
use crate::schedule::Schedule;
use crate::switch::{ArrivalMatrix, BatchReport, Decision, PacketTag, Policy, ServiceOutcome, SwitchState, TagFilter};

/// Position of a slot inside a service period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Before the first service period starts.
    Warmup,
    LowerEnvelope {
        batch: u64,
        subinterval: u32,
        offset: u64,
    },
    NormalClearing {
        batch: u64,
        offset: u64,
    },
    BacklogClearing {
        batch: u64,
        offset: u64,
    },
}

#[derive(Debug, Clone)]
pub struct LowerEnvelopePolicy {
    params: PolicyParams,
    /// `starts[u]` is the first batch-relative slot (0-based) of `I_u`;
    /// `starts[ell + 1] == b`.
    starts: Vec<u64>,
    /// Arrival counts per `(batch, subinterval)` not yet consumed.
    arrivals: HashMap<(u64, u32), QueueMatrix>,
    plan: VecDeque<Schedule>,
    plan_filter: TagFilter,
    open: Option<BatchReport>,
    reports: Vec<BatchReport>,
    envelope_degrees: Vec<(u64, u32, u64)>,
}

impl LowerEnvelopePolicy {
    pub fn new(params: PolicyParams) -> Self {
        let mut starts = Vec::with_capacity(params.intervals.len() + 1);
        let mut acc = 0;
        starts.push(0);
        for &len in &params.intervals {
            acc += len;
            starts.push(acc);
        }
        debug_assert_eq!(acc, params.b);
        Self {
            params,
            starts,
            arrivals: HashMap::new(),
            plan: VecDeque::new(),
            plan_filter: TagFilter::Any,
            open: None,
            reports: Vec::new(),
            envelope_degrees: Vec::new(),
        }
    }

    pub fn params(&self) -> &PolicyParams {
        &self.params
    }

    /// `(batch, subinterval, largest envelope degree)` for every
    /// lower-envelope subinterval started so far.
    pub fn envelope_degrees(&self) -> &[(u64, u32, u64)] {
        &self.envelope_degrees
    }

    /// Subinterval containing a batch-relative slot offset. Zero-length
    /// subintervals are skipped.
    fn subinterval_of(&self, offset: u64) -> u32 {
        (self.starts.partition_point(|&s| s <= offset) - 1) as u32
    }

    pub fn phase(&self, slot: u64) -> Phase {
        let p = &self.params;
        if slot <= p.d {
            return Phase::Warmup;
        }
        let off = slot - p.d - 1;
        let batch = off / p.b;
        let pos = off % p.b;
        if pos < p.b - p.d {
            let offset = pos + p.d;
            Phase::LowerEnvelope {
                batch,
                subinterval: self.subinterval_of(offset),
                offset,
            }
        } else if pos < p.s {
            Phase::NormalClearing {
                batch,
                offset: pos - (p.b - p.d),
            }
        } else {
            Phase::BacklogClearing {
                batch,
                offset: pos - p.s,
            }
        }
    }

    fn start_subinterval(&mut self, batch: u64, u: u32) -> Result<(), SimError> {
        let source = self
            .arrivals
            .remove(&(batch, u - 1))
            .unwrap_or_else(|| QueueMatrix::zeros(self.params.n));
        let len = self.params.intervals[u as usize];
        let beta = largest_envelope(&source).beta();
        self.envelope_degrees.push((batch, u, beta));
        let degree = beta.min(len);
        let envelope = envelope_with_degree(&source, degree).expect("degree below the largest feasible");
        self.plan = decompose_regular(&envelope)?.into_iter().collect();
        self.plan_filter = TagFilter::Subinterval {
            batch,
            subinterval: u - 1,
        };
        Ok(())
    }

    fn next_from_plan(&mut self) -> Decision {
        match self.plan.pop_front() {
            Some(schedule) => Decision::Serve {
                schedule,
                filter: self.plan_filter,
            },
            None => Decision::Idle,
        }
    }
}

impl Policy for LowerEnvelopePolicy {
    fn name(&self) -> &'static str {
        "lower-envelope"
    }

    fn arrival_tag(&self, slot: u64) -> PacketTag {
        let off = slot - 1;
        PacketTag {
            batch: off / self.params.b,
            subinterval: Some(self.subinterval_of(off % self.params.b)),
            arrival_slot: slot,
        }
    }

    fn decide(&mut self, state: &SwitchState) -> Result<Decision, SimError> {
        match self.phase(state.slot()) {
            Phase::Warmup => Ok(Decision::Idle),
            Phase::LowerEnvelope {
                batch,
                subinterval,
                offset,
            } => {
                if offset == self.params.d {
                    let backlog = if batch == 0 {
                        0
                    } else {
                        state.count_matching(TagFilter::BatchAtMost(batch - 1)).total()
                    };
                    self.open = Some(BatchReport {
                        batch,
                        backlog,
                        ..Default::default()
                    });
                    // drop anything a skipped zero-length subinterval left behind
                    self.arrivals.retain(|&(k, _), _| k >= batch);
                }
                if offset == self.starts[subinterval as usize] {
                    self.start_subinterval(batch, subinterval)?;
                }
                let decision = self.next_from_plan();
                if decision == Decision::Idle {
                    if let Some(report) = self.open.as_mut() {
                        report.envelope_idle_slots += 1;
                    }
                }
                Ok(decision)
            }
            Phase::NormalClearing { batch, offset } => {
                if offset == 0 {
                    let remaining = state.count_matching(TagFilter::Batch(batch));
                    self.plan = optimal_clearing_schedule(&remaining)
                        .into_iter()
                        .take(self.params.normal_phase_len() as usize)
                        .collect();
                    self.plan_filter = TagFilter::Batch(batch);
                    self.arrivals.retain(|&(k, _), _| k > batch);
                }
                Ok(self.next_from_plan())
            }
            Phase::BacklogClearing { batch, .. } => {
                let backlog = state.count_matching(TagFilter::BatchAtMost(batch));
                let schedule = maximal_matching(&backlog);
                Ok(if schedule.is_empty() {
                    Decision::Idle
                } else {
                    Decision::Serve {
                        schedule,
                        filter: TagFilter::BatchAtMost(batch),
                    }
                })
            }
        }
    }

    fn observe(&mut self, state: &SwitchState, outcome: &ServiceOutcome, arrivals: &ArrivalMatrix) {
        let slot = state.slot();
        let tag = self.arrival_tag(slot);
        if arrivals.count() > 0 {
            let sub = tag.subinterval.expect("lower-envelope tags carry a subinterval");
            let n = self.params.n;
            let acc = self
                .arrivals
                .entry((tag.batch, sub))
                .or_insert_with(|| QueueMatrix::zeros(n));
            arrivals.accumulate_into(acc);
        }
        match self.phase(slot) {
            Phase::LowerEnvelope { .. } => {
                if let Some(report) = self.open.as_mut() {
                    report.envelope_wasted += outcome.wasted as u64;
                }
            }
            Phase::NormalClearing { batch, offset } if offset + 1 == self.params.normal_phase_len() => {
                if let Some(mut report) = self.open.take() {
                    report.leftover = state.count_matching(TagFilter::Batch(batch)).total();
                    self.reports.push(report);
                }
            }
            _ => {}
        }
    }

    fn batch_reports(&self) -> Vec<BatchReport> {
        self.reports.clone()
    }

    /// `batches` full service periods: `batches * b + d` slots.
    fn horizon_for_batches(&self, batches: u64) -> u64 {
        batches * self.params.b + self.params.d
    }
}
