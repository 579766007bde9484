//! Standard batching: each batch is cleared optimally during the next one.

use std::collections::VecDeque;

use crate::error::SimError;
use crate::factorization::optimal_clearing_schedule;
use crate::policies::backlog::maximal_matching;
use crate::schedule::Schedule;
use crate::switch::{ArrivalMatrix, BatchReport, Decision, PacketTag, Policy, ServiceOutcome, SwitchState, TagFilter};

/// Batch `k` covers slots `kL+1 ..= (k+1)L` and is served in slots
/// `(k+1)L+1 ..= (k+2)L`: first by its optimal clearing schedule (truncated
/// to `L` slots), then, if time remains, by maximal matchings over every
/// older leftover packet.
#[derive(Debug, Clone)]
pub struct StandardBatchingPolicy {
    n: usize,
    batch_len: u64,
    plan: VecDeque<Schedule>,
    clearing_slots: u64,
    open: Option<BatchReport>,
    reports: Vec<BatchReport>,
}

impl StandardBatchingPolicy {
    pub fn new(n: usize, batch_len: u64) -> Result<Self, SimError> {
        if batch_len == 0 {
            return Err(SimError::ParameterOutOfRange("batch length must be at least 1".into()));
        }
        Ok(Self {
            n,
            batch_len,
            plan: VecDeque::new(),
            clearing_slots: 0,
            open: None,
            reports: Vec::new(),
        })
    }

    pub fn batch_len(&self) -> u64 {
        self.batch_len
    }

    /// `(batch being served, position in its service period)` for a slot.
    fn service_position(&self, slot: u64) -> Option<(u64, u64)> {
        (slot > self.batch_len).then(|| {
            let off = slot - 1 - self.batch_len;
            (off / self.batch_len, off % self.batch_len)
        })
    }
}

impl Policy for StandardBatchingPolicy {
    fn name(&self) -> &'static str {
        "standard-batching"
    }

    fn arrival_tag(&self, slot: u64) -> PacketTag {
        PacketTag {
            batch: (slot - 1) / self.batch_len,
            subinterval: None,
            arrival_slot: slot,
        }
    }

    fn decide(&mut self, state: &SwitchState) -> Result<Decision, SimError> {
        debug_assert_eq!(state.n(), self.n);
        let Some((k, pos)) = self.service_position(state.slot()) else {
            return Ok(Decision::Idle);
        };
        if pos == 0 {
            let backlog = if k == 0 {
                0
            } else {
                state.count_matching(TagFilter::BatchAtMost(k - 1)).total()
            };
            let batch = state.count_matching(TagFilter::Batch(k));
            self.plan = optimal_clearing_schedule(&batch)
                .into_iter()
                .take(self.batch_len as usize)
                .collect();
            self.clearing_slots = self.plan.len() as u64;
            let report = BatchReport {
                batch: k,
                backlog,
                ..Default::default()
            };
            if self.clearing_slots == 0 {
                self.reports.push(report);
            } else {
                self.open = Some(report);
            }
        }
        if let Some(schedule) = self.plan.pop_front() {
            return Ok(Decision::Serve {
                schedule,
                filter: TagFilter::Batch(k),
            });
        }
        let schedule = maximal_matching(&state.count_matching(TagFilter::BatchAtMost(k)));
        Ok(if schedule.is_empty() {
            Decision::Idle
        } else {
            Decision::Serve {
                schedule,
                filter: TagFilter::BatchAtMost(k),
            }
        })
    }

    fn observe(&mut self, state: &SwitchState, _outcome: &ServiceOutcome, _arrivals: &ArrivalMatrix) {
        let Some((k, pos)) = self.service_position(state.slot()) else {
            return;
        };
        if self.clearing_slots > 0 && pos + 1 == self.clearing_slots {
            if let Some(mut report) = self.open.take() {
                report.leftover = state.count_matching(TagFilter::Batch(k)).total();
                self.reports.push(report);
            }
        }
    }

    fn batch_reports(&self) -> Vec<BatchReport> {
        self.reports.clone()
    }

    fn horizon_for_batches(&self, batches: u64) -> u64 {
        (batches + 1) * self.batch_len
    }
}
