//! Queue state of an input-queued switch.

use std::collections::VecDeque;

use crate::error::SimError;
use crate::matrix::QueueMatrix;
use crate::schedule::Schedule;
use crate::switch::arrivals::ArrivalMatrix;

/// Bookkeeping attached to every queued packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PacketTag {
    pub batch: u64,
    pub subinterval: Option<u32>,
    pub arrival_slot: u64,
}

/// Which packets a schedule may serve in a given slot. Packets that do not
/// match are invisible to that slot's service.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagFilter {
    Any,
    Batch(u64),
    BatchAtMost(u64),
    Subinterval { batch: u64, subinterval: u32 },
}

impl TagFilter {
    pub fn matches(&self, tag: &PacketTag) -> bool {
        match *self {
            TagFilter::Any => true,
            TagFilter::Batch(k) => tag.batch == k,
            TagFilter::BatchAtMost(k) => tag.batch <= k,
            TagFilter::Subinterval { batch, subinterval } => tag.batch == batch && tag.subinterval == Some(subinterval),
        }
    }
}

/// What one application of a schedule achieved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ServiceOutcome {
    pub offered: usize,
    pub served: usize,
    pub wasted: usize,
}

/// Per-cell FIFO queues plus cumulative arrival, service and waste counters.
///
/// Slots are 1-based. Within slot `tau`, service happens first and arrivals
/// are appended at the end of the slot, so a packet arriving in slot `tau`
/// can be served from slot `tau + 1` on.
#[derive(Debug, Clone)]
pub struct SwitchState {
    n: usize,
    tau: u64,
    fifo: Vec<VecDeque<PacketTag>>,
    arrived: Vec<u64>,
    served: Vec<u64>,
    wasted: Vec<u64>,
    total_queue: u64,
}

impl SwitchState {
    /// An empty switch at slot 1.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            tau: 1,
            fifo: vec![VecDeque::new(); n * n],
            arrived: vec![0; n * n],
            served: vec![0; n * n],
            wasted: vec![0; n * n],
            total_queue: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The current slot.
    pub fn slot(&self) -> u64 {
        self.tau
    }

    pub fn queue_len(&self, i: usize, j: usize) -> usize {
        self.fifo[i * self.n + j].len()
    }

    pub fn total_queue(&self) -> u64 {
        self.total_queue
    }

    pub fn queue_matrix(&self) -> QueueMatrix {
        let data = self.fifo.iter().map(|q| q.len() as u64).collect();
        QueueMatrix::from_vec(self.n, data).expect("square by construction")
    }

    /// Per-cell counts of queued packets accepted by `filter`.
    pub fn count_matching(&self, filter: TagFilter) -> QueueMatrix {
        let data = self
            .fifo
            .iter()
            .map(|q| q.iter().filter(|t| filter.matches(t)).count() as u64)
            .collect();
        QueueMatrix::from_vec(self.n, data).expect("square by construction")
    }

    pub fn has_matching(&self, i: usize, j: usize, filter: TagFilter) -> bool {
        self.fifo[i * self.n + j].iter().any(|t| filter.matches(t))
    }

    pub fn cumulative_arrivals(&self) -> &[u64] {
        &self.arrived
    }

    pub fn cumulative_services(&self) -> &[u64] {
        &self.served
    }

    pub fn cumulative_waste(&self) -> &[u64] {
        &self.wasted
    }

    pub fn packets(&self, i: usize, j: usize) -> impl Iterator<Item = &PacketTag> {
        self.fifo[i * self.n + j].iter()
    }

    /// Offers one service to each scheduled cell. A cell holding a packet
    /// accepted by `filter` releases the oldest such packet; otherwise the
    /// offered service is wasted.
    pub fn apply_schedule(&mut self, sigma: &Schedule, filter: TagFilter) -> Result<ServiceOutcome, SimError> {
        if sigma.n() != self.n {
            return Err(SimError::DimensionMismatch {
                expected: self.n,
                found: sigma.n(),
            });
        }
        let mut outcome = ServiceOutcome::default();
        for (i, j) in sigma.pairs() {
            let cell = i * self.n + j;
            outcome.offered += 1;
            let queue = &mut self.fifo[cell];
            match queue.iter().position(|t| filter.matches(t)) {
                Some(pos) => {
                    queue.remove(pos);
                    self.served[cell] += 1;
                    self.total_queue -= 1;
                    outcome.served += 1;
                }
                None => {
                    self.wasted[cell] += 1;
                    outcome.wasted += 1;
                }
            }
        }
        Ok(outcome)
    }

    /// Appends this slot's arrivals, tagged with `batch` and `subinterval`.
    pub fn inject_arrivals(&mut self, a: &ArrivalMatrix, batch: u64, subinterval: Option<u32>) {
        let tag = PacketTag {
            batch,
            subinterval,
            arrival_slot: self.tau,
        };
        for (i, j) in a.iter_arrivals() {
            let cell = i * self.n + j;
            self.fifo[cell].push_back(tag);
            self.arrived[cell] += 1;
            self.total_queue += 1;
        }
    }

    /// Moves to the next slot.
    pub fn end_slot(&mut self) {
        self.tau += 1;
    }

    /// Checks `Q_ij == A_ij - S_ij` in every cell.
    pub fn check_conservation(&self) -> Result<(), SimError> {
        for (cell, queue) in self.fifo.iter().enumerate() {
            if self.arrived[cell] < self.served[cell] || queue.len() as u64 != self.arrived[cell] - self.served[cell] {
                return Err(SimError::ConservationViolated {
                    row: cell / self.n,
                    col: cell % self.n,
                    slot: self.tau,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(batch: u64, sub: Option<u32>, slot: u64) -> PacketTag {
        PacketTag {
            batch,
            subinterval: sub,
            arrival_slot: slot,
        }
    }

    #[test]
    fn empty_schedule_changes_nothing() {
        let mut s = SwitchState::new(3);
        s.inject_arrivals(&ArrivalMatrix::ones(3), 0, None);
        let before = s.queue_matrix();
        let out = s.apply_schedule(&Schedule::empty(3), TagFilter::Any).unwrap();
        assert_eq!(out, ServiceOutcome::default());
        assert_eq!(s.queue_matrix(), before);
    }

    #[test]
    fn identity_clears_identity_queue() {
        let mut s = SwitchState::new(3);
        let diag = (0..9).map(|k| k % 4 == 0).collect();
        s.inject_arrivals(&ArrivalMatrix::from_cells(3, diag), 0, None);
        s.end_slot();
        let out = s.apply_schedule(&Schedule::identity(3), TagFilter::Any).unwrap();
        assert_eq!(out.served, 3);
        assert_eq!(out.wasted, 0);
        assert_eq!(s.total_queue(), 0);
        s.check_conservation().unwrap();
    }

    #[test]
    fn identity_on_empty_state_is_all_waste() {
        let mut s = SwitchState::new(4);
        let out = s.apply_schedule(&Schedule::identity(4), TagFilter::Any).unwrap();
        assert_eq!(out.wasted, 4);
        assert_eq!(s.cumulative_waste().iter().sum::<u64>(), 4);
    }

    #[test]
    fn injection_and_conservation_without_service() {
        let mut s = SwitchState::new(2);
        s.inject_arrivals(&ArrivalMatrix::zeros(2), 0, None);
        assert_eq!(s.total_queue(), 0);
        for _ in 0..5 {
            s.inject_arrivals(&ArrivalMatrix::ones(2), 0, None);
            s.end_slot();
        }
        assert_eq!(s.total_queue(), 20);
        assert_eq!(s.queue_matrix(), QueueMatrix::filled(2, 5));
        assert!(s.cumulative_arrivals().iter().all(|&a| a == 5));
        s.check_conservation().unwrap();
    }

    #[test]
    fn filter_serves_oldest_matching_packet() {
        let mut s = SwitchState::new(1);
        for (batch, sub) in [(0, Some(0)), (0, Some(1)), (1, Some(0))] {
            s.inject_arrivals(&ArrivalMatrix::ones(1), batch, sub);
            s.end_slot();
        }
        let filter = TagFilter::Subinterval {
            batch: 0,
            subinterval: 1,
        };
        let out = s.apply_schedule(&Schedule::identity(1), filter).unwrap();
        assert_eq!(out.served, 1);
        let left: Vec<_> = s.packets(0, 0).copied().collect();
        assert_eq!(left, vec![tag(0, Some(0), 1), tag(1, Some(0), 3)]);
        // nothing from batch 0 subinterval 1 remains
        let out = s.apply_schedule(&Schedule::identity(1), filter).unwrap();
        assert_eq!(out.wasted, 1);
        assert!(TagFilter::BatchAtMost(0).matches(&tag(0, None, 9)));
        assert!(!TagFilter::Batch(2).matches(&tag(1, None, 9)));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut s = SwitchState::new(2);
        assert!(s.apply_schedule(&Schedule::identity(3), TagFilter::Any).is_err());
    }
}
