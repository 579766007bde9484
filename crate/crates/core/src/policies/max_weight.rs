//! Max-Weight scheduling: serve a matching of maximum total queue length.

use crate::error::SimError;
use crate::matrix::QueueMatrix;
use crate::schedule::Schedule;
use crate::switch::{Decision, Policy, SwitchState};

/// A maximum-weight matching with weights `Q_ij`, by the O(n^3) Hungarian
/// method with potentials. Cells with zero weight are dropped from the
/// result, so an all-zero `Q` yields the empty schedule.
pub fn max_weight_schedule(q: &QueueMatrix) -> Schedule {
    let n = q.n();
    if n == 0 || q.is_zero() {
        return Schedule::empty(n);
    }
    let max = *q.as_slice().iter().max().unwrap() as i128;
    // Minimize cost = max - Q_ij on a 1-based dense formulation.
    let cost = |i: usize, j: usize| max - q[(i - 1, j - 1)] as i128;
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![None; n];
    for j in 1..=n {
        let i = p[j];
        if i > 0 && q[(i - 1, j - 1)] > 0 {
            assign[i - 1] = Some(j - 1);
        }
    }
    Schedule::from_assignment_unchecked(assign)
}

/// Serves a maximum-weight matching of the current queues every slot.
#[derive(Debug, Clone)]
pub struct MaxWeightPolicy {
    batch_len: u64,
}

impl MaxWeightPolicy {
    /// `batch_len` only converts a horizon in batches into slots.
    pub fn new(batch_len: u64) -> Self {
        Self {
            batch_len: batch_len.max(1),
        }
    }
}

impl Default for MaxWeightPolicy {
    fn default() -> Self {
        Self::new(1)
    }
}

impl Policy for MaxWeightPolicy {
    fn name(&self) -> &'static str {
        "max-weight"
    }

    fn decide(&mut self, state: &SwitchState) -> Result<Decision, SimError> {
        let schedule = max_weight_schedule(&state.queue_matrix());
        Ok(if schedule.is_empty() {
            Decision::Idle
        } else {
            Decision::serve_any(schedule)
        })
    }

    fn horizon_for_batches(&self, batches: u64) -> u64 {
        batches * self.batch_len
    }
}
