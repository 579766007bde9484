//! Backlog bookkeeping and the backlog-clearing schedule.

use crate::matrix::QueueMatrix;
use crate::schedule::Schedule;

/// `(backlog + leftover - (b - s))^+`: the backlog carried into the next
/// service period when the backlog phase serves one packet per slot.
pub fn backlog_update(backlog: u64, leftover: u64, b: u64, s: u64) -> u64 {
    debug_assert!(b > s, "backlog phase must be non-empty");
    (backlog + leftover).saturating_sub(b - s)
}

/// Greedy maximal matching over the positive cells of `q`, scanning cells
/// in row-major order.
pub fn maximal_matching(q: &QueueMatrix) -> Schedule {
    let n = q.n();
    let mut col_used = vec![false; n];
    let assign = (0..n)
        .map(|i| {
            let j = (0..n).find(|&j| !col_used[j] && q[(i, j)] > 0)?;
            col_used[j] = true;
            Some(j)
        })
        .collect();
    Schedule::from_assignment_unchecked(assign)
}
