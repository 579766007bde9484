//! Clearing a queue matrix in the minimum number of slots.

use std::collections::{HashSet, VecDeque};

use crate::error::FactorError;
use crate::factorization::decompose::decompose_runs;
use crate::matrix::QueueMatrix;
use crate::schedule::{MatchingSequence, Schedule};

/// Raises entries of `q` until every row and column sums to the clearance
/// time `gamma`, filling cells in row-major order.
pub fn pad_to_regular(q: &QueueMatrix) -> QueueMatrix {
    let gamma = q.clearance_time();
    let mut h = q.clone();
    let mut rows = q.row_sums();
    let mut cols = q.col_sums();
    for i in 0..q.n() {
        for j in 0..q.n() {
            let add = (gamma - rows[i]).min(gamma - cols[j]);
            if add > 0 {
                h[(i, j)] += add;
                rows[i] += add;
                cols[j] += add;
            }
        }
    }
    debug_assert!(h.is_regular(gamma));
    h
}

/// A sequence of exactly `gamma(q)` schedules that empties `q`.
///
/// The padded matrix is split into full matchings; in each one a cell serves
/// a real packet only while copies of `q_ij` remain, so padding edges become
/// idle cells. The first `q_ij` copies of each cell, in emission order, are
/// the real ones.
pub fn optimal_clearing_schedule(q: &QueueMatrix) -> MatchingSequence {
    let gamma = q.clearance_time();
    let h = pad_to_regular(q);
    let runs = decompose_runs(&h, gamma).expect("padded matrix is regular");
    let mut left = q.clone();
    let mut schedules = Vec::with_capacity(gamma as usize);
    for (matching, count) in runs {
        for _ in 0..count {
            let assign = matching
                .assignment()
                .iter()
                .enumerate()
                .map(|(i, col)| {
                    col.filter(|&j| left[(i, j)] > 0).inspect(|&j| {
                        left[(i, j)] -= 1;
                    })
                })
                .collect();
            schedules.push(Schedule::from_assignment_unchecked(assign));
        }
    }
    debug_assert!(left.is_zero());
    MatchingSequence::new(schedules)
}

/// Exact minimum number of schedules that clear `q`, by breadth-first
/// search over residual matrices. Limited to `n <= 3` and entries `<= 3`.
pub fn min_clearance_oracle(q: &QueueMatrix) -> Result<u64, FactorError> {
    let n = q.n();
    if n > 3 || q.as_slice().iter().any(|&v| v > 3) {
        return Err(FactorError::InstanceTooLarge(format!(
            "n = {n}, max entry = {}",
            q.as_slice().iter().max().unwrap_or(&0)
        )));
    }
    let matchings = all_partial_matchings(n);
    let start: Vec<u8> = q.as_slice().iter().map(|&v| v as u8).collect();
    let mut seen = HashSet::from([start.clone()]);
    let mut frontier = VecDeque::from([(start, 0u64)]);
    while let Some((state, depth)) = frontier.pop_front() {
        if state.iter().all(|&v| v == 0) {
            return Ok(depth);
        }
        for m in &matchings {
            let mut next = state.clone();
            for &(i, j) in m {
                let cell = &mut next[i * n + j];
                *cell = cell.saturating_sub(1);
            }
            if seen.insert(next.clone()) {
                frontier.push_back((next, depth + 1));
            }
        }
    }
    unreachable!("the zero matrix is always reachable")
}

fn all_partial_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn extend(
        row: usize,
        n: usize,
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if row == n {
            out.push(current.clone());
            return;
        }
        extend(row + 1, n, used, current, out);
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                current.push((row, col));
                extend(row + 1, n, used, current, out);
                current.pop();
                used[col] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(0, n, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}
