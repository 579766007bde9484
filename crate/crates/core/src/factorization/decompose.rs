//! Splitting a regular bipartite multigraph into perfect matchings.

use crate::error::FactorError;
use crate::factorization::envelope::LowerEnvelope;
use crate::matrix::QueueMatrix;
use crate::schedule::{MatchingSequence, Schedule};

/// Decomposes a `beta`-envelope into exactly `beta` full matchings whose
/// element-wise sum is the envelope matrix.
///
/// Matchings are found with Kuhn's augmenting-path search, rows in order and
/// columns ascending. After a matching is emitted, it is reused (a warm start)
/// for as long as every one of its cells still has multiplicity; only rows
/// whose cell ran out are re-augmented. A matching is therefore emitted in a
/// run of `min` multiplicity copies, which keeps the cost proportional to the
/// number of distinct matchings (at most `n^2`) rather than to `beta`.
pub fn decompose_regular(envelope: &LowerEnvelope) -> Result<MatchingSequence, FactorError> {
    let runs = decompose_runs(envelope.matrix(), envelope.beta())?;
    let mut schedules = Vec::with_capacity(envelope.beta() as usize);
    for (schedule, count) in runs {
        for _ in 1..count {
            schedules.push(schedule.clone());
        }
        schedules.push(schedule);
    }
    Ok(MatchingSequence::new(schedules))
}

/// Same decomposition as [`decompose_regular`], grouped into
/// `(matching, repetitions)` runs in emission order.
pub fn decompose_runs(g: &QueueMatrix, beta: u64) -> Result<Vec<(Schedule, u64)>, FactorError> {
    if !g.is_regular(beta) {
        return Err(FactorError::NotRegular {
            beta,
            detail: "decomposition input".into(),
        });
    }
    let n = g.n();
    let mut remaining = g.clone();
    let mut row_to_col: Vec<Option<usize>> = vec![None; n];
    let mut col_to_row: Vec<Option<usize>> = vec![None; n];
    let mut left = beta;
    let mut runs = Vec::new();
    while left > 0 {
        for i in 0..n {
            if row_to_col[i].is_none() {
                let mut visited = vec![false; n];
                if !augment(i, &remaining, &mut row_to_col, &mut col_to_row, &mut visited) {
                    return Err(FactorError::NoPerfectMatching);
                }
            }
        }
        let count = (0..n)
            .map(|i| remaining[(i, row_to_col[i].expect("perfect matching"))])
            .min()
            .unwrap_or(left)
            .min(left);
        for i in 0..n {
            let j = row_to_col[i].expect("perfect matching");
            remaining[(i, j)] -= count;
        }
        runs.push((Schedule::from_assignment_unchecked(row_to_col.clone()), count));
        left -= count;
        for i in 0..n {
            let j = row_to_col[i].expect("perfect matching");
            if remaining[(i, j)] == 0 {
                row_to_col[i] = None;
                col_to_row[j] = None;
            }
        }
    }
    Ok(runs)
}

fn augment(
    row: usize,
    g: &QueueMatrix,
    row_to_col: &mut [Option<usize>],
    col_to_row: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    let n = g.n();
    for col in 0..n {
        if g[(row, col)] == 0 || visited[col] {
            continue;
        }
        visited[col] = true;
        let free = match col_to_row[col] {
            None => true,
            Some(other) => augment(other, g, row_to_col, col_to_row, visited),
        };
        if free {
            row_to_col[row] = Some(col);
            col_to_row[col] = Some(row);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(rows: &[&[u64]], beta: u64) -> LowerEnvelope {
        LowerEnvelope::regular(beta, QueueMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn all_ones_two_by_two() {
        let seq = decompose_regular(&env(&[&[1, 1], &[1, 1]], 2)).unwrap();
        let anti = Schedule::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        // the only decomposition, up to order; the order itself is fixed
        assert_eq!(seq.schedules(), &[anti, Schedule::identity(2)]);
        assert_eq!(seq, decompose_regular(&env(&[&[1, 1], &[1, 1]], 2)).unwrap());
    }

    #[test]
    fn diagonal_repeats_identity() {
        let seq = decompose_regular(&env(&[&[2, 0], &[0, 2]], 2)).unwrap();
        assert_eq!(seq.schedules(), &[Schedule::identity(2), Schedule::identity(2)]);
    }

    #[test]
    fn three_by_three_two_regular() {
        let g = QueueMatrix::from_rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        let seq = decompose_regular(&LowerEnvelope::regular(2, g.clone()).unwrap()).unwrap();
        assert_eq!(seq.len(), 2);
        assert!(seq.iter().all(Schedule::is_full));
        assert_eq!(seq.sum(3), g);
    }

    #[test]
    fn zero_degree_gives_empty_sequence() {
        let seq = decompose_regular(&LowerEnvelope::zero(4)).unwrap();
        assert!(seq.is_empty());
    }

    #[test]
    fn irregular_input_is_rejected() {
        let g = QueueMatrix::from_rows(&[[2, 0], [0, 1]]).unwrap();
        assert!(decompose_runs(&g, 2).is_err());
    }
}
