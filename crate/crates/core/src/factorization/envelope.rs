//! Lower envelopes (regular sub-multigraphs) of queue matrices.
//!
//! A `beta`-envelope of `q` is an integer matrix `g` with `0 <= g <= q`
//! whose rows and columns all sum to `beta`. It exists exactly when the
//! envelope flow network saturates every terminal arc, i.e. carries
//! `beta * n` units.

use crate::error::FactorError;
use crate::factorization::flow::{max_flow, FlowNetwork};
use crate::matrix::QueueMatrix;

/// A `beta`-regular integer sub-matrix of some queue matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerEnvelope {
    beta: u64,
    g: QueueMatrix,
}

impl LowerEnvelope {
    /// Validates `g` as a `beta`-envelope of `source`.
    pub fn new(source: &QueueMatrix, beta: u64, g: QueueMatrix) -> Result<Self, FactorError> {
        if source.n() != g.n() {
            return Err(FactorError::DimensionMismatch(source.n(), g.n()));
        }
        if let Some(((i, j), _)) = g.iter_cells().find(|&(c, v)| v > source[c]) {
            return Err(FactorError::EnvelopeExceedsSource { row: i, col: j });
        }
        Self::regular(beta, g)
    }

    /// Wraps a matrix that is `beta`-regular, without a source to compare against.
    pub fn regular(beta: u64, g: QueueMatrix) -> Result<Self, FactorError> {
        if !g.is_regular(beta) {
            return Err(FactorError::NotRegular {
                beta,
                detail: format!("row sums {:?}, column sums {:?}", g.row_sums(), g.col_sums()),
            });
        }
        Ok(Self { beta, g })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            beta: 0,
            g: QueueMatrix::zeros(n),
        }
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn matrix(&self) -> &QueueMatrix {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn into_matrix(self) -> QueueMatrix {
        self.g
    }
}

/// Returns a `beta`-envelope of `q` read off an integral maximum flow, or
/// `None` if none exists.
pub fn envelope_with_degree(q: &QueueMatrix, beta: u64) -> Option<LowerEnvelope> {
    let n = q.n() as u64;
    if beta == 0 {
        return Some(LowerEnvelope::zero(q.n()));
    }
    if beta > q.min_line_sum() {
        return None;
    }
    let env = FlowNetwork::for_envelope(q, beta);
    let flow = max_flow(&env.network);
    (flow.value == beta * n).then(|| LowerEnvelope {
        beta,
        g: env.cell_flows(&flow),
    })
}

pub fn has_beta_envelope(q: &QueueMatrix, beta: u64) -> bool {
    if beta == 0 {
        return true;
    }
    if beta > q.min_line_sum() {
        return false;
    }
    let env = FlowNetwork::for_envelope(q, beta);
    max_flow(&env.network).value == beta * q.n() as u64
}

/// The envelope of largest degree.
///
/// Feasibility is monotone in `beta`, so a binary search over
/// `[0, min line sum]` finds the largest feasible degree.
pub fn largest_envelope(q: &QueueMatrix) -> LowerEnvelope {
    let mut lo = 0u64;
    let mut best = LowerEnvelope::zero(q.n());
    let mut hi = q.min_line_sum();
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match envelope_with_degree(q, mid) {
            Some(env) => {
                lo = mid;
                best = env;
            }
            None => hi = mid - 1,
        }
    }
    best
}

/// Largest envelope degree by enumerating every row set `R` and column set
/// `C` with `|R| + |C| > n` and minimizing `floor(sum_{R x C} q / (|R| + |C| - n))`.
///
/// Exponential in `n`; intended as an independent check on small inputs.
pub fn envelope_oracle(q: &QueueMatrix) -> Result<u64, FactorError> {
    const LIMIT: usize = 12;
    let n = q.n();
    if n > LIMIT {
        return Err(FactorError::DimensionTooLarge { n, limit: LIMIT });
    }
    if n == 0 {
        return Ok(0);
    }
    let full = 1usize << n;
    let mut best = u64::MAX;
    // Sum of each row restricted to a column set, built incrementally.
    let mut restricted = vec![0u64; n * full];
    for i in 0..n {
        let row = q.row(i);
        for cols in 1..full {
            let low = cols.trailing_zeros() as usize;
            restricted[i * full + cols] = restricted[i * full + (cols & (cols - 1))] + row[low];
        }
    }
    for rows in 1..full {
        let k = rows.count_ones() as usize;
        for cols in 1..full {
            let l = cols.count_ones() as usize;
            if k + l <= n {
                continue;
            }
            let mass: u64 = (0..n)
                .filter(|i| rows & (1 << i) != 0)
                .map(|i| restricted[i * full + cols])
                .sum();
            best = best.min(mass / (k + l - n) as u64);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eq19() -> QueueMatrix {
        QueueMatrix::from_rows(&[[0, 5, 0], [5, 0, 5], [0, 5, 0]]).unwrap()
    }

    #[test]
    fn feasibility_examples() {
        assert!(!has_beta_envelope(&eq19(), 1));
        assert!(has_beta_envelope(&QueueMatrix::filled(3, 1), 3));
        // [[0,1],[1,0]] is a 1-envelope; no subset pair with |R|+|C| > 2 rules it out.
        let corner = QueueMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap();
        assert!(has_beta_envelope(&corner, 1));
        assert!(!has_beta_envelope(&corner, 2));
        assert!(has_beta_envelope(&corner, 0));
    }

    #[test]
    fn largest_envelope_examples() {
        assert_eq!(largest_envelope(&eq19()).beta(), 0);
        let diag = QueueMatrix::diagonal(&[2, 2, 2]);
        let env = largest_envelope(&diag);
        assert_eq!(env.beta(), 2);
        assert_eq!(env.matrix(), &diag);
    }

    #[test]
    fn oracle_examples() {
        for n in 1..=5 {
            assert_eq!(envelope_oracle(&QueueMatrix::filled(n, 1)).unwrap(), n as u64);
        }
        // R = C = {1, 2} gives floor(3 / 2) = 1, the minimum over the valid pairs.
        let corner = QueueMatrix::from_rows(&[[1, 1], [1, 0]]).unwrap();
        assert_eq!(envelope_oracle(&corner).unwrap(), 1);
        assert_eq!(envelope_oracle(&eq19()).unwrap(), 0);
        assert_eq!(
            envelope_oracle(&QueueMatrix::zeros(13)),
            Err(FactorError::DimensionTooLarge { n: 13, limit: 12 })
        );
    }

    #[test]
    fn envelope_validation() {
        let q = QueueMatrix::filled(2, 1);
        assert!(LowerEnvelope::new(&q, 1, QueueMatrix::diagonal(&[1, 1])).is_ok());
        assert!(matches!(
            LowerEnvelope::new(&q, 2, QueueMatrix::diagonal(&[2, 2])),
            Err(FactorError::EnvelopeExceedsSource { row: 0, col: 0 })
        ));
        assert!(matches!(
            LowerEnvelope::new(&q, 1, QueueMatrix::diagonal(&[1, 0])),
            Err(FactorError::NotRegular { .. })
        ));
    }

    /// Minimum over subset cuts of `beta (n - |R|) + beta (n - |C|) + sum_{R x C} q`.
    fn subset_min_cut(q: &QueueMatrix, beta: u64) -> u64 {
        let n = q.n();
        let mut best = u64::MAX;
        for rows in 0..1usize << n {
            for cols in 0..1usize << n {
                let k = rows.count_ones() as u64;
                let l = cols.count_ones() as u64;
                let mut mass = 0;
                for i in (0..n).filter(|i| rows & (1 << i) != 0) {
                    for j in (0..n).filter(|j| cols & (1 << j) != 0) {
                        mass += q[(i, j)];
                    }
                }
                best = best.min(beta * (n as u64 - k) + beta * (n as u64 - l) + mass);
            }
        }
        best
    }

    fn small_matrix() -> impl Strategy<Value = QueueMatrix> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec(0u64..=4, n * n).prop_map(move |v| QueueMatrix::from_vec(n, v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn flow_value_equals_subset_min_cut(q in small_matrix(), beta in 0u64..6) {
            let env = FlowNetwork::for_envelope(&q, beta);
            prop_assert_eq!(max_flow(&env.network).value, subset_min_cut(&q, beta));
        }

        #[test]
        fn feasibility_matches_oracle_and_is_monotone(q in small_matrix(), beta in 0u64..8) {
            let oracle = envelope_oracle(&q).unwrap();
            let feasible = has_beta_envelope(&q, beta);
            prop_assert_eq!(feasible, oracle >= beta);
            if feasible {
                for smaller in 0..beta {
                    prop_assert!(has_beta_envelope(&q, smaller));
                }
            }
        }

        #[test]
        fn largest_envelope_is_valid_and_maximal(q in small_matrix()) {
            let env = largest_envelope(&q);
            prop_assert_eq!(env.beta(), envelope_oracle(&q).unwrap());
            prop_assert!(LowerEnvelope::new(&q, env.beta(), env.matrix().clone()).is_ok());
        }
    }
}
