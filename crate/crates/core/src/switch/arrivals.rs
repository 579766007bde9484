//! Bernoulli arrivals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SimError;
use crate::matrix::QueueMatrix;

/// One slot's arrivals: a 0/1 entry per (input, output) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl ArrivalMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            cells: vec![false; n * n],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            n,
            cells: vec![true; n * n],
        }
    }

    pub fn from_cells(n: usize, cells: Vec<bool>) -> Self {
        assert_eq!(cells.len(), n * n, "arrival matrix must be n x n");
        Self { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&a| a).count()
    }

    /// Cells with an arrival, row-major.
    pub fn iter_arrivals(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(move |(k, _)| (k / n, k % n))
    }

    /// Adds this slot's arrivals into an accumulator matrix.
    pub fn accumulate_into(&self, acc: &mut QueueMatrix) {
        for cell in self.iter_arrivals() {
            acc[cell] += 1;
        }
    }
}

fn check_rate(rho: f64) -> Result<(), SimError> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(SimError::ParameterOutOfRange(format!(
            "load rho = {rho} must lie in (0, 1)"
        )))
    }
}

/// Draws one slot of arrivals: each cell independently 1 with probability `rho / n`,
/// cells consumed from `rng` in row-major order.
pub fn generate_arrivals<R: Rng + ?Sized>(rng: &mut R, n: usize, rho: f64) -> Result<ArrivalMatrix, SimError> {
    check_rate(rho)?;
    let p = rho / n as f64;
    let cells = (0..n * n).map(|_| rng.random_bool(p)).collect();
    Ok(ArrivalMatrix { n, cells })
}

/// Counter-based arrival source keyed by `(seed, replication, slot, cell)`.
///
/// Each slot reads its own ChaCha stream, so the arrivals of slot `t` are
/// fixed by the key alone and do not depend on how many draws happened
/// before, on the policy, or on thread scheduling.
#[derive(Debug, Clone)]
pub struct ArrivalStream {
    key: [u8; 32],
    n: usize,
    rho: f64,
}

impl ArrivalStream {
    pub fn new(seed: u64, replication: u64, n: usize, rho: f64) -> Result<Self, SimError> {
        check_rate(rho)?;
        if n == 0 {
            return Err(SimError::ParameterOutOfRange("n must be positive".into()));
        }
        Ok(Self {
            key: stream_key(seed, replication),
            n,
            rho,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Arrivals at the end of `slot` (1-based).
    pub fn slot(&self, slot: u64) -> ArrivalMatrix {
        let mut rng = self.rng_for(slot);
        generate_arrivals(&mut rng, self.n, self.rho).expect("rate checked at construction")
    }

    fn rng_for(&self, slot: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(slot);
        rng
    }
}

/// Packs `(seed, replication)` into a ChaCha key.
pub(crate) fn stream_key(seed: u64, replication: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replication.to_le_bytes());
    key
}

/// A generator seeded from `(seed, index)`, for per-trial sampling.
pub fn keyed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(stream_key(seed, index))
}
