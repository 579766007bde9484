//! Envelope degrees of random bipartite multigraphs.
//!
//! Each trial draws an `n x n` matrix with i.i.d. Binomial(m, p) entries and
//! compares its largest envelope degree with the guaranteed degree
//! `beta0 = floor(pmn - sqrt(304 pmn ln f))`.

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;
use crate::factorization::largest_envelope;
use crate::matrix::QueueMatrix;
use crate::par::Execution;
use crate::switch::keyed_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub n: usize,
    pub m: u64,
    pub p: f64,
    pub trial: u64,
    pub seed: u64,
    pub beta_star: u64,
    pub beta0: i64,
    pub success: bool,
}

/// `floor(pmn - sqrt(304 pmn ln f))`; negative when the hypothesis
/// `pmn >= 152 ln f` is far from met.
pub fn beta0(n: usize, m: u64, p: f64, f: f64) -> i64 {
    let mass = p * m as f64 * n as f64;
    (mass - (304.0 * mass * f.ln()).sqrt()).floor() as i64
}

/// Draws the matrix for one trial; entries are sampled row-major from a
/// generator keyed by `(seed, trial)`.
pub fn sample_binomial_matrix(n: usize, m: u64, p: f64, seed: u64, trial: u64) -> QueueMatrix {
    let dist = Binomial::new(m, p).expect("p validated by caller");
    let mut rng = keyed_rng(seed, trial);
    let data = (0..n * n).map(|_| dist.sample(&mut rng)).collect();
    QueueMatrix::from_vec(n, data).expect("square by construction")
}

fn validate(n: usize, m: u64, p: f64, f: f64) -> Result<(), ExperimentError> {
    if n == 0 {
        return Err(ExperimentError::OutOfRange("n must be positive".into()));
    }
    if m == 0 {
        return Err(ExperimentError::OutOfRange("m must be positive".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(ExperimentError::OutOfRange(format!("p = {p} must lie in [0, 1]")));
    }
    if !(f.is_finite() && f >= n as f64) {
        return Err(ExperimentError::OutOfRange(format!("f = {f} must be at least n = {n}")));
    }
    Ok(())
}

pub fn factor_experiment(
    n: usize,
    m: u64,
    p: f64,
    f: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<FactorRecord>, ExperimentError> {
    factor_experiment_with(n, m, p, f, trials, seed, Execution::default())
}

pub fn factor_experiment_with(
    n: usize,
    m: u64,
    p: f64,
    f: f64,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<FactorRecord>, ExperimentError> {
    validate(n, m, p, f)?;
    let mass = p * m as f64 * n as f64;
    if mass < 152.0 * f.ln() {
        log::warn!(
            "pmn = {mass:.1} < 152 ln f = {:.1}: below the regime with a guaranteed envelope",
            152.0 * f.ln()
        );
    }
    let threshold = beta0(n, m, p, f);
    Ok(exec.map_indices(trials as usize, |t| {
        let trial = t as u64;
        let q = sample_binomial_matrix(n, m, p, seed, trial);
        let beta_star = largest_envelope(&q).beta();
        FactorRecord {
            n,
            m,
            p,
            trial,
            seed,
            beta_star,
            beta0: threshold,
            success: beta_star as i64 >= threshold,
        }
    }))
}

/// Fraction of records whose envelope degree reaches `beta`.
pub fn rescore_success_fraction(records: &[FactorRecord], beta: i64) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.beta_star as i64 >= beta).count() as f64 / records.len() as f64
}
