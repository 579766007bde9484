//! Square non-negative integer matrices.
//!
//! A [`QueueMatrix`] holds packet counts per (input, output) pair. The same
//! value is read as the biadjacency matrix of a bipartite multigraph whose
//! edge multiplicities are the entries.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::error::FactorError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueueMatrix {
    n: usize,
    data: Vec<u64>,
}

impl QueueMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn filled(n: usize, value: u64) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn diagonal(values: &[u64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from nested rows, rejecting ragged input.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self, FactorError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(FactorError::NotSquare {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    /// Wraps a row-major buffer of length `n * n`.
    pub fn from_vec(n: usize, data: Vec<u64>) -> Result<Self, FactorError> {
        if data.len() != n * n {
            return Err(FactorError::NotSquare {
                row: 0,
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i).iter().enumerate() {
                sums[j] += v;
            }
        }
        sums
    }

    pub fn total(&self) -> u64 {
        self.data.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Largest row or column sum: the minimum number of schedules that can
    /// empty this matrix.
    pub fn clearance_time(&self) -> u64 {
        let r = self.row_sums().into_iter().max().unwrap_or(0);
        let c = self.col_sums().into_iter().max().unwrap_or(0);
        r.max(c)
    }

    /// Smallest row or column sum, an upper bound on any envelope degree.
    pub fn min_line_sum(&self) -> u64 {
        let r = self.row_sums().into_iter().min().unwrap_or(0);
        let c = self.col_sums().into_iter().min().unwrap_or(0);
        r.min(c)
    }

    /// True when every row and column sums to `beta`.
    pub fn is_regular(&self, beta: u64) -> bool {
        self.row_sums().iter().all(|&r| r == beta) && self.col_sums().iter().all(|&c| c == beta)
    }

    /// Element-wise `self >= other`.
    pub fn dominates(&self, other: &QueueMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a >= b)
    }

    pub fn iter_cells(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        let n = self.n;
        self.data.iter().enumerate().map(move |(k, &v)| ((k / n, k % n), v))
    }

    /// Serializes to the line format: `n`, then `n` rows of space-separated entries.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Index<(usize, usize)> for QueueMatrix {
    type Output = u64;

    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for QueueMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for QueueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for QueueMatrix {
    type Err = FactorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| FactorError::Parse("empty input".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| FactorError::Parse(format!("bad dimension line `{header}`")))?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| FactorError::Parse(format!("missing row {}", i + 1)))?;
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|_| FactorError::Parse(format!("bad entry `{tok}` in row {}", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if let Some(extra) = lines.next() {
            return Err(FactorError::Parse(format!("unexpected trailing line `{extra}`")));
        }
        Self::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_text_format() {
        let text = "3\n0 5 0\n5 0 5\n0 5 0\n";
        let q: QueueMatrix = text.parse().unwrap();
        assert_eq!(q.n(), 3);
        assert_eq!(q[(1, 2)], 5);
        assert_eq!(q.to_text(), text);
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = "2\n1 2\n3\n".parse::<QueueMatrix>().unwrap_err();
        assert!(matches!(err, FactorError::NotSquare { row: 1, .. }));
        assert!("2\n1 2\n".parse::<QueueMatrix>().is_err());
        assert!("2\n1 2\n3 x\n".parse::<QueueMatrix>().is_err());
    }

    #[test]
    fn line_sums_and_clearance_time() {
        let q = QueueMatrix::from_rows(&[[2, 1], [0, 1]]).unwrap();
        assert_eq!(q.row_sums(), vec![3, 1]);
        assert_eq!(q.col_sums(), vec![2, 2]);
        assert_eq!(q.clearance_time(), 3);
        assert_eq!(q.min_line_sum(), 1);
        assert_eq!(QueueMatrix::zeros(4).clearance_time(), 0);
    }
}
