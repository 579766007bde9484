//! Schedules: partial matchings between inputs and outputs.

use std::fmt;

use crate::error::SimError;
use crate::matrix::QueueMatrix;

/// A feasible schedule, stored as the output served by each input (if any).
///
/// Row sums are at most one by construction; column uniqueness is checked
/// whenever a schedule is built from untrusted data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    assign: Vec<Option<usize>>,
}

impl Schedule {
    /// The schedule that serves nothing.
    pub fn empty(n: usize) -> Self {
        Self { assign: vec![None; n] }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            assign: (0..n).map(Some).collect(),
        }
    }

    /// Builds a schedule from an input→output assignment, checking feasibility.
    pub fn from_assignment(assign: Vec<Option<usize>>) -> Result<Self, SimError> {
        let n = assign.len();
        let mut used = vec![false; n];
        for (row, col) in assign.iter().enumerate() {
            if let Some(col) = *col {
                if col >= n {
                    return Err(SimError::OutOfRange { row, col, n });
                }
                if std::mem::replace(&mut used[col], true) {
                    return Err(SimError::InfeasibleSchedule { col });
                }
            }
        }
        Ok(Self { assign })
    }

    /// Builds a schedule from a list of `(input, output)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, SimError> {
        let mut assign = vec![None; n];
        for &(row, col) in pairs {
            if row >= n || col >= n {
                return Err(SimError::OutOfRange { row, col, n });
            }
            if assign[row].is_some() {
                // Two outputs for one input: report against the column that collides.
                return Err(SimError::InfeasibleSchedule { col });
            }
            assign[row] = Some(col);
        }
        Self::from_assignment(assign)
    }

    pub(crate) fn from_assignment_unchecked(assign: Vec<Option<usize>>) -> Self {
        debug_assert!(Self::from_assignment(assign.clone()).is_ok());
        Self { assign }
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn output_for(&self, input: usize) -> Option<usize> {
        self.assign[input]
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assign
    }

    /// Served cells in input order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assign.iter().enumerate().filter_map(|(i, c)| c.map(|c| (i, c)))
    }

    pub fn size(&self) -> usize {
        self.assign.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// A full matching serves every input and every output.
    pub fn is_full(&self) -> bool {
        self.size() == self.n()
    }

    pub fn to_matrix(&self) -> QueueMatrix {
        let mut m = QueueMatrix::zeros(self.n());
        for (i, j) in self.pairs() {
            m[(i, j)] = 1;
        }
        m
    }

    /// Sum of `weights` over served cells.
    pub fn weight(&self, weights: &QueueMatrix) -> u64 {
        self.pairs().map(|c| weights[c]).sum()
    }
}

impl fmt::Display for Schedule {
    /// One line of `i:j` pairs; an idle schedule prints as an empty line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j) in self.pairs() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{i}:{j}")?;
            first = false;
        }
        Ok(())
    }
}

/// An ordered list of schedules, one per slot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchingSequence {
    schedules: Vec<Schedule>,
}

impl MatchingSequence {
    pub fn new(schedules: Vec<Schedule>) -> Self {
        Self { schedules }
    }

    pub fn len(&self) -> usize {
        self.schedules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schedules.is_empty()
    }

    pub fn schedules(&self) -> &[Schedule] {
        &self.schedules
    }

    pub fn into_schedules(self) -> Vec<Schedule> {
        self.schedules
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Schedule> {
        self.schedules.iter()
    }

    /// Element-wise sum of all schedules.
    pub fn sum(&self, n: usize) -> QueueMatrix {
        let mut total = QueueMatrix::zeros(n);
        for s in &self.schedules {
            for cell in s.pairs() {
                total[cell] += 1;
            }
        }
        total
    }

    /// One line per slot listing `i:j` pairs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.schedules {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the one-line-per-slot format produced by [`MatchingSequence::to_text`].
    pub fn parse(n: usize, text: &str) -> Result<Self, SimError> {
        let mut schedules = Vec::new();
        for line in text.lines() {
            let mut pairs = Vec::new();
            for tok in line.split_whitespace() {
                let (i, j) = tok
                    .split_once(':')
                    .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                    .ok_or_else(|| SimError::ParameterOutOfRange(format!("bad pair `{tok}`")))?;
                pairs.push((i, j));
            }
            schedules.push(Schedule::from_pairs(n, &pairs)?);
        }
        Ok(Self { schedules })
    }
}

impl IntoIterator for MatchingSequence {
    type Item = Schedule;
    type IntoIter = std::vec::IntoIter<Schedule>;

    fn into_iter(self) -> Self::IntoIter {
        self.schedules.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_column_collisions() {
        let err = Schedule::from_assignment(vec![Some(1), Some(1)]).unwrap_err();
        assert_eq!(err, SimError::InfeasibleSchedule { col: 1 });
        assert!(Schedule::from_pairs(2, &[(0, 0), (0, 1)]).is_err());
        assert!(Schedule::from_pairs(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let seq = MatchingSequence::new(vec![
            Schedule::identity(3),
            Schedule::from_pairs(3, &[(0, 2), (2, 0)]).unwrap(),
            Schedule::empty(3),
        ]);
        let text = seq.to_text();
        assert_eq!(text, "0:0 1:1 2:2\n0:2 2:0\n\n");
        assert_eq!(MatchingSequence::parse(3, &text).unwrap(), seq);
    }

    #[test]
    fn weight_and_matrix() {
        let q = QueueMatrix::from_rows(&[[1, 2], [2, 1]]).unwrap();
        let anti = Schedule::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(anti.weight(&q), 4);
        assert!(anti.is_full());
        assert_eq!(anti.to_matrix(), QueueMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap());
    }
}
