//! Per-slot and per-batch trace data, with CSV export.

use std::io::Write;

use serde::{Deserialize, Serialize};

/// One slot of a simulation trace. `total_queue` is measured at the end of
/// the slot, after arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub slot: u64,
    pub total_queue: u64,
    pub wasted: u64,
    pub idle: bool,
}

/// What a batching policy reports about one completed service period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BatchReport {
    pub batch: u64,
    /// Batch packets still unserved when the normal clearing phase ends.
    pub leftover: u64,
    /// Backlogged packets from earlier batches when the service period starts.
    pub backlog: u64,
    /// Idle slots during the lower-envelope phase.
    pub envelope_idle_slots: u64,
    /// Wasted offered services during the lower-envelope phase.
    pub envelope_wasted: u64,
}

/// A [`BatchReport`] joined with the batch's arrival line sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BatchRecord {
    pub batch: u64,
    pub leftover: u64,
    pub backlog: u64,
    pub max_row_sum: u64,
    pub max_col_sum: u64,
    pub envelope_idle_slots: u64,
    pub envelope_wasted: u64,
}

#[derive(Debug, Serialize)]
struct BatchCsvRow {
    batch: u64,
    #[serde(rename = "U_k")]
    leftover: u64,
    #[serde(rename = "B_k")]
    backlog: u64,
    max_row_sum: u64,
    max_col_sum: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsTrace {
    pub n: usize,
    pub slots: Vec<SlotRecord>,
    pub batches: Vec<BatchRecord>,
    pub total_served: u64,
    pub total_wasted: u64,
    pub idle_slots: u64,
    /// Slots in which at least one offered service was wasted.
    pub waste_slots: u64,
}

impl MetricsTrace {
    pub fn horizon(&self) -> u64 {
        self.slots.len() as u64
    }

    pub fn mean_total_queue(&self) -> f64 {
        if self.slots.is_empty() {
            return 0.0;
        }
        self.slots.iter().map(|s| s.total_queue as f64).sum::<f64>() / self.slots.len() as f64
    }

    pub fn max_total_queue(&self) -> u64 {
        self.slots.iter().map(|s| s.total_queue).max().unwrap_or(0)
    }

    pub fn batches_with_leftover(&self) -> u64 {
        self.batches.iter().filter(|b| b.leftover > 0).count() as u64
    }

    pub fn mean_backlog(&self) -> f64 {
        if self.batches.is_empty() {
            return 0.0;
        }
        self.batches.iter().map(|b| b.backlog as f64).sum::<f64>() / self.batches.len() as f64
    }

    /// Writes `slot,total_queue,wasted,idle`.
    pub fn write_slot_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["slot", "total_queue", "wasted", "idle"])?;
        for s in &self.slots {
            w.write_record([
                s.slot.to_string(),
                s.total_queue.to_string(),
                s.wasted.to_string(),
                u8::from(s.idle).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `batch,U_k,B_k,max_row_sum,max_col_sum`.
    pub fn write_batch_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(["batch", "U_k", "B_k", "max_row_sum", "max_col_sum"])?;
        for b in &self.batches {
            w.serialize(BatchCsvRow {
                batch: b.batch,
                leftover: b.leftover,
                backlog: b.backlog,
                max_row_sum: b.max_row_sum,
                max_col_sum: b.max_col_sum,
            })?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_headers() {
        let trace = MetricsTrace {
            n: 2,
            slots: vec![SlotRecord {
                slot: 1,
                total_queue: 3,
                wasted: 1,
                idle: false,
            }],
            batches: vec![BatchRecord {
                batch: 0,
                leftover: 2,
                backlog: 1,
                max_row_sum: 5,
                max_col_sum: 4,
                ..Default::default()
            }],
            ..Default::default()
        };
        let mut slots = Vec::new();
        trace.write_slot_csv(&mut slots).unwrap();
        assert_eq!(
            String::from_utf8(slots).unwrap(),
            "slot,total_queue,wasted,idle\n1,3,1,0\n"
        );
        let mut batches = Vec::new();
        trace.write_batch_csv(&mut batches).unwrap();
        assert_eq!(
            String::from_utf8(batches).unwrap(),
            "batch,U_k,B_k,max_row_sum,max_col_sum\n0,2,1,5,4\n"
        );
    }

    #[test]
    fn empty_trace_statistics() {
        let t = MetricsTrace::default();
        assert_eq!(t.mean_total_queue(), 0.0);
        assert_eq!(t.max_total_queue(), 0);
        assert_eq!(t.mean_backlog(), 0.0);
    }
}
