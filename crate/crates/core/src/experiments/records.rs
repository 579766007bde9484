//! CSV persistence for experiment rows.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;
use crate::switch::MetricsTrace;

/// One replication of a simulation sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub rho: f64,
    pub policy: String,
    pub seed: u64,
    pub horizon_slots: u64,
    pub mean_total_queue: f64,
    pub max_total_queue: u64,
    pub waste_slots: u64,
    pub idle_slots: u64,
    #[serde(rename = "batches_with_positive_U")]
    pub batches_with_positive_u: u64,
    #[serde(rename = "mean_B")]
    pub mean_b: f64,
}

impl ExperimentRecord {
    pub fn from_trace(n: usize, rho: f64, policy: String, seed: u64, trace: &MetricsTrace) -> Self {
        Self {
            n,
            rho,
            policy,
            seed,
            horizon_slots: trace.horizon(),
            mean_total_queue: trace.mean_total_queue(),
            max_total_queue: trace.max_total_queue(),
            waste_slots: trace.waste_slots,
            idle_slots: trace.idle_slots,
            batches_with_positive_u: trace.batches_with_leftover(),
            mean_b: trace.mean_backlog(),
        }
    }
}

pub const SWEEP_HEADER: [&str; 11] = [
    "n",
    "rho",
    "policy",
    "seed",
    "horizon_slots",
    "mean_total_queue",
    "max_total_queue",
    "waste_slots",
    "idle_slots",
    "batches_with_positive_U",
    "mean_B",
];

pub const FACTOR_HEADER: [&str; 8] = ["n", "m", "p", "trial", "seed", "beta_star", "beta0", "success"];

/// Writes `header` followed by one row per record. The header is written
/// even when there are no records.
pub fn write_records<W: Write, T: Serialize>(out: W, header: &[&str], records: &[T]) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read, T: DeserializeOwned>(input: R) -> Result<Vec<T>, ExperimentError> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<Result<Vec<T>, _>>()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::FactorRecord;
    use proptest::prelude::*;

    #[test]
    fn empty_sweep_is_header_only() {
        let mut buf = Vec::new();
        write_records::<_, ExperimentRecord>(&mut buf, &SWEEP_HEADER, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,rho,policy,seed,horizon_slots,mean_total_queue,max_total_queue,waste_slots,idle_slots,batches_with_positive_U,mean_B\n"
        );
    }

    #[test]
    fn serde_header_matches_declared_header() {
        let rec = ExperimentRecord {
            n: 8,
            rho: 0.8,
            policy: "max-weight".into(),
            seed: 1,
            horizon_slots: 10,
            mean_total_queue: 1.5,
            max_total_queue: 3,
            waste_slots: 0,
            idle_slots: 2,
            batches_with_positive_u: 0,
            mean_b: 0.0,
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&rec).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), SWEEP_HEADER.join(","));

        let f = FactorRecord {
            n: 2,
            m: 3,
            p: 0.5,
            trial: 0,
            seed: 9,
            beta_star: 1,
            beta0: -4,
            success: true,
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&f).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), FACTOR_HEADER.join(","));
    }

    fn record() -> impl Strategy<Value = ExperimentRecord> {
        (
            1usize..64,
            0.01f64..0.99,
            prop_oneof![Just("max-weight"), Just("lower-envelope"), Just("max-weight(fallback)")],
            any::<u64>(),
            0u64..1_000_000,
            0.0f64..1e6,
            (0u64..1000, 0u64..1000, 0u64..1000, 0u64..1000),
            0.0f64..100.0,
        )
            .prop_map(
                |(n, rho, policy, seed, horizon, mean, (max, waste, idle, pos), mean_b)| ExperimentRecord {
                    n,
                    rho,
                    policy: policy.into(),
                    seed,
                    horizon_slots: horizon,
                    mean_total_queue: mean,
                    max_total_queue: max,
                    waste_slots: waste,
                    idle_slots: idle,
                    batches_with_positive_u: pos,
                    mean_b,
                },
            )
    }

    proptest! {
        #[test]
        fn csv_round_trip(records in proptest::collection::vec(record(), 0..20)) {
            let mut buf = Vec::new();
            write_records(&mut buf, &SWEEP_HEADER, &records).unwrap();
            let back: Vec<ExperimentRecord> = read_records(buf.as_slice()).unwrap();
            prop_assert_eq!(back, records);
        }
    }
}
