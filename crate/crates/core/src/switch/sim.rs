//! The slot-by-slot simulation driver.

use std::collections::BTreeMap;

use crate::error::SimError;
use crate::schedule::Schedule;
use crate::switch::arrivals::{ArrivalMatrix, ArrivalStream};
use crate::switch::metrics::{BatchRecord, BatchReport, MetricsTrace, SlotRecord};
use crate::switch::state::{PacketTag, ServiceOutcome, SwitchState, TagFilter};

/// A policy's choice for one slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Idle,
    Serve { schedule: Schedule, filter: TagFilter },
}

impl Decision {
    pub fn serve_any(schedule: Schedule) -> Self {
        Decision::Serve {
            schedule,
            filter: TagFilter::Any,
        }
    }
}

/// A scheduling policy bound to a single run.
pub trait Policy {
    fn name(&self) -> &'static str;

    /// Tag for packets arriving at the end of `slot`.
    fn arrival_tag(&self, slot: u64) -> PacketTag {
        PacketTag {
            batch: 0,
            subinterval: None,
            arrival_slot: slot,
        }
    }

    /// Chooses the schedule for the current slot, `state.slot()`.
    fn decide(&mut self, state: &SwitchState) -> Result<Decision, SimError>;

    /// Called at the end of every slot, after arrivals, with what happened in it.
    /// `state.slot()` is still the slot just simulated.
    fn observe(&mut self, _state: &SwitchState, _outcome: &ServiceOutcome, _arrivals: &ArrivalMatrix) {}

    /// Reports for service periods completed so far.
    fn batch_reports(&self) -> Vec<BatchReport> {
        Vec::new()
    }

    /// Number of slots that covers `batches` complete batches of work.
    fn horizon_for_batches(&self, batches: u64) -> u64;
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn arrival_tag(&self, slot: u64) -> PacketTag {
        (**self).arrival_tag(slot)
    }
    fn decide(&mut self, state: &SwitchState) -> Result<Decision, SimError> {
        (**self).decide(state)
    }
    fn observe(&mut self, state: &SwitchState, outcome: &ServiceOutcome, arrivals: &ArrivalMatrix) {
        (**self).observe(state, outcome, arrivals)
    }
    fn batch_reports(&self) -> Vec<BatchReport> {
        (**self).batch_reports()
    }
    fn horizon_for_batches(&self, batches: u64) -> u64 {
        (**self).horizon_for_batches(batches)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub rho: f64,
    pub horizon: u64,
    pub seed: u64,
    pub replication: u64,
    /// Check `Q = A - S` in every cell after every slot. Always on in
    /// debug builds.
    pub check_conservation: bool,
}

impl RunConfig {
    pub fn new(n: usize, rho: f64, horizon: u64, seed: u64) -> Self {
        Self {
            n,
            rho,
            horizon,
            seed,
            replication: 0,
            check_conservation: cfg!(debug_assertions),
        }
    }
}

/// Runs `policy` for `horizon` slots with arrivals keyed by `seed`.
pub fn run<P: Policy + ?Sized>(
    policy: &mut P,
    n: usize,
    rho: f64,
    horizon: u64,
    seed: u64,
) -> Result<MetricsTrace, SimError> {
    run_with(policy, &RunConfig::new(n, rho, horizon, seed))
}

pub fn run_with<P: Policy + ?Sized>(policy: &mut P, config: &RunConfig) -> Result<MetricsTrace, SimError> {
    if config.horizon == 0 {
        return Err(SimError::ParameterOutOfRange("horizon must be at least 1".into()));
    }
    let n = config.n;
    let arrivals = ArrivalStream::new(config.seed, config.replication, n, config.rho)?;
    let mut state = SwitchState::new(n);
    let mut trace = MetricsTrace {
        n,
        slots: Vec::with_capacity(config.horizon as usize),
        ..Default::default()
    };
    let mut line_sums: BTreeMap<u64, (Vec<u64>, Vec<u64>)> = BTreeMap::new();

    for slot in 1..=config.horizon {
        debug_assert_eq!(state.slot(), slot);
        let outcome = match policy.decide(&state)? {
            Decision::Idle => ServiceOutcome::default(),
            Decision::Serve { schedule, filter } => state.apply_schedule(&schedule, filter)?,
        };
        let a = arrivals.slot(slot);
        let tag = policy.arrival_tag(slot);
        state.inject_arrivals(&a, tag.batch, tag.subinterval);
        if a.count() > 0 {
            let (rows, cols) = line_sums.entry(tag.batch).or_insert_with(|| (vec![0; n], vec![0; n]));
            for (i, j) in a.iter_arrivals() {
                rows[i] += 1;
                cols[j] += 1;
            }
        }
        if config.check_conservation {
            state.check_conservation()?;
        }
        policy.observe(&state, &outcome, &a);

        let idle = outcome.offered == 0;
        trace.total_served += outcome.served as u64;
        trace.total_wasted += outcome.wasted as u64;
        trace.idle_slots += u64::from(idle);
        trace.waste_slots += u64::from(outcome.wasted > 0);
        trace.slots.push(SlotRecord {
            slot,
            total_queue: state.total_queue(),
            wasted: outcome.wasted as u64,
            idle,
        });
        state.end_slot();
    }

    trace.batches = policy
        .batch_reports()
        .into_iter()
        .map(|r| {
            let (max_row_sum, max_col_sum) = line_sums
                .get(&r.batch)
                .map(|(rows, cols)| {
                    (
                        rows.iter().copied().max().unwrap_or(0),
                        cols.iter().copied().max().unwrap_or(0),
                    )
                })
                .unwrap_or((0, 0));
            BatchRecord {
                batch: r.batch,
                leftover: r.leftover,
                backlog: r.backlog,
                max_row_sum,
                max_col_sum,
                envelope_idle_slots: r.envelope_idle_slots,
                envelope_wasted: r.envelope_wasted,
            }
        })
        .collect();
    Ok(trace)
}

/// Serves nothing, ever.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullPolicy;

impl Policy for NullPolicy {
    fn name(&self) -> &'static str {
        "null"
    }

    fn decide(&mut self, _state: &SwitchState) -> Result<Decision, SimError> {
        Ok(Decision::Idle)
    }

    fn horizon_for_batches(&self, batches: u64) -> u64 {
        batches
    }
}
