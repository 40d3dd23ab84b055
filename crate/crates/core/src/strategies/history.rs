use std::collections::VecDeque;

use crate::environment::{ArmId, EpochOutcome};
use crate::error::{Error, Result};

/// Which past epochs feed an estimate made at epoch `now`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// Every epoch before `now`.
    Full,
    /// The `r` epochs `now - r ..= now - 1`.
    Renewal(usize),
}

impl Window {
    pub fn contains(self, epoch: usize, now: usize) -> bool {
        match self {
            Window::Full => epoch < now,
            Window::Renewal(r) => epoch < now && epoch + r >= now,
        }
    }
}

/// Per-arm totals for one epoch (or a sum over several).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ArmAggregate {
    pub stores_assigned: usize,
    pub items_played: usize,
    pub items_filled: usize,
}

impl ArmAggregate {
    fn add(&mut self, other: &ArmAggregate) {
        self.stores_assigned += other.stores_assigned;
        self.items_played += other.items_played;
        self.items_filled += other.items_filled;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub arms: Vec<ArmAggregate>,
}

impl EpochRecord {
    /// Collapses an outcome matrix into per-arm totals.
    pub fn from_outcome(outcome: &EpochOutcome, arms: usize) -> Self {
        let mut agg = vec![ArmAggregate::default(); arms];
        for (store, arm) in outcome.plan().assignments().iter().enumerate() {
            let a = &mut agg[arm.index()];
            a.stores_assigned += 1;
            a.items_played += outcome.gamma();
            a.items_filled += outcome
                .row(store)
                .iter()
                .map(|&x| x as usize)
                .sum::<usize>();
        }
        Self {
            epoch: outcome.epoch(),
            arms: agg,
        }
    }
}

/// Per-epoch, per-arm aggregates in strictly increasing epoch order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationHistory {
    arms: usize,
    records: VecDeque<EpochRecord>,
}

impl ObservationHistory {
    pub fn new(arms: usize) -> Self {
        Self {
            arms,
            records: VecDeque::new(),
        }
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn records(&self) -> impl Iterator<Item = &EpochRecord> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last_epoch(&self) -> Option<usize> {
        self.records.back().map(|r| r.epoch)
    }

    /// Appends a record; its epoch must be after every recorded epoch.
    pub fn push(&mut self, record: EpochRecord) -> Result<()> {
        if let Some(last) = self.last_epoch() {
            if record.epoch <= last {
                return Err(Error::OutOfOrderEpoch {
                    got: record.epoch,
                    last,
                });
            }
        }
        if record.arms.len() != self.arms {
            return Err(Error::param(
                "record",
                format!("expected {} arms, got {}", self.arms, record.arms.len()),
            ));
        }
        self.records.push_back(record);
        Ok(())
    }

    /// Drops every record with epoch < `epoch`.
    pub fn evict_before(&mut self, epoch: usize) {
        while self.records.front().is_some_and(|r| r.epoch < epoch) {
            self.records.pop_front();
        }
    }

    pub fn clear(&mut self) {
        self.records.clear();
    }

    /// Sum of an arm's aggregates over the epochs of `window` as seen from `now`.
    pub fn totals(&self, arm: ArmId, window: Window, now: usize) -> ArmAggregate {
        let mut total = ArmAggregate::default();
        for r in self
            .records
            .iter()
            .filter(|r| window.contains(r.epoch, now))
        {
            total.add(&r.arms[arm.index()]);
        }
        total
    }
}
