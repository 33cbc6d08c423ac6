//! Search budgets and order-preserving parallel helpers.
//!
//! Parallel work is split into tasks whose outcome depends only on their
//! inputs and on the node limit handed to them. Results are then folded in
//! task order, so verdicts, witnesses and budget failures are the same for
//! any thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Tasks dispatched per parallel round. Fixed so that the amount of work
/// done before an early exit does not depend on the pool size.
const CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of search nodes (variable assignments) per operation.
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        Self { budget }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    pub fn new(cfg: &SearchConfig) -> Self {
        Self {
            limit: cfg.budget,
            used: 0,
        }
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }

    pub fn charge(&mut self, nodes: u64, progress: impl FnOnce() -> String) -> Result<()> {
        self.used = self.used.saturating_add(nodes);
        if self.used > self.limit {
            return Err(self.exhausted(progress()));
        }
        Ok(())
    }

    pub fn exhausted(&self, progress: String) -> Error {
        Error::Budget {
            limit: self.limit,
            used: self.used,
            progress,
        }
    }
}

/// Outcome of one task: its result and the nodes it consumed.
pub(crate) struct Task<R> {
    pub result: Result<R>,
    pub nodes: u64,
}

/// Runs `f` over `items` in parallel and returns the first (in item order)
/// `Some` result. Every task gets the node limit that remained when the
/// round started.
pub(crate) fn first_hit<T, R, F>(items: &[T], meter: &mut Meter, f: F) -> Result<Option<(usize, R)>>
where
    T: Sync,
    R: Send,
    F: Fn(&T, u64) -> Task<Option<R>> + Sync,
{
    for (chunk_no, chunk) in items.chunks(CHUNK).enumerate() {
        let limit = meter.remaining();
        let outcomes: Vec<Task<Option<R>>> = chunk.par_iter().map(|t| f(t, limit)).collect();
        for (i, task) in outcomes.into_iter().enumerate() {
            let idx = chunk_no * CHUNK + i;
            meter.charge(task.nodes, || {
                format!("{idx} of {} tasks finished", items.len())
            })?;
            if let Some(r) = task.result? {
                return Ok(Some((idx, r)));
            }
        }
    }
    Ok(None)
}

/// Runs `f` over all `items` in parallel, returning results in item order.
pub(crate) fn map_all<T, R, F>(items: &[T], meter: &mut Meter, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T, u64) -> Task<R> + Sync,
{
    let limit = meter.remaining();
    let outcomes: Vec<Task<R>> = items.par_iter().map(|t| f(t, limit)).collect();
    let mut out = Vec::with_capacity(items.len());
    for (idx, task) in outcomes.into_iter().enumerate() {
        meter.charge(task.nodes, || {
            format!("{idx} of {} tasks finished", items.len())
        })?;
        out.push(task.result?);
    }
    Ok(out)
}
