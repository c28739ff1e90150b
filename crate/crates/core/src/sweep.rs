//! Fractional-order sweeps: one closed-loop run per `α`, evaluated in
//! parallel and returned in input order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::csv::write_rows;
use crate::error::{Error, Result};
use crate::fraccalc::FracOrder;
use crate::simloop::{compute_metrics, run_simulation, Metrics, SimConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub metrics: Metrics,
    /// Abort reason when the run stopped early; metrics then cover the
    /// partial log.
    pub abort: Option<String>,
}

pub const SWEEP_COLUMNS: [&str; 7] = [
    "alpha",
    "settling_time",
    "steady_state_error",
    "rms_tracking_error",
    "max_abs_i",
    "clamp_active_fraction",
    "aborted",
];

/// Runs `base` once per entry of `alphas` on up to `threads` workers.
///
/// Every `α` is validated before any simulation starts.
pub fn sweep(
    base: &SimConfig,
    alphas: &[f64],
    band: f64,
    tail: f64,
    threads: usize,
) -> Result<Vec<SweepRow>> {
    let orders = alphas
        .iter()
        .map(|&a| FracOrder::new(a).map_err(|e| Error::Validation(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    base.validate()?;
    if orders.is_empty() {
        return Ok(Vec::new());
    }

    let run_one = |alpha: FracOrder| -> Result<SweepRow> {
        let mut config = base.clone();
        config.gains.alpha = alpha;
        let log = run_simulation(&config)?;
        Ok(SweepRow {
            alpha: alpha.get(),
            metrics: compute_metrics(&log, band, tail),
            abort: log.abort.map(|a| a.reason),
        })
    };

    let workers = threads.clamp(1, orders.len());
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<SweepRow>>>> = Mutex::new(vec![None; orders.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(&alpha) = orders.get(idx) else { break };
                let row = run_one(alpha);
                slots.lock().expect("sweep worker panicked")[idx] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("sweep worker panicked")
        .into_iter()
        .map(|slot| slot.expect("every index is claimed by a worker"))
        .collect()
}

/// Sweep table as CSV. `settling_time` is NaN when the band was never held
/// and `aborted` is 1 for runs that stopped early.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let values: Vec<[f64; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.alpha,
                r.metrics.settling_time.unwrap_or(f64::NAN),
                r.metrics.steady_state_error,
                r.metrics.rms_tracking_error,
                r.metrics.max_abs_i,
                r.metrics.clamp_active_fraction,
                if r.abort.is_some() { 1.0 } else { 0.0 },
            ]
        })
        .collect();
    write_rows(&SWEEP_COLUMNS, values.iter().map(|r| r.as_slice()))
}
