//! Multirate closed loop: RK4 plant substeps under a zero-order hold between
//! controller samples.

use crate::control::{compute_errors, control_law, ControllerGains};
use crate::error::{Error, Result};
use crate::fraccalc::{FracAccumulator, FracOrder};
use crate::plant::{phi, rk4_step, PlantParams, PlantState};
use crate::reference::{eval_reference, ReferenceSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: PlantParams,
    pub gains: ControllerGains,
    pub reference: ReferenceSpec,
    pub t_end: f64,
    pub plant_dt: f64,
    pub ctrl_dt: f64,
    pub y0: f64,
    pub v0: f64,
    /// Fractional memory length in controller samples; 0 keeps all history.
    pub memory_window: usize,
    /// Optional current limit [A].
    pub i_max: Option<f64>,
}

impl SimConfig {
    /// Nominal plant and gains with a 0.02 m set-point over 3 s, starting at
    /// rest at `y = 0`.
    pub fn nominal(alpha: FracOrder) -> Self {
        Self {
            params: PlantParams::default(),
            gains: ControllerGains::nominal(alpha),
            reference: ReferenceSpec::default(),
            t_end: 3.0,
            plant_dt: 1e-4,
            ctrl_dt: 1e-3,
            y0: 0.0,
            v0: 0.0,
            memory_window: 0,
            i_max: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.gains.validate()?;
        self.reference.validate()?;
        for (name, value) in [
            ("sim.t_end", self.t_end),
            ("sim.plant_dt", self.plant_dt),
            ("sim.ctrl_dt", self.ctrl_dt),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Validation(format!("{name} must be > 0, got {value}")));
            }
        }
        self.substeps()?;
        if !(self.y0.is_finite() && self.v0.is_finite()) {
            return Err(Error::Validation("sim.y0 and sim.v0 must be finite".into()));
        }
        if self.params.y_inf + self.y0 <= crate::plant::SINGULARITY_GUARD {
            return Err(Error::Validation(format!(
                "sim.y0 = {} puts the ball inside the singularity guard",
                self.y0
            )));
        }
        if let Some(i_max) = self.i_max {
            if !(i_max.is_finite() && i_max >= 0.0) {
                return Err(Error::Validation(format!(
                    "controller.i_max must be >= 0, got {i_max}"
                )));
            }
        }
        Ok(())
    }

    /// Plant substeps per controller period; `ctrl_dt / plant_dt` must be a
    /// positive integer.
    pub fn substeps(&self) -> Result<usize> {
        let ratio = self.ctrl_dt / self.plant_dt;
        let n = ratio.round();
        if !ratio.is_finite() || n < 1.0 || (ratio - n).abs() > 1e-9 * n {
            return Err(Error::Validation(format!(
                "sim.ctrl_dt / sim.plant_dt must be a positive integer, got {ratio}"
            )));
        }
        Ok(n as usize)
    }

    /// Number of logged controller steps, `floor(t_end / ctrl_dt)`.
    pub fn ctrl_steps(&self) -> usize {
        (self.t_end / self.ctrl_dt + 1e-9).floor() as usize
    }
}

/// One logged controller step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Record {
    pub t: f64,
    pub y: f64,
    pub v: f64,
    pub u: f64,
    pub u_raw: f64,
    pub i: f64,
    pub x1d: f64,
    pub x2d: f64,
    pub e1: f64,
    pub e2: f64,
    pub z2: f64,
    pub nu: f64,
    pub frac_e1: f64,
    pub v1: f64,
    pub v2: f64,
}

impl Record {
    pub const COLUMNS: [&'static str; 15] = [
        "t", "y", "v", "u", "u_raw", "i", "x1d", "x2d", "e1", "e2", "z2", "nu", "frac_e1", "V1",
        "V2",
    ];

    pub fn values(&self) -> [f64; 15] {
        [
            self.t, self.y, self.v, self.u, self.u_raw, self.i, self.x1d, self.x2d, self.e1,
            self.e2, self.z2, self.nu, self.frac_e1, self.v1, self.v2,
        ]
    }

    pub fn column_index(name: &str) -> Option<usize> {
        Self::COLUMNS.iter().position(|c| *c == name)
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct Abort {
    pub t: f64,
    pub y: f64,
    pub v: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimLog {
    pub config: SimConfig,
    pub records: Vec<Record>,
    pub abort: Option<Abort>,
}

impl SimLog {
    pub fn new(config: SimConfig) -> Self {
        Self {
            config,
            records: Vec::new(),
            abort: None,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.abort.is_none()
    }

    pub fn channel(&self, name: &str) -> Result<Vec<f64>> {
        let idx = Record::column_index(name).ok_or_else(|| Error::UnknownChannel(name.into()))?;
        Ok(self.records.iter().map(|r| r.values()[idx]).collect())
    }
}

pub fn run_simulation(config: &SimConfig) -> Result<SimLog> {
    run_simulation_observed(config, |_, _| {})
}

/// Runs the closed loop, calling `observer(ctrl_step, u)` before every plant
/// substep.
pub fn run_simulation_observed<F>(config: &SimConfig, mut observer: F) -> Result<SimLog>
where
    F: FnMut(usize, f64),
{
    config.validate()?;
    let substeps = config.substeps()?;
    let steps = config.ctrl_steps();
    let params = &config.params;
    let gains = &config.gains;

    let capacity = if gains.k4 == 0.0 { 0 } else { steps };
    let mut acc =
        FracAccumulator::with_capacity(gains.alpha, config.ctrl_dt, config.memory_window, capacity)?;
    let mut log = SimLog::new(config.clone());
    log.records.reserve(steps);

    let mut state = PlantState {
        y: config.y0,
        v: config.v0,
        t: 0.0,
    };

    for k in 0..steps {
        let t = k as f64 * config.ctrl_dt;
        state.t = t;
        let reference = eval_reference(&config.reference, t);
        let err = compute_errors(&state, &reference, gains);
        let phi_val = match phi(state.y, params) {
            Ok(p) => p,
            Err(e) => {
                log.abort = Some(abort_at(&state, &e));
                return Ok(log);
            }
        };
        // k4 = 0 is the integer-order law: the memory term is never evaluated.
        let frac_val = if gains.k4 == 0.0 {
            0.0
        } else {
            acc.push(err.e1.abs())
        };
        let mut out = control_law(&err, &reference, frac_val, phi_val, gains, params.g)?;
        if let Some(i_max) = config.i_max {
            out = out.saturate(i_max);
        }
        if !(out.u_raw.is_finite() && frac_val.is_finite()) {
            log.abort = Some(Abort {
                t,
                y: state.y,
                v: state.v,
                reason: "non-finite control output".into(),
            });
            return Ok(log);
        }

        log.records.push(Record {
            t,
            y: state.y,
            v: state.v,
            u: out.u,
            u_raw: out.u_raw,
            i: out.i,
            x1d: reference.x1d,
            x2d: reference.x2d,
            e1: err.e1,
            e2: err.e2,
            z2: err.z2,
            nu: err.nu,
            frac_e1: frac_val,
            v1: out.v1,
            v2: out.v2,
        });

        for j in 0..substeps {
            state.t = (k * substeps + j) as f64 * config.plant_dt;
            observer(k, out.u);
            state = match rk4_step(&state, out.u, config.plant_dt, params) {
                Ok(next) if next.y.is_finite() && next.v.is_finite() => next,
                Ok(next) => {
                    log.abort = Some(Abort {
                        t: next.t,
                        y: next.y,
                        v: next.v,
                        reason: "non-finite plant state".into(),
                    });
                    return Ok(log);
                }
                Err(e) => {
                    log.abort = Some(abort_at(&state, &e));
                    return Ok(log);
                }
            };
        }
    }
    Ok(log)
}

fn abort_at(state: &PlantState, e: &Error) -> Abort {
    Abort {
        t: state.t,
        y: state.y,
        v: state.v,
        reason: e.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Earliest time after which `|e1|` stays within the band.
    pub settling_time: Option<f64>,
    /// Mean `|e1|` over the tail window.
    pub steady_state_error: f64,
    /// RMS of `e1` over the tail window.
    pub rms_tracking_error: f64,
    pub max_abs_i: f64,
    /// Fraction of controller steps where the law asked for `u < 0`.
    pub clamp_active_fraction: f64,
}

/// Default settling band [m].
pub const DEFAULT_BAND: f64 = 1e-3;
/// Default steady-state window [s].
pub const DEFAULT_TAIL: f64 = 1.0;

pub fn compute_metrics(log: &SimLog, band: f64, tail: f64) -> Metrics {
    let records = &log.records;
    if records.is_empty() {
        return Metrics {
            settling_time: None,
            steady_state_error: 0.0,
            rms_tracking_error: 0.0,
            max_abs_i: 0.0,
            clamp_active_fraction: 0.0,
        };
    }
    let dt = log.config.ctrl_dt;

    let settling_time = match records.iter().rposition(|r| r.e1.is_nan() || r.e1.abs() > band) {
        None => Some(records[0].t),
        Some(last_bad) => records.get(last_bad + 1).map(|r| r.t),
    };

    let end = records.len() as f64 * dt;
    let start = end - tail - 0.5 * dt;
    let window: Vec<f64> = records.iter().filter(|r| r.t >= start).map(|r| r.e1).collect();
    let (steady_state_error, rms_tracking_error) = if window.is_empty() {
        (0.0, 0.0)
    } else {
        let n = window.len() as f64;
        (
            window.iter().map(|e| e.abs()).sum::<f64>() / n,
            (window.iter().map(|e| e * e).sum::<f64>() / n).sqrt(),
        )
    };

    let max_abs_i = records.iter().map(|r| r.i.abs()).fold(0.0, f64::max);
    let clamped = records.iter().filter(|r| r.u_raw < 0.0).count();

    Metrics {
        settling_time,
        steady_state_error,
        rms_tracking_error,
        max_abs_i,
        clamp_active_fraction: clamped as f64 / records.len() as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    fn synthetic(e1: impl Fn(f64) -> f64, t_end: f64) -> SimLog {
        let mut config = SimConfig::nominal(alpha(0.5));
        config.t_end = t_end;
        let mut log = SimLog::new(config);
        for k in 0..log.config.ctrl_steps() {
            let t = k as f64 * 1e-3;
            log.records.push(Record { t, e1: e1(t), ..Default::default() });
        }
        log
    }

    #[test]
    fn rejects_non_integer_rate_ratio() {
        let mut c = SimConfig::nominal(alpha(0.5));
        c.plant_dt = 3e-4;
        assert!(matches!(c.validate(), Err(Error::Validation(_))));
        assert!(run_simulation(&c).is_err());
        c.plant_dt = 1e-4;
        assert_eq!(c.substeps().unwrap(), 10);
    }

    #[test]
    fn record_count_and_time_grid() {
        let mut c = SimConfig::nominal(alpha(0.01));
        c.t_end = 0.5;
        let log = run_simulation(&c).unwrap();
        assert!(log.is_complete());
        assert_eq!(log.records.len(), 500);
        for (k, r) in log.records.iter().enumerate() {
            assert_eq!(r.t, k as f64 * c.ctrl_dt);
        }
        assert!(log.records.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn input_is_held_between_samples() {
        let mut c = SimConfig::nominal(alpha(0.7));
        c.t_end = 0.3;
        let mut seen: Vec<Vec<f64>> = vec![Vec::new(); c.ctrl_steps()];
        let log = run_simulation_observed(&c, |k, u| seen[k].push(u)).unwrap();
        for (k, us) in seen.iter().enumerate() {
            assert_eq!(us.len(), 10);
            assert!(us.iter().all(|u| u.to_bits() == log.records[k].u.to_bits()));
        }
    }

    #[test]
    fn free_release_follows_parabola() {
        let mut c = SimConfig::nominal(alpha(0.5));
        c.i_max = Some(0.0);
        c.t_end = 0.2;
        c.v0 = -0.1;
        let log = run_simulation(&c).unwrap();
        for r in &log.records {
            assert_eq!(r.u, 0.0);
            let y = c.y0 + c.v0 * r.t + 0.5 * c.params.g * r.t * r.t;
            assert!((r.y - y).abs() < 1e-12, "t = {}", r.t);
        }
    }

    #[test]
    fn upward_release_hits_singularity() {
        let mut c = SimConfig::nominal(alpha(0.5));
        c.i_max = Some(0.0);
        c.v0 = -1.0;
        let log = run_simulation(&c).unwrap();
        let abort = log.abort.expect("run should abort at the coil");
        assert!(abort.reason.contains("singularity"));
        assert!(abort.t > 0.05 && abort.t < 0.06);
        assert!(log.records.len() < c.ctrl_steps());
    }

    #[test]
    fn set_point_settles() {
        let c = SimConfig::nominal(alpha(0.01));
        let log = run_simulation(&c).unwrap();
        assert!(log.is_complete());
        for r in log.records.iter().filter(|r| r.t >= 0.5) {
            assert!((r.y - 0.02).abs() <= 1e-3);
        }
    }

    #[test]
    fn runs_are_bitwise_repeatable() {
        let mut c = SimConfig::nominal(alpha(0.7));
        c.t_end = 0.4;
        assert_eq!(run_simulation(&c).unwrap(), run_simulation(&c).unwrap());
    }

    #[test]
    fn alpha_irrelevant_without_memory_gain() {
        let mut low = SimConfig::nominal(alpha(0.01));
        low.t_end = 0.5;
        low.gains.k4 = 0.0;
        let high = SimConfig { gains: ControllerGains { alpha: alpha(0.7), ..low.gains }, ..low.clone() };
        let a = run_simulation(&low).unwrap();
        let b = run_simulation(&high).unwrap();
        assert_eq!(a.records, b.records);
        assert!(a.records.iter().all(|r| r.frac_e1 == 0.0));
    }

    #[test]
    fn frac_term_includes_current_sample() {
        let mut c = SimConfig::nominal(alpha(0.5));
        c.t_end = 0.01;
        let log = run_simulation(&c).unwrap();
        // first push: h^α · |e1(0)|
        let expected = c.ctrl_dt.powf(0.5) * 0.02;
        assert!((log.records[0].frac_e1 - expected).abs() < 1e-15);
    }

    #[test]
    fn metrics_of_zero_error() {
        let log = synthetic(|_| 0.0, 2.0);
        let m = compute_metrics(&log, DEFAULT_BAND, DEFAULT_TAIL);
        assert_eq!(m.settling_time, Some(0.0));
        assert_eq!(m.steady_state_error, 0.0);
        assert_eq!(m.rms_tracking_error, 0.0);
        assert_eq!(m.clamp_active_fraction, 0.0);
    }

    #[test]
    fn metrics_exponential_crossing() {
        let log = synthetic(|t| 0.01 * (-10.0 * t).exp(), 2.0);
        let m = compute_metrics(&log, 1e-3, 1.0);
        let ts = m.settling_time.unwrap();
        assert!((ts - 10f64.ln() / 10.0).abs() <= 1e-3, "{ts}");
    }

    #[test]
    fn metrics_constant_offset() {
        let log = synthetic(|_| 5e-4, 3.0);
        let m = compute_metrics(&log, 1e-3, 1.0);
        assert!((m.steady_state_error - 5e-4).abs() < 1e-15);
        assert!((m.rms_tracking_error - 5e-4).abs() < 1e-15);
    }

    #[test]
    fn metrics_never_settled() {
        let log = synthetic(|t| if t > 1.5 { 0.1 } else { 0.0 }, 2.0);
        assert_eq!(compute_metrics(&log, 1e-3, 1.0).settling_time, None);
    }
}
