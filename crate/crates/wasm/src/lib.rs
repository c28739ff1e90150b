//! Browser bindings for the static demo page in `www/`.
//!
//! Three operations are exposed: a closed-loop run with plot and metrics
//! accessors, a fractional-integral explorer that overlays the discrete
//! operator on its closed form, and a sequential fractional-order sweep.

use wasm_bindgen::prelude::*;

use maglev_core::config::parse_alpha_list;
use maglev_core::csv::{metrics_json, write_csv};
use maglev_core::fraccalc::{frac_integral_batch, gamma, FracOrder};
use maglev_core::reference::ReferenceSpec;
use maglev_core::simloop::{
    compute_metrics, run_simulation, SimConfig, SimLog, DEFAULT_BAND, DEFAULT_TAIL,
};
use maglev_core::svg::{render_overlay, render_svg};
use maglev_core::sweep::{sweep_csv, SweepRow};

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn scenario(alpha: f64, k4: f64, tracking: bool, t_end: f64, memory_window: u32) -> Result<SimConfig, JsValue> {
    let mut config = SimConfig::nominal(FracOrder::new(alpha).map_err(js_err)?);
    config.gains.k4 = k4;
    config.t_end = t_end;
    config.memory_window = memory_window as usize;
    if tracking {
        config.reference = ReferenceSpec::Sinusoid {
            offset: 0.02,
            amplitude: 0.01,
            freq: 1.0,
        };
    }
    config.validate().map_err(js_err)?;
    Ok(config)
}

/// One finished closed-loop run.
#[wasm_bindgen]
pub struct Simulation {
    log: SimLog,
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(
        alpha: f64,
        k4: f64,
        tracking: bool,
        t_end: f64,
        memory_window: u32,
    ) -> Result<Simulation, JsValue> {
        let config = scenario(alpha, k4, tracking, t_end, memory_window)?;
        let log = run_simulation(&config).map_err(js_err)?;
        Ok(Simulation { log })
    }

    /// SVG of one logged channel. `y` is drawn together with its reference.
    pub fn plot(&self, channel: &str, width: u32, height: u32) -> Result<String, JsValue> {
        if channel == "y" {
            let ts = self.log.channel("t").map_err(js_err)?;
            let y = self.log.channel("y").map_err(js_err)?;
            let x1d = self.log.channel("x1d").map_err(js_err)?;
            return render_overlay(&ts, &[("y", &y), ("x1d", &x1d)], "t [s]", "y [m]", width, height)
                .map_err(js_err);
        }
        render_svg(&self.log, channel, width, height).map_err(js_err)
    }

    pub fn metrics_json(&self) -> String {
        metrics_json(&compute_metrics(&self.log, DEFAULT_BAND, DEFAULT_TAIL))
    }

    pub fn csv(&self) -> String {
        write_csv(&self.log)
    }

    pub fn abort_reason(&self) -> Option<String> {
        self.log.abort.as_ref().map(|a| a.reason.clone())
    }

    pub fn len(&self) -> usize {
        self.log.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log.records.is_empty()
    }
}

/// Discrete order-`α` integral of `1`, `t` or `sin(2πt)` on `[0, 2]`
/// against the closed form (only for `1` and `t`).
#[wasm_bindgen]
pub fn fractional_integral_plot(
    alpha: f64,
    signal: &str,
    h: f64,
    width: u32,
    height: u32,
) -> Result<String, JsValue> {
    let order = FracOrder::new(alpha).map_err(js_err)?;
    if !(h > 0.0 && h <= 0.1) {
        return Err(js_err("step must lie in (0, 0.1]"));
    }
    let n = (2.0 / h).round() as usize;
    let ts: Vec<f64> = (0..=n).map(|k| k as f64 * h).collect();
    let (samples, exact): (Vec<f64>, Option<Vec<f64>>) = match signal {
        "one" => {
            let g = gamma(alpha + 1.0).map_err(js_err)?;
            (vec![1.0; ts.len()], Some(ts.iter().map(|t| t.powf(alpha) / g).collect()))
        }
        "ramp" => {
            let g = gamma(alpha + 2.0).map_err(js_err)?;
            (ts.clone(), Some(ts.iter().map(|t| t.powf(alpha + 1.0) / g).collect()))
        }
        "sine" => (ts.iter().map(|t| (std::f64::consts::TAU * t).sin()).collect(), None),
        other => return Err(js_err(format!("unknown signal `{other}`"))),
    };
    let numeric = frac_integral_batch(&samples, order, h).map_err(js_err)?;
    let mut series: Vec<(&str, &[f64])> = vec![("input", &samples), ("I^a numeric", &numeric)];
    if let Some(exact) = exact.as_deref() {
        series.push(("closed form", exact));
    }
    render_overlay(&ts, &series, "t", "value", width, height).map_err(js_err)
}

/// Runs one scenario per order in `alphas` (comma separated) and returns the
/// sweep table as CSV.
#[wasm_bindgen]
pub fn sweep_table(alphas: &str, tracking: bool, t_end: f64) -> Result<String, JsValue> {
    let alphas = parse_alpha_list(alphas).map_err(js_err)?;
    let mut rows = Vec::with_capacity(alphas.len());
    for alpha in alphas {
        let config = scenario(alpha, 1.0, tracking, t_end, 0)?;
        let log = run_simulation(&config).map_err(js_err)?;
        rows.push(SweepRow {
            alpha,
            metrics: compute_metrics(&log, DEFAULT_BAND, DEFAULT_TAIL.min(0.5 * t_end)),
            abort: log.abort.map(|a| a.reason),
        });
    }
    Ok(sweep_csv(&rows))
}
