//! JSON scenario files.
//!
//! ```json
//! {
//!   "plant":      { "m": 0.005, "g": 9.81, "Q": 0.003, "Y_inf": 0.041,
//!                   "R": 22.0, "L": 0.5, "physical_phi": false },
//!   "controller": { "alpha": 0.7, "k1": 50, "k2": 100, "k3": 0.01, "k4": 1,
//!                   "memory_window": 0, "i_max": null },
//!   "reference":  { "kind": "sinusoid", "offset": 0.02, "amplitude": 0.01, "freq": 1 },
//!   "sim":        { "t_end": 3, "plant_dt": 1e-4, "ctrl_dt": 1e-3, "y0": 0, "v0": 0 },
//!   "output":     { "channels": ["y", "v", "i"], "svg_width": 800, "svg_height": 400,
//!                   "settle_band": 1e-3, "tail": 1 }
//! }
//! ```
//!
//! Every key except `controller.alpha` is optional and falls back to the
//! nominal plant, gains and rates.

use serde::{Deserialize, Serialize};

use crate::control::ControllerGains;
use crate::error::{Error, Result};
use crate::fraccalc::FracOrder;
use crate::plant::PlantParams;
use crate::reference::ReferenceSpec;
use crate::simloop::{SimConfig, DEFAULT_BAND, DEFAULT_TAIL};

/// Output settings carried alongside a [`SimConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputOptions {
    /// Channels rendered to `<channel>.svg`.
    pub channels: Vec<String>,
    pub svg_width: u32,
    pub svg_height: u32,
    pub settle_band: f64,
    pub tail: f64,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self {
            channels: vec!["y".into(), "v".into(), "i".into()],
            svg_width: 800,
            svg_height: 400,
            settle_band: DEFAULT_BAND,
            tail: DEFAULT_TAIL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub sim: SimConfig,
    pub output: OutputOptions,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    plant: RawPlant,
    #[serde(default)]
    controller: RawController,
    #[serde(default)]
    reference: Option<ReferenceSpec>,
    #[serde(default)]
    sim: RawSim,
    #[serde(default)]
    output: OutputOptions,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlant {
    m: Option<f64>,
    g: Option<f64>,
    #[serde(rename = "Q")]
    q: Option<f64>,
    #[serde(rename = "Y_inf")]
    y_inf: Option<f64>,
    #[serde(rename = "R")]
    r: Option<f64>,
    #[serde(rename = "L")]
    l: Option<f64>,
    physical_phi: Option<bool>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawController {
    alpha: Option<f64>,
    k1: Option<f64>,
    k2: Option<f64>,
    k3: Option<f64>,
    k4: Option<f64>,
    memory_window: Option<usize>,
    i_max: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    t_end: Option<f64>,
    plant_dt: Option<f64>,
    ctrl_dt: Option<f64>,
    y0: Option<f64>,
    v0: Option<f64>,
}

pub fn parse_config(text: &str) -> Result<Config> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;

    let alpha = raw
        .controller
        .alpha
        .ok_or_else(|| Error::Validation("controller.alpha is required".into()))?;
    let alpha = FracOrder::new(alpha)
        .map_err(|_| Error::Validation(format!("controller.alpha must lie in (0, 1], got {alpha}")))?;

    let nominal = SimConfig::nominal(alpha);
    let p = &nominal.params;
    let params = PlantParams {
        m: raw.plant.m.unwrap_or(p.m),
        g: raw.plant.g.unwrap_or(p.g),
        q: raw.plant.q.unwrap_or(p.q),
        y_inf: raw.plant.y_inf.unwrap_or(p.y_inf),
        r: raw.plant.r.unwrap_or(p.r),
        l: raw.plant.l.unwrap_or(p.l),
        physical_phi: raw.plant.physical_phi.unwrap_or(p.physical_phi),
    };
    let k = &nominal.gains;
    let gains = ControllerGains {
        k1: raw.controller.k1.unwrap_or(k.k1),
        k2: raw.controller.k2.unwrap_or(k.k2),
        k3: raw.controller.k3.unwrap_or(k.k3),
        k4: raw.controller.k4.unwrap_or(k.k4),
        alpha,
    };
    let sim = SimConfig {
        params,
        gains,
        reference: raw.reference.unwrap_or(nominal.reference),
        t_end: raw.sim.t_end.unwrap_or(nominal.t_end),
        plant_dt: raw.sim.plant_dt.unwrap_or(nominal.plant_dt),
        ctrl_dt: raw.sim.ctrl_dt.unwrap_or(nominal.ctrl_dt),
        y0: raw.sim.y0.unwrap_or(nominal.y0),
        v0: raw.sim.v0.unwrap_or(nominal.v0),
        memory_window: raw.controller.memory_window.unwrap_or(0),
        i_max: raw.controller.i_max,
    };
    sim.validate()?;

    let output = raw.output;
    if output.svg_width == 0 || output.svg_height == 0 {
        return Err(Error::Validation("output.svg_width and svg_height must be > 0".into()));
    }
    if !(output.settle_band.is_finite() && output.settle_band > 0.0) {
        return Err(Error::Validation("output.settle_band must be > 0".into()));
    }
    if !(output.tail.is_finite() && output.tail > 0.0 && output.tail < sim.t_end) {
        return Err(Error::Validation(format!(
            "output.tail must lie in (0, t_end), got {}",
            output.tail
        )));
    }
    Ok(Config { sim, output })
}

/// Writes every key explicitly; `parse_config(&to_json(c))` returns `c`.
pub fn to_json(config: &Config) -> String {
    let sim = &config.sim;
    let raw = RawConfig {
        plant: RawPlant {
            m: Some(sim.params.m),
            g: Some(sim.params.g),
            q: Some(sim.params.q),
            y_inf: Some(sim.params.y_inf),
            r: Some(sim.params.r),
            l: Some(sim.params.l),
            physical_phi: Some(sim.params.physical_phi),
        },
        controller: RawController {
            alpha: Some(sim.gains.alpha.get()),
            k1: Some(sim.gains.k1),
            k2: Some(sim.gains.k2),
            k3: Some(sim.gains.k3),
            k4: Some(sim.gains.k4),
            memory_window: Some(sim.memory_window),
            i_max: sim.i_max,
        },
        reference: Some(sim.reference),
        sim: RawSim {
            t_end: Some(sim.t_end),
            plant_dt: Some(sim.plant_dt),
            ctrl_dt: Some(sim.ctrl_dt),
            y0: Some(sim.y0),
            v0: Some(sim.v0),
        },
        output: config.output.clone(),
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("config is always serializable");
    text.push('\n');
    text
}

/// Parses a comma-separated list of fractional orders such as `0.01,0.7`.
pub fn parse_alpha_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad alpha `{s}`: {e}")))
        })
        .collect()
}
