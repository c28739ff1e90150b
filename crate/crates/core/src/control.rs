//! Fractional-order backstepping law.
//!
//! Error coordinates:
//!
//! ```text
//! e1 = y − x1d          e2 = v − x2d
//! ν  = −k1·e1           z2 = e2 − ν
//! ```
//!
//! Control (squared coil current), with `F = I^α |e1|` and `ν̇ = −k1·e2`:
//!
//! ```text
//! u = ( g − ẋ2d + |z2|·sgn(e1) + k2·z2 + k3·sgn(z2) + k4·sgn(z2)·F − ν̇ ) / φ(y)
//! ```
//!
//! `u = i²` is clamped at zero; the unclamped value is kept for logging.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraccalc::FracOrder;
use crate::plant::PlantState;
use crate::reference::ReferenceSample;

impl Serialize for FracOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.get())
    }
}

impl<'de> Deserialize<'de> for FracOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let alpha = f64::deserialize(d)?;
        FracOrder::new(alpha).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerGains {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub alpha: FracOrder,
}

impl ControllerGains {
    /// Gains used for both set-point and tracking experiments.
    pub fn nominal(alpha: FracOrder) -> Self {
        Self {
            k1: 50.0,
            k2: 100.0,
            k3: 0.01,
            k4: 1.0,
            alpha,
        }
    }

    /// `k1`, `k2`, `k3` must be positive. `k4 = 0` is accepted and turns the
    /// law into its integer-order baseline.
    pub fn validate(&self) -> Result<()> {
        for (name, k) in [("k1", self.k1), ("k2", self.k2), ("k3", self.k3)] {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::Validation(format!("controller.{name} must be > 0, got {k}")));
            }
        }
        if !(self.k4.is_finite() && self.k4 >= 0.0) {
            return Err(Error::Validation(format!(
                "controller.k4 must be >= 0, got {}",
                self.k4
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorState {
    pub e1: f64,
    pub e2: f64,
    /// Virtual control for `e2`.
    pub nu: f64,
    pub z2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlOutput {
    /// Applied squared current [A²].
    pub u: f64,
    /// Applied current [A].
    pub i: f64,
    /// Law output before clamping.
    pub u_raw: f64,
    /// Fractional memory term used in this evaluation.
    pub frac_val: f64,
    pub v1: f64,
    pub v2: f64,
}

impl ControlOutput {
    /// Limits the current magnitude to `i_max`; `u_raw` is left untouched.
    pub fn saturate(self, i_max: f64) -> Self {
        if self.i <= i_max {
            return self;
        }
        let i = i_max.max(0.0);
        Self { u: i * i, i, ..self }
    }
}

/// Sign with `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn compute_errors(
    state: &PlantState,
    reference: &ReferenceSample,
    gains: &ControllerGains,
) -> ErrorState {
    let e1 = state.y - reference.x1d;
    let e2 = state.v - reference.x2d;
    let nu = -gains.k1 * e1;
    ErrorState { e1, e2, nu, z2: e2 - nu }
}

/// `(V1, V2) = (|e1|, |e1| + |z2|)`.
pub fn lyapunov_diagnostics(err: &ErrorState) -> (f64, f64) {
    let v1 = err.e1.abs();
    (v1, v1 + err.z2.abs())
}

pub fn control_law(
    err: &ErrorState,
    reference: &ReferenceSample,
    frac_val: f64,
    phi_val: f64,
    gains: &ControllerGains,
    g: f64,
) -> Result<ControlOutput> {
    if !(phi_val.is_finite() && phi_val > 0.0) {
        return Err(Error::Domain(format!("φ must be finite and > 0, got {phi_val}")));
    }
    let s1 = sgn(err.e1);
    let s2 = sgn(err.z2);
    let nu_dot = -gains.k1 * err.e2;
    let numerator = g - reference.x2d_dot
        + err.z2.abs() * s1
        + gains.k2 * err.z2
        + gains.k3 * s2
        + gains.k4 * s2 * frac_val
        - nu_dot;
    let u_raw = numerator / phi_val;
    let u = u_raw.max(0.0);
    let (v1, v2) = lyapunov_diagnostics(err);
    Ok(ControlOutput {
        u,
        i: u.sqrt(),
        u_raw,
        frac_val,
        v1,
        v2,
    })
}
