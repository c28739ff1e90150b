//! Current-controlled magnetic levitation plant.
//!
//! State is the ball–coil distance `y` (positive away from the coil, the
//! direction gravity pulls) and its rate `v`. The input is the squared coil
//! current `u = i²`:
//!
//! ```text
//! ẏ = v
//! v̇ = g − φ(y)·u,    φ(y) = F_em / m
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum admissible `Y_inf + y` in metres.
pub const SINGULARITY_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantParams {
    /// Ball mass [kg].
    pub m: f64,
    /// Gravitational acceleration [m/s²].
    pub g: f64,
    /// Coil force constant.
    #[serde(rename = "Q")]
    pub q: f64,
    /// Distance offset of the force law [m].
    #[serde(rename = "Y_inf")]
    pub y_inf: f64,
    /// Coil resistance [Ω]. Recorded only; the amplifier imposes the current.
    #[serde(rename = "R")]
    pub r: f64,
    /// Coil inductance [H]. Recorded only.
    #[serde(rename = "L")]
    pub l: f64,
    /// Use `Q / (2 m (Y_inf + y)²)` instead of the literal
    /// `Q / (2 m² (Y_inf + y)²)`.
    pub physical_phi: bool,
}

impl Default for PlantParams {
    fn default() -> Self {
        Self {
            m: 0.005,
            g: 9.81,
            q: 0.003,
            y_inf: 0.041,
            r: 22.0,
            l: 0.5,
            physical_phi: false,
        }
    }
}

impl PlantParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [("m", self.m), ("Q", self.q), ("Y_inf", self.y_inf)];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Validation(format!("plant.{name} must be > 0, got {value}")));
            }
        }
        for (name, value) in [("g", self.g), ("R", self.r), ("L", self.l)] {
            if !value.is_finite() {
                return Err(Error::Validation(format!("plant.{name} must be finite")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlantState {
    /// Ball–coil distance [m].
    pub y: f64,
    /// Vertical velocity [m/s].
    pub v: f64,
    /// Time [s].
    pub t: f64,
}

/// Force per unit mass per unit `u`.
pub fn phi(y: f64, params: &PlantParams) -> Result<f64> {
    let gap = params.y_inf + y;
    if gap.is_nan() || gap <= SINGULARITY_GUARD {
        return Err(Error::Singularity { gap });
    }
    let mass_factor = if params.physical_phi {
        params.m
    } else {
        params.m * params.m
    };
    Ok(params.q / (2.0 * mass_factor * gap * gap))
}

/// Right-hand side `(ẏ, v̇)`.
pub fn plant_deriv(state: &PlantState, u: f64, params: &PlantParams) -> Result<(f64, f64)> {
    let force = phi(state.y, params)?;
    Ok((state.v, params.g - force * u))
}

/// One classical RK4 step with `u` held constant.
///
/// The returned time is recomputed from the step index implied by
/// `state.t / h`, so a run of steps on the grid `k·h` never drifts.
pub fn rk4_step(state: &PlantState, u: f64, h: f64, params: &PlantParams) -> Result<PlantState> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Domain(format!("RK4 step must be > 0, got {h}")));
    }
    let stage = |y: f64, v: f64| plant_deriv(&PlantState { y, v, t: state.t }, u, params);
    let (dy1, dv1) = stage(state.y, state.v)?;
    let (dy2, dv2) = stage(state.y + 0.5 * h * dy1, state.v + 0.5 * h * dv1)?;
    let (dy3, dv3) = stage(state.y + 0.5 * h * dy2, state.v + 0.5 * h * dv2)?;
    let (dy4, dv4) = stage(state.y + h * dy3, state.v + h * dv3)?;

    let index = (state.t / h).round() + 1.0;
    Ok(PlantState {
        y: state.y + h / 6.0 * (dy1 + 2.0 * dy2 + 2.0 * dy3 + dy4),
        v: state.v + h / 6.0 * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4),
        t: index * h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn phi_nominal_value() {
        let p = PlantParams::default();
        let value = phi(0.02, &p).unwrap();
        assert!((value - 16124.697661918839).abs() / value < 1e-12);
    }

    #[test]
    fn phi_scales_with_q() {
        let p = PlantParams::default();
        let doubled = PlantParams { q: 2.0 * p.q, ..p };
        assert_eq!(phi(0.013, &doubled).unwrap(), 2.0 * phi(0.013, &p).unwrap());
    }

    #[test]
    fn phi_physical_variant_drops_one_mass() {
        let p = PlantParams::default();
        let physical = PlantParams { physical_phi: true, ..p };
        let ratio = phi(0.02, &physical).unwrap() / phi(0.02, &p).unwrap();
        assert!((ratio - p.m).abs() < 1e-15);
    }

    #[test]
    fn phi_singularity_guard() {
        let p = PlantParams::default();
        let err = phi(-p.y_inf + 0.5e-6, &p).unwrap_err();
        assert!(matches!(err, Error::Singularity { .. }));
        assert!(phi(-p.y_inf - 1e-3, &p).is_err());
        assert!(phi(-p.y_inf + 2e-6, &p).is_ok());
    }

    #[test]
    fn phi_monotone_decreasing() {
        let p = PlantParams::default();
        let grid: Vec<f64> = (0..400).map(|k| -0.04 + k as f64 * 2.5e-4).collect();
        let values: Vec<f64> = grid.iter().map(|&y| phi(y, &p).unwrap()).collect();
        assert!(values.iter().all(|&v| v > 0.0));
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn deriv_cases() {
        let p = PlantParams::default();
        let s = PlantState { y: 0.01, v: 1.5, t: 0.0 };
        let (dy, dv) = plant_deriv(&s, 0.0, &p).unwrap();
        assert_eq!(dy, 1.5);
        assert_eq!(dv.to_bits(), p.g.to_bits());

        let rest = PlantState { y: 0.02, v: 0.0, t: 0.0 };
        let u_eq = p.g / phi(0.02, &p).unwrap();
        let (dy, dv) = plant_deriv(&rest, u_eq, &p).unwrap();
        assert_eq!(dy, 0.0);
        assert!(dv.abs() < 1e-12);
    }

    #[test]
    fn rk4_holds_equilibrium() {
        let p = PlantParams::default();
        let rest = PlantState { y: 0.02, v: 0.0, t: 0.0 };
        let u_eq = p.g / phi(0.02, &p).unwrap();
        let next = rk4_step(&rest, u_eq, 1e-4, &p).unwrap();
        assert!((next.y - rest.y).abs() <= 1e-12);
        assert!(next.v.abs() <= 1e-12);
        assert_eq!(next.t, 1e-4);
    }

    #[test]
    fn rk4_rejects_zero_step() {
        let p = PlantParams::default();
        assert!(rk4_step(&PlantState::default(), 0.0, 0.0, &p).is_err());
    }

    #[test]
    fn rk4_time_does_not_drift() {
        let p = PlantParams::default();
        let h = 1e-4;
        let mut s = PlantState::default();
        for k in 1..=30_000u32 {
            s = rk4_step(&s, 0.0, h, &p).unwrap();
            assert_eq!(s.t, k as f64 * h);
        }
    }

    #[test]
    fn rk4_is_deterministic() {
        let p = PlantParams::default();
        let s = PlantState { y: 0.011, v: -0.3, t: 0.0 };
        let a = rk4_step(&s, 1e-3, 1e-4, &p).unwrap();
        let b = rk4_step(&s, 1e-3, 1e-4, &p).unwrap();
        assert_eq!(a.y.to_bits(), b.y.to_bits());
        assert_eq!(a.v.to_bits(), b.v.to_bits());
    }

    proptest! {
        #[test]
        fn rk4_exact_in_free_fall(
            y0 in -0.03f64..0.05,
            v0 in -1.0f64..1.0,
            h in 1e-6f64..=1e-3,
        ) {
            let p = PlantParams::default();
            let s = PlantState { y: y0, v: v0, t: 0.0 };
            let next = rk4_step(&s, 0.0, h, &p).unwrap();
            prop_assert!((next.y - (y0 + v0 * h + 0.5 * p.g * h * h)).abs() <= 1e-12);
            prop_assert!((next.v - (v0 + p.g * h)).abs() <= 1e-12);
        }
    }
}
