//! Reference trajectories with analytic derivatives.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ReferenceSpec {
    /// Constant position, applied as a step at `t = 0`.
    Setpoint { offset: f64 },
    /// `offset + amplitude · sin(2π · freq · t)`.
    Sinusoid {
        offset: f64,
        amplitude: f64,
        freq: f64,
    },
}

impl Default for ReferenceSpec {
    fn default() -> Self {
        ReferenceSpec::Setpoint { offset: 0.02 }
    }
}

impl ReferenceSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ReferenceSpec::Setpoint { offset } if offset.is_finite() => Ok(()),
            ReferenceSpec::Setpoint { .. } => {
                Err(Error::Validation("reference.offset must be finite".into()))
            }
            ReferenceSpec::Sinusoid {
                offset,
                amplitude,
                freq,
            } => {
                if !offset.is_finite() {
                    Err(Error::Validation("reference.offset must be finite".into()))
                } else if !(amplitude.is_finite() && amplitude >= 0.0) {
                    Err(Error::Validation(format!(
                        "reference.amplitude must be >= 0, got {amplitude}"
                    )))
                } else if !(freq.is_finite() && freq > 0.0) {
                    Err(Error::Validation(format!("reference.freq must be > 0, got {freq}")))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Desired position, velocity and acceleration at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReferenceSample {
    pub x1d: f64,
    pub x2d: f64,
    pub x2d_dot: f64,
}

pub fn eval_reference(spec: &ReferenceSpec, t: f64) -> ReferenceSample {
    match *spec {
        ReferenceSpec::Setpoint { offset } => ReferenceSample {
            x1d: offset,
            x2d: 0.0,
            x2d_dot: 0.0,
        },
        ReferenceSpec::Sinusoid {
            offset,
            amplitude,
            freq,
        } => {
            let omega = TAU * freq;
            let (s, c) = (omega * t).sin_cos();
            ReferenceSample {
                x1d: offset + amplitude * s,
                x2d: amplitude * omega * c,
                x2d_dot: -amplitude * omega * omega * s,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER_SINE: ReferenceSpec = ReferenceSpec::Sinusoid {
        offset: 0.02,
        amplitude: 0.01,
        freq: 1.0,
    };

    #[test]
    fn setpoint_is_flat() {
        let r = eval_reference(&ReferenceSpec::Setpoint { offset: 0.02 }, 1.7);
        assert_eq!(r, ReferenceSample { x1d: 0.02, x2d: 0.0, x2d_dot: 0.0 });
    }

    #[test]
    fn sinusoid_samples() {
        let r0 = eval_reference(&PAPER_SINE, 0.0);
        assert_eq!(r0.x1d, 0.02);
        assert!((r0.x2d - 0.06283185307).abs() < 1e-11);
        assert_eq!(r0.x2d_dot, 0.0);

        let r = eval_reference(&PAPER_SINE, 0.25);
        assert!((r.x1d - 0.03).abs() < 1e-15);
        assert!(r.x2d.abs() < 1e-15);
        assert!((r.x2d_dot + 0.3947841760).abs() < 1e-10);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let d = 1e-5;
        for k in 0..200 {
            let t = 0.1 + k as f64 * 0.0137;
            let lo = eval_reference(&PAPER_SINE, t - d);
            let hi = eval_reference(&PAPER_SINE, t + d);
            let mid = eval_reference(&PAPER_SINE, t);
            assert!(((hi.x1d - lo.x1d) / (2.0 * d) - mid.x2d).abs() < 1e-6);
            assert!(((hi.x2d - lo.x2d) / (2.0 * d) - mid.x2d_dot).abs() < 1e-6);
        }
    }

    #[test]
    fn sinusoid_is_periodic() {
        let spec = ReferenceSpec::Sinusoid { offset: 0.02, amplitude: 0.01, freq: 2.5 };
        for k in 0..100 {
            let t = k as f64 * 0.0131;
            let a = eval_reference(&spec, t);
            let b = eval_reference(&spec, t + 1.0 / 2.5);
            assert!((a.x1d - b.x1d).abs() <= 1e-12);
            assert!((a.x2d - b.x2d).abs() <= 1e-12);
            assert!((a.x2d_dot - b.x2d_dot).abs() <= 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(PAPER_SINE.validate().is_ok());
        let bad = ReferenceSpec::Sinusoid { offset: 0.02, amplitude: 0.01, freq: 0.0 };
        assert!(bad.validate().is_err());
        let bad = ReferenceSpec::Sinusoid { offset: 0.02, amplitude: -0.01, freq: 1.0 };
        assert!(bad.validate().is_err());
    }
}
