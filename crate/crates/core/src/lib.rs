//! Closed-loop simulation of a current-controlled magnetic levitation plant
//! under a nonlinear backstepping law with a fractional-order memory term.
//!
//! The crate is organised bottom-up:
//!
//! * [`fraccalc`] — gamma function, Grünwald–Letnikov fractional integral
//!   (batch and streaming) and the Caputo L1 derivative.
//! * [`plant`] — ball dynamics and a fixed-step RK4 integrator.
//! * [`reference`] — analytic set-point and sinusoidal references.
//! * [`control`] — error coordinates, the backstepping law and Lyapunov
//!   diagnostics.
//! * [`simloop`] — multirate zero-order-hold orchestration and metrics.
//! * [`config`], [`csv`], [`svg`], [`sweep`] — scenario files and outputs.

pub mod config;
pub mod control;
pub mod csv;
pub mod error;
pub mod fraccalc;
pub mod plant;
pub mod reference;
pub mod selftest;
pub mod simloop;
pub mod svg;
pub mod sweep;

pub use error::{Error, Result};
