//! Fractional calculus kernel.
//!
//! The fractional integral of order `α` is discretised with Grünwald–Letnikov
//! weights on a uniform grid `t_m = m·h`:
//!
//! ```text
//! I^α f(t_m) ≈ h^α · Σ_{k=0}^{m} w[k] · f(t_{m-k}),
//! w[0] = 1,  w[k] = w[k-1] · (k - 1 + α) / k
//! ```
//!
//! All weights are strictly positive for `α > 0`, so the integral of a
//! nonnegative signal is nonnegative. At `α = 1` every weight is 1 and the
//! scheme is the cumulative rectangle rule.

use crate::error::{Error, Result};

/// Order of a fractional operator, restricted to `0 < α ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!(
                "fractional order must lie in (0, 1], got {alpha}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

const GAMMA_R: f64 = 10.900511;

#[allow(clippy::excessive_precision)]
const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

// 2·sqrt(e/π)
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_7;

/// Gamma function for positive real arguments.
///
/// Lanczos-type rational approximation (Pugh's `r = 10.900511`, 11 terms).
/// Arguments below 1/2 are shifted up with `Γ(x) = Γ(x + 1) / x`; zero,
/// negative and non-finite arguments are rejected. Integers up to 23 return
/// the exact factorial `(x − 1)!`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("gamma requires finite x > 0, got {x}")));
    }
    if x.fract() == 0.0 && x <= 23.0 {
        return Ok((1..x as u64).map(|k| k as f64).product());
    }
    if x < 0.5 {
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let s = GAMMA_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(GAMMA_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
    s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).powf(x - 0.5)
}

/// Grünwald–Letnikov weights `w[0..=n]` for the order-`α` fractional integral.
#[derive(Debug, Clone, PartialEq)]
pub struct GlWeights {
    alpha: FracOrder,
    w: Vec<f64>,
}

impl GlWeights {
    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Extends the table so that it holds at least `n + 1` weights.
    pub fn extend_to(&mut self, n: usize) {
        let a = self.alpha.get();
        self.w.reserve((n + 1).saturating_sub(self.w.len()));
        while self.w.len() <= n {
            let k = self.w.len();
            let prev = self.w[k - 1];
            self.w.push(prev * ((k as f64 - 1.0 + a) / k as f64));
        }
    }
}

impl std::ops::Index<usize> for GlWeights {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.w[k]
    }
}

pub fn gl_weights(alpha: FracOrder, n: usize) -> GlWeights {
    let mut weights = GlWeights {
        alpha,
        w: vec![1.0],
    };
    weights.extend_to(n);
    weights
}

fn check_step(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("step size must be finite and > 0, got {h}")))
    }
}

/// Order-`α` fractional integral of `samples` (taken at `t_m = m·h`),
/// evaluated at every grid point.
pub fn frac_integral_batch(samples: &[f64], alpha: FracOrder, h: f64) -> Result<Vec<f64>> {
    check_step(h)?;
    if samples.is_empty() {
        return Err(Error::Domain("fractional integral needs at least one sample".into()));
    }
    let weights = gl_weights(alpha, samples.len() - 1);
    let scale = h.powf(alpha.get());
    let w = weights.as_slice();
    let out = (0..samples.len())
        .map(|m| {
            let acc = (0..=m).fold(0.0, |acc, k| acc + w[k] * samples[m - k]);
            scale * acc
        })
        .collect();
    Ok(out)
}

/// Streaming fractional integral.
///
/// Each [`push`](Self::push) appends one sample and returns the integral at
/// the newest grid point. With `memory_window = 0` the full history is used
/// and the result matches [`frac_integral_batch`] bit for bit. With
/// `memory_window = L > 0` only the `L` most recent samples contribute
/// (short-memory principle).
#[derive(Debug, Clone)]
pub struct FracAccumulator {
    weights: GlWeights,
    h: f64,
    scale: f64,
    memory_window: usize,
    history: Vec<f64>,
    value: f64,
}

impl FracAccumulator {
    pub fn new(alpha: FracOrder, h: f64, memory_window: usize) -> Result<Self> {
        Self::with_capacity(alpha, h, memory_window, 0)
    }

    /// Like [`new`](Self::new) but precomputes weights for `capacity` pushes.
    pub fn with_capacity(
        alpha: FracOrder,
        h: f64,
        memory_window: usize,
        capacity: usize,
    ) -> Result<Self> {
        check_step(h)?;
        let table_len = match memory_window {
            0 => capacity,
            l => capacity.min(l),
        };
        Ok(Self {
            weights: gl_weights(alpha, table_len.saturating_sub(1)),
            h,
            scale: h.powf(alpha.get()),
            memory_window,
            history: Vec::with_capacity(capacity),
            value: 0.0,
        })
    }

    pub fn push(&mut self, sample: f64) -> f64 {
        self.history.push(sample);
        let n = self.history.len();
        let terms = match self.memory_window {
            0 => n,
            l => n.min(l),
        };
        if self.weights.len() < terms {
            self.weights.extend_to((terms - 1).max(2 * self.weights.len()));
        }
        let w = self.weights.as_slice();
        let acc = (0..terms).fold(0.0, |acc, k| acc + w[k] * self.history[n - 1 - k]);
        self.value = self.scale * acc;
        self.value
    }

    /// Integral value after the most recent push (0 before any push).
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn alpha(&self) -> FracOrder {
        self.weights.alpha()
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn memory_window(&self) -> usize {
        self.memory_window
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }
}

/// Caputo derivative of order `α ∈ (0, 1)` by the L1 scheme.
///
/// With `b_j = (j + 1)^{1-α} − j^{1-α}`:
///
/// ```text
/// D^α f(t_m) ≈ 1 / (Γ(2 − α) h^α) · Σ_{j=0}^{m-1} b_j · (f_{m-j} − f_{m-j-1})
/// ```
///
/// The value at `t_0` is 0.
pub fn caputo_l1(samples: &[f64], alpha: FracOrder, h: f64) -> Result<Vec<f64>> {
    let a = alpha.get();
    if a >= 1.0 {
        return Err(Error::Domain(format!(
            "L1 Caputo scheme needs 0 < α < 1, got {a}"
        )));
    }
    check_step(h)?;
    if samples.len() < 2 {
        return Err(Error::Domain("L1 Caputo scheme needs at least two samples".into()));
    }
    let n = samples.len();
    let one_minus = 1.0 - a;
    let b: Vec<f64> = (0..n)
        .map(|j| ((j + 1) as f64).powf(one_minus) - (j as f64).powf(one_minus))
        .collect();
    let diffs: Vec<f64> = samples.windows(2).map(|p| p[1] - p[0]).collect();
    let scale = 1.0 / (gamma(2.0 - a)? * h.powf(a));

    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    for m in 1..n {
        // diffs[m - 1 - j] = f_{m-j} − f_{m-j-1}
        let acc = (0..m).fold(0.0, |acc, j| acc + b[j] * diffs[m - 1 - j]);
        out.push(scale * acc);
    }
    Ok(out)
}
