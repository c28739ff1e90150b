//! Analytic checks of the fractional-calculus kernel, runnable from the
//! command line.

use crate::fraccalc::{caputo_l1, frac_integral_batch, gamma, FracAccumulator, FracOrder};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

fn grid(h: f64, t_end: f64) -> Vec<f64> {
    let n = (t_end / h).round() as usize;
    (0..=n).map(|k| k as f64 * h).collect()
}

fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

pub fn run_selftest() -> Vec<Check> {
    let mut checks = Vec::new();

    let g5 = gamma(5.0).unwrap_or(f64::NAN);
    checks.push(Check::new(
        "gamma(5) = 4!",
        rel_err(g5, 24.0) <= 1e-12,
        format!("{g5:.17e}"),
    ));
    let gh = gamma(0.5).unwrap_or(f64::NAN);
    checks.push(Check::new(
        "gamma(1/2) = sqrt(pi)",
        rel_err(gh, std::f64::consts::PI.sqrt()) <= 1e-12,
        format!("{gh:.17e}"),
    ));
    let worst = (0..=398)
        .map(|k| 0.1 + k as f64 * 0.05)
        .map(|x| {
            let next = gamma(x + 1.0).unwrap_or(f64::NAN);
            ((next - x * gamma(x).unwrap_or(f64::NAN)) / next).abs()
        })
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "gamma(x+1) = x gamma(x) on [0.1, 20]",
        worst <= 1e-10,
        format!("max residual {worst:.3e}"),
    ));

    for alpha in [0.01, 0.5, 0.7] {
        let order = FracOrder::new(alpha).expect("valid order");
        let h = 1e-3;
        let t = grid(h, 2.0);
        let ones = vec![1.0; t.len()];
        let end = *t.last().unwrap();

        let got = frac_integral_batch(&ones, order, h).map(|v| *v.last().unwrap());
        let want = end.powf(alpha) / gamma(alpha + 1.0).unwrap_or(f64::NAN);
        let err = got.map(|g| rel_err(g, want)).unwrap_or(f64::NAN);
        checks.push(Check::new(
            format!("I^{alpha} 1 = t^a / Gamma(a+1)"),
            err <= 0.01,
            format!("rel err {err:.3e}"),
        ));

        let got = frac_integral_batch(&t, order, h).map(|v| *v.last().unwrap());
        let want = end.powf(1.0 + alpha) / gamma(2.0 + alpha).unwrap_or(f64::NAN);
        let err = got.map(|g| rel_err(g, want)).unwrap_or(f64::NAN);
        checks.push(Check::new(
            format!("I^{alpha} t = t^(1+a) / Gamma(2+a)"),
            err <= 0.01,
            format!("rel err {err:.3e}"),
        ));

        let mut acc = FracAccumulator::new(order, h, 0).expect("valid step");
        let batch = frac_integral_batch(&t, order, h).unwrap_or_default();
        let gap = t
            .iter()
            .zip(&batch)
            .map(|(&x, &b)| (acc.push(x) - b).abs())
            .fold(0.0, f64::max);
        checks.push(Check::new(
            format!("stream = batch (alpha = {alpha})"),
            gap <= 1e-12,
            format!("max gap {gap:.3e}"),
        ));
    }

    let order = FracOrder::new(0.5).expect("valid order");
    let constant = caputo_l1(&[2.0; 1000], order, 1e-3).unwrap_or_default();
    let worst = constant.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    checks.push(Check::new(
        "Caputo L1 of a constant = 0",
        !constant.is_empty() && worst <= 1e-12,
        format!("max |D^a c| {worst:.3e}"),
    ));
    let t = grid(1e-3, 1.0);
    let got = caputo_l1(&t, order, 1e-3).map(|v| *v.last().unwrap());
    let want = 1.0 / gamma(1.5).unwrap_or(f64::NAN);
    let err = got.map(|g| rel_err(g, want)).unwrap_or(f64::NAN);
    checks.push(Check::new(
        "Caputo L1 of t = t^(1-a) / Gamma(2-a)",
        err <= 0.01,
        format!("rel err {err:.3e}"),
    ));

    checks
}
