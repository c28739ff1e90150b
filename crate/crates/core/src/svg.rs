//! Minimal standalone SVG line plots.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::simloop::{Record, SimLog};

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

/// Mapping between data coordinates and pixels for one plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotFrame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: f64,
    pub height: f64,
}

fn padded_extent(values: &[f64]) -> (f64, f64) {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

impl PlotFrame {
    /// Auto-scales to the data with 5% margins; a zero extent is widened to
    /// ±1 unit around the value.
    pub fn fit(xs: &[f64], ys: &[f64], width: u32, height: u32) -> Self {
        let (x_min, x_max) = padded_extent(xs);
        let (y_min, y_max) = padded_extent(ys);
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
            width: width as f64,
            height: height as f64,
        }
    }

    fn plot_w(&self) -> f64 {
        (self.width - MARGIN_LEFT - MARGIN_RIGHT).max(1.0)
    }

    fn plot_h(&self) -> f64 {
        (self.height - MARGIN_TOP - MARGIN_BOTTOM).max(1.0)
    }

    pub fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * self.plot_w()
    }

    pub fn py(&self, y: f64) -> f64 {
        MARGIN_TOP + (self.y_max - y) / (self.y_max - self.y_min) * self.plot_h()
    }

    /// Inverse of [`py`](Self::py).
    pub fn data_y(&self, py: f64) -> f64 {
        self.y_max - (py - MARGIN_TOP) / self.plot_h() * (self.y_max - self.y_min)
    }
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

const PALETTE: [&str; 4] = ["#1f5fa8", "#d0602a", "#2e8b57", "#8a3ca8"];

/// Plots `ys` against `xs`.
pub fn render_series(
    xs: &[f64],
    ys: &[f64],
    x_label: &str,
    y_label: &str,
    width: u32,
    height: u32,
) -> Result<String> {
    render_overlay(xs, &[(y_label, ys)], x_label, y_label, width, height)
}

/// Plots several series sharing one abscissa, one polyline each. A legend
/// is drawn when there is more than one series.
pub fn render_overlay(
    xs: &[f64],
    series: &[(&str, &[f64])],
    x_label: &str,
    y_label: &str,
    width: u32,
    height: u32,
) -> Result<String> {
    if xs.is_empty() || series.is_empty() || series.iter().any(|(_, ys)| ys.len() != xs.len()) {
        return Err(Error::EmptyLog);
    }
    let all_y: Vec<f64> = series.iter().flat_map(|(_, ys)| ys.iter().copied()).collect();
    let frame = PlotFrame::fit(xs, &all_y, width, height);
    let (w, h) = (frame.width, frame.height);
    let bottom = h - MARGIN_BOTTOM;
    let right = w - MARGIN_RIGHT;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{MARGIN_LEFT},{MARGIN_TOP} V{bottom} H{right}" fill="none" stroke="black"/>"#
    );

    for k in 0..=TICKS {
        let frac = k as f64 / TICKS as f64;
        let xv = frame.x_min + frac * (frame.x_max - frame.x_min);
        let x = frame.px(xv);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 5.0,
            bottom + 18.0,
            tick_label(xv)
        );
        let yv = frame.y_min + frac * (frame.y_max - frame.y_min);
        let y = frame.py(yv);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT - 8.0,
            y + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
        MARGIN_LEFT + frame.plot_w() / 2.0,
        h - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{y_label}</text>"#,
        MARGIN_TOP + frame.plot_h() / 2.0,
        MARGIN_TOP + frame.plot_h() / 2.0
    );

    for (n, (name, ys)) in series.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let _ = write!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points=""#
        );
        for (j, (&x, &y)) in xs.iter().zip(ys.iter()).enumerate() {
            if j > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.3},{:.3}", frame.px(x), frame.py(y));
        }
        s.push_str("\"/>\n");
        if series.len() > 1 {
            let ly = MARGIN_TOP + 12.0 + 14.0 * n as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{name}</text>"#,
                right - 110.0,
                right - 90.0,
                right - 85.0,
                ly + 4.0
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Plots one logged channel against time.
pub fn render_svg(log: &SimLog, channel: &str, width: u32, height: u32) -> Result<String> {
    if Record::column_index(channel).is_none() {
        return Err(Error::UnknownChannel(channel.into()));
    }
    if log.records.is_empty() {
        return Err(Error::EmptyLog);
    }
    let ts = log.channel("t")?;
    let ys = log.channel(channel)?;
    render_series(&ts, &ys, "t [s]", channel, width, height)
}

/// Pixel coordinates of the first polyline in an SVG produced by this module.
pub fn polyline_points(svg: &str) -> Vec<(f64, f64)> {
    let Some(start) = svg.find("points=\"") else {
        return Vec::new();
    };
    let rest = &svg[start + 8..];
    let end = rest.find('"').unwrap_or(rest.len());
    rest[..end]
        .split_whitespace()
        .filter_map(|p| {
            let (x, y) = p.split_once(',')?;
            Some((x.parse().ok()?, y.parse().ok()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::FracOrder;
    use crate::simloop::SimConfig;

    fn log_with(values: &[f64]) -> SimLog {
        let mut log = SimLog::new(SimConfig::nominal(FracOrder::new(0.5).unwrap()));
        for (k, &y) in values.iter().enumerate() {
            log.records.push(Record { t: k as f64 * 1e-3, y, ..Default::default() });
        }
        log
    }

    #[test]
    fn constant_channel_is_centered() {
        let log = log_with(&[0.0; 20]);
        let svg = render_svg(&log, "u", 600, 300).unwrap();
        let pts = polyline_points(&svg);
        assert_eq!(pts.len(), 20);
        let mid = MARGIN_TOP + (300.0 - MARGIN_TOP - MARGIN_BOTTOM) / 2.0;
        assert!(pts.iter().all(|&(_, y)| (y - mid).abs() < 1e-3));
    }

    #[test]
    fn overlay_draws_one_polyline_per_series() {
        let xs = [0.0, 1.0, 2.0];
        let a = [0.0, 1.0, 4.0];
        let b = [0.0, 1.0, 2.0];
        let svg = render_overlay(&xs, &[("a", &a), ("b", &b)], "t", "f", 500, 300).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">a<") && svg.contains(">b<"));
        assert!(render_overlay(&xs, &[("a", &a[..2])], "t", "f", 500, 300).is_err());
    }

    #[test]
    fn errors() {
        let log = log_with(&[1.0, 2.0]);
        assert!(matches!(render_svg(&log, "bogus", 600, 300), Err(Error::UnknownChannel(_))));
        assert!(matches!(render_svg(&log_with(&[]), "y", 600, 300), Err(Error::EmptyLog)));
    }

    #[test]
    fn has_axes_labels_and_ticks() {
        let log = log_with(&[0.0, 0.01, 0.02]);
        let svg = render_svg(&log, "y", 640, 320).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains(">t [s]<") && svg.contains(">y<"));
        assert!(svg.matches("<text").count() >= 2 * (TICKS + 1) + 2);
        let frame = PlotFrame::fit(&[0.0, 2e-3], &[0.0, 0.02], 640, 320);
        let (_, py) = *polyline_points(&svg).last().unwrap();
        assert!((frame.data_y(py) - 0.02).abs() < 1e-5);
    }
}
