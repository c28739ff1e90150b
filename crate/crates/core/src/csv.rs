//! Fixed-format numeric text output.
//!
//! Every number is written as `d.dddddddddddddddde±XX`: 16 fractional
//! digits (17 significant, enough to round-trip any binary64), lowercase
//! `e`, explicit exponent sign, at least two exponent digits.

use std::fmt::Write;

use crate::simloop::{Metrics, Record, SimLog};

pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let raw = format!("{x:.16e}");
    let (mantissa, exponent) = raw.split_once('e').expect("`{:e}` always has an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.unsigned_abs())
}

/// Writes a header line and one formatted row per entry, LF terminated.
pub fn write_rows<'a, I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (j, value) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_sci(*value));
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(log: &SimLog) -> String {
    let rows: Vec<[f64; 15]> = log.records.iter().map(Record::values).collect();
    write_rows(&Record::COLUMNS, rows.iter().map(|r| r.as_slice()))
}

/// Metrics as a flat JSON object using the same number format as the CSV.
/// An unsettled run has `"settling_time": null`.
pub fn metrics_json(m: &Metrics) -> String {
    let settling = m
        .settling_time
        .map(format_sci)
        .unwrap_or_else(|| "null".to_string());
    format!(
        "{{\n  \"settling_time\": {settling},\n  \"steady_state_error\": {},\n  \"rms_tracking_error\": {},\n  \"max_abs_i\": {},\n  \"clamp_active_fraction\": {}\n}}\n",
        format_sci(m.steady_state_error),
        format_sci(m.rms_tracking_error),
        format_sci(m.max_abs_i),
        format_sci(m.clamp_active_fraction),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::FracOrder;
    use crate::simloop::SimConfig;
    use proptest::prelude::*;

    fn empty_log() -> SimLog {
        SimLog::new(SimConfig::nominal(FracOrder::new(0.5).unwrap()))
    }

    #[test]
    fn formatting_contract() {
        assert_eq!(format_sci(0.0), "0.0000000000000000e+00");
        assert_eq!(format_sci(1.0), "1.0000000000000000e+00");
        assert_eq!(format_sci(-0.02), "-2.0000000000000000e-02");
        assert_eq!(format_sci(9.81), "9.8100000000000005e+00");
        assert_eq!(format_sci(1.5e-300), "1.5000000000000001e-300");
        assert_eq!(format_sci(6.02e23), "6.0200000000000000e+23");
    }

    #[test]
    fn header_only_for_empty_log() {
        assert_eq!(
            write_csv(&empty_log()),
            "t,y,v,u,u_raw,i,x1d,x2d,e1,e2,z2,nu,frac_e1,V1,V2\n"
        );
    }

    #[test]
    fn single_zero_record() {
        let mut log = empty_log();
        log.records.push(Record::default());
        let text = write_csv(&log);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let zeros = vec!["0.0000000000000000e+00"; 15].join(",");
        assert_eq!(lines[1], zeros);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert_eq!(write_csv(&log), text);
    }

    #[test]
    fn metrics_json_is_valid_json() {
        let m = Metrics {
            settling_time: None,
            steady_state_error: 5e-4,
            rms_tracking_error: 1e-3,
            max_abs_i: 0.1,
            clamp_active_fraction: 0.25,
        };
        let v: serde_json::Value = serde_json::from_str(&metrics_json(&m)).unwrap();
        assert!(v["settling_time"].is_null());
        assert_eq!(v["clamp_active_fraction"].as_f64(), Some(0.25));
        let m = Metrics { settling_time: Some(0.231), ..m };
        let v: serde_json::Value = serde_json::from_str(&metrics_json(&m)).unwrap();
        assert_eq!(v["settling_time"].as_f64(), Some(0.231));
    }

    proptest! {
        #[test]
        fn values_round_trip(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let back: f64 = format_sci(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
