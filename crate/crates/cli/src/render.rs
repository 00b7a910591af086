//! Number formatting and SVG output.

use std::fmt::Write;

use serde_json::Value;

/// Rounds to 9 significant digits for JSON output.
pub fn sig9(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    rounded + 0.0
}

pub fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(sig9(x)).map_or(Value::Null, Value::Number)
}

pub fn json_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(json_num).collect())
}

/// Human-readable quantity: rounded to 1e-6, trailing zeros trimmed, at least
/// two decimals (so `1.0000000002` prints as `1.00`).
pub fn qty(x: f64) -> String {
    let mut s = format!("{:.6}", x + 0.0);
    if s.starts_with("-0.") && s[1..].chars().all(|c| c == '0' || c == '.') {
        s.remove(0);
    }
    while s.ends_with('0') && s.len() - s.find('.').unwrap_or(s.len()) > 3 {
        s.pop();
    }
    s
}

/// Text rendering of a coordinate with 9 significant digits.
pub fn coord(x: f64) -> String {
    format!("{}", sig9(x))
}

/// Side-view (X–Z) drawing of polylines given in metres, emitted in millimetres.
pub fn svg_polylines(lines: &[(&str, Vec<[f64; 2]>)], title: &str) -> String {
    let to_mm = |p: &[f64; 2]| (p[0] * 1000.0, -p[1] * 1000.0);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (_, pts) in lines {
        for p in pts {
            let (x, y) = to_mm(p);
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }
    let margin = 10.0;
    let (x0, y0) = (xmin - margin, ymin - margin);
    let (w, h) = (xmax - xmin + 2.0 * margin, ymax - ymin + 2.0 * margin);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.3} {y0:.3} {w:.3} {h:.3}" width="{w:.3}mm" height="{h:.3}mm">"#
    );
    let _ = writeln!(out, "  <title>{title}</title>");
    for (color, pts) in lines {
        let points: Vec<String> = pts
            .iter()
            .map(|p| {
                let (x, y) = to_mm(p);
                format!("{:.3},{:.3}", x + 0.0, y + 0.0)
            })
            .collect();
        let _ = writeln!(
            out,
            r#"  <polyline fill="none" stroke="{color}" stroke-width="0.5" points="{}"/>"#,
            points.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

pub const FINGER_COLORS: [&str; 3] = ["#d62728", "#2ca02c", "#1f77b4"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.106066017177982), 0.106066017);
        assert_eq!(sig9(-0.0), 0.0);
        assert_eq!(sig9(1234567.891234), 1234567.89);
        assert_eq!(json_num(2.52).to_string(), "2.52");
    }

    #[test]
    fn quantities() {
        assert_eq!(qty(1.0000000002), "1.00");
        assert_eq!(qty(2.52), "2.52");
        assert_eq!(qty(0.875), "0.875");
        assert_eq!(qty(0.8683612629887744), "0.868361");
        assert_eq!(qty(-1e-9), "0.00");
        assert_eq!(qty(-0.25), "-0.25");
        assert_eq!(qty(3.0), "3.00");
    }

    #[test]
    fn svg_has_one_polyline_per_line() {
        let svg = svg_polylines(
            &[("red", vec![[0.0, 0.0], [0.1, -0.1]]), ("blue", vec![[0.0, 0.0]])],
            "t",
        );
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("100.000,100.000"));
    }
}
