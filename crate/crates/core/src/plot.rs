//! Minimal SVG line charts.

use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            points,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    /// Dashed horizontal reference line, e.g. a significance level.
    pub reference: Option<f64>,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 60.0;
const DASHES: [&str; 4] = ["", "8,4", "2,3", "10,3,2,3"];

fn axis(v: f64, log: bool) -> Option<f64> {
    let t = if log { v.log10() } else { v };
    t.is_finite().then_some(t)
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick_label(t: f64, log: bool) -> String {
    let v = if log { 10f64.powf(t) } else { t };
    format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Renders the series as polylines; points that cannot be placed on a log
/// axis (zero or negative) are dropped.
pub fn line_chart(chart: &Chart, series: &[Series]) -> String {
    let placed: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter_map(|&(x, y)| Some((axis(x, chart.log_x)?, axis(y, chart.log_y)?)))
                .collect()
        })
        .collect();
    let (x0, x1) = range(placed.iter().flatten().map(|p| p.0));
    let refy = chart.reference.and_then(|r| axis(r, chart.log_y));
    let (y0, y1) = range(placed.iter().flatten().map(|p| p.1).chain(refy));
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(&chart.title)
    );
    let _ = writeln!(
        out,
        r#"<path d="M{PAD},{PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (tx, ty) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            sx(tx),
            H - PAD + 18.0,
            tick_label(tx, chart.log_x)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            PAD - 6.0,
            sy(ty) + 4.0,
            tick_label(ty, chart.log_y)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 16.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(&chart.y_label)
    );
    if let Some(y) = refy {
        let _ = writeln!(
            out,
            r#"<line x1="{PAD}" x2="{}" y1="{:.1}" y2="{:.1}" stroke="gray" stroke-dasharray="4,4"/>"#,
            W - PAD,
            sy(y),
            sy(y)
        );
    }
    for (i, (s, pts)) in series.iter().zip(&placed).enumerate() {
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-dasharray="{}"/>"#,
            path.join(" "),
            DASHES[i % DASHES.len()]
        );
        let ly = PAD + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" x2="{}" y1="{ly}" y2="{ly}" stroke="black" stroke-dasharray="{}"/><text x="{}" y="{}">{}</text>"#,
            W - PAD - 110.0,
            W - PAD - 80.0,
            DASHES[i % DASHES.len()],
            W - PAD - 74.0,
            ly + 4.0,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_polyline_per_series() {
        let chart = Chart {
            title: "p <values>".into(),
            log_y: true,
            reference: Some(0.05),
            ..Default::default()
        };
        let svg = line_chart(
            &chart,
            &[
                Series::new("a", vec![(1.0, 0.1), (2.0, 0.01)]),
                Series::new("b", vec![(1.0, 0.0), (2.0, 0.5)]),
            ],
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("p &lt;values&gt;"));
        assert!(!svg.contains("NaN"));
    }
}
