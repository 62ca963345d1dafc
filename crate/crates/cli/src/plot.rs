//! Aggregate CSV to SVG: one solid mean curve per policy plus dashed
//! curves at mean ± standard error.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
/// Points per polyline after downsampling.
pub const MAX_POINTS: usize = 2000;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Curves of one policy, in CSV order.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub policy: String,
    pub rounds: Vec<f64>,
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
}

/// Parses `round,policy,mean_cum_regret,stderr`; policies keep their order
/// of first appearance.
pub fn read_aggregate(path: &Path) -> Result<Vec<Series>, CliError> {
    let bad = |message: String| CliError::Input {
        path: path.to_owned(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["round", "policy", "mean_cum_regret", "stderr"] {
        return Err(bad(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut series: Vec<Series> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let line = k + 2;
        let record = record.map_err(|e| bad(format!("line {line}: {e}")))?;
        let num = |i: usize| -> Result<f64, CliError> {
            let v: f64 = record[i]
                .trim()
                .parse()
                .map_err(|_| bad(format!("line {line}: {:?} is not a number", &record[i])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(format!("line {line}: non-finite value")))
            }
        };
        let (round, mean, se) = (num(0)?, num(2)?, num(3)?);
        if se < 0.0 {
            return Err(bad(format!("line {line}: negative standard error")));
        }
        let policy = &record[1];
        let idx = match series.iter().position(|s| s.policy == policy) {
            Some(i) => i,
            None => {
                series.push(Series {
                    policy: policy.to_owned(),
                    rounds: Vec::new(),
                    mean: Vec::new(),
                    se: Vec::new(),
                });
                series.len() - 1
            }
        };
        let s = &mut series[idx];
        s.rounds.push(round);
        s.mean.push(mean);
        s.se.push(se);
    }
    if series.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(series)
}

/// Evenly spaced indices into `0..len`, at most [`MAX_POINTS`], always
/// keeping the first and last.
fn sample_indices(len: usize) -> Vec<usize> {
    if len <= MAX_POINTS {
        return (0..len).collect();
    }
    let step = (len - 1) as f64 / (MAX_POINTS - 1) as f64;
    let mut idx: Vec<usize> = (0..MAX_POINTS).map(|k| (k as f64 * step).round() as usize).collect();
    idx.dedup();
    idx
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo > 0.0 {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

pub fn render_svg(series: &[Series]) -> String {
    let (x0, x1) = range(series.iter().flat_map(|s| s.rounds.iter().copied()));
    let (y_lo, y1) = range(
        series
            .iter()
            .flat_map(|s| s.mean.iter().zip(&s.se).flat_map(|(m, e)| [m - e, m + e])),
    );
    let y0 = y_lo.min(0.0);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // Axes with ticks at the ends and the middle.
    let (ax, ay) = (LEFT, TOP + ph);
    let _ = writeln!(svg, r#"<line x1="{ax}" y1="{ay}" x2="{}" y2="{ay}" stroke="black"/>"#, LEFT + pw);
    let _ = writeln!(svg, r#"<line x1="{ax}" y1="{TOP}" x2="{ax}" y2="{ay}" stroke="black"/>"#);
    for k in 0..=2 {
        let f = k as f64 / 2.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(xv),
            ay + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ax - 6.0,
            py(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">round</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">mean cumulative regret</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let idx = sample_indices(s.rounds.len());
        let points = |f: &dyn Fn(usize) -> f64| {
            idx.iter()
                .map(|&i| format!("{:.2},{:.2}", px(s.rounds[i]), py(f(i))))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points(&|i| s.mean[i])
        );
        for sign in [-1.0, 1.0] {
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1" stroke-dasharray="5,4" points="{}"/>"#,
                points(&|i| s.mean[i] + sign * s.se[i])
            );
        }
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 25.0
        );
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, lx + 32.0, ly + 4.0, escape(&s.policy));
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick(v: f64) -> String {
    if v.abs() >= 1e4 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
