//! Minimal SVG line plots with a log10 y axis.

use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 140.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub series: Vec<Series>,
    /// Vertical dashed lines, e.g. resonances.
    pub markers: Vec<f64>,
}

fn usable(p: &(f64, f64)) -> bool {
    p.0.is_finite() && p.1.is_finite() && p.1 > 0.0
}

/// Readable tick positions covering `[lo, hi]`.
pub fn linear_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

impl Plot {
    fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        let pts: Vec<&(f64, f64)> = self.series.iter().flat_map(|s| s.points.iter()).filter(|p| usable(p)).collect();
        if pts.is_empty() {
            return ((0.0, 1.0), (-1.0, 0.0));
        }
        let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let xmax = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let ymin = pts.iter().map(|p| p.1.log10()).fold(f64::INFINITY, f64::min).floor();
        let ymax = pts.iter().map(|p| p.1.log10()).fold(f64::NEG_INFINITY, f64::max).ceil();
        let xr = if xmax > xmin { (xmin, xmax) } else { (xmin - 0.5, xmin + 0.5) };
        let yr = if ymax > ymin { (ymin, ymax) } else { (ymin - 1.0, ymin + 1.0) };
        (xr, yr)
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.ranges();
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |ly: f64| TOP + (y1 - ly) / (y1 - y0) * ph;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            self.title
        );
        for ly in (y0 as i64)..=(y1 as i64) {
            let y = sy(ly as f64);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.1}" y="{:.2}" text-anchor="end">1e{ly}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                y + 4.0
            );
        }
        for x in linear_ticks(x0, x1, 7) {
            let px = sx(x);
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{x:.3}</text>"##,
                TOP + ph,
                TOP + ph + 5.0,
                TOP + ph + 20.0
            );
        }
        for &m in self.markers.iter().filter(|m| (x0..=x1).contains(*m)) {
            let px = sx(m);
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#888888" stroke-dasharray="4 4"/>"##,
                TOP + ph
            );
        }
        let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            self.x_label
        );
        for (i, series) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            // non-usable points split the curve
            for run in series.points.split(|p| !usable(p)).filter(|r| !r.is_empty()) {
                let coords: Vec<String> =
                    run.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1.log10()))).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    coords.join(" ")
                );
            }
            let ly = TOP + 20.0 + 20.0 * i as f64;
            let lx = LEFT + pw + 15.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                lx + 25.0,
                lx + 30.0,
                ly + 4.0,
                series.label
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        let t = linear_ticks(4.28, 4.42, 7);
        assert!(t.len() >= 5 && t.len() <= 15, "{t:?}");
        assert!(t.iter().all(|x| (4.28 - 1e-12..=4.42 + 1e-12).contains(x)));
    }

    #[test]
    fn render_has_polylines_and_view_box() {
        let plot = Plot {
            title: "err".into(),
            x_label: "kappa".into(),
            series: vec![
                Series { label: "JN".into(), points: vec![(1.0, 1e-3), (2.0, f64::NAN), (3.0, 0.5), (4.0, 0.2)] },
                Series { label: "C".into(), points: vec![(1.0, 1e-2), (4.0, 1e-2)] },
            ],
            markers: vec![2.5, 9.0],
        };
        let s = plot.render();
        assert!(s.contains(r#"viewBox="0 0 800 500""#));
        assert_eq!(s.matches("<polyline").count(), 3);
        assert_eq!(s.matches("stroke-dasharray").count(), 1);
        assert!(s.contains(">1e-3<") && s.contains(">1e0<"));
    }
}
