//! Bare-bones SVG rendering of line and error-bar series.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesKind {
    Line,
    /// Markers with symmetric vertical error bars.
    Points,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub kind: SeriesKind,
    /// `(x, y, error)`
    pub data: Vec<(f64, f64, f64)>,
}

impl Series {
    pub fn line(label: &str, xy: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            kind: SeriesKind::Line,
            data: xy.into_iter().map(|(x, y)| (x, y, 0.0)).collect(),
        }
    }

    pub fn points(label: &str, data: Vec<(f64, f64, f64)>) -> Self {
        Self {
            label: label.into(),
            kind: SeriesKind::Points,
            data,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

impl Plot {
    pub fn to_svg(&self) -> String {
        let all = || self.series.iter().flat_map(|s| s.data.iter());
        let (x0, x1) = bounds(all().map(|p| p.0));
        let (y0, y1) = bounds(all().flat_map(|p| [p.1 - p.2, p.1 + p.2]));
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<path d="M{m} {t} V{b} H{r}" fill="none" stroke="black"/>"#,
            m = MARGIN,
            t = MARGIN,
            b = HEIGHT - MARGIN,
            r = WIDTH - MARGIN
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for (v, anchor, x, y) in [
            (x0, "middle", sx(x0), HEIGHT - MARGIN + 15.0),
            (x1, "middle", sx(x1), HEIGHT - MARGIN + 15.0),
            (y0, "end", MARGIN - 4.0, sy(y0)),
            (y1, "end", MARGIN - 4.0, sy(y1)),
        ] {
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{v:.3}</text>"#
            );
        }

        for (i, s) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            match s.kind {
                SeriesKind::Line => {
                    let pts: Vec<String> = s
                        .data
                        .iter()
                        .filter(|p| p.1.is_finite())
                        .map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1)))
                        .collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{}" fill="none" stroke="{color}"/>"#,
                        pts.join(" ")
                    );
                }
                SeriesKind::Points => {
                    for &(x, y, e) in s.data.iter().filter(|p| p.1.is_finite()) {
                        let _ = writeln!(
                            out,
                            r#"<line x1="{cx:.2}" y1="{a:.2}" x2="{cx:.2}" y2="{b:.2}" stroke="{color}"/><circle cx="{cx:.2}" cy="{cy:.2}" r="2" fill="{color}"/>"#,
                            cx = sx(x),
                            cy = sy(y),
                            a = sy(y - e),
                            b = sy(y + e)
                        );
                    }
                }
            }
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                WIDTH - MARGIN - 100.0,
                MARGIN + 15.0 * i as f64,
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
