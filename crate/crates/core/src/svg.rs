//! Minimal SVG 1.1 chart writer used by the plot exporters.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Scale {
    pub min: f64,
    pub max: f64,
    pub log: bool,
}

impl Scale {
    pub fn linear(values: impl IntoIterator<Item = f64>) -> Self {
        let (min, max) = finite_range(values);
        let pad = if max > min { 0.05 * (max - min) } else { 0.5 };
        Scale {
            min: min - pad,
            max: max + pad,
            log: false,
        }
    }

    /// Log10 scale over strictly positive values.
    pub fn log(values: impl IntoIterator<Item = f64>) -> Self {
        let (min, max) = finite_range(values.into_iter().filter(|v| *v > 0.0));
        let (lo, hi) = (min.max(f64::MIN_POSITIVE).log10(), max.max(f64::MIN_POSITIVE).log10());
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        Scale {
            min: lo,
            max: hi,
            log: true,
        }
    }

    pub fn fixed(min: f64, max: f64) -> Self {
        Scale {
            min,
            max,
            log: false,
        }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.max(f64::MIN_POSITIVE).log10() } else { v };
        if self.max > self.min {
            (v - self.min) / (self.max - self.min)
        } else {
            0.5
        }
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        (0..=4)
            .map(|i| {
                let t = self.min + (self.max - self.min) * i as f64 / 4.0;
                if self.log {
                    (10f64.powf(t), format!("1e{t:.1}"))
                } else {
                    (t, format_tick(t))
                }
            })
            .collect()
    }
}

fn finite_range(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values.into_iter().filter(|v| v.is_finite()) {
        min = min.min(v);
        max = max.max(v);
    }
    if min > max {
        (0.0, 1.0)
    } else {
        (min, max)
    }
}

fn format_tick(t: f64) -> String {
    if t != 0.0 && (t.abs() < 1e-2 || t.abs() >= 1e4) {
        format!("{t:.2e}")
    } else {
        format!("{t:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Approximate viridis colormap, `t` in `[0, 1]`.
pub(crate) fn viridis(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let pos = t * (STOPS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(STOPS.len() - 2);
    let f = pos - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

pub(crate) struct Chart {
    width: f64,
    height: f64,
    margin: f64,
    pub x: Scale,
    pub y: Scale,
    title: String,
    x_label: String,
    y_label: String,
    body: String,
    axes: bool,
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str, x: Scale, y: Scale) -> Self {
        Chart {
            width: 720.0,
            height: 540.0,
            margin: 70.0,
            x,
            y,
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            body: String::new(),
            axes: true,
        }
    }

    pub fn without_axes(mut self) -> Self {
        self.axes = false;
        self
    }

    fn px(&self, x: f64) -> f64 {
        self.margin + self.x.unit(x) * (self.width - 2.0 * self.margin)
    }

    fn py(&self, y: f64) -> f64 {
        self.height - self.margin - self.y.unit(y) * (self.height - 2.0 * self.margin)
    }

    pub fn point(&mut self, x: f64, y: f64, r: f64, fill: &str, stroke: Option<&str>) {
        if !(x.is_finite() && y.is_finite()) {
            return;
        }
        let (cx, cy) = (self.px(x), self.py(y));
        let stroke = stroke.map_or(String::new(), |s| format!(r#" stroke="{s}" stroke-width="1.5""#));
        let _ = writeln!(
            self.body,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{r}" fill="{fill}" fill-opacity="0.75"{stroke}/>"#
        );
    }

    pub fn star(&mut self, x: f64, y: f64, size: f64, fill: &str) {
        if !(x.is_finite() && y.is_finite()) {
            return;
        }
        let (cx, cy) = (self.px(x), self.py(y));
        let pts: Vec<String> = (0..10)
            .map(|i| {
                let r = if i % 2 == 0 { size } else { size * 0.45 };
                let a = std::f64::consts::PI * (i as f64) / 5.0 - std::f64::consts::FRAC_PI_2;
                format!("{:.2},{:.2}", cx + r * a.cos(), cy + r * a.sin())
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="0.5"/>"#,
            pts.join(" ")
        );
    }

    pub fn label(&mut self, x: f64, y: f64, text: &str) {
        if !(x.is_finite() && y.is_finite()) {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            self.px(x) + 5.0,
            self.py(y) - 5.0,
            escape(text)
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        if coords.is_empty() {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="2"/>"#,
            coords.join(" ")
        );
    }

    pub fn vline(&mut self, x: f64) {
        if self.x.unit(x) < 0.0 || self.x.unit(x) > 1.0 {
            return;
        }
        let px = self.px(x);
        let _ = writeln!(
            self.body,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
            self.margin,
            self.height - self.margin
        );
    }

    pub fn hline(&mut self, y: f64) {
        if self.y.unit(y) < 0.0 || self.y.unit(y) > 1.0 {
            return;
        }
        let py = self.py(y);
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="gray" stroke-dasharray="6,4"/>"#,
            self.margin,
            self.width - self.margin
        );
    }

    /// Text anchored to a corner of the plot area, `(0,0)` bottom-left.
    pub fn corner_note(&mut self, right: bool, top: bool, text: &str) {
        let x = if right { self.width - self.margin - 5.0 } else { self.margin + 5.0 };
        let y = if top { self.margin + 15.0 } else { self.height - self.margin - 8.0 };
        let anchor = if right { "end" } else { "start" };
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="11" fill="dimgray" text-anchor="{anchor}">{}</text>"#,
            escape(text)
        );
    }

    /// Grid of colored cells filling the plot area, row 0 at the top.
    pub fn heatmap(&mut self, values: &[Vec<f64>], lo: f64, hi: f64) {
        let n_rows = values.len();
        if n_rows == 0 {
            return;
        }
        let n_cols = values[0].len().max(1);
        let w = (self.width - 2.0 * self.margin) / n_cols as f64;
        let h = (self.height - 2.0 * self.margin) / n_rows as f64;
        for (i, row) in values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
                let _ = writeln!(
                    self.body,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                    self.margin + j as f64 * w,
                    self.margin + i as f64 * h,
                    w + 0.02,
                    h + 0.02,
                    viridis(t)
                );
            }
        }
    }

    pub fn legend(&mut self, entries: &[(&str, &str)]) {
        for (k, (color, text)) in entries.iter().enumerate() {
            let y = self.margin + 10.0 + 16.0 * k as f64;
            let x = self.width - self.margin - 150.0;
            let _ = writeln!(
                self.body,
                r#"<rect x="{x:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
                y - 9.0,
                x + 14.0,
                y,
                escape(text)
            );
        }
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="30" font-size="16" text-anchor="middle">{}</text>"#,
            self.width / 2.0,
            escape(&self.title)
        );
        if self.axes {
            let (l, r) = (self.margin, self.width - self.margin);
            let (t, b) = (self.margin, self.height - self.margin);
            let _ = writeln!(
                out,
                r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
                r - l,
                b - t
            );
            for (v, text) in self.x.ticks() {
                let px = self.px(v);
                let _ = writeln!(
                    out,
                    r#"<line x1="{px:.2}" y1="{b}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
                    b + 5.0,
                    b + 18.0,
                    escape(&text)
                );
            }
            for (v, text) in self.y.ticks() {
                let py = self.py(v);
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{py:.2}" x2="{l}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
                    l - 5.0,
                    l - 8.0,
                    py + 3.0,
                    escape(&text)
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            self.width / 2.0,
            self.height - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="18" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            self.height / 2.0,
            self.height / 2.0,
            escape(&self.y_label)
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_is_well_formed() {
        let mut c = Chart::new("t <x>", "x", "y", Scale::linear([0.0, 1.0]), Scale::log([1e-3, 10.0]));
        c.point(0.5, 1.0, 3.0, "red", None);
        c.polyline(&[(0.0, 1e-3), (1.0, 10.0)], "blue");
        let s = c.finish();
        assert!(s.starts_with("<?xml"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert!(s.contains("t &lt;x&gt;"));
    }

    #[test]
    fn viridis_endpoints() {
        assert_eq!(viridis(0.0), "#440154");
        assert_eq!(viridis(1.0), "#fde725");
        assert_eq!(viridis(f64::NAN), "#440154");
    }
}
