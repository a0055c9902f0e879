//! Minimal self-contained SVG charts.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Number formatting shared by CSV output and chart annotations.
pub fn num(v: f64) -> String {
    format!("{v}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    out: String,
}

impl Frame {
    fn new(title: &str, x_label: &str, y_label: &str, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) -> Self {
        let pad = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ =
            writeln!(out, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(title));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + (W - LEFT - RIGHT) / 2.0,
            H - 12.0,
            esc(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            TOP + (H - TOP - BOTTOM) / 2.0,
            TOP + (H - TOP - BOTTOM) / 2.0,
            esc(y_label)
        );
        let mut f = Frame { x0, x1, y0, y1, out };
        f.axes();
        f
    }

    fn sx(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)
    }

    fn axes(&mut self) {
        let (bx, by) = (LEFT, H - BOTTOM);
        let _ =
            writeln!(self.out, r#"<path d="M{bx} {TOP} L{bx} {by} L{} {by}" fill="none" stroke="black"/>"#, W - RIGHT);
        for i in 0..=5 {
            let t = i as f64 / 5.0;
            let xv = self.x0 + t * (self.x1 - self.x0);
            let yv = self.y0 + t * (self.y1 - self.y0);
            let (px, py) = (self.sx(xv), self.sy(yv));
            let _ = writeln!(
                self.out,
                r#"<line x1="{px:.2}" y1="{by}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                by + 5.0,
                by + 18.0,
                tick(xv)
            );
            let _ = writeln!(
                self.out,
                r#"<line x1="{}" y1="{py:.2}" x2="{bx}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                bx - 5.0,
                bx - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
    }

    fn polyline(&mut self, xs: &[f64], ys: &[f64], color: &str) {
        let pts: Vec<String> =
            xs.iter().zip(ys).map(|(&x, &y)| format!("{:.2},{:.2}", self.sx(x), self.sy(y))).collect();
        let _ = writeln!(
            self.out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for (&x, &y) in xs.iter().zip(ys) {
            let _ =
                writeln!(self.out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, self.sx(x), self.sy(y));
        }
    }

    fn legend(&mut self, names: &[&str]) {
        for (i, name) in names.iter().enumerate() {
            let y = TOP + 6.0 + 16.0 * i as f64;
            let x = W - RIGHT - 150.0;
            let _ = writeln!(
                self.out,
                r#"<rect x="{x}" y="{}" width="12" height="4" fill="{}"/><text x="{}" y="{}">{}</text>"#,
                y - 4.0,
                PALETTE[i % PALETTE.len()],
                x + 18.0,
                y + 2.0,
                esc(name)
            );
        }
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn range(vs: impl IntoIterator<Item = f64>) -> (f64, f64) {
    vs.into_iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Mean curve with ±error bars, plus a marker and label at `highlight`.
pub fn line_with_errors(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    errs: &[f64],
    highlight: Option<(f64, f64)>,
) -> String {
    let (ylo, yhi) = range(ys.iter().zip(errs).flat_map(|(y, e)| [y - e, y + e]));
    let (xlo, xhi) = range(xs.iter().copied());
    let mut f = Frame::new(title, x_label, y_label, (xlo, xhi), padded(ylo, yhi));
    for ((&x, &y), &e) in xs.iter().zip(ys).zip(errs) {
        let _ = writeln!(
            f.out,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="gray"/>"#,
            f.sx(x),
            f.sy(y - e),
            f.sy(y + e)
        );
    }
    f.polyline(xs, ys, PALETTE[0]);
    if let Some((hx, hy)) = highlight {
        let _ = writeln!(
            f.out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="6" fill="none" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            f.sx(hx),
            f.sy(hy),
            PALETTE[1],
            f.sx(hx),
            f.sy(hy) - 12.0,
            esc(&num(hy))
        );
    }
    f.finish()
}

/// One line per named series over a shared x axis.
pub fn multi_line(title: &str, x_label: &str, y_label: &str, xs: &[f64], series: &[(&str, Vec<f64>)]) -> String {
    let (ylo, yhi) = range(series.iter().flat_map(|(_, v)| v.iter().copied()).chain([0.0]));
    let (xlo, xhi) = range(xs.iter().copied());
    let mut f = Frame::new(title, x_label, y_label, (xlo, xhi), padded(ylo, yhi));
    for (i, (_, ys)) in series.iter().enumerate() {
        f.polyline(xs, ys, PALETTE[i % PALETTE.len()]);
    }
    f.legend(&series.iter().map(|(n, _)| *n).collect::<Vec<_>>());
    f.finish()
}

/// Bar histogram; `edges` has one more entry than `counts`.
pub fn histogram(title: &str, x_label: &str, edges: &[f64], counts: &[usize]) -> String {
    let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut f = Frame::new(title, x_label, "count", (edges[0], edges[edges.len() - 1]), (0.0, top * 1.1));
    for (i, &c) in counts.iter().enumerate() {
        let (xa, xb) = (f.sx(edges[i]), f.sx(edges[i + 1]));
        let (ya, yb) = (f.sy(c as f64), f.sy(0.0));
        let _ = writeln!(
            f.out,
            r#"<rect x="{:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="white"/>"#,
            xa,
            (xb - xa).max(0.0),
            (yb - ya).max(0.0),
            PALETTE[0]
        );
        if c > 0 {
            let _ = writeln!(
                f.out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="10">{c}</text>"#,
                (xa + xb) / 2.0,
                ya - 3.0
            );
        }
    }
    f.finish()
}

/// Per-image scatter of model A (y) against model B (x) with the diagonal.
pub fn scatter_with_diagonal(title: &str, x_label: &str, y_label: &str, xs: &[f64], ys: &[f64]) -> String {
    let (lo, hi) = range(xs.iter().chain(ys).copied());
    let (lo, hi) = padded(lo, hi);
    let mut f = Frame::new(title, x_label, y_label, (lo, hi), (lo, hi));
    let _ = writeln!(
        f.out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        f.sx(lo),
        f.sy(lo),
        f.sx(hi),
        f.sy(hi)
    );
    for (&x, &y) in xs.iter().zip(ys) {
        let color = if y > x { PALETTE[0] } else { PALETTE[1] };
        let _ = writeln!(
            f.out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}" fill-opacity="0.7"/>"#,
            f.sx(x),
            f.sy(y)
        );
    }
    f.finish()
}
