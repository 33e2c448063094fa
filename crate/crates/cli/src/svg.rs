//! Deterministic SVG scenes: a square world window mapped onto a fixed
//! canvas, with a clipped drawing layer, a legend and a scale bar.

use std::fmt::Write;

use num_complex::Complex64 as C64;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 20.0;

pub const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Polyline {
        points: Vec<C64>,
        color: String,
        width: f64,
        dashed: bool,
    },
    Polygon {
        points: Vec<C64>,
        fill: String,
        opacity: f64,
    },
    Dot {
        at: C64,
        color: String,
        radius: f64,
    },
    Cross {
        at: C64,
        color: String,
    },
    Label {
        at: C64,
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Swatch {
    Line { dashed: bool },
    Fill,
    Dot,
    Cross,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotDocument {
    title: String,
    center: C64,
    half_width: f64,
    items: Vec<Item>,
    legend: Vec<(String, String, Swatch)>,
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// `1, 2, 5 x 10^k` closest below `x`.
pub fn nice_length(x: f64) -> f64 {
    let p = 10f64.powf(x.log10().floor());
    [5.0, 2.0, 1.0].into_iter().map(|m| m * p).find(|&v| v <= x).unwrap_or(p)
}

impl PlotDocument {
    pub fn new(title: impl Into<String>, center: C64, half_width: f64) -> Self {
        Self {
            title: title.into(),
            center,
            half_width,
            items: Vec::new(),
            legend: Vec::new(),
        }
    }

    /// Window containing `points` with relative padding.
    pub fn fitting(title: impl Into<String>, points: &[C64], pad: f64, min_half: f64) -> Self {
        let (mut lo, mut hi) = (C64::new(f64::MAX, f64::MAX), C64::new(f64::MIN, f64::MIN));
        for p in points {
            lo = C64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = C64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        if points.is_empty() {
            return Self::new(title, C64::new(0.0, 0.0), min_half);
        }
        let center = (lo + hi) * 0.5;
        let half = 0.5 * (hi.re - lo.re).max(hi.im - lo.im);
        Self::new(title, center, (half * (1.0 + pad)).max(min_half))
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    fn px(&self, z: C64) -> (f64, f64) {
        let s = SIZE / (2.0 * self.half_width);
        (
            SIZE / 2.0 + (z.re - self.center.re) * s,
            SIZE / 2.0 - (z.im - self.center.im) * s,
        )
    }

    /// Drops points far outside the window and those closer than half a
    /// pixel to their predecessor.
    fn thin(&self, points: &[C64]) -> Vec<C64> {
        let far = 4.0 * self.half_width;
        let min_step = self.half_width / SIZE;
        let mut out: Vec<C64> = Vec::with_capacity(points.len());
        let mut outside = false;
        for (k, &p) in points.iter().enumerate() {
            let d = p - self.center;
            if d.re.abs() > far || d.im.abs() > far {
                if !outside {
                    out.push(p);
                }
                outside = true;
                continue;
            }
            outside = false;
            let last = k + 1 == points.len();
            if last || out.last().is_none_or(|q| (p - q).norm() >= min_step) {
                out.push(p);
            }
        }
        out
    }

    pub fn polyline(&mut self, points: &[C64], color: &str, width: f64, dashed: bool) {
        let points = self.thin(points);
        if points.len() >= 2 {
            self.items.push(Item::Polyline {
                points,
                color: color.into(),
                width,
                dashed,
            });
        }
    }

    pub fn polygon(&mut self, points: &[C64], fill: &str, opacity: f64) {
        self.items.push(Item::Polygon {
            points: points.to_vec(),
            fill: fill.into(),
            opacity,
        });
    }

    pub fn dot(&mut self, at: C64, color: &str, radius: f64) {
        self.items.push(Item::Dot {
            at,
            color: color.into(),
            radius,
        });
    }

    pub fn cross(&mut self, at: C64, color: &str) {
        self.items.push(Item::Cross { at, color: color.into() });
    }

    pub fn label(&mut self, at: C64, text: impl Into<String>) {
        self.items.push(Item::Label { at, text: text.into() });
    }

    pub fn legend(&mut self, color: &str, text: impl Into<String>, swatch: Swatch) {
        self.legend.push((color.into(), text.into(), swatch));
    }

    fn points_attr(&self, points: &[C64]) -> String {
        points
            .iter()
            .map(|&z| {
                let (x, y) = self.px(z);
                format!("{},{}", num(x), num(y))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn render_item(&self, s: &mut String, item: &Item) {
        match item {
            Item::Polyline {
                points,
                color,
                width,
                dashed,
            } => {
                let dash = if *dashed { " stroke-dasharray=\"6 4\"" } else { "" };
                let _ = writeln!(
                    s,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"{dash}/>",
                    self.points_attr(points),
                    num(*width)
                );
            }
            Item::Polygon { points, fill, opacity } => {
                let _ = writeln!(
                    s,
                    "<polygon class=\"region\" points=\"{}\" fill=\"{fill}\" fill-opacity=\"{}\" stroke=\"none\"/>",
                    self.points_attr(points),
                    num(*opacity)
                );
            }
            Item::Dot { at, color, radius } => {
                let (x, y) = self.px(*at);
                let _ = writeln!(
                    s,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{color}\"/>",
                    num(x),
                    num(y),
                    num(*radius)
                );
            }
            Item::Cross { at, color } => {
                let (x, y) = self.px(*at);
                let _ = writeln!(
                    s,
                    "<path d=\"M{} {}L{} {}M{} {}L{} {}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                    num(x - 5.0),
                    num(y - 5.0),
                    num(x + 5.0),
                    num(y + 5.0),
                    num(x - 5.0),
                    num(y + 5.0),
                    num(x + 5.0),
                    num(y - 5.0)
                );
            }
            Item::Label { at, text } => {
                let (x, y) = self.px(*at);
                let _ = writeln!(
                    s,
                    "<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>",
                    num(x + 4.0),
                    num(y - 4.0),
                    escape(text)
                );
            }
        }
    }

    fn render_legend(&self, s: &mut String) {
        if self.legend.is_empty() {
            return;
        }
        let h = 16.0 * self.legend.len() as f64 + 8.0;
        let w = 8.0
            + 7.0
                * self
                    .legend
                    .iter()
                    .map(|(_, t, _)| t.chars().count())
                    .max()
                    .unwrap_or(0) as f64
            + 30.0;
        let x0 = SIZE - MARGIN - w;
        let _ = writeln!(
            s,
            "<g id=\"legend\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#888\"/>",
            num(x0),
            num(MARGIN),
            num(w),
            num(h)
        );
        for (k, (color, text, swatch)) in self.legend.iter().enumerate() {
            let y = MARGIN + 14.0 + 16.0 * k as f64;
            let sx = x0 + 8.0;
            match swatch {
                Swatch::Line { dashed } => {
                    let dash = if *dashed { " stroke-dasharray=\"4 3\"" } else { "" };
                    let _ = writeln!(
                        s,
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>",
                        num(sx),
                        num(y - 4.0),
                        num(sx + 18.0),
                        num(y - 4.0)
                    );
                }
                Swatch::Fill => {
                    let _ = writeln!(
                        s,
                        "<rect x=\"{}\" y=\"{}\" width=\"18\" height=\"10\" fill=\"{color}\" fill-opacity=\"0.35\"/>",
                        num(sx),
                        num(y - 9.0)
                    );
                }
                Swatch::Dot => {
                    let _ = writeln!(
                        s,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{color}\"/>",
                        num(sx + 9.0),
                        num(y - 4.0)
                    );
                }
                Swatch::Cross => {
                    let _ = writeln!(
                        s,
                        "<path d=\"M{} {}L{} {}M{} {}L{} {}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                        num(sx + 5.0),
                        num(y - 8.0),
                        num(sx + 13.0),
                        num(y),
                        num(sx + 5.0),
                        num(y),
                        num(sx + 13.0),
                        num(y - 8.0)
                    );
                }
            }
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>",
                num(sx + 26.0),
                num(y),
                escape(text)
            );
        }
        s.push_str("</g>\n");
    }

    fn render_scale_bar(&self, s: &mut String) {
        let world = nice_length(0.4 * self.half_width);
        let len = world * SIZE / (2.0 * self.half_width);
        let (x, y) = (MARGIN, SIZE - MARGIN);
        let _ = writeln!(
            s,
            "<g id=\"scale-bar\"><path d=\"M{} {}L{} {}M{} {}L{} {}M{} {}L{} {}\" stroke=\"black\" stroke-width=\"2\"/>",
            num(x),
            num(y),
            num(x + len),
            num(y),
            num(x),
            num(y - 4.0),
            num(x),
            num(y + 4.0),
            num(x + len),
            num(y - 4.0),
            num(x + len),
            num(y + 4.0)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text></g>",
            num(x),
            num(y - 8.0),
            escape(&format!("{world}"))
        );
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
            SIZE
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(
            s,
            "<defs><clipPath id=\"window\"><rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{0}\"/></clipPath></defs>",
            SIZE
        );
        let _ = writeln!(s, "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>", SIZE);
        s.push_str("<g clip-path=\"url(#window)\">\n");
        for item in &self.items {
            self.render_item(&mut s, item);
        }
        s.push_str("</g>\n");
        self.render_scale_bar(&mut s);
        self.render_legend(&mut s);
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nice_lengths() {
        assert_eq!(nice_length(0.8), 0.5);
        assert_eq!(nice_length(3.0), 2.0);
        assert_eq!(nice_length(10.0), 10.0);
    }

    #[test]
    fn render_is_deterministic_and_well_formed() {
        let mut doc = PlotDocument::new("t", C64::new(0.0, 0.0), 2.0);
        doc.polyline(&[C64::new(-1.0, 0.0), C64::new(1.0, 0.0)], PALETTE[0], 1.5, false);
        doc.polygon(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0)], PALETTE[1], 0.3);
        doc.dot(C64::new(1.0, 0.0), "black", 3.0);
        doc.legend(PALETTE[0], "leaf <a>", Swatch::Line { dashed: false });
        let a = doc.render();
        assert_eq!(a, doc.render());
        assert!(a.starts_with("<svg"));
        assert!(a.contains("leaf &lt;a&gt;"));
        assert!(a.contains("id=\"scale-bar\""));
        assert_eq!(a.matches("class=\"region\"").count(), 1);
    }

    #[test]
    fn world_to_pixel() {
        let doc = PlotDocument::new("t", C64::new(1.0, 1.0), 1.0);
        assert_eq!(doc.px(C64::new(1.0, 1.0)), (320.0, 320.0));
        assert_eq!(doc.px(C64::new(0.0, 2.0)), (0.0, 0.0));
    }
}
