//! Minimal SVG line drawings.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Line { x1: f64, y1: f64, x2: f64, y2: f64, stroke: String, width: f64 },
    Polyline { points: Vec<(f64, f64)>, stroke: String, width: f64 },
    Circle { cx: f64, cy: f64, r: f64, fill: String },
    Text { x: f64, y: f64, size: f64, body: String },
}

/// A drawing in user coordinates with `y` pointing up; mapped onto a
/// `width × height` pixel canvas with a margin.
#[derive(Debug, Clone, PartialEq)]
pub struct Drawing {
    width: f64,
    height: f64,
    margin: f64,
    view: (f64, f64, f64, f64),
    shapes: Vec<Shape>,
}

impl Drawing {
    /// `view = (x_min, y_min, x_max, y_max)` in user coordinates.
    pub fn new(width: f64, height: f64, view: (f64, f64, f64, f64)) -> Self {
        Drawing {
            width,
            height,
            margin: 20.0,
            view,
            shapes: Vec::new(),
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let (x0, y0, x1, y1) = self.view;
        let w = self.width - 2.0 * self.margin;
        let h = self.height - 2.0 * self.margin;
        let sx = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.5 };
        let sy = if y1 > y0 { (y - y0) / (y1 - y0) } else { 0.5 };
        (self.margin + sx * w, self.height - self.margin - sy * h)
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        let (x1, y1) = self.map(a.0, a.1);
        let (x2, y2) = self.map(b.0, b.1);
        self.shapes.push(Shape::Line {
            x1,
            y1,
            x2,
            y2,
            stroke: stroke.to_string(),
            width,
        });
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        let points = pts.iter().map(|&(x, y)| self.map(x, y)).collect();
        self.shapes.push(Shape::Polyline {
            points,
            stroke: stroke.to_string(),
            width,
        });
    }

    pub fn dot(&mut self, c: (f64, f64), r: f64, fill: &str) {
        let (cx, cy) = self.map(c.0, c.1);
        self.shapes.push(Shape::Circle {
            cx,
            cy,
            r,
            fill: fill.to_string(),
        });
    }

    pub fn text(&mut self, at: (f64, f64), size: f64, body: &str) {
        let (x, y) = self.map(at.0, at.1);
        self.shapes.push(Shape::Text {
            x,
            y,
            size,
            body: body.to_string(),
        });
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
            self.width, self.height, self.width, self.height
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for shape in &self.shapes {
            let _ = match shape {
                Shape::Line { x1, y1, x2, y2, stroke, width } => writeln!(
                    s,
                    r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{stroke}" stroke-width="{width}"/>"#
                ),
                Shape::Polyline { points, stroke, width } => {
                    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
                    writeln!(
                        s,
                        r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
                        pts.join(" ")
                    )
                }
                Shape::Circle { cx, cy, r, fill } => {
                    writeln!(s, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{r}" fill="{fill}"/>"#)
                }
                Shape::Text { x, y, size, body } => writeln!(
                    s,
                    r#"<text x="{x:.3}" y="{y:.3}" font-size="{size}" font-family="sans-serif">{}</text>"#,
                    escape(body)
                ),
            };
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.render().as_bytes())?;
        Ok(())
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
