//! SVG sketch of a polygon with its centers and lines. Diagonal midpoints are
//! drawn as ×, centers as filled dots.

use std::fmt::Write;

use polycenter::lines::RealizedLine;
use polycenter::{Point, Polygon};

const SIZE: f64 = 600.0;

pub struct Scene<'a> {
    pub polygon: &'a Polygon,
    pub centers: Vec<(String, Point)>,
    pub lines: Vec<RealizedLine>,
    pub circle: Option<(Point, f64)>,
}

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn new(points: &[Point]) -> Frame {
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        let pad = 0.1 * span;
        Frame { min_x: lo.x - pad, max_y: hi.y + pad, scale: SIZE / (span + 2.0 * pad) }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.min_x) * self.scale, (self.max_y - p.y) * self.scale)
    }

    /// World-space half-extent large enough to cross the whole canvas.
    fn reach(&self) -> f64 {
        2.0 * SIZE / self.scale
    }
}

pub fn render(scene: &Scene) -> String {
    let p = scene.polygon;
    let mut pts: Vec<Point> = p.vertices().to_vec();
    pts.extend(scene.centers.iter().map(|(_, q)| *q));
    if let Some((c, r)) = scene.circle {
        pts.push(Point::new(c.x - r, c.y - r));
        pts.push(Point::new(c.x + r, c.y + r));
    }
    let f = Frame::new(&pts);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for line in &scene.lines {
        match *line {
            RealizedLine::Line { point, direction } => {
                let (x1, y1) = f.map(point + direction * -f.reach());
                let (x2, y2) = f.map(point + direction * f.reach());
                let _ = writeln!(
                    s,
                    r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="steelblue" stroke-dasharray="6 4"/>"#
                );
            }
            RealizedLine::SinglePoint { point } => {
                let (x, y) = f.map(point);
                let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="8" fill="none" stroke="steelblue"/>"#);
            }
        }
    }

    if let Some((c, r)) = scene.circle {
        let (x, y) = f.map(c);
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="seagreen"/>"#,
            r * f.scale
        );
    }

    let outline: Vec<String> = p
        .vertices()
        .iter()
        .map(|v| {
            let (x, y) = f.map(*v);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="black"/>"#, outline.join(" "));
    for (i, v) in p.vertices().iter().enumerate() {
        let (x, y) = f.map(*v);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="14">V{}</text>"#, x + 5.0, y - 5.0, i + 1);
    }

    let n = p.n();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (x, y) = f.map(p.vertex(i).midpoint(p.vertex(j)));
            let _ = writeln!(
                s,
                r#"<path d="M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}" stroke="gray"/>"#,
                x - 4.0,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0,
                y + 4.0,
                x + 4.0,
                y - 4.0
            );
        }
    }

    for (name, q) in &scene.centers {
        let (x, y) = f.map(*q);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="crimson"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="11" fill="crimson">{}</text>"#,
            x + 5.0,
            y + 12.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
