//! Independent geometric oracles. Nothing here goes through the coefficient
//! machinery of the library.

#![allow(dead_code)]

use polycenter::{Point, Polygon, Vector};

/// Intersection of the lines through `a,b` and `c,d` (Cramer's rule).
pub fn line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point {
    let (x1, y1, x2, y2) = (a.x, a.y, b.x, b.y);
    let (x3, y3, x4, y4) = (c.x, c.y, d.x, d.y);
    let den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4);
    let p = x1 * y2 - y1 * x2;
    let q = x3 * y4 - y3 * x4;
    Point::new((p * (x3 - x4) - (x1 - x2) * q) / den, (p * (y3 - y4) - (y1 - y2) * q) / den)
}

/// Crosspoint of the diagonals `V1V3` and `V2V4`.
pub fn diagonal_crosspoint(p: &Polygon) -> Point {
    line_intersection(p.vertex(0), p.vertex(2), p.vertex(1), p.vertex(3))
}

/// Incenter of a triangle from two angle bisectors.
pub fn bisector_incenter(p: &Polygon) -> Point {
    let bis = |i: usize| {
        let v = p.vertex(i);
        let u = unit(p.vertex(i + 2) - v) + unit(p.vertex(i + 1) - v);
        (v, v + u)
    };
    let (a, b) = bis(0);
    let (c, d) = bis(1);
    line_intersection(a, b, c, d)
}

/// Circumcenter of a triangle from two perpendicular bisectors.
pub fn perpendicular_circumcenter(p: &Polygon) -> Point {
    let bis = |i: usize| {
        let (u, v) = (p.vertex(i), p.vertex(i + 1));
        let m = u.midpoint(v);
        (m, m + (v - u).perp())
    };
    let (a, b) = bis(0);
    let (c, d) = bis(1);
    line_intersection(a, b, c, d)
}

/// Area centroid from a fan of triangles around vertex 0, each weighted by
/// its signed area.
pub fn fan_centroid(p: &Polygon) -> Point {
    let o = p.vertex(0);
    let (mut area, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for i in 1..p.n() - 1 {
        let (b, c) = (p.vertex(i), p.vertex(i + 1));
        let w = 0.5 * (b - o).cross(c - o);
        area += w;
        sx += w * (o.x + b.x + c.x) / 3.0;
        sy += w * (o.y + b.y + c.y) / 3.0;
    }
    Point::new(sx / area, sy / area)
}

/// Perimeter-weighted mean of the side midpoints.
pub fn wire_centroid(p: &Polygon) -> Point {
    let (mut len, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for i in 0..p.n() {
        let (a, b) = (p.vertex(i), p.vertex(i + 1));
        let l = a.distance(b);
        let m = a.midpoint(b);
        len += l;
        sx += l * m.x;
        sy += l * m.y;
    }
    Point::new(sx / len, sy / len)
}

pub fn triangle_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * (b - a).cross(c - a).abs()
}

fn unit(v: Vector) -> Vector {
    v * (1.0 / v.norm())
}

pub fn square() -> Polygon {
    Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
}

pub fn q_star() -> Polygon {
    Polygon::from_coords(&[(0.0, 0.0), (4.0, 0.0), (5.0, 3.0), (1.0, 2.0)])
}

pub fn kite() -> Polygon {
    Polygon::from_coords(&[(0.0, 0.0), (2.0, -1.0), (5.0, 0.0), (2.0, 1.0)])
}

pub fn triangle_345() -> Polygon {
    Polygon::from_coords(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)])
}
