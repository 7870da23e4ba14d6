//! Tangential polygons: incircle detection, tangent lengths, the incenter
//! weights `x_{k-1} + x_{k+1}`, boundary and lamina centroids, and checks of
//! the collinearity and parallelogram results built on them.

use std::f64::consts::{PI, TAU};

use serde::Serialize;
use thiserror::Error;

use crate::center::{builtin, coordinate_map, extract_center_function, CenterError, CenterEvaluation, CoefficientVector};
use crate::geom::{Flatness, Point, Polygon, Vector};
use crate::lines::LineSystem;
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TangentialError {
    #[error("polygon is not convex")]
    NotConvex,
    #[error("polygon has no inscribed circle")]
    NotTangential,
    #[error("vertex {0} lies inside the circle")]
    NumericallyNegative(usize),
    #[error("tangent lengths do not reproduce side {0}")]
    TangentMismatch(usize),
    #[error("bad tangency angles: {0}")]
    BadAngles(String),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon is not a parallelogram")]
    NotParallelogram,
    #[error(transparent)]
    Center(#[from] CenterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Incircle {
    pub center: Point,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentLengths {
    pub x: Vec<f64>,
}

fn inward_bisector(p: &Polygon, i: usize) -> Option<Vector> {
    let n = p.n();
    let v = p.vertex(i);
    let a = (p.vertex(i + n - 1) - v).normalized()?;
    let b = (p.vertex(i + 1) - v).normalized()?;
    (a + b).normalized()
}

fn side_distance(p: &Polygon, i: usize, q: Point) -> Option<(f64, f64)> {
    let a = p.vertex(i);
    let e = p.vertex(i + 1) - a;
    let len = e.norm();
    if len == 0.0 {
        return None;
    }
    Some((e.cross(q - a).abs() / len, (q - a).dot(e) / (len * len)))
}

/// Intersect the bisectors at the first two vertices, then check that the
/// candidate is equidistant from every side line with each foot on its side.
pub fn incircle(p: &Polygon) -> Result<Incircle, TangentialError> {
    if p.flatness() != Flatness::NonFlat || !p.classify().convex {
        return Err(TangentialError::NotConvex);
    }
    let tau = p.tolerance();
    let (u0, u1) = match (inward_bisector(p, 0), inward_bisector(p, 1)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(TangentialError::NotTangential),
    };
    let denom = u0.cross(u1);
    if denom.abs() < 1e-12 {
        return Err(TangentialError::NotTangential);
    }
    let s = (p.vertex(1) - p.vertex(0)).cross(u1) / denom;
    let center = p.vertex(0) + u0 * s;
    let radius = side_distance(p, 0, center).ok_or(TangentialError::NotTangential)?.0;
    let slack = tau / p.diameter();
    for i in 0..p.n() {
        let (dist, t) = side_distance(p, i, center).ok_or(TangentialError::NotTangential)?;
        if (dist - radius).abs() > tau || t < -slack || t > 1.0 + slack {
            return Err(TangentialError::NotTangential);
        }
    }
    if radius <= tau {
        return Err(TangentialError::NotTangential);
    }
    Ok(Incircle { center, radius })
}

/// `x_i = sqrt(|V_i - c|² - r²)`, computed as the mean distance from `V_i` to
/// the feet on its two sides (same value, better conditioned).
pub fn tangent_lengths(p: &Polygon, inc: &Incircle) -> Result<TangentLengths, TangentialError> {
    let n = p.n();
    let tau = p.tolerance();
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let v = p.vertex(i);
        if v.distance(inc.center) < inc.radius - tau {
            return Err(TangentialError::NumericallyNegative(i));
        }
        let along = |w: Point| match (w - v).normalized() {
            Some(e) => (inc.center - v).dot(e).abs(),
            None => 0.0,
        };
        x.push(0.5 * (along(p.vertex(i + 1)) + along(p.vertex(i + n - 1))));
    }
    for i in 0..n {
        if (p.side(i) - x[i] - x[(i + 1) % n]).abs() > tau {
            return Err(TangentialError::TangentMismatch(i));
        }
    }
    Ok(TangentLengths { x })
}

/// Incenter from tangent lengths: vertex `k` gets `x_{k-1} + x_{k+1}`, over
/// the perimeter.
pub fn incenter(p: &Polygon) -> Result<CenterEvaluation, TangentialError> {
    let inc = incircle(p)?;
    let x = tangent_lengths(p, &inc)?.x;
    let n = p.n();
    let raw: Vec<f64> = (0..n).map(|k| x[(k + n - 1) % n] + x[(k + 1) % n]).collect();
    let total: f64 = raw.iter().sum();
    let coefficients = CoefficientVector::new(raw.iter().map(|w| w / total).collect())?;
    Ok(CenterEvaluation { name: "incenter".into(), point: coefficients.apply(p), coefficients })
}

/// Polygon circumscribed about the circle of `radius` at the origin. Vertex
/// `i` is where the tangents at `angles[i]` and `angles[i+1]` meet.
pub fn generate_tangential(radius: f64, angles: &[f64]) -> Result<Polygon, TangentialError> {
    let n = angles.len();
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(TangentialError::BadAngles(format!("radius {radius}")));
    }
    if n < 3 {
        return Err(TangentialError::BadAngles(format!("{n} angles")));
    }
    if angles.iter().any(|a| !(0.0..TAU).contains(a)) {
        return Err(TangentialError::BadAngles("angles must lie in [0, 2π)".into()));
    }
    let vertices = (0..n)
        .map(|i| {
            let a = angles[i];
            let b = if i + 1 == n { angles[0] + TAU } else { angles[i + 1] };
            let gap = b - a;
            if gap <= 0.0 || gap >= PI {
                return Err(TangentialError::BadAngles(format!("gap {gap} after angle {i}")));
            }
            let (m, h) = (0.5 * (a + b), 0.5 * gap);
            let scale = radius / h.cos();
            Ok(Point::new(scale * m.cos(), scale * m.sin()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Polygon::new(vertices).map_err(|e| TangentialError::BadAngles(e.to_string()))
}

/// Shoelace centroid of the region.
fn area_centroid(p: &Polygon) -> Point {
    let n = p.n();
    let o = p.vertex(0);
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let u = p.vertex(i) - o;
        let v = p.vertex(i + 1) - o;
        let w = u.cross(v);
        a += w;
        cx += (u.dx + v.dx) * w;
        cy += (u.dy + v.dy) * w;
    }
    o + Vector::new(cx / (3.0 * a), cy / (3.0 * a))
}

/// Center of mass of the filled region. Assumes a simple polygon.
pub fn lamina_centroid(p: &Polygon) -> Result<CenterEvaluation, TangentialError> {
    let diam = p.diameter();
    if p.signed_area().abs() <= tol::base() * diam * diam {
        return Err(TangentialError::ZeroArea);
    }
    let coefficients = extract_center_function(area_centroid, p)?;
    Ok(CenterEvaluation { name: "lamina_centroid".into(), point: area_centroid(p), coefficients })
}

pub fn boundary_centroid(p: &Polygon) -> Result<CenterEvaluation, TangentialError> {
    Ok(coordinate_map(&builtin("boundary_centroid")?, p)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct AmReport {
    pub incenter: Point,
    pub boundary_centroid: Point,
    pub lamina_centroid: Point,
    /// Area of the triangle spanned by the three points.
    pub area: f64,
    pub tolerance: f64,
}

impl AmReport {
    pub fn passed(&self) -> bool {
        self.area <= self.tolerance
    }
}

pub fn verify_am_collinearity(p: &Polygon) -> Result<AmReport, TangentialError> {
    let i = incenter(p)?.point;
    let b = boundary_centroid(p)?.point;
    let l = lamina_centroid(p)?.point;
    let diam = p.diameter();
    Ok(AmReport {
        incenter: i,
        boundary_centroid: b,
        lamina_centroid: l,
        area: 0.5 * (b - i).cross(l - i).abs(),
        tolerance: tol::base() * diam * diam,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ParallelogramReport {
    pub parallelogram: bool,
    pub boundary_weights: CoefficientVector,
    /// Boundary weights satisfy `γ1 - γ3 = 0`, `γ2 - γ4 = 0`.
    pub membership: bool,
    /// `d14 + d12 = d32 + d34`.
    pub side_condition: bool,
}

impl ParallelogramReport {
    pub fn passed(&self) -> bool {
        self.membership == self.side_condition && (self.membership || !self.parallelogram)
    }
}

/// The line through the centroid and the simple center of a quadrilateral.
pub fn centroid_simple_line() -> LineSystem {
    LineSystem::new(4, vec![vec![1.0, 0.0, -1.0, 0.0], vec![0.0, 1.0, 0.0, -1.0]]).expect("rank 3")
}

fn is_parallelogram(p: &Polygon) -> bool {
    p.n() == 4 && ((p.vertex(1) - p.vertex(0)) - (p.vertex(2) - p.vertex(3))).norm() <= p.tolerance()
}

/// Coefficient-level membership of the boundary centroid in the
/// centroid/simple-center line, for any quadrilateral.
pub fn parallelogram_membership(p: &Polygon) -> Result<ParallelogramReport, TangentialError> {
    if p.n() != 4 {
        return Err(TangentialError::NotParallelogram);
    }
    let weights = boundary_centroid(p)?.coefficients;
    let d = p.distance_matrix();
    let gap = d.get(0, 3) + d.get(0, 1) - d.get(2, 1) - d.get(2, 3);
    Ok(ParallelogramReport {
        parallelogram: is_parallelogram(p),
        membership: centroid_simple_line().satisfied_by(weights.weights()),
        side_condition: gap.abs() <= p.tolerance(),
        boundary_weights: weights,
    })
}

pub fn verify_parallelogram_theorem(p: &Polygon) -> Result<ParallelogramReport, TangentialError> {
    if !is_parallelogram(p) {
        return Err(TangentialError::NotParallelogram);
    }
    parallelogram_membership(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn t345() -> Polygon {
        Polygon::from_coords(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)])
    }

    fn square() -> Polygon {
        Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    fn close(a: Point, x: f64, y: f64, eps: f64) -> bool {
        a.distance(Point::new(x, y)) <= eps
    }

    #[test]
    fn incircle_examples() {
        let c = incircle(&t345()).unwrap();
        assert!(close(c.center, 1.0, 1.0, 1e-14) && (c.radius - 1.0).abs() < 1e-14);
        let c = incircle(&square()).unwrap();
        assert!(close(c.center, 0.5, 0.5, 1e-15) && (c.radius - 0.5).abs() < 1e-15);
        let rect = Polygon::from_coords(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]);
        assert_eq!(incircle(&rect), Err(TangentialError::NotTangential));
        let dart = Polygon::from_coords(&[(0.0, 0.0), (2.0, 1.0), (4.0, 0.0), (2.0, 3.0)]);
        assert_eq!(incircle(&dart), Err(TangentialError::NotConvex));
    }

    #[test]
    fn tangent_length_examples() {
        let p = t345();
        let x = tangent_lengths(&p, &incircle(&p).unwrap()).unwrap().x;
        for (got, want) in x.iter().zip([1.0, 3.0, 2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let p = square();
        let x = tangent_lengths(&p, &incircle(&p).unwrap()).unwrap().x;
        assert!(x.iter().all(|v| (v - 0.5).abs() < 1e-15));
        let bad = Incircle { center: Point::new(0.5, 0.5), radius: 2.0 };
        assert_eq!(tangent_lengths(&p, &bad), Err(TangentialError::NumericallyNegative(0)));
    }

    #[test]
    fn incenter_examples() {
        let e = incenter(&t345()).unwrap();
        for (got, want) in e.coefficients.weights().iter().zip([5.0, 3.0, 4.0]) {
            assert!((got - want / 12.0).abs() < 1e-15);
        }
        assert!(close(e.point, 1.0, 1.0, 1e-12));
        let e = incenter(&square()).unwrap();
        assert!(e.coefficients.weights().iter().all(|w| (w - 0.25).abs() < 1e-15));
    }

    #[test]
    fn generator_examples() {
        let tri = generate_tangential(1.0, &[PI / 2.0, 7.0 * PI / 6.0, 11.0 * PI / 6.0]).unwrap();
        let s = tri.sides();
        assert!(s.iter().all(|v| (v - 2.0 * 3f64.sqrt()).abs() < 1e-12));
        let angles: Vec<f64> = (0..4).map(|k| FRAC_PI_4 + k as f64 * PI / 2.0).collect();
        let sq = generate_tangential(1.0, &angles).unwrap();
        assert!(sq.sides().iter().all(|v| (v - 2.0).abs() < 1e-12));
        let hex = generate_tangential(2.0, &[0.1, 1.0, 2.0, 3.1, 4.0, 5.5]).unwrap();
        let c = incircle(&hex).unwrap();
        assert!(close(c.center, 0.0, 0.0, 1e-9 * hex.diameter()) && (c.radius - 2.0).abs() < 1e-9);
        tangent_lengths(&hex, &c).unwrap();
        assert!(matches!(generate_tangential(1.0, &[0.0, 0.5, 1.0]), Err(TangentialError::BadAngles(_))));
        assert!(matches!(generate_tangential(1.0, &[1.0, 0.5, 3.0]), Err(TangentialError::BadAngles(_))));
    }

    #[test]
    fn centroid_examples() {
        let p = t345();
        assert!(close(boundary_centroid(&p).unwrap().point, 1.5, 1.0, 1e-14));
        let l = lamina_centroid(&p).unwrap();
        assert!(close(l.point, 4.0 / 3.0, 1.0, 1e-14));
        assert!(close(l.coefficients.apply(&p), 4.0 / 3.0, 1.0, 1e-14));
        let b = boundary_centroid(&p).unwrap().coefficients;
        for (got, want) in b.weights().iter().zip([7.0, 9.0, 8.0]) {
            assert!((got - want / 24.0).abs() < 1e-15);
        }
        assert!(close(lamina_centroid(&square()).unwrap().point, 0.5, 0.5, 1e-15));
        let par = Polygon::from_coords(&[(0.0, 0.0), (3.0, 0.0), (4.0, 2.0), (1.0, 2.0)]);
        assert!(close(boundary_centroid(&par).unwrap().point, 2.0, 1.0, 1e-14));
        let flat = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(lamina_centroid(&flat).unwrap_err(), TangentialError::ZeroArea);
    }

    #[test]
    fn am_collinearity_examples() {
        let r = verify_am_collinearity(&t345()).unwrap();
        assert!(r.passed());
        assert!(close(r.lamina_centroid, 4.0 / 3.0, 1.0, 1e-12));
        assert!(verify_am_collinearity(&square()).unwrap().passed());
        let rect = Polygon::from_coords(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]);
        assert_eq!(verify_am_collinearity(&rect).unwrap_err(), TangentialError::NotTangential);
    }

    #[test]
    fn parallelogram_examples() {
        let par = Polygon::from_coords(&[(0.0, 0.0), (3.0, 0.0), (4.0, 2.0), (1.0, 2.0)]);
        let r = verify_parallelogram_theorem(&par).unwrap();
        assert!(r.membership && r.side_condition && r.passed());
        assert!(verify_parallelogram_theorem(&square()).unwrap().membership);
        let q = Polygon::from_coords(&[(0.0, 0.0), (4.0, 0.0), (5.0, 3.0), (1.0, 2.0)]);
        assert_eq!(verify_parallelogram_theorem(&q).unwrap_err(), TangentialError::NotParallelogram);
        let r = parallelogram_membership(&q).unwrap();
        assert!(!r.membership && !r.side_condition);
    }
}
