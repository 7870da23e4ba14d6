//! Symmetry groups of labelled polygons, their fixed sets, central vectors,
//! and point-level coincidence and collinearity tests for centers.

use serde::Serialize;
use thiserror::Error;

use crate::center::{builtin, coordinate_map, CenterEvaluation};
use crate::geom::{find_isometry, DihedralElement, Flatness, Point, Polygon, Similarity, Vector};
use crate::tol;

/// Interior angles closer than this (radians) count as equal.
pub const ANGLE_TOL: f64 = 1e-9;
/// Tolerance factor for the triangle classification tests.
pub const TRIGON_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("all vertices coincide")]
    Degenerate,
    #[error("need at least {0} centers")]
    TooFew(usize),
    #[error("triangle is flat")]
    FlatTrigon,
    #[error("expected a triangle, got {0} vertices")]
    NotATriangle(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryElement {
    pub relabelling: DihedralElement,
    pub isometry: Similarity,
}

/// Rigid motions mapping the vertex set onto itself, each tagged with the
/// relabelling it induces.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryGroup {
    pub elements: Vec<SymmetryElement>,
    /// Absolute tolerance the group was computed with.
    pub tolerance: f64,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `α ∈ D_n` is a symmetry iff the distance matrix is invariant under `α` and
/// an isometry carries `V_i` to `V_{α(i)}`.
pub fn symmetry_group(p: &Polygon) -> Result<SymmetryGroup, SymmetryError> {
    if p.flatness() == Flatness::AllCoincident {
        return Err(SymmetryError::Degenerate);
    }
    let tau = p.tolerance();
    let d = p.distance_matrix();
    let elements = DihedralElement::all(p.n())
        .filter(|alpha| d.relabelled(alpha).max_abs_diff(&d) <= tau)
        .filter_map(|alpha| {
            find_isometry(p, &p.relabel(&alpha))
                .ok()
                .map(|isometry| SymmetryElement { relabelling: alpha, isometry })
        })
        .collect();
    Ok(SymmetryGroup { elements, tolerance: tau })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum FixedSet {
    WholePlane,
    Line { point: Point, direction: Vector },
    Point { point: Point },
}

impl FixedSet {
    pub fn distance_to(&self, q: Point) -> f64 {
        match *self {
            FixedSet::WholePlane => 0.0,
            FixedSet::Line { point, direction } => direction.cross(q - point).abs(),
            FixedSet::Point { point } => point.distance(q),
        }
    }
}

enum Motion {
    Trivial,
    Rotation(Point),
    Reflection(Point, Vector),
}

fn motion_kind(t: &Similarity, tau: f64) -> Motion {
    if t.reflect {
        let half = 0.5 * t.rotation;
        let axis = Vector::new(half.cos(), half.sin());
        return Motion::Reflection(Point::ORIGIN + t.translation * 0.5, axis);
    }
    if t.is_translation(1e-12) && t.translation.norm() <= tau {
        return Motion::Trivial;
    }
    // (I - R) x = t
    let m = t.matrix();
    let (a, b, c, d) = (1.0 - m[0][0], -m[0][1], -m[1][0], 1.0 - m[1][1]);
    let det = a * d - b * c;
    let (tx, ty) = (t.translation.dx, t.translation.dy);
    if det.abs() < 1e-24 {
        return Motion::Trivial;
    }
    Motion::Rotation(Point::new((d * tx - b * ty) / det, (a * ty - c * tx) / det))
}

/// Fixed points of the whole group, read off its structure: trivial group →
/// plane; any rotation → its center; reflections only → the common axis, or
/// the intersection point when axes differ.
pub fn fixed_set(group: &SymmetryGroup) -> FixedSet {
    let tau = group.tolerance;
    let mut axes: Vec<(Point, Vector)> = Vec::new();
    for e in &group.elements {
        match motion_kind(&e.isometry, tau) {
            Motion::Trivial => {}
            Motion::Rotation(point) => return FixedSet::Point { point },
            Motion::Reflection(point, dir) => axes.push((point, dir)),
        }
    }
    let Some(&(p0, d0)) = axes.first() else {
        return FixedSet::WholePlane;
    };
    for &(p1, d1) in &axes[1..] {
        let cross = d0.cross(d1);
        if cross.abs() > 1e-9 {
            let s = (p1 - p0).cross(d1) / cross;
            return FixedSet::Point { point: p0 + d0 * s };
        }
    }
    let direction = d0.canonical_sign();
    FixedSet::Line { point: p0, direction }
}

/// Largest displacement of a fixed-set point under any group element.
pub fn fixed_set_residual(group: &SymmetryGroup, set: &FixedSet) -> f64 {
    let probes: Vec<Point> = match *set {
        FixedSet::WholePlane => return 0.0,
        FixedSet::Point { point } => vec![point],
        FixedSet::Line { point, direction } => vec![point, point + direction],
    };
    group
        .elements
        .iter()
        .flat_map(|e| probes.iter().map(move |&q| e.isometry.apply(q).distance(q)))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    LongestSide,
    ShortestSide,
    SecondLongestSide,
    LargestAngle,
    SmallestAngle,
    SecondLargestAngle,
    ProjectionOnLongestSide,
    ProjectionOnShortestSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CentralVector {
    pub vector: Vector,
    pub provenance: Provenance,
}

/// Central vectors produced by the sufficient conditions. Empty does not mean
/// the polygon lacks non-coincident centers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralVectorReport {
    pub vectors: Vec<CentralVector>,
}

fn unique_extreme(values: &[f64], tol: f64, largest: bool) -> Option<usize> {
    let key = |v: f64| if largest { v } else { -v };
    let best = (0..values.len()).max_by(|&a, &b| key(values[a]).total_cmp(&key(values[b])))?;
    let clear = values
        .iter()
        .enumerate()
        .all(|(i, &v)| i == best || key(values[best]) - key(v) > tol);
    clear.then_some(best)
}

fn all_distinct(values: &[f64], tol: f64) -> bool {
    (0..values.len()).all(|i| (i + 1..values.len()).all(|j| (values[i] - values[j]).abs() > tol))
}

/// Interior angles in `[0, π]`, meaningful for convex polygons.
pub fn interior_angles(p: &Polygon) -> Vec<f64> {
    let n = p.n();
    (0..n)
        .map(|i| {
            let a = p.vertex(i + n - 1) - p.vertex(i);
            let b = p.vertex(i + 1) - p.vertex(i);
            a.cross(b).abs().atan2(a.dot(b))
        })
        .collect()
}

pub fn central_vectors(p: &Polygon) -> Result<CentralVectorReport, SymmetryError> {
    if p.flatness() == Flatness::AllCoincident {
        return Err(SymmetryError::Degenerate);
    }
    let n = p.n();
    let tau = p.tolerance();
    let diam = p.diameter();
    let c = p.centroid();
    let convex = p.classify().convex;
    let sides = p.sides();
    let angles = interior_angles(p);
    let side_vec = |i: usize| p.vertex(i).midpoint(p.vertex(i + 1)) - c;
    let vertex_vec = |i: usize| p.vertex(i) - c;
    let nonzero = |v: Vector| v.norm() > tau;
    let independent = |a: Vector, b: Vector| a.cross(b).abs() > tau * diam;
    let pair = |a: CentralVector, b: CentralVector| CentralVectorReport { vectors: vec![a, b] };
    let cv = |vector, provenance| CentralVector { vector, provenance };

    // two-vector constructions
    if convex && all_distinct(&sides, tau) {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| sides[b].total_cmp(&sides[a]));
        let first = side_vec(order[0]);
        for (idx, prov) in [(order[n - 1], Provenance::ShortestSide), (order[1], Provenance::SecondLongestSide)] {
            let second = side_vec(idx);
            if nonzero(first) && nonzero(second) && independent(first, second) {
                return Ok(pair(cv(first, Provenance::LongestSide), cv(second, prov)));
            }
        }
    }
    if convex && all_distinct(&angles, ANGLE_TOL) {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| angles[b].total_cmp(&angles[a]));
        let first = vertex_vec(order[0]);
        for (idx, prov) in [(order[n - 1], Provenance::SmallestAngle), (order[1], Provenance::SecondLargestAngle)] {
            let second = vertex_vec(idx);
            if nonzero(first) && nonzero(second) && independent(first, second) {
                return Ok(pair(cv(first, Provenance::LargestAngle), cv(second, prov)));
            }
        }
    }

    // single-vector conditions
    let longest = unique_extreme(&sides, tau, true);
    let shortest = unique_extreme(&sides, tau, false);
    let mut found: Vec<CentralVector> = Vec::new();
    if let Some(i) = longest {
        found.push(cv(side_vec(i), Provenance::LongestSide));
    } else if let Some(i) = shortest {
        found.push(cv(side_vec(i), Provenance::ShortestSide));
    }
    if convex {
        if let Some(i) = unique_extreme(&angles, ANGLE_TOL, true) {
            found.push(cv(vertex_vec(i), Provenance::LargestAngle));
        } else if let Some(i) = unique_extreme(&angles, ANGLE_TOL, false) {
            found.push(cv(vertex_vec(i), Provenance::SmallestAngle));
        }
    }
    let mut vectors: Vec<CentralVector> = Vec::new();
    for v in found.into_iter().filter(|v| nonzero(v.vector)) {
        if vectors.iter().all(|w| independent(w.vector, v.vector)) && vectors.len() < 2 {
            vectors.push(v);
        }
    }

    // projection onto a central direction
    if vectors.len() == 1 {
        let v = vectors[0].vector;
        let directions = [
            longest.map(|i| (i, Provenance::ProjectionOnLongestSide)),
            shortest.map(|i| (i, Provenance::ProjectionOnShortestSide)),
        ];
        for (i, prov) in directions.into_iter().flatten() {
            let Some(u) = (p.vertex(i + 1) - p.vertex(i)).normalized() else { continue };
            let proj = u * v.dot(u);
            if nonzero(proj) && independent(v, proj) {
                vectors.push(cv(proj, prov));
                break;
            }
        }
    }
    Ok(CentralVectorReport { vectors })
}

/// All points within `τ` of the first.
pub fn centers_coincident(p: &Polygon, evals: &[CenterEvaluation]) -> Result<bool, SymmetryError> {
    if evals.len() < 2 {
        return Err(SymmetryError::TooFew(2));
    }
    let tau = p.tolerance();
    Ok(evals.iter().all(|e| e.point.distance(evals[0].point) <= tau))
}

pub fn centers_collinear(p: &Polygon, evals: &[CenterEvaluation]) -> Result<bool, SymmetryError> {
    if evals.len() < 3 {
        return Err(SymmetryError::TooFew(3));
    }
    let points: Vec<Point> = evals.iter().map(|e| e.point).collect();
    let diam = p.diameter();
    Ok(points_collinear(&points, tol::base() * diam * diam, p.tolerance()))
}

/// Collinearity by triangle area against the farthest pair.
pub fn points_collinear(points: &[Point], area_tol: f64, tau: f64) -> bool {
    let mut best = (0.0, 0, 0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = points[i].distance(points[j]);
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    if best.0 <= tau {
        return true;
    }
    let (a, b) = (points[best.1], points[best.2]);
    points.iter().all(|&q| 0.5 * (b - a).cross(q - a).abs() <= area_tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrigonKind {
    Equilateral,
    Isosceles,
    Scalene,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrigonReport {
    /// From side lengths.
    pub metric: TrigonKind,
    /// From centroid, incenter and circumcenter positions.
    pub by_centers: TrigonKind,
    pub centroid: Point,
    pub incenter: Point,
    pub circumcenter: Point,
}

impl TrigonReport {
    pub fn agree(&self) -> bool {
        self.metric == self.by_centers
    }
}

/// Classify a triangle twice: by its sides, and by whether the centroid equals
/// the incenter (equilateral) or the centroid, circumcenter and incenter are
/// collinear (isosceles).
pub fn classify_trigon(p: &Polygon) -> Result<TrigonReport, SymmetryError> {
    if p.n() != 3 {
        return Err(SymmetryError::NotATriangle(p.n()));
    }
    if p.flatness() != Flatness::NonFlat {
        return Err(SymmetryError::FlatTrigon);
    }
    let diam = p.diameter();
    let eps = TRIGON_TOL * diam;
    let s = p.sides();
    let eq = |a: f64, b: f64| (a - b).abs() <= eps;
    let metric = if eq(s[0], s[1]) && eq(s[1], s[2]) {
        TrigonKind::Equilateral
    } else if eq(s[0], s[1]) || eq(s[1], s[2]) || eq(s[0], s[2]) {
        TrigonKind::Isosceles
    } else {
        TrigonKind::Scalene
    };
    let point = |name: &str| -> Result<Point, SymmetryError> {
        coordinate_map(&builtin(name).expect("catalog name"), p)
            .map(|e| e.point)
            .map_err(|_| SymmetryError::FlatTrigon)
    };
    let centroid = point("centroid")?;
    let incenter = point("triangle_incenter")?;
    let circumcenter = point("triangle_circumcenter")?;
    let by_centers = if centroid.distance(incenter) <= eps {
        TrigonKind::Equilateral
    } else if points_collinear(&[centroid, circumcenter, incenter], TRIGON_TOL * diam * diam, eps) {
        TrigonKind::Isosceles
    } else {
        TrigonKind::Scalene
    };
    Ok(TrigonReport { metric, by_centers, centroid, incenter, circumcenter })
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedSetReport {
    pub order: usize,
    pub fixed_set: FixedSet,
    /// Distance of each center to the fixed set.
    pub distances: Vec<(String, f64)>,
    pub tolerance: f64,
}

impl FixedSetReport {
    pub fn passed(&self) -> bool {
        self.distances.iter().all(|(_, d)| *d <= self.tolerance)
    }
}

pub fn verify_fixed_set_containment(
    p: &Polygon,
    evals: &[CenterEvaluation],
) -> Result<FixedSetReport, SymmetryError> {
    let group = symmetry_group(p)?;
    let set = fixed_set(&group);
    Ok(FixedSetReport {
        order: group.order(),
        fixed_set: set,
        distances: evals.iter().map(|e| (e.name.clone(), set.distance_to(e.point))).collect(),
        tolerance: group.tolerance,
    })
}
