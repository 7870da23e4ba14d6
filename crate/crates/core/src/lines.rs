//! Central lines as linear systems in coefficient space.
//!
//! A [`LineSystem`] holds the `n-2` homogeneous rows `A`; together with the
//! implicit normalization row `(1, …, 1) · x = 1` it describes a line (or a
//! point) `{Σ x_k V_k}` once a polygon is fixed.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::center::{builtins_for, coordinate_map, CenterError, CenterFunction, CoefficientVector};
use crate::geom::{affine_point, Point, Polygon, Similarity, Vector};
use crate::linalg::{self, Matrix};
use crate::tol;

/// Pivot threshold for the orthogonal-complement reduction.
pub const COMPLEMENT_PIVOT_TOL: f64 = 1e-10;
/// Relative pivot threshold for rank-based membership tests.
pub const MEMBERSHIP_PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LineError {
    #[error(transparent)]
    Center(#[from] CenterError),
    #[error("the two centers have proportional weight vectors; the line is undefined")]
    CoincidentCenters,
    #[error("the line system is inconsistent")]
    Infeasible,
    #[error("line system is malformed: {0}")]
    Malformed(String),
    #[error("polygon is not a non-square rectangle")]
    NotARectangle,
}

/// `n-2` homogeneous rows; the normalization row is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSystem {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Matrix,
}

impl LineSystem {
    /// Validate shape and the rank contract `rank([1…1; A]) = n - 1`.
    pub fn new(n: usize, a: Matrix) -> Result<Self, LineError> {
        if n < 3 {
            return Err(LineError::Malformed(format!("n = {n} < 3")));
        }
        if a.len() != n - 2 || a.iter().any(|r| r.len() != n) {
            return Err(LineError::Malformed(format!("expected {} rows of length {n}", n - 2)));
        }
        if a.iter().flatten().any(|v| !v.is_finite()) {
            return Err(LineError::Malformed("non-finite coefficient".into()));
        }
        let sys = LineSystem { n, a };
        if linalg::rank(&sys.stacked(), COMPLEMENT_PIVOT_TOL) != n - 1 {
            return Err(LineError::Malformed("stacked system does not have rank n-1".into()));
        }
        Ok(sys)
    }

    /// `[1 … 1; A]`.
    pub fn stacked(&self) -> Matrix {
        let mut m = Vec::with_capacity(self.n - 1);
        m.push(vec![1.0; self.n]);
        m.extend(self.a.iter().cloned());
        m
    }

    fn rhs(&self) -> Vec<f64> {
        let mut b = vec![0.0; self.n - 1];
        b[0] = 1.0;
        b
    }

    /// Coefficient-level check: does `λ` itself satisfy the system?
    pub fn satisfied_by(&self, lambda: &[f64]) -> bool {
        let scale = self.a.iter().map(|r| linalg::norm(r)).fold(0.0, f64::max).max(1.0);
        let lnorm = linalg::norm(lambda).max(1.0);
        (lambda.iter().sum::<f64>() - 1.0).abs() <= 1e-9 * lnorm
            && self.a.iter().all(|row| linalg::dot(row, lambda).abs() <= MEMBERSHIP_PIVOT_TOL * scale * lnorm)
    }
}

/// Image of a line system under `x ↦ Σ x_k V_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RealizedLine {
    Line { point: Point, direction: Vector },
    SinglePoint { point: Point },
}

impl RealizedLine {
    pub fn point(&self) -> Point {
        match *self {
            RealizedLine::Line { point, .. } | RealizedLine::SinglePoint { point } => point,
        }
    }

    /// Distance from `q` to the realized set.
    pub fn distance_to(&self, q: Point) -> f64 {
        match *self {
            RealizedLine::Line { point, direction } => direction.cross(q - point).abs(),
            RealizedLine::SinglePoint { point } => point.distance(q),
        }
    }

    /// Same point set within `tau`.
    pub fn same_set(&self, other: &RealizedLine, tau: f64) -> bool {
        match (self, other) {
            (RealizedLine::SinglePoint { point: a }, RealizedLine::SinglePoint { point: b }) => {
                a.distance(*b) <= tau
            }
            (RealizedLine::Line { point, direction }, RealizedLine::Line { direction: d2, .. }) => {
                other.distance_to(*point) <= tau
                    && other.distance_to(*point + *direction) <= tau
                    && direction.cross(*d2).abs() <= tol::base().max(1e-12)
            }
            _ => false,
        }
    }

    pub fn transformed(&self, t: &Similarity) -> RealizedLine {
        match *self {
            RealizedLine::Line { point, direction } => RealizedLine::Line {
                point: t.apply(point),
                direction: t.apply_vector(direction).normalized().unwrap_or(direction).canonical_sign(),
            },
            RealizedLine::SinglePoint { point } => RealizedLine::SinglePoint { point: t.apply(point) },
        }
    }

    fn line(anchor: Point, direction: Vector, reference: Point) -> RealizedLine {
        let direction = direction.canonical_sign();
        let point = anchor + direction * (reference - anchor).dot(direction);
        RealizedLine::Line { point, direction }
    }
}

/// Normalized shift weights of `g` on `p`.
fn shift_weights(g: &CenterFunction, p: &Polygon) -> Result<Vec<f64>, LineError> {
    Ok(coordinate_map(g, p)?.coefficients.weights().to_vec())
}

/// Equations of the line through the centers of `g1` and `g2`: a basis of the
/// orthogonal complement of the two shift-weight vectors.
pub fn kimberling_line(
    g1: &CenterFunction,
    g2: &CenterFunction,
    p: &Polygon,
) -> Result<LineSystem, LineError> {
    let a1 = shift_weights(g1, p)?;
    let a2 = shift_weights(g2, p)?;
    let n = p.n();
    let pair = vec![a1, a2];
    if linalg::rank(&pair, COMPLEMENT_PIVOT_TOL) < 2 {
        return Err(LineError::CoincidentCenters);
    }
    let rows = linalg::null_space(&pair, n, COMPLEMENT_PIVOT_TOL);
    debug_assert_eq!(rows.len(), n - 2);
    LineSystem::new(n, rows)
}

/// Parameterize the solution set and map it into the plane. The anchor point
/// of a `Line` is the point closest to the vertex centroid.
pub fn realize(line: &LineSystem, p: &Polygon) -> Result<RealizedLine, LineError> {
    if line.n != p.n() {
        return Err(LineError::Malformed(format!("system for n = {} applied to a {}-gon", line.n, p.n())));
    }
    let sol = linalg::solve(&line.stacked(), &line.rhs(), MEMBERSHIP_PIVOT_TOL).ok_or(LineError::Infeasible)?;
    let anchor = affine_point(p.vertices(), &sol.particular);
    let centroid = p.centroid();
    let tau = p.tolerance();
    let direction = sol
        .null_basis
        .iter()
        .filter_map(|delta| {
            let unit = linalg::norm(delta);
            let image = affine_point(p.vertices(), delta).to_vector() * (1.0 / unit);
            (image.norm() > tau).then_some(image)
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()));
    Ok(match direction.and_then(Vector::normalized) {
        Some(dir) => RealizedLine::line(anchor, dir, centroid),
        None => RealizedLine::SinglePoint { point: anchor },
    })
}

/// Point-level membership: is `Σ λ_k V_k` on the realized line? Decided by
/// the rank of the line system augmented with the two coordinate equations
/// `Σ (x_k - λ_k) V_k = 0`.
pub fn contains(line: &LineSystem, p: &Polygon, lambda: &CoefficientVector) -> bool {
    if line.n != p.n() || lambda.len() != p.n() {
        return false;
    }
    let c = p.centroid();
    let scale = p.diameter().max(f64::MIN_POSITIVE);
    let xs: Vec<f64> = p.vertices().iter().map(|v| (v.x - c.x) / scale).collect();
    let ys: Vec<f64> = p.vertices().iter().map(|v| (v.y - c.y) / scale).collect();
    let mut m = line.stacked();
    let mut b = line.rhs();
    m.push(xs.clone());
    b.push(linalg::dot(&xs, lambda.weights()));
    m.push(ys.clone());
    b.push(linalg::dot(&ys, lambda.weights()));
    linalg::is_consistent(&m, &b, MEMBERSHIP_PIVOT_TOL)
}

/// Brute-force line through two points.
pub fn line_through(a: Point, b: Point, tau: f64) -> RealizedLine {
    match (b - a).normalized() {
        Some(dir) if a.distance(b) > tau => RealizedLine::Line { point: a, direction: dir.canonical_sign() },
        _ => RealizedLine::SinglePoint { point: a },
    }
}

/// Result of probing the rectangle median as a central line.
#[derive(Debug, Clone, Serialize)]
pub struct RectangleReport {
    pub median: RealizedLine,
    pub center: Point,
    pub similarity_equivariant: bool,
    pub relabel_invariant: bool,
    pub centers_coincide: bool,
    pub center_points: Vec<(String, Point)>,
}

impl RectangleReport {
    /// A central line on which no two distinct built-in centers lie.
    pub fn passed(&self) -> bool {
        self.similarity_equivariant && self.relabel_invariant && self.centers_coincide
    }
}

/// The median of a non-square rectangle that crosses its two longer sides.
pub fn rectangle_median(p: &Polygon) -> Result<RealizedLine, LineError> {
    if !is_non_square_rectangle(p) {
        return Err(LineError::NotARectangle);
    }
    let long = if p.side(0) > p.side(1) { 0 } else { 1 };
    let a = p.vertex(long).midpoint(p.vertex(long + 1));
    let b = p.vertex(long + 2).midpoint(p.vertex(long + 3));
    Ok(line_through(a, b, p.tolerance()))
}

fn is_non_square_rectangle(p: &Polygon) -> bool {
    if p.n() != 4 || !p.classify().convex {
        return false;
    }
    let tau = p.tolerance();
    let diam = p.diameter();
    let right = (0..4).all(|i| {
        let u = p.vertex(i + 1) - p.vertex(i);
        let v = p.vertex(i + 2) - p.vertex(i + 1);
        u.dot(v).abs() <= tau * diam
    });
    right && (p.side(0) - p.side(1)).abs() > tau
}

/// Check the rectangle median against both central-line axioms and confirm
/// that every built-in center sits at the rectangle's center, so the median
/// cannot pass through two distinct centers.
pub fn is_central_line_counterexample_rectangle(p: &Polygon) -> Result<RectangleReport, LineError> {
    let median = rectangle_median(p)?;
    let tau = p.tolerance();
    let center = p.centroid();

    let probes = [
        Similarity::new(1.0, FRAC_PI_2 / 3.0, Vector::new(1.0, -2.0), false),
        Similarity::new(2.5, -1.0, Vector::new(-3.0, 0.5), false),
        Similarity::new(0.4, 2.2, Vector::new(0.0, 4.0), true),
    ];
    let similarity_equivariant = probes.iter().all(|t| {
        let moved = p.transformed(t);
        rectangle_median(&moved)
            .map(|m| m.same_set(&median.transformed(t), moved.tolerance()))
            .unwrap_or(false)
    });
    let relabel_invariant = crate::geom::DihedralElement::all(4).all(|alpha| {
        rectangle_median(&p.relabel(&alpha)).map(|m| m.same_set(&median, tau)).unwrap_or(false)
    });

    let center_points: Vec<(String, Point)> = builtins_for(4)
        .iter()
        .filter_map(|g| coordinate_map(g, p).ok().map(|e| (e.name, e.point)))
        .collect();
    let centers_coincide = center_points.iter().all(|(_, q)| q.distance(center) <= tau);

    Ok(RectangleReport {
        median,
        center,
        similarity_equivariant,
        relabel_invariant,
        centers_coincide,
        center_points,
    })
}
