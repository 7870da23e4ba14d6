//! Plane primitives: points, labelled polygons, distance matrices, the
//! dihedral relabelling group and similarity transforms.
//!
//! Vertex indices are 0-based in code. Documentation that mentions `V_1..V_n`
//! refers to indices `0..n-1`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("polygons have different vertex counts ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("no isometry maps the first polygon onto the second")]
    NoIsometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vector {
    pub dx: f64,
    pub dy: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn to_vector(self) -> Vector {
        Vector::new(self.x, self.y)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Vector {
    pub const ZERO: Vector = Vector { dx: 0.0, dy: 0.0 };

    pub const fn new(dx: f64, dy: f64) -> Self {
        Vector { dx, dy }
    }

    pub fn norm(self) -> f64 {
        self.dx.hypot(self.dy)
    }

    pub fn dot(self, other: Vector) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vector) -> f64 {
        self.dx * other.dy - self.dy * other.dx
    }

    pub fn normalized(self) -> Option<Vector> {
        let len = self.norm();
        (len > 0.0 && len.is_finite()).then(|| self * (1.0 / len))
    }

    pub fn perp(self) -> Vector {
        Vector::new(-self.dy, self.dx)
    }

    pub fn angle(self) -> f64 {
        self.dy.atan2(self.dx)
    }

    /// Flip the sign so the first non-negligible component is positive.
    pub fn canonical_sign(self) -> Vector {
        let eps = 1e-12 * self.norm();
        if self.dx > eps || (self.dx.abs() <= eps && self.dy > 0.0) {
            self
        } else {
            -self
        }
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<[f64; 2]> for Vector {
    fn from([dx, dy]: [f64; 2]) -> Self {
        Vector { dx, dy }
    }
}

impl From<Vector> for [f64; 2] {
    fn from(v: Vector) -> Self {
        [v.dx, v.dy]
    }
}

impl Sub for Point {
    type Output = Vector;
    fn sub(self, rhs: Point) -> Vector {
        Vector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vector> for Point {
    type Output = Point;
    fn add(self, rhs: Vector) -> Point {
        Point::new(self.x + rhs.dx, self.y + rhs.dy)
    }
}

impl Sub<Vector> for Point {
    type Output = Point;
    fn sub(self, rhs: Vector) -> Point {
        Point::new(self.x - rhs.dx, self.y - rhs.dy)
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        Vector::new(self.dx + rhs.dx, self.dy + rhs.dy)
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        Vector::new(self.dx - rhs.dx, self.dy - rhs.dy)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, rhs: f64) -> Vector {
        Vector::new(self.dx * rhs, self.dy * rhs)
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector::new(-self.dx, -self.dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Affine combination `Σ w_k P_k`. The weights are expected to sum to one.
pub fn affine_point(points: &[Point], weights: &[f64]) -> Point {
    debug_assert_eq!(points.len(), weights.len());
    let (x, y) = points
        .iter()
        .zip(weights)
        .fold((0.0, 0.0), |(x, y), (p, w)| (x + w * p.x, y + w * p.y));
    Point::new(x, y)
}

/// Twice the signed area of the triangle `abc`.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// A dihedral relabelling `α = ρ^r ∘ σ^s` of `{0, …, n-1}` where
/// `ρ(i) = i + 1` and `σ(i) = -i` (mod n). In 1-based terms
/// `σ(i) = n + 2 - i`, which fixes vertex 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralElement {
    pub n: usize,
    pub rotation: usize,
    pub reflected: bool,
}

impl DihedralElement {
    pub fn identity(n: usize) -> Self {
        DihedralElement { n, rotation: 0, reflected: false }
    }

    pub fn rho(n: usize) -> Self {
        DihedralElement { n, rotation: 1 % n, reflected: false }
    }

    pub fn sigma(n: usize) -> Self {
        DihedralElement { n, rotation: 0, reflected: true }
    }

    pub fn new(n: usize, rotation: usize, reflected: bool) -> Self {
        DihedralElement { n, rotation: rotation % n, reflected }
    }

    /// All `2n` elements: rotations first, then reflections.
    pub fn all(n: usize) -> impl Iterator<Item = DihedralElement> {
        [false, true]
            .into_iter()
            .flat_map(move |reflected| (0..n).map(move |r| DihedralElement::new(n, r, reflected)))
    }

    pub fn is_identity(&self) -> bool {
        self.rotation == 0 && !self.reflected
    }

    pub fn apply(&self, i: usize) -> usize {
        let n = self.n;
        let j = if self.reflected { (n - i % n) % n } else { i % n };
        (j + self.rotation) % n
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &DihedralElement) -> DihedralElement {
        assert_eq!(self.n, other.n, "dihedral elements of different order");
        let n = self.n;
        let shifted = if self.reflected { (n - other.rotation) % n } else { other.rotation };
        DihedralElement::new(n, self.rotation + shifted, self.reflected ^ other.reflected)
    }

    pub fn inverse(&self) -> DihedralElement {
        let n = self.n;
        let rotation = if self.reflected { self.rotation } else { (n - self.rotation) % n };
        DihedralElement::new(n, rotation, self.reflected)
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rotation, self.reflected) {
            (0, false) => write!(f, "id"),
            (r, false) => write!(f, "rho^{r}"),
            (0, true) => write!(f, "sigma"),
            (r, true) => write!(f, "rho^{r}*sigma"),
        }
    }
}

/// A plane similarity acting as `p ↦ t + s·R(θ)·F(p)`, where `F` is the
/// reflection `(x, y) ↦ (x, -y)` when `reflect` is set and the identity
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub scale: f64,
    pub rotation: f64,
    pub translation: Vector,
    pub reflect: bool,
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity { scale: 1.0, rotation: 0.0, translation: Vector::ZERO, reflect: false }
    }

    pub fn new(scale: f64, rotation: f64, translation: Vector, reflect: bool) -> Self {
        assert!(scale > 0.0 && scale.is_finite(), "similarity scale must be positive");
        Similarity { scale, rotation, translation, reflect }
    }

    pub fn scaling(scale: f64) -> Self {
        Similarity::new(scale, 0.0, Vector::ZERO, false)
    }

    pub fn rotation_about(center: Point, angle: f64) -> Self {
        let mut s = Similarity::new(1.0, angle, Vector::ZERO, false);
        s.translation = center - s.apply(center);
        s
    }

    pub fn translation(v: Vector) -> Self {
        Similarity::new(1.0, 0.0, v, false)
    }

    /// Linear part as a row-major 2×2 matrix.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (sin, cos) = self.rotation.sin_cos();
        let s = self.scale;
        if self.reflect {
            [[s * cos, s * sin], [s * sin, -s * cos]]
        } else {
            [[s * cos, -s * sin], [s * sin, s * cos]]
        }
    }

    pub fn apply_vector(&self, v: Vector) -> Vector {
        let m = self.matrix();
        Vector::new(m[0][0] * v.dx + m[0][1] * v.dy, m[1][0] * v.dx + m[1][1] * v.dy)
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::ORIGIN + self.apply_vector(p.to_vector()) + self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similarity) -> Similarity {
        let rotation =
            if self.reflect { self.rotation - other.rotation } else { self.rotation + other.rotation };
        Similarity {
            scale: self.scale * other.scale,
            rotation,
            translation: self.apply_vector(other.translation) + self.translation,
            reflect: self.reflect ^ other.reflect,
        }
    }

    pub fn inverse(&self) -> Similarity {
        let mut inv = Similarity {
            scale: 1.0 / self.scale,
            rotation: if self.reflect { self.rotation } else { -self.rotation },
            translation: Vector::ZERO,
            reflect: self.reflect,
        };
        inv.translation = -inv.apply_vector(self.translation);
        inv
    }

    /// True when the linear part is the identity, within `angle_tol` radians.
    pub fn is_translation(&self, angle_tol: f64) -> bool {
        let wrapped = (self.rotation + PI).rem_euclid(2.0 * PI) - PI;
        !self.reflect && wrapped.abs() <= angle_tol && (self.scale - 1.0).abs() <= angle_tol
    }
}

/// Hollow symmetric matrix of pairwise vertex distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Build from a row-major `n×n` slice. Does not validate metric axioms.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "distance matrix must be square");
            data.extend_from_slice(row);
        }
        DistanceMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `d_{ij}` with 0-based indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// `[d_{π(i)π(j)}]`.
    pub fn permuted(&self, perm: impl Fn(usize) -> usize) -> Self {
        let n = self.n;
        let idx: Vec<usize> = (0..n).map(perm).collect();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.get(idx[i], idx[j]));
            }
        }
        DistanceMatrix { n, data }
    }

    /// `[d_{ρ^k(i)ρ^k(j)}]`.
    pub fn shifted(&self, k: usize) -> Self {
        let n = self.n;
        self.permuted(|i| (i + k) % n)
    }

    /// `[d_{σ(i)σ(j)}]`.
    pub fn reflected(&self) -> Self {
        let sigma = DihedralElement::sigma(self.n);
        self.permuted(|i| sigma.apply(i))
    }

    pub fn relabelled(&self, alpha: &DihedralElement) -> Self {
        self.permuted(|i| alpha.apply(i))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        DistanceMatrix { n: self.n, data: self.data.iter().map(|d| d * factor).collect() }
    }

    pub fn max_abs_diff(&self, other: &DistanceMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn is_hollow_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0.0 && (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Largest violation of `d_ik <= d_ij + d_jk`, zero when the inequality holds.
    pub fn triangle_violation(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max(self.get(i, k) - self.get(i, j) - self.get(j, k));
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flatness {
    AllCoincident,
    FlatProper,
    NonFlat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub flatness: Flatness,
    /// Strictly convex: every turn has the same sign, none degenerate, and the
    /// boundary winds exactly once.
    pub convex: bool,
    /// Convex except for degenerate (collinear or repeated) consecutive
    /// vertices.
    pub weakly_convex: bool,
}

/// An ordered, labelled tuple of `n >= 3` plane points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct Polygon {
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    n: usize,
    vertices: Vec<Point>,
}

impl TryFrom<PolygonRepr> for Polygon {
    type Error = GeomError;

    fn try_from(repr: PolygonRepr) -> Result<Self, GeomError> {
        if repr.n != repr.vertices.len() {
            return Err(GeomError::InvalidPolygon(format!(
                "n = {} but {} vertices given",
                repr.n,
                repr.vertices.len()
            )));
        }
        Polygon::new(repr.vertices)
    }
}

impl From<Polygon> for PolygonRepr {
    fn from(p: Polygon) -> Self {
        PolygonRepr { n: p.vertices.len(), vertices: p.vertices }
    }
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::InvalidPolygon(format!("vertex {} is not finite", i + 1)));
        }
        Ok(Polygon { vertices })
    }

    /// Convenience constructor from coordinate pairs. Panics on invalid input.
    pub fn from_coords(coords: &[(f64, f64)]) -> Self {
        Polygon::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
            .expect("invalid polygon literal")
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.n()]
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].distance(v[j]));
            }
        }
        best
    }

    /// Absolute geometric tolerance `base * diameter`.
    pub fn tolerance(&self) -> f64 {
        tol::base() * self.diameter()
    }

    /// Vertex mean.
    pub fn centroid(&self) -> Point {
        let w = 1.0 / self.n() as f64;
        affine_point(&self.vertices, &vec![w; self.n()])
    }

    /// Length of the side from vertex `i` to vertex `i+1`.
    pub fn side(&self, i: usize) -> f64 {
        self.vertex(i).distance(self.vertex(i + 1))
    }

    pub fn sides(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.side(i)).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.sides().iter().sum()
    }

    /// Shoelace signed area, positive for counter-clockwise order.
    pub fn signed_area(&self) -> f64 {
        let n = self.n();
        0.5 * (0..n)
            .map(|i| {
                let (a, b) = (self.vertex(i), self.vertex(i + 1));
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.n();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = self.vertices[i].distance(self.vertices[j]);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        DistanceMatrix { n, data }
    }

    /// Vertex `i` of the result is vertex `α(i)` of `self`.
    pub fn relabel(&self, alpha: &DihedralElement) -> Polygon {
        assert_eq!(alpha.n, self.n(), "relabelling of the wrong order");
        Polygon { vertices: (0..self.n()).map(|i| self.vertices[alpha.apply(i)]).collect() }
    }

    pub fn transformed(&self, t: &Similarity) -> Polygon {
        Polygon { vertices: self.vertices.iter().map(|&p| t.apply(p)).collect() }
    }

    /// Signed turn at vertex `i`: cross product of incoming and outgoing edges.
    pub fn turn(&self, i: usize) -> f64 {
        let n = self.n();
        let prev = self.vertex(i + n - 1);
        let cur = self.vertex(i);
        let next = self.vertex(i + 1);
        (cur - prev).cross(next - cur)
    }

    pub fn classify(&self) -> Classification {
        let flatness = self.flatness();
        if flatness != Flatness::NonFlat {
            return Classification { flatness, convex: false, weakly_convex: false };
        }
        let n = self.n();
        let diam = self.diameter();
        let zero = tol::base() * diam * diam;
        let mut pos = 0;
        let mut neg = 0;
        let mut winding = 0.0;
        for i in 0..n {
            let t = self.turn(i);
            if t > zero {
                pos += 1;
            } else if t < -zero {
                neg += 1;
            }
            let a = self.vertex(i) - self.vertex(i + n - 1);
            let b = self.vertex(i + 1) - self.vertex(i);
            if a.norm() > 0.0 && b.norm() > 0.0 {
                winding += a.cross(b).atan2(a.dot(b));
            }
        }
        let winds_once = (winding.abs() - 2.0 * PI).abs() < 1e-6;
        let one_sided = pos == 0 || neg == 0;
        Classification {
            flatness,
            convex: winds_once && one_sided && pos + neg == n,
            weakly_convex: winds_once && one_sided,
        }
    }

    pub fn flatness(&self) -> Flatness {
        let scale = self.vertices.iter().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max);
        let diam = self.diameter();
        if diam <= tol::base() * scale {
            return Flatness::AllCoincident;
        }
        let (a, b) = self.diameter_pair();
        let axis = (b - a) * (1.0 / diam);
        let tau = tol::base() * diam;
        if self.vertices.iter().all(|&p| axis.cross(p - a).abs() <= tau) {
            Flatness::FlatProper
        } else {
            Flatness::NonFlat
        }
    }

    fn diameter_pair(&self) -> (Point, Point) {
        let v = &self.vertices;
        let mut best = (0.0, v[0], v[0]);
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let d = v[i].distance(v[j]);
                if d > best.0 {
                    best = (d, v[i], v[j]);
                }
            }
        }
        (best.1, best.2)
    }

    /// No three vertices (consecutive or not) lie on a common line.
    pub fn no_three_collinear(&self) -> bool {
        let v = &self.vertices;
        let diam = self.diameter();
        let zero = tol::base() * diam * diam;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    if orient(v[i], v[j], v[k]).abs() <= zero {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Find the isometry `T` (scale 1) with `T(p_i) = q_i` for every vertex.
///
/// Built from the first two separated vertices, then verified on all of them.
/// For flat `p` both orientations fit and the orientation-preserving one is
/// returned.
pub fn find_isometry(p: &Polygon, q: &Polygon) -> Result<Similarity, GeomError> {
    if p.n() != q.n() {
        return Err(GeomError::DimensionMismatch(p.n(), q.n()));
    }
    let tau = p.tolerance();
    if p.distance_matrix().max_abs_diff(&q.distance_matrix()) > tau {
        return Err(GeomError::NoIsometry);
    }
    let pv = p.vertices();
    let qv = q.vertices();
    let fits = |t: &Similarity| pv.iter().zip(qv).all(|(&a, &b)| t.apply(a).distance(b) <= tau);

    let Some(b) = (1..p.n()).find(|&i| pv[i].distance(pv[0]) > tau) else {
        let t = Similarity::translation(qv[0] - pv[0]);
        return if fits(&t) { Ok(t) } else { Err(GeomError::NoIsometry) };
    };
    let target = (qv[b] - qv[0]).angle();
    for reflect in [false, true] {
        let source = pv[b] - pv[0];
        let source = if reflect { Vector::new(source.dx, -source.dy) } else { source };
        let mut t = Similarity::new(1.0, target - source.angle(), Vector::ZERO, reflect);
        t.translation = qv[0] - t.apply(pv[0]);
        if fits(&t) {
            return Ok(t);
        }
    }
    Err(GeomError::NoIsometry)
}
