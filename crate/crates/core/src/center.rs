//! Center functions on distance matrices and the coordinate map that turns
//! them into polygon centers, plus the reverse direction: recovering affine
//! weights from any black-box center.
//!
//! A center function `g` is evaluated on the `n` cyclic shifts
//! `[d_{ρ^k(i)ρ^k(j)}]`; the k-th value, normalized by the sum, is the weight
//! of vertex `k`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{affine_point, orient, DistanceMatrix, Flatness, Point, Polygon, Vector};
use crate::tol;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CenterError {
    #[error("polygon is outside the domain of `{0}`")]
    OutOfDomain(String),
    #[error("center function `{0}` has a vanishing normalization on this polygon")]
    DegenerateNormalization(String),
    #[error("unknown center `{0}`")]
    UnknownName(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("affine weights must sum to 1 and match the centers ({0})")]
    BadWeights(String),
    #[error("no vertex triple admits a unique affine expression")]
    NoValidTriple,
    #[error("center of a flat polygon is off the vertex line")]
    PointOffLine,
    #[error("center function vanishes on sample {0}")]
    ZeroValue(usize),
    #[error("homogeneity degree is not a consistent integer: {0}")]
    Inconsistent(String),
}

/// Shape requirement of a center's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Any,
    NonFlat,
    Convex,
    ConvexNoThreeCollinear,
}

/// The polygon family a center is defined on. Closed under similarities and
/// relabellings by construction: every test below is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    /// Required vertex count, if any.
    pub size: Option<usize>,
    pub even_only: bool,
    pub shape: Shape,
}

impl Domain {
    pub const ANY: Domain = Domain { size: None, even_only: false, shape: Shape::Any };

    pub fn sized(n: usize, shape: Shape) -> Self {
        Domain { size: Some(n), even_only: false, shape }
    }

    pub fn contains(&self, p: &Polygon) -> bool {
        let n = p.n();
        if self.size.is_some_and(|s| s != n) || (self.even_only && !n.is_multiple_of(2)) {
            return false;
        }
        match self.shape {
            Shape::Any => true,
            Shape::NonFlat => p.flatness() == Flatness::NonFlat,
            Shape::Convex => p.classify().convex,
            Shape::ConvexNoThreeCollinear => p.classify().convex && p.no_three_collinear(),
        }
    }

    pub fn accepts_size(&self, n: usize) -> bool {
        !(self.size.is_some_and(|s| s != n) || (self.even_only && !n.is_multiple_of(2)))
    }
}

pub type Evaluator = Arc<dyn Fn(&DistanceMatrix) -> Result<f64, CenterError> + Send + Sync>;

/// A real function on distance matrices together with its name, declared
/// homogeneity degree and domain.
#[derive(Clone)]
pub struct CenterFunction {
    name: String,
    degree: Option<i32>,
    domain: Domain,
    evaluator: Evaluator,
}

impl fmt::Debug for CenterFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CenterFunction")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("domain", &self.domain)
            .finish()
    }
}

impl CenterFunction {
    pub fn new(
        name: impl Into<String>,
        degree: Option<i32>,
        domain: Domain,
        evaluator: impl Fn(&DistanceMatrix) -> Result<f64, CenterError> + Send + Sync + 'static,
    ) -> Self {
        CenterFunction { name: name.into(), degree, domain, evaluator: Arc::new(evaluator) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> Option<i32> {
        self.degree
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn eval(&self, d: &DistanceMatrix) -> Result<f64, CenterError> {
        (self.evaluator)(d)
    }

    /// `g` on each cyclic shift `[d_{ρ^k(i)ρ^k(j)}]`, `k = 0..n`.
    pub fn shift_values(&self, d: &DistanceMatrix) -> Result<Vec<f64>, CenterError> {
        (0..d.n()).map(|k| self.eval(&d.shifted(k))).collect()
    }
}

/// Affine weights `(λ_1, …, λ_n)` summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn new(weights: Vec<f64>) -> Result<Self, CenterError> {
        let sum: f64 = weights.iter().sum();
        let scale = weights.iter().map(|w| w.abs()).sum::<f64>().max(1.0);
        if weights.iter().any(|w| !w.is_finite()) || (sum - 1.0).abs() > 1e-12 * scale {
            return Err(CenterError::BadWeights(format!("weights sum to {sum}")));
        }
        Ok(CoefficientVector(weights))
    }

    pub fn uniform(n: usize) -> Self {
        CoefficientVector(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, p: &Polygon) -> Point {
        affine_point(p.vertices(), &self.0)
    }

    /// True if `self` and `other` are proportional within `rel_tol`.
    pub fn proportional_to(&self, other: &CoefficientVector, rel_tol: f64) -> bool {
        proportionality_gap(&self.0, &other.0) <= rel_tol
    }
}

/// Sine of the angle between two vectors (0 = proportional).
pub fn proportionality_gap(a: &[f64], b: &[f64]) -> f64 {
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
    (1.0 - d * d).max(0.0).sqrt()
}

/// A center value together with one coefficient representation of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterEvaluation {
    pub name: String,
    pub point: Point,
    #[serde(rename = "weights")]
    pub coefficients: CoefficientVector,
}

/// Map a polygon to its center under `g`: `λ_k = g(shift k) / Σ_j g(shift j)`.
pub fn coordinate_map(g: &CenterFunction, p: &Polygon) -> Result<CenterEvaluation, CenterError> {
    if !g.domain.contains(p) {
        return Err(CenterError::OutOfDomain(g.name.clone()));
    }
    let values = g.shift_values(&p.distance_matrix())?;
    let sum: f64 = values.iter().sum();
    let largest = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if largest == 0.0 || sum.abs() <= tol::base() * largest || !sum.is_finite() {
        return Err(CenterError::DegenerateNormalization(g.name.clone()));
    }
    let weights: Vec<f64> = values.iter().map(|v| v / sum).collect();
    let coefficients = CoefficientVector(weights);
    Ok(CenterEvaluation {
        name: g.name.clone(),
        point: coefficients.apply(p),
        coefficients,
    })
}

/// Names accepted by [`builtin`], in catalog order.
pub const BUILTIN_NAMES: [&str; 6] = [
    "centroid",
    "simple_center",
    "diagonal_crosspoint",
    "boundary_centroid",
    "triangle_incenter",
    "triangle_circumcenter",
];

/// Look up a built-in center function. A few short aliases are accepted
/// (`simple`, `crosspoint`, `incenter`, `circumcenter`, `boundary`).
pub fn builtin(name: &str) -> Result<CenterFunction, CenterError> {
    let canonical = match name {
        "simple" => "simple_center",
        "crosspoint" => "diagonal_crosspoint",
        "incenter" => "triangle_incenter",
        "circumcenter" => "triangle_circumcenter",
        "boundary" => "boundary_centroid",
        other => other,
    };
    let f = match canonical {
        "centroid" => CenterFunction::new("centroid", Some(0), Domain::ANY, |_| Ok(1.0)),
        "simple_center" => CenterFunction::new(
            "simple_center",
            Some(1),
            Domain { size: None, even_only: true, shape: Shape::Any },
            |d| Ok(d.get(0, d.n() / 2)),
        ),
        "diagonal_crosspoint" => CenterFunction::new(
            "diagonal_crosspoint",
            Some(2),
            Domain::sized(4, Shape::ConvexNoThreeCollinear),
            crosspoint_g,
        ),
        "boundary_centroid" => CenterFunction::new("boundary_centroid", Some(1), Domain::ANY, |d| {
            let n = d.n();
            Ok(0.5 * (d.get(n - 1, 0) + d.get(0, 1)))
        }),
        "triangle_incenter" => {
            CenterFunction::new("triangle_incenter", Some(1), Domain::sized(3, Shape::NonFlat), |d| {
                Ok(d.get(1, 2))
            })
        }
        "triangle_circumcenter" => CenterFunction::new(
            "triangle_circumcenter",
            Some(4),
            Domain::sized(3, Shape::NonFlat),
            |d| {
                let a2 = d.get(1, 2).powi(2);
                let b2 = d.get(0, 2).powi(2);
                let c2 = d.get(0, 1).powi(2);
                Ok(a2 * (b2 + c2 - a2))
            },
        ),
        _ => return Err(CenterError::UnknownName(name.to_string())),
    };
    Ok(f)
}

/// Built-ins whose domain admits `n`-gons.
pub fn builtins_for(n: usize) -> Vec<CenterFunction> {
    BUILTIN_NAMES
        .iter()
        .map(|name| builtin(name).expect("catalog name"))
        .filter(|g| g.domain.accepts_size(n))
        .collect()
}

/// `sqrt(r)` where `r` may dip below zero by round-off relative to `magnitude`.
fn clamped_sqrt(r: f64, magnitude: f64) -> Result<f64, CenterError> {
    if r >= 0.0 {
        Ok(r.sqrt())
    } else if -r <= tol::base() * magnitude {
        Ok(0.0)
    } else {
        Err(CenterError::Evaluation(format!("negative radicand {r}")))
    }
}

/// Diagonal crosspoint function: two Heron-type radicals over the triangle
/// `(V_2, V_3, V_4)`, homogeneous of degree 2.
fn crosspoint_g(d: &DistanceMatrix) -> Result<f64, CenterError> {
    let d34 = d.get(2, 3).powi(2);
    let d24 = d.get(1, 3).powi(2);
    let d23 = d.get(1, 2).powi(2);
    let first = 4.0 * d34 * d24 - (d34 + d24 - d23).powi(2);
    let second = 4.0 * d23 * d24 - (d23 + d24 - d34).powi(2);
    let mag = (d34 + d24 + d23).powi(2);
    Ok(clamped_sqrt(first, mag)? + clamped_sqrt(second, mag)?)
}

/// Outcome of checking `g([d_ij]) = g([d_{σ(i)σ(j)}])` on a sample set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub checked: usize,
    pub skipped: usize,
    /// Largest relative violation seen.
    pub max_violation: f64,
    /// Indices of failing samples (violations and evaluation errors).
    pub failures: Vec<usize>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_symmetry(g: &CenterFunction, samples: &[Polygon]) -> SymmetryReport {
    let mut report = SymmetryReport { checked: 0, skipped: 0, max_violation: 0.0, failures: Vec::new() };
    for (idx, p) in samples.iter().enumerate() {
        if !g.domain.contains(p) {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        let d = p.distance_matrix();
        match (g.eval(&d), g.eval(&d.reflected())) {
            (Ok(a), Ok(b)) => {
                let scale = a.abs().max(b.abs());
                let violation = if scale == 0.0 { 0.0 } else { (a - b).abs() / scale };
                report.max_violation = report.max_violation.max(violation);
                if violation > tol::base() {
                    report.failures.push(idx);
                }
            }
            _ => report.failures.push(idx),
        }
    }
    report
}

/// Estimate the homogeneity degree `m` from `g(λd) = λ^m g(d)` at `λ ∈ {2, 3}`.
pub fn verify_homogeneity(g: &CenterFunction, samples: &[Polygon]) -> Result<i32, CenterError> {
    let mut degree = None;
    for (idx, p) in samples.iter().enumerate() {
        let d = p.distance_matrix();
        let base = g.eval(&d)?;
        if base == 0.0 {
            return Err(CenterError::ZeroValue(idx));
        }
        for lambda in [2.0_f64, 3.0] {
            let ratio = g.eval(&d.scaled(lambda))? / base;
            if !(ratio > 0.0 && ratio.is_finite()) {
                return Err(CenterError::Inconsistent(format!(
                    "sample {idx}: scaling by {lambda} gives ratio {ratio}"
                )));
            }
            let m = ratio.ln() / lambda.ln();
            let rounded = m.round();
            if (m - rounded).abs() > 1e-6 {
                return Err(CenterError::Inconsistent(format!("sample {idx}: estimate {m}")));
            }
            let rounded = rounded as i32;
            match degree {
                None => degree = Some(rounded),
                Some(prev) if prev != rounded => {
                    return Err(CenterError::Inconsistent(format!("estimates {prev} and {rounded}")))
                }
                _ => {}
            }
        }
    }
    degree.ok_or_else(|| CenterError::Inconsistent("no samples".into()))
}

/// Recover affine weights for an arbitrary center value `Φ(P)`.
///
/// For every `k` whose consecutive triple `V_{k-1}, V_k, V_{k+1}` is
/// admissible, `Φ(P)` is written as a three-term affine combination of that
/// triple; the `r` local expressions are averaged. Non-flat polygons admit the
/// triples that are not collinear. Flat polygons admit the triples with a
/// unique solution under the extra constraint `μ_{k,k-1} = μ_{k,k+1}`, i.e.
/// where `V_{k-1} + V_{k+1} - 2V_k` does not vanish.
pub fn extract_center_function(
    center: impl Fn(&Polygon) -> Point,
    p: &Polygon,
) -> Result<CoefficientVector, CenterError> {
    let n = p.n();
    let flatness = p.flatness();
    if flatness == Flatness::AllCoincident {
        return Ok(CoefficientVector::uniform(n));
    }
    let target = center(p);
    let diam = p.diameter();
    let tau = tol::base() * diam;
    let mut sums = vec![0.0; n];
    let mut r = 0usize;
    for k in 0..n {
        let (ip, inx) = ((k + n - 1) % n, (k + 1) % n);
        let (a, b, c) = (p.vertex(ip), p.vertex(k), p.vertex(inx));
        let local = match flatness {
            Flatness::NonFlat => {
                let area = orient(a, b, c);
                if area.abs() <= tau * diam {
                    continue;
                }
                let wa = orient(target, b, c) / area;
                let wb = orient(a, target, c) / area;
                [wa, wb, 1.0 - wa - wb]
            }
            _ => {
                let w = (a - b) + (c - b);
                let len2 = w.dot(w);
                if len2.sqrt() <= tau {
                    continue;
                }
                let t = (target - b).dot(w) / len2;
                let rebuilt = b + w * t;
                if rebuilt.distance(target) > tau {
                    return Err(CenterError::PointOffLine);
                }
                [t, 1.0 - 2.0 * t, t]
            }
        };
        sums[ip] += local[0];
        sums[k] += local[1];
        sums[inx] += local[2];
        r += 1;
    }
    if r == 0 {
        return Err(CenterError::NoValidTriple);
    }
    let weights: Vec<f64> = sums.into_iter().map(|s| s / r as f64).collect();
    CoefficientVector::new(weights)
}

/// `Σ μ_i Φ_i` for centers evaluated on the same polygon.
pub fn affine_combination(
    centers: &[CenterEvaluation],
    mu: &[f64],
) -> Result<CenterEvaluation, CenterError> {
    if centers.is_empty() || centers.len() != mu.len() {
        return Err(CenterError::BadWeights(format!(
            "{} centers but {} weights",
            centers.len(),
            mu.len()
        )));
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(CenterError::BadWeights(format!("weights sum to {sum}")));
    }
    let n = centers[0].coefficients.len();
    if centers.iter().any(|c| c.coefficients.len() != n) {
        return Err(CenterError::BadWeights("centers come from polygons of different size".into()));
    }
    let mut point = Vector::ZERO;
    let mut weights = vec![0.0; n];
    for (c, &m) in centers.iter().zip(mu) {
        point = point + c.point.to_vector() * m;
        for (w, cw) in weights.iter_mut().zip(c.coefficients.weights()) {
            *w += m * cw;
        }
    }
    let name = centers
        .iter()
        .zip(mu)
        .map(|(c, m)| format!("{m}*{}", c.name))
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(CenterEvaluation {
        name,
        point: Point::ORIGIN + point,
        coefficients: CoefficientVector::new(weights)?,
    })
}
