//! Small dense linear algebra: row reduction with a relative pivot
//! threshold, rank, null spaces and consistent-system solving.
//!
//! Matrices are `Vec<Vec<f64>>` in row-major order. Sizes here are tiny
//! (n ≤ a few dozen), so clarity wins over blocking or cache tricks.

pub type Matrix = Vec<Vec<f64>>;

/// Reduced row echelon form of a matrix.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rows: Matrix,
    /// Pivot column of each leading row.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn max_abs(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Gauss–Jordan elimination with partial pivoting. A column yields a pivot
/// only if its best candidate exceeds `rel_tol * max|entry|`; anything smaller
/// is flushed to zero.
pub fn rref(m: &[Vec<f64>], rel_tol: f64) -> Rref {
    let mut rows: Matrix = m.to_vec();
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let threshold = rel_tol * max_abs(&rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let (best, best_val) = (r..n_rows)
            .map(|i| (i, rows[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_val <= threshold || best_val == 0.0 {
            for row in rows.iter_mut().skip(r) {
                row[c] = 0.0;
            }
            continue;
        }
        rows.swap(r, best);
        let inv = 1.0 / rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
                row[c] = 0.0;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { rows, pivots }
}

pub fn rank(m: &[Vec<f64>], rel_tol: f64) -> usize {
    rref(m, rel_tol).rank()
}

/// Basis of `{x : M x = 0}`, one vector per free column.
pub fn null_space(m: &[Vec<f64>], n_cols: usize, rel_tol: f64) -> Matrix {
    if m.is_empty() {
        return (0..n_cols)
            .map(|j| (0..n_cols).map(|k| if k == j { 1.0 } else { 0.0 }).collect())
            .collect();
    }
    let red = rref(m, rel_tol);
    let free: Vec<usize> = (0..n_cols).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0.0; n_cols];
            x[f] = 1.0;
            for (r, &p) in red.pivots.iter().enumerate() {
                x[p] = -red.rows[r][f];
            }
            x
        })
        .collect()
}

/// Solution set of a consistent linear system: `particular + span(null_basis)`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub particular: Vec<f64>,
    pub null_basis: Matrix,
}

/// Solve `A x = b`. Returns `None` when the system is inconsistent, that is
/// when the augmented matrix has a larger numerical rank.
pub fn solve(a: &[Vec<f64>], b: &[f64], rel_tol: f64) -> Option<Solution> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let n_cols = a.first().map_or(0, Vec::len);
    if !is_consistent(a, b, rel_tol) {
        return None;
    }
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let red = rref(&aug, rel_tol);
    let mut particular = vec![0.0; n_cols];
    for (r, &p) in red.pivots.iter().enumerate() {
        if p < n_cols {
            particular[p] = red.rows[r][n_cols];
        }
    }
    Some(Solution { particular, null_basis: null_space(a, n_cols, rel_tol) })
}

/// Rank test: `rank(A) == rank([A | b])`.
pub fn is_consistent(a: &[Vec<f64>], b: &[f64], rel_tol: f64) -> bool {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    // Both ranks must use the same scale reference.
    let scale = max_abs(&aug);
    let tol_a = if max_abs(a) > 0.0 { rel_tol * scale / max_abs(a) } else { rel_tol };
    rank(a, tol_a) == rank(&aug, rel_tol)
}

/// Orthonormal basis of the row space (modified Gram–Schmidt).
pub fn orthonormal_rows(m: &[Vec<f64>], rel_tol: f64) -> Matrix {
    let scale = m.iter().map(|r| norm(r)).fold(0.0, f64::max);
    let mut basis: Matrix = Vec::new();
    for row in m {
        let mut v = row.clone();
        for b in &basis {
            let d = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let len = norm(&v);
        if len > rel_tol * scale && len > 0.0 {
            basis.push(v.into_iter().map(|x| x / len).collect());
        }
    }
    basis
}

/// Frobenius distance between the orthogonal projectors onto the row spaces
/// of `a` and `b`. Zero iff the row spaces coincide.
pub fn subspace_distance(a: &[Vec<f64>], b: &[Vec<f64>], rel_tol: f64) -> f64 {
    let n = a.first().or(b.first()).map_or(0, Vec::len);
    let pa = projector(&orthonormal_rows(a, rel_tol), n);
    let pb = projector(&orthonormal_rows(b, rel_tol), n);
    pa.iter()
        .flatten()
        .zip(pb.iter().flatten())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn projector(basis: &[Vec<f64>], n: usize) -> Matrix {
    let mut p = vec![vec![0.0; n]; n];
    for b in basis {
        for i in 0..n {
            for j in 0..n {
                p[i][j] += b[i] * b[j];
            }
        }
    }
    p
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, x)).collect()
}
