//! Seeded random polygon families used by the verifiers, the DSL compiler and
//! the test suites. Every generator takes the caller's RNG so sweeps are
//! reproducible from one seed.

use std::f64::consts::{PI, TAU};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{DihedralElement, Point, Polygon, Similarity, Vector};
use crate::tangential::generate_tangential;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The scalene convex quadrilateral (0,0),(4,0),(5,3),(1,2).
pub fn reference_quad() -> Polygon {
    Polygon::from_coords(&[(0.0, 0.0), (4.0, 0.0), (5.0, 3.0), (1.0, 2.0)])
}

/// Regular `n`-gon inscribed in the unit circle, first vertex at angle 0.
pub fn regular_polygon(n: usize) -> Polygon {
    let v = (0..n)
        .map(|k| {
            let a = TAU * k as f64 / n as f64;
            Point::new(a.cos(), a.sin())
        })
        .collect();
    Polygon::new(v).expect("n >= 3")
}

pub fn normalize_diameter(p: &Polygon) -> Polygon {
    p.transformed(&Similarity::scaling(1.0 / p.diameter()))
}

pub fn random_similarity(rng: &mut impl Rng) -> Similarity {
    Similarity::new(
        rng.gen_range(0.2..5.0),
        rng.gen_range(0.0..TAU),
        Vector::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)),
        rng.gen_bool(0.5),
    )
}

pub fn random_dihedral(rng: &mut impl Rng, n: usize) -> DihedralElement {
    DihedralElement::new(n, rng.gen_range(0..n), rng.gen_bool(0.5))
}

/// Sorted angles in `[0, 2π)` whose cyclic gaps all lie in `[min_gap, max_gap]`.
pub fn random_angles(rng: &mut impl Rng, n: usize, min_gap: f64, max_gap: f64) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        a.sort_by(f64::total_cmp);
        let ok = (0..n).all(|i| {
            let gap = if i + 1 == n { a[0] + TAU - a[i] } else { a[i + 1] - a[i] };
            (min_gap..=max_gap).contains(&gap)
        });
        if ok {
            return a;
        }
    }
}

/// Strictly convex `n`-gon: points on a random ellipse, counterclockwise,
/// placed by a random similarity. No three vertices are collinear.
pub fn random_convex_polygon(rng: &mut impl Rng, n: usize) -> Polygon {
    let angles = random_angles(rng, n, 0.3 / n as f64, PI * 0.95);
    let (a, b) = (1.0, rng.gen_range(0.3..1.0));
    let v = angles.iter().map(|t| Point::new(a * t.cos(), b * t.sin())).collect();
    Polygon::new(v).expect("n >= 3").transformed(&random_similarity(rng))
}

/// Independent uniform vertices in a square; usually non-convex for n > 3.
pub fn random_polygon(rng: &mut impl Rng, n: usize) -> Polygon {
    let v = (0..n).map(|_| Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Polygon::new(v).expect("n >= 3")
}

/// Distinct collinear vertices in random order along a random line.
pub fn random_flat_polygon(rng: &mut impl Rng, n: usize) -> Polygon {
    let origin = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let t = rng.gen_range(0.0..PI);
    let dir = Vector::new(t.cos(), t.sin());
    let v = (0..n).map(|_| origin + dir * rng.gen_range(-1.0..1.0)).collect();
    Polygon::new(v).expect("n >= 3")
}

/// Triangle with area at least 5% of `diameter²`.
pub fn random_triangle(rng: &mut impl Rng) -> Polygon {
    loop {
        let p = random_polygon(rng, 3);
        let d = p.diameter();
        if p.signed_area().abs() >= 0.05 * d * d {
            return p;
        }
    }
}

pub fn random_isosceles(rng: &mut impl Rng) -> Polygon {
    let h = loop {
        let h: f64 = rng.gen_range(0.2..4.0);
        if (h - 3f64.sqrt()).abs() > 0.05 {
            break h;
        }
    };
    let p = Polygon::from_coords(&[(-1.0, 0.0), (1.0, 0.0), (0.0, h)]);
    p.relabel(&random_dihedral(rng, 3)).transformed(&random_similarity(rng))
}

pub fn random_equilateral(rng: &mut impl Rng) -> Polygon {
    regular_polygon(3).relabel(&random_dihedral(rng, 3)).transformed(&random_similarity(rng))
}

/// Tangential `n`-gon about a circle of random radius, moved by a random
/// similarity.
pub fn random_tangential(rng: &mut impl Rng, n: usize) -> Polygon {
    let angles = random_angles(rng, n, 0.25 / n as f64 + 0.05, PI * 0.9);
    let r = rng.gen_range(0.5..2.0);
    generate_tangential(r, &angles).expect("admissible angles").transformed(&random_similarity(rng))
}

pub fn random_parallelogram(rng: &mut impl Rng) -> Polygon {
    loop {
        let u = Vector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let v = Vector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if u.cross(v).abs() < 0.2 * u.norm() * v.norm() || u.norm() < 0.2 || v.norm() < 0.2 {
            continue;
        }
        let a = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        return Polygon::new(vec![a, a + u, a + u + v, a + v]).expect("four vertices");
    }
}

/// Convex quadrilateral that is not a parallelogram, by a clear margin.
pub fn random_non_parallelogram(rng: &mut impl Rng) -> Polygon {
    loop {
        let p = random_convex_polygon(rng, 4);
        let d = p.distance_matrix();
        let gap = d.get(0, 3) + d.get(0, 1) - d.get(2, 1) - d.get(2, 3);
        if gap.abs() > 1e-3 * p.diameter() {
            return p;
        }
    }
}

/// Rectangle with side ratio at least 1.1, randomly placed.
pub fn random_rectangle(rng: &mut impl Rng) -> Polygon {
    let w = rng.gen_range(0.5..3.0);
    let h = loop {
        let h: f64 = rng.gen_range(0.5..3.0);
        if h.max(w) / h.min(w) > 1.1 {
            break h;
        }
    };
    let p = Polygon::from_coords(&[(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)]);
    p.relabel(&random_dihedral(rng, 4)).transformed(&random_similarity(rng))
}

/// Rhombus whose diagonals differ by at least 10%.
pub fn random_rhombus(rng: &mut impl Rng) -> Polygon {
    let a = rng.gen_range(0.5..3.0);
    let b = loop {
        let b: f64 = rng.gen_range(0.5..3.0);
        if b.max(a) / b.min(a) > 1.1 {
            break b;
        }
    };
    let p = Polygon::from_coords(&[(a, 0.0), (0.0, b), (-a, 0.0), (0.0, -b)]);
    p.relabel(&random_dihedral(rng, 4)).transformed(&random_similarity(rng))
}

/// Convex kite with a single mirror through vertices 1 and 3.
pub fn random_kite(rng: &mut impl Rng) -> Polygon {
    let c = rng.gen_range(2.0..5.0);
    let a = loop {
        let a: f64 = rng.gen_range(0.3..c - 0.3);
        if (a - 0.5 * c).abs() > 0.2 {
            break a;
        }
    };
    let b = rng.gen_range(0.5..2.0);
    let p = Polygon::from_coords(&[(0.0, 0.0), (a, -b), (c, 0.0), (a, b)]);
    p.transformed(&random_similarity(rng))
}

/// Polygons for numeric axiom checks: convex, non-convex and flat `n`-gons,
/// 100 in total. For `n = 4` the reference quadrilateral comes first.
pub fn verification_corpus(n: usize, seed: u64) -> Vec<Polygon> {
    let mut r = rng(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut out = Vec::with_capacity(100);
    if n == 4 {
        out.push(reference_quad());
    }
    while out.len() < 40 {
        out.push(random_convex_polygon(&mut r, n));
    }
    while out.len() < 80 {
        out.push(random_polygon(&mut r, n));
    }
    while out.len() < 100 {
        out.push(random_flat_polygon(&mut r, n));
    }
    out
}

/// Mixed corpus covering trivial, mirror and rotational symmetry.
pub fn symmetry_corpus(rng: &mut ChaCha8Rng, count: usize) -> Vec<Polygon> {
    type Gen = fn(&mut ChaCha8Rng) -> Polygon;
    let families: [Gen; 7] = [
        |r| regular_polygon(4).transformed(&random_similarity(r)),
        |r| random_rectangle(r),
        |r| random_isosceles(r),
        |r| random_kite(r),
        |r| {
            let n = r.gen_range(3..=8);
            regular_polygon(n).transformed(&random_similarity(r))
        },
        |r| {
            let n = r.gen_range(3..=8);
            random_polygon(r, n)
        },
        |r| random_rhombus(r),
    ];
    (0..count)
        .map(|_| {
            let f = families.choose(rng).expect("non-empty");
            f(rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Flatness;

    #[test]
    fn generators_respect_their_shapes() {
        let mut r = rng(1);
        for n in 3..=8 {
            let p = random_convex_polygon(&mut r, n);
            assert!(p.classify().convex && p.no_three_collinear());
            assert_eq!(random_flat_polygon(&mut r, n).flatness(), Flatness::FlatProper);
        }
        let p = random_parallelogram(&mut r);
        assert!(((p.vertex(1) - p.vertex(0)) - (p.vertex(2) - p.vertex(3))).norm() < 1e-12);
        let q = random_rhombus(&mut r);
        let s = q.sides();
        assert!(s.iter().all(|v| (v - s[0]).abs() < 1e-9 * q.diameter()));
    }

    #[test]
    fn same_seed_same_corpus() {
        assert_eq!(verification_corpus(5, 3), verification_corpus(5, 3));
        assert_eq!(verification_corpus(4, 0)[0], reference_quad());
        assert_eq!(verification_corpus(6, 0).len(), 100);
    }
}
