mod common;

use proptest::prelude::*;

use polycenter::center::{builtin, builtins_for, coordinate_map, BUILTIN_NAMES};
use polycenter::corpus;
use polycenter::dsl::{evaluate, parse, BinOp, Expr};
use polycenter::geom::{DihedralElement, Flatness};
use polycenter::linalg;
use polycenter::lines::{contains, kimberling_line, line_through, realize, COMPLEMENT_PIVOT_TOL};
use polycenter::symmetry::{central_vectors, classify_trigon, fixed_set, symmetry_group};
use polycenter::tangential::{generate_tangential, incenter, incircle, tangent_lengths};
use polycenter::{Point, Polygon, Similarity, Vector};

fn polygon(min: usize, max: usize) -> impl Strategy<Value = Polygon> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), min..=max)
        .prop_map(|v| Polygon::from_coords(&v))
        .prop_filter("not degenerate", |p| p.flatness() == Flatness::NonFlat)
}

fn similarity() -> impl Strategy<Value = Similarity> {
    (0.1..10.0f64, -7.0..7.0f64, -20.0..20.0f64, -20.0..20.0f64, any::<bool>())
        .prop_map(|(s, a, x, y, r)| Similarity::new(s, a, Vector::new(x, y), r))
}

fn dihedral(n: usize) -> impl Strategy<Value = DihedralElement> {
    (0..n, any::<bool>()).prop_map(move |(r, f)| DihedralElement::new(n, r, f))
}

fn expr(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|v| Expr::Num(v as f64 / 8.0)),
        (1..=n, 1..=n).prop_map(|(i, j)| Expr::D(i, j)),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Sqrt(Box::new(e))),
            (inner.clone(), -3i32..4).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            (inner.clone(), inner, 0..4usize).prop_map(|(a, b, op)| {
                let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][op];
                Expr::Bin(op, Box::new(a), Box::new(b))
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relabelling_is_a_group_action(p in polygon(3, 8), a in 0..8usize, fa: bool, b in 0..8usize, fb: bool) {
        let n = p.n();
        let (alpha, beta) = (DihedralElement::new(n, a, fa), DihedralElement::new(n, b, fb));
        prop_assert_eq!(p.relabel(&alpha).relabel(&beta), p.relabel(&alpha.compose(&beta)));
        prop_assert_eq!(p.relabel(&alpha).relabel(&alpha.inverse()), p.clone());
    }

    #[test]
    fn distance_matrix_scales_with_similarity(p in polygon(3, 8), t in similarity()) {
        let d = p.distance_matrix().scaled(t.scale);
        let moved = p.transformed(&t).distance_matrix();
        prop_assert!(d.max_abs_diff(&moved) <= 1e-12 * t.scale * p.diameter());
        prop_assert!(moved.is_hollow_symmetric());
    }

    #[test]
    fn builtin_centers_are_centers(p in polygon(3, 8), t in similarity(), r in 0..8usize, f: bool) {
        let alpha = DihedralElement::new(p.n(), r, f);
        for g in builtins_for(p.n()) {
            let Ok(base) = coordinate_map(&g, &p) else { continue };
            let w = base.coefficients.weights();
            let s: f64 = w.iter().sum();
            // circumcenter weights blow up on thin triangles; errors scale with them
            let scale = w.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
            let moved = p.transformed(&t);
            let image = coordinate_map(&g, &moved).unwrap().point;
            prop_assert!(image.distance(t.apply(base.point)) <= 1e-8 * scale * moved.diameter(), "{}", g.name());
            let relabelled = coordinate_map(&g, &p.relabel(&alpha)).unwrap().point;
            prop_assert!(relabelled.distance(base.point) <= 1e-9 * scale * p.diameter(), "{}", g.name());
            prop_assert!((s - 1.0).abs() < 1e-12 * scale, "{}: sum {s}", g.name());
        }
    }

    #[test]
    fn realized_line_is_central(p in polygon(4, 8), t in similarity(), alpha in dihedral(8)) {
        let (g1, g2) = (builtin("centroid").unwrap(), builtin("boundary_centroid").unwrap());
        let Ok(line) = kimberling_line(&g1, &g2, &p) else { return Ok(()) };
        prop_assert_eq!(linalg::rank(&line.stacked(), COMPLEMENT_PIVOT_TOL), p.n() - 1);
        let set = realize(&line, &p).unwrap();

        let e1 = coordinate_map(&g1, &p).unwrap();
        let e2 = coordinate_map(&g2, &p).unwrap();
        prop_assert!(contains(&line, &p, &e1.coefficients));
        prop_assert!(contains(&line, &p, &e2.coefficients));
        let tau = p.tolerance();
        if e1.point.distance(e2.point) > 1e-6 * p.diameter() {
            prop_assert!(set.same_set(&line_through(e1.point, e2.point, tau), 1e-9 * p.diameter()));
        }

        let moved = p.transformed(&t);
        let moved_set = realize(&kimberling_line(&g1, &g2, &moved).unwrap(), &moved).unwrap();
        prop_assert!(moved_set.same_set(&set.transformed(&t), 1e-8 * moved.diameter()));

        let alpha = DihedralElement::new(p.n(), alpha.rotation, alpha.reflected);
        let q = p.relabel(&alpha);
        let relabelled = realize(&kimberling_line(&g1, &g2, &q).unwrap(), &q).unwrap();
        prop_assert!(relabelled.same_set(&set, 1e-8 * p.diameter()));
    }

    #[test]
    fn print_then_parse_is_identity(e in expr(5)) {
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed, 5).unwrap(), e);
    }

    #[test]
    fn shifted_expression_equals_shifted_matrix(e in expr(4), p in polygon(4, 4), k in 0..4usize) {
        let d = p.distance_matrix();
        let a = evaluate(&e, &d.shifted(k));
        let b = evaluate(&e.shift_indices(k, 4), &d);
        match (a, b) {
            (Ok(x), Ok(y)) => prop_assert!(x == y || (x.is_nan() && y.is_nan())),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn symmetry_group_order_is_similarity_invariant(seed: u64, t in similarity()) {
        let mut rng = corpus::rng(seed);
        let p = corpus::symmetry_corpus(&mut rng, 1).remove(0);
        let a = symmetry_group(&p).unwrap();
        let b = symmetry_group(&p.transformed(&t)).unwrap();
        prop_assert_eq!(a.order(), b.order());
        prop_assert!((2 * p.n()).is_multiple_of(a.order()));
        let set = fixed_set(&a);
        for g in builtins_for(p.n()) {
            if let Ok(e) = coordinate_map(&g, &p) {
                prop_assert!(set.distance_to(e.point) <= a.tolerance, "{} off {:?}", g.name(), set);
            }
        }
    }

    #[test]
    fn central_vectors_separate_centers(seed: u64, n in 3..9usize, t in similarity(), r in 0..9usize, f: bool) {
        let mut rng = corpus::rng(seed);
        let p = corpus::random_convex_polygon(&mut rng, n);
        let report = central_vectors(&p).unwrap();
        let c = p.centroid();
        let tau = p.tolerance();
        let pts: Vec<Point> = report.vectors.iter().map(|v| c + v.vector).collect();
        for q in &pts {
            prop_assert!(q.distance(c) > tau);
        }
        if pts.len() == 2 {
            prop_assert!(common::triangle_area(c, pts[0], pts[1]) > tau * p.diameter());
        }
        let moved = central_vectors(&p.transformed(&t)).unwrap();
        prop_assert_eq!(moved.vectors.len(), report.vectors.len());
        for (a, b) in report.vectors.iter().zip(&moved.vectors) {
            prop_assert!((t.apply_vector(a.vector) - b.vector).norm() <= 1e-9 * t.scale * p.diameter());
        }
        let relabelled = central_vectors(&p.relabel(&DihedralElement::new(n, r, f))).unwrap();
        for (a, b) in report.vectors.iter().zip(&relabelled.vectors) {
            prop_assert!((a.vector - b.vector).norm() <= 1e-9 * p.diameter());
        }
    }

    #[test]
    fn trigon_classifications_agree(seed: u64) {
        let mut rng = corpus::rng(seed);
        for p in [corpus::random_triangle(&mut rng), corpus::random_isosceles(&mut rng), corpus::random_equilateral(&mut rng)] {
            prop_assert!(classify_trigon(&p).unwrap().agree());
        }
    }

    #[test]
    fn tangential_round_trip(seed: u64, n in 3..9usize, radius in 0.1..10.0f64) {
        let mut rng = corpus::rng(seed);
        let angles = corpus::random_angles(&mut rng, n, 0.1, 3.0);
        let p = generate_tangential(radius, &angles).unwrap();
        let inc = incircle(&p).unwrap();
        prop_assert!(inc.center.distance(Point::ORIGIN) <= 1e-9 * p.diameter());
        prop_assert!((inc.radius - radius).abs() <= 1e-9 * p.diameter());
        let x = tangent_lengths(&p, &inc).unwrap().x;
        let weight_sum: f64 = (0..n).map(|k| x[(k + n - 1) % n] + x[(k + 1) % n]).sum();
        prop_assert!((weight_sum - p.perimeter()).abs() <= p.tolerance());
        prop_assert!(incenter(&p).unwrap().point.distance(inc.center) <= p.tolerance());
    }

    #[test]
    fn incenter_is_a_center(seed: u64, n in 3..9usize, t in similarity(), r in 0..9usize, f: bool) {
        let mut rng = corpus::rng(seed);
        let p = corpus::random_tangential(&mut rng, n);
        let c = incenter(&p).unwrap().point;
        let moved = p.transformed(&t);
        prop_assert!(incenter(&moved).unwrap().point.distance(t.apply(c)) <= 1e-9 * moved.diameter());
        let q = p.relabel(&DihedralElement::new(n, r, f));
        prop_assert!(incenter(&q).unwrap().point.distance(c) <= 1e-9 * p.diameter());
    }
}

#[test]
fn every_builtin_is_symmetric_and_homogeneous() {
    use polycenter::center::{verify_homogeneity, verify_symmetry};
    for name in BUILTIN_NAMES {
        let g = builtin(name).unwrap();
        let n = g.domain().size.unwrap_or(6);
        let samples: Vec<Polygon> =
            corpus::verification_corpus(n, 77).into_iter().filter(|p| g.domain().contains(p)).collect();
        assert!(verify_symmetry(&g, &samples).passed(), "{name}");
        assert_eq!(verify_homogeneity(&g, &samples).unwrap(), g.degree().unwrap(), "{name}");
    }
}
