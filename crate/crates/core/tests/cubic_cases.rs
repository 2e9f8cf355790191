mod common;

use common::{brute_points, gradient_oracle, hypersurface, oracle_smooth, point};
use unirat_core::cubic::{
    classify, decompose_at_point, is_triple_point, smooth_from_double_point, triple_point_locus,
    CubicError, TheoremCase, Verdict, DEFAULT_CLASSIFY_BUDGET,
};
use unirat_core::points::{find_smooth_point, SmoothSearch, DEFAULT_SCAN_BUDGET};
use unirat_core::rng::{seeded, DEFAULT_SEED};
use unirat_core::{ProjectivePoint, Ring};

#[test]
fn cone_in_p3_has_its_vertex_as_triple_point_locus() {
    let f = common::field("Q");
    let form = unirat_core::algebra::parse_poly_in(
        &f,
        &unirat_core::algebra::Variables::indexed("x", 4),
        "x0^3+x1^3+x2^3",
    )
    .unwrap();
    let x = unirat_core::CubicHypersurface::new(form).unwrap();
    let basis = triple_point_locus(&x).unwrap();
    assert_eq!(basis.len(), 1);
    let vertex = ProjectivePoint::new(&f, basis[0].clone()).unwrap();
    assert_eq!(vertex, point(&x, &[0, 0, 0, 1]));
    // translating F to the vertex leaves only a cubic part
    assert!(is_triple_point(&x, vertex.coords()));
    let report = classify(&x, DEFAULT_CLASSIFY_BUDGET).unwrap();
    assert!(report.is_cone);
    assert_eq!(report.case, TheoremCase::Cone);
}

#[test]
fn smooth_surfaces_have_no_triple_points() {
    for (fd, form) in [
        ("Q", "x0^3+x1^3+x2^3+x3^3"),
        ("Q", "x0^2*x3+x1^3+x2^3+x3^3"),
        ("F2", "x0^3+x1^3+x2^3+x3^3"),
        ("F7", "x0*x1*x2+x1^3+x2^3+x3^3"),
    ] {
        let x = hypersurface(fd, form);
        assert!(triple_point_locus(&x).unwrap().is_empty(), "{fd} {form}");
    }
}

#[test]
fn char3_fermat_is_a_triple_plane() {
    let x = hypersurface("F3", "x0^3+x1^3+x2^3+x3^3");
    // (x0+x1+x2+x3)^3 in characteristic 3: every point of the plane is triple
    let basis = triple_point_locus(&x).unwrap();
    assert_eq!(basis.len(), 3);
    for p in brute_points(&x) {
        assert!(is_triple_point(&x, p.coords()));
        assert!(!oracle_smooth(&x, &p));
    }
    match find_smooth_point(&x, DEFAULT_SCAN_BUDGET).unwrap() {
        SmoothSearch::AllSingular { singular } => assert_eq!(singular, 13),
        other => panic!("expected all-singular, got {other:?}"),
    }
}

#[test]
fn classification_over_finite_fields_counts_points() {
    let x = hypersurface("F2", "x0^3+x1^3+x2^3+x3^3");
    let r = classify(&x, DEFAULT_CLASSIFY_BUDGET).unwrap();
    assert_eq!(r.point_count, Some(7));
    assert_eq!(r.singular_count, Some(0));
    assert_eq!(r.nonnormal, Verdict::Normal);
    assert_eq!(r.case, TheoremCase::SmoothPoint);
    assert_eq!(r.smooth_point_total, 7);
}

#[test]
fn classification_over_q_finds_small_smooth_points() {
    let x = hypersurface("Q", "x0^3+x1^3+x2^3+x3^3");
    let r = classify(&x, DEFAULT_CLASSIFY_BUDGET).unwrap();
    assert_eq!(r.case, TheoremCase::SmoothPoint);
    assert!(r.smooth_points_found.contains(&point(&x, &[1, -1, 0, 0])));
    for p in &r.smooth_points_found {
        assert!(oracle_smooth(&x, p));
    }
}

#[test]
fn pointed_decomposition_at_a_smooth_point() {
    let x = hypersurface("Q", "x0^3+x1^3+x2^3+x3^3");
    let d = decompose_at_point(&x, &point(&x, &[1, -1, 0, 0])).unwrap();
    assert!(!d.singular);
    assert_eq!(d.linear.total_degree(), 1);
    assert!(d.quadratic.is_homogeneous() && d.quadratic.total_degree() == 2);
    assert!(d.cubic.is_homogeneous() && d.cubic.total_degree() == 3);
    // the decomposition is the form in the pointed frame
    let back = d.recompose(x.form().vars()).unwrap();
    let ratio = x.form().leading_coeff();
    let f = x.field();
    let scaled = back.scale(&f.div(&ratio, &back.leading_coeff()).unwrap());
    assert_eq!(&scaled, x.form());
}

#[test]
fn gradient_oracle_agrees_with_symbolic_gradient() {
    let x = hypersurface("Q", "x0^2*x3+x1^3+2*x2^3-x3^3+x0*x1*x2");
    let p = [3i64, -1, 2, 5].map(|c| x.field().from_i64(c));
    assert_eq!(gradient_oracle(x.form(), &p), x.gradient_at(&p));
}

/// Double points (nodes or worse) over `Q` and `F5`, each upgraded to a
/// smooth point checked by the substitution oracle.
#[test]
fn double_points_upgrade_to_smooth_points() {
    let fixtures: [(&str, &str, [i64; 4]); 5] = [
        ("Q", "x0*x1*x2+x1^3+x2^3+x3^3", [1, 0, 0, 0]),
        ("Q", "x0*(x1^2-x2*x3)+x1^3+x2^3+x3^3", [1, 0, 0, 0]),
        ("Q", "x0*(x1*x2+x3^2)+x1^3+x2^3", [1, 0, 0, 0]),
        ("F5", "x0*x1*x2+x1^3+x2^3+x3^3", [1, 0, 0, 0]),
        ("F5", "x0*(x1^2+2*x2^2+3*x3^2)+x1^3+x2*x3^2", [1, 0, 0, 0]),
    ];
    for (fd, form, p) in fixtures {
        let x = hypersurface(fd, form);
        let p = point(&x, &p);
        assert!(x.contains(&p).unwrap());
        assert!(
            !oracle_smooth(&x, &p),
            "{form}: fixture point must be singular"
        );
        let mut rng = seeded(DEFAULT_SEED);
        let q = smooth_from_double_point(&x, &p, &mut rng, DEFAULT_CLASSIFY_BUDGET).unwrap();
        assert!(oracle_smooth(&x, &q), "{fd} {form}: {q:?}");
        assert_ne!(q, p);
    }
}

#[test]
fn triple_points_cannot_be_upgraded() {
    let x = hypersurface("Q", "x1^3+x2^3+x3^3+x1*x2*x3");
    let p = point(&x, &[1, 0, 0, 0]);
    let mut rng = seeded(DEFAULT_SEED);
    assert_eq!(
        smooth_from_double_point(&x, &p, &mut rng, 1000),
        Err(CubicError::TriplePoint)
    );
}

#[test]
fn malformed_forms_are_rejected() {
    let f = common::field("Q");
    for form in ["x0^2+x1^2", "x0^3+x1", "0"] {
        let p = unirat_core::algebra::parse_poly(&f, form).unwrap();
        assert_eq!(
            unirat_core::CubicHypersurface::new(p),
            Err(CubicError::NotACubicForm),
            "{form}"
        );
    }
}
