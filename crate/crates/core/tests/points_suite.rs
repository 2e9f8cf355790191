mod common;

use common::{brute_points, char2_suite, hypersurface, oracle_smooth, point};
use num_bigint::BigInt;
use num_rational::BigRational;
use unirat_core::points::{
    char2_point, char3_fixture_check, enumerate_lines, enumerate_points, find_smooth_point,
    generate_points, line_count, PointsError, SamplerConfig, SmoothSearch, DEFAULT_SCAN_BUDGET,
};
use unirat_core::segre::build_psi;
use unirat_core::{CubicHypersurface, MultiPoly, ProjectivePoint, Ring, Scalar};

const BUDGET: u64 = 10_000_000;

/// `x³ = x` on `F₂`, so the Fermat form is the plane `Σ x_i`.
fn fermat_f2_hand_count() -> u64 {
    2u64.pow(3) - 1
}

/// On `F₄^×` every cube is 1, so the Fermat form counts nonzero
/// coordinates mod 2: affine vectors with 2 or 4 nonzero entries, over the
/// 3 scalings.
fn fermat_f4_hand_count() -> u64 {
    (6 * 3u64.pow(2) + 3u64.pow(4)) / 3
}

#[test]
fn fermat_point_counts() {
    for (fd, expected) in [
        ("F2", fermat_f2_hand_count()),
        ("F4", fermat_f4_hand_count()),
    ] {
        let x = hypersurface(fd, "x0^3+x1^3+x2^3+x3^3");
        let census = enumerate_points(&x, BUDGET, 8).unwrap();
        assert_eq!(census.count, expected, "{fd}");
        assert_eq!(brute_points(&x).len() as u64, expected, "{fd}");
        assert_eq!(census.smooth, expected);
        assert_eq!(census.points.len(), 8.min(expected as usize));
    }
    assert_eq!(fermat_f2_hand_count(), 7);
    assert_eq!(fermat_f4_hand_count(), 45);
}

#[test]
fn census_matches_brute_force_on_singular_surfaces() {
    for (fd, form) in [
        ("F5", "x0*x1*x2+x1^3+x2^3+x3^3"),
        ("F3", "x0^3+x1^3+x2^3+x3^3"),
        ("F4", "x0*x1*x2+x3^3"),
    ] {
        let x = hypersurface(fd, form);
        let brute = brute_points(&x);
        let census = enumerate_points(&x, BUDGET, usize::MAX).unwrap();
        assert_eq!(census.count, brute.len() as u64, "{fd} {form}");
        let smooth = brute.iter().filter(|p| oracle_smooth(&x, p)).count() as u64;
        assert_eq!(census.smooth, smooth, "{fd} {form}");
        let mut listed = census.points.clone();
        let mut expected = brute;
        listed.sort_by_key(|p| format!("{p:?}"));
        expected.sort_by_key(|p| format!("{p:?}"));
        assert_eq!(listed, expected);
    }
}

#[test]
fn census_refuses_infinite_fields_and_large_scans() {
    let x = hypersurface("Q", "x0^3+x1^3+x2^3+x3^3");
    assert_eq!(enumerate_points(&x, BUDGET, 1), Err(PointsError::NotFinite));
    let x = hypersurface("F101", "x0^3+x1^3+x2^3+x3^3");
    assert!(matches!(
        enumerate_points(&x, 1000, 1),
        Err(PointsError::BudgetExceeded { budget: 1000, .. })
    ));
}

#[test]
fn lines_of_p3() {
    // (q² + 1)(q² + q + 1)
    assert_eq!(line_count(2), Some(35));
    assert_eq!(line_count(4), Some(357));
}

#[test]
fn lines_cover_the_fermat_surface_over_f2_and_f4() {
    for fd in ["F2", "F4"] {
        let x = hypersurface(fd, "x0^3+x1^3+x2^3+x3^3");
        let set = enumerate_lines(&x, BUDGET).unwrap();
        assert_eq!(set.coverage(), 1.0, "{fd}");
        assert!(set.lines.len() <= 27);
        for line in &set.lines {
            for p in &line.points {
                assert!(f_vanishes(&x, p));
            }
        }
    }
    let x = hypersurface("F4", "x0^3+x1^3+x2^3+x3^3");
    assert_eq!(enumerate_lines(&x, BUDGET).unwrap().lines.len(), 27);
}

fn f_vanishes(x: &CubicHypersurface, p: &ProjectivePoint) -> bool {
    x.field().is_zero(&x.form().eval(p.coords()))
}

#[test]
fn smooth_point_search_over_finite_fields() {
    let x = hypersurface("F2", "x0^3+x1^3+x2^3+x3^3");
    match find_smooth_point(&x, DEFAULT_SCAN_BUDGET).unwrap() {
        SmoothSearch::Found(p) => assert!(oracle_smooth(&x, &p)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn char2_points_are_smooth_and_separable() {
    let produced = char2_suite();
    assert!(produced >= 5, "only {produced} forms produced a point");
}

#[test]
fn char2_point_refuses_other_shapes() {
    let x = hypersurface("F2", "x0^3+x1^3+x2^3+x3^3");
    assert!(matches!(
        char2_point(&x, BUDGET),
        Err(PointsError::ShapeMismatch(_))
    ));
    let x = hypersurface("F3", "x0^2*x1+x2^3+x3^3+x1^3");
    assert!(matches!(
        char2_point(&x, BUDGET),
        Err(PointsError::WrongCharacteristic {
            expected: 2,
            got: 3
        })
    ));
}

#[test]
fn char3_listed_points_and_search() {
    let start = std::time::Instant::now();
    let report = char3_fixture_check(2).unwrap();
    assert!(start.elapsed().as_secs() < 10);
    assert_eq!(report.listed_points.len(), 3);
    assert!(report.listed_points.iter().all(|(_, on)| *on));
    assert_eq!(report.degree_bound, 2);
    // every h for each coprime pair (f, g)
    assert_eq!(report.searched, 27 * coprime_pairs_f3_deg2());
    assert!(report.solutions.is_empty());
}

/// Pairs in `F₃[t]` of degree at most 2 with `gcd = 1`: they must not
/// share a root in `F₃` nor be multiples of the same irreducible quadratic
/// (zero is a multiple of everything).
fn coprime_pairs_f3_deg2() -> u64 {
    let polys: Vec<[u64; 3]> = (0..27).map(|c| [c % 3, c / 3 % 3, c / 9]).collect();
    let at = |p: &[u64; 3], a: u64| (p[0] + p[1] * a + p[2] * a * a) % 3;
    let irreducible: Vec<&[u64; 3]> = polys
        .iter()
        .filter(|p| p[2] == 1 && (0..3).all(|a| at(p, a) != 0))
        .collect();
    assert_eq!(irreducible.len(), 3);
    let multiple_of =
        |f: &[u64; 3], p: &[u64; 3]| (0..3).any(|c| f.iter().zip(p).all(|(x, y)| *x == c * y % 3));
    let mut count = 0;
    for f in &polys {
        for g in &polys {
            let zero = |p: &[u64; 3]| p.iter().all(|&c| c == 0);
            if zero(f) && zero(g) {
                continue;
            }
            let root = (0..3).any(|a| at(f, a) == 0 && at(g, a) == 0);
            let quad = irreducible
                .iter()
                .any(|p| multiple_of(f, p) && multiple_of(g, p));
            if !root && !quad {
                count += 1;
            }
        }
    }
    count
}

/// `F(p)` over `Q` on integer coordinates, term by term.
fn form_at(form: &MultiPoly, p: &[BigRational]) -> BigRational {
    form.terms()
        .iter()
        .map(|(mono, c)| {
            let Scalar::Rational(c) = c else {
                unreachable!()
            };
            mono.exponents()
                .iter()
                .zip(p)
                .fold(c.clone(), |acc, (e, v)| {
                    acc * num_traits::pow(v.clone(), *e as usize)
                })
        })
        .fold(BigRational::from_integer(BigInt::from(0)), |a, b| a + b)
}

#[test]
fn generated_points_over_q_are_distinct_and_on_x() {
    let x = hypersurface("Q", "x0^2*x3+x1^2*x2+x2^3+x3^3");
    let (psi, _) = build_psi(&x, &point(&x, &[0, 1, 0, 0]), false).unwrap();
    let pts = generate_points(&x, &psi, 40, &SamplerConfig::default()).unwrap();
    assert_eq!(pts.len(), 40);
    for (i, p) in pts.iter().enumerate() {
        assert!(!pts[..i].contains(p));
        let coords: Vec<BigRational> = p
            .coords()
            .iter()
            .map(|c| match c {
                Scalar::Rational(r) => r.clone(),
                Scalar::Residue(_) => unreachable!(),
            })
            .collect();
        assert_eq!(
            form_at(x.form(), &coords),
            BigRational::from_integer(0.into())
        );
    }
    let again = generate_points(&x, &psi, 40, &SamplerConfig::default()).unwrap();
    assert_eq!(pts, again);
}

#[test]
fn tiny_fields_run_out_of_new_points() {
    let x = hypersurface("F2", "x0^3+x1^3+x2^3+x3^3");
    let (psi, _) = build_psi(&x, &point(&x, &[1, 1, 0, 0]), false).unwrap();
    let config = SamplerConfig {
        max_attempts: 500,
        ..SamplerConfig::default()
    };
    match generate_points(&x, &psi, 10, &config) {
        Err(PointsError::YieldTooLow {
            found,
            requested: 10,
            attempts: 500,
        }) => {
            assert!(found <= 7)
        }
        other => panic!("{other:?}"),
    }
}
