mod common;

use common::{field, hypersurface, point};
use unirat_core::algebra::{parse_poly, Algebra, Variables};
use unirat_core::segre::{
    build_psi, dominance_rank, psi_var_index, psi_variables, slice_to_dim, verify_psi,
    weil_restrict, weil_variables, MultiplicationTable, SegreError, VerifyMethod, VerifyMode,
    EXPANSION_TERM_LIMIT, MODULAR_PRIMES,
};
use unirat_core::{CubicHypersurface, MultiPoly, ProjectivePoint, PsiMap, Ring, Scalar};

fn build_checked(x: &CubicHypersurface, p: &ProjectivePoint) -> PsiMap {
    let psi = build_unconjugated(x, p);
    let (conj, ctrace) = build_psi(x, p, true).unwrap();
    assert!(ctrace.conjugated);
    assert_eq!(conj, psi, "conjugate root gives the same map");
    psi
}

fn build_unconjugated(x: &CubicHypersurface, p: &ProjectivePoint) -> PsiMap {
    let (psi, trace) = build_psi(x, p, false).unwrap();
    let n = x.dimension();
    assert_eq!(psi.num_inputs(), 3 * n - 2);
    assert_eq!(psi.numerators().len(), n + 1);
    let ids = trace.check_identities().unwrap();
    assert!(ids.all(), "{ids:?}");
    if n == 2 {
        assert_eq!(trace.lambda3().unwrap(), trace.lambda3_vieta().unwrap());
    }
    verify_psi(x, &psi, VerifyMode::Exact).unwrap();
    let rank = dominance_rank(&psi, 7).unwrap();
    assert_eq!(rank.rank, n);
    assert!(rank.is_full());
    psi
}

#[test]
fn input_variables_follow_the_u_v_w_convention() {
    let names = psi_variables(3);
    assert_eq!(names.names(), ["u1", "u2", "u3", "v1", "v2", "w1", "w2"]);
    assert_eq!(psi_var_index(3, 'v', 2), Some(4));
    assert_eq!(psi_var_index(3, 'w', 3), None);
}

#[test]
fn fermat_surface_over_f7() {
    let x = hypersurface("F7", "x0^3+x1^3+x2^3+x3^3");
    build_checked(&x, &point(&x, &[1, -1, 0, 0]));
}

#[test]
fn nonsplit_tangent_cone_over_q() {
    // smooth: the partials 2x0x3, 3x1^2+2x1x2... vanish together only at 0
    let x = hypersurface("Q", "x0^2*x3+x1^2*x2+x2^3+x3^3");
    let psi = build_checked(&x, &point(&x, &[0, 1, 0, 0]));
    let m = verify_psi(&x, &psi, VerifyMode::Modular).unwrap();
    assert_eq!(m.primes.len(), MODULAR_PRIMES.len());
}

#[test]
fn sparse_threefold_over_f5() {
    let x = hypersurface("F5", "x0^2*x4+x1^3+x2^3+x3^3+x4^3");
    let psi = build_unconjugated(&x, &point(&x, &[1, 0, 0, 0, 0]));
    assert_eq!(psi.num_inputs(), 7);
}

#[test]
fn every_specialization_lands_on_x() {
    let x = hypersurface("F7", "x0^2*x3+x1^2*x2+x2^3+x3^3");
    let f = x.field().clone();
    let psi = build_checked(&x, &point(&x, &[0, 1, 0, 0]));
    let mut hits = 0;
    for code in 0..7u64.pow(4) {
        let s: Vec<Scalar> = (0..4).map(|i| f.element(code / 7u64.pow(i) % 7)).collect();
        if let Some(v) = psi.eval_ambient(&s) {
            assert!(f.is_zero(&x.form().eval(&v)));
            hits += 1;
        }
    }
    assert!(hits > 0);
}

#[test]
fn corrupted_maps_fail_verification() {
    // the line x0 = -x1, x2 = -x3 on the Fermat cubic, checked by expansion
    let x = hypersurface("Q", "x0^3+x1^3+x2^3+x3^3");
    let f = x.field().clone();
    let s = Variables::indexed("s", 1);
    let c = |k: i64| MultiPoly::constant(f.clone(), s.clone(), f.from_i64(k));
    let t = MultiPoly::var(f.clone(), s.clone(), 0);
    let identity: Vec<Vec<Scalar>> = (0..4)
        .map(|i| (0..4).map(|j| f.from_i64((i == j) as i64)).collect())
        .collect();
    let line = |last: MultiPoly| {
        PsiMap::new(
            f.clone(),
            vec![c(-1), t.clone(), last],
            c(1),
            identity.clone(),
            point(&x, &[1, -1, 0, 0]),
        )
        .unwrap()
    };
    let good = verify_psi(&x, &line(t.neg()), VerifyMode::Exact).unwrap();
    assert_eq!(good.method, VerifyMethod::Expansion);
    assert!(matches!(
        verify_psi(&x, &line(t.clone()), VerifyMode::Exact),
        Err(SegreError::VerificationFailed(_))
    ));

    let x = hypersurface("F7", "x0^3+x1^3+x2^3+x3^3");
    let (psi, _) = build_psi(&x, &point(&x, &[1, -1, 0, 0]), false).unwrap();
    assert!(psi.total_terms() > EXPANSION_TERM_LIMIT);
    let ok = verify_psi(&x, &psi, VerifyMode::Exact).unwrap();
    assert_eq!(ok.method, VerifyMethod::LineCertificate);
    let mut cert = psi.certificate().unwrap().clone();
    cert.b = cert.b.add(&cert.b.one_like());
    let forged = psi.clone().with_certificate(cert).unwrap();
    assert!(matches!(
        verify_psi(&x, &forged, VerifyMode::Exact),
        Err(SegreError::VerificationFailed(_))
    ));
    // the certificate is checked against the hypersurface it is given
    let other = hypersurface("F7", "x0^3+x1^3+x2^3+2*x3^3");
    let err = verify_psi(&other, &psi, VerifyMode::Exact).unwrap_err();
    assert!(matches!(err, SegreError::VerificationFailed(_)), "{err:?}");
}

#[test]
fn refusals() {
    let cone = {
        let f = field("Q");
        let form =
            unirat_core::algebra::parse_poly_in(&f, &Variables::indexed("x", 4), "x0^3+x1^3+x2^3")
                .unwrap();
        CubicHypersurface::new(form).unwrap()
    };
    let err = build_psi(&cone, &point(&cone, &[1, -1, 0, 0]), false).unwrap_err();
    assert_eq!(err, SegreError::ConeInput);

    let nodal = hypersurface("Q", "x0*x1*x2+x1^3+x2^3+x3^3");
    let err = build_psi(&nodal, &point(&nodal, &[1, 0, 0, 0]), false).unwrap_err();
    assert_eq!(err, SegreError::NotSmooth);

    let x = hypersurface("Q", "x0^3+x1^3+x2^3+x3^3");
    let err = build_psi(&x, &point(&x, &[1, 1, 0, 0]), false).unwrap_err();
    assert_eq!(err, SegreError::PointNotOnHypersurface);
}

#[test]
fn slicing_over_a_finite_field() {
    let x = hypersurface("F7", "x0^3+x1^3+x2^3+x3^3");
    let (psi, _) = build_psi(&x, &point(&x, &[1, -1, 0, 0]), false).unwrap();
    let s = slice_to_dim(&psi, 11).unwrap();
    assert_eq!(s.map.num_inputs(), 2);
    assert!(s.rank.is_full());
    assert!(s.attempts <= unirat_core::segre::SLICE_RETRIES);
    verify_psi(&x, &s.map, VerifyMode::Exact).unwrap();
}

#[test]
fn weil_restriction_worked_example() {
    let f4 = field("F4");
    let eq = parse_poly(&f4, "x^2+x+w").unwrap();
    let w = f4.generator().unwrap();
    let table = MultiplicationTable::from_basis(&f4, vec![f4.one(), w.clone()]).unwrap();
    let comps = weil_restrict(std::slice::from_ref(&eq), &table).unwrap();
    let f2 = field("F2");
    let y = weil_variables(1, 2);
    let expected = [
        unirat_core::algebra::parse_poly_in(&f2, &y, "y1^2+y2^2+y1").unwrap(),
        unirat_core::algebra::parse_poly_in(&f2, &y, "y2^2+y2+1").unwrap(),
    ];
    assert_eq!(comps, expected);
    // bijection between roots over F4 and common zeros over F2
    for a in f2.elements() {
        for b in f2.elements() {
            let x = f4.add(&a, &f4.mul(&b, &w));
            let over_l = f4.is_zero(&eq.eval(&[x]));
            let over_k = comps
                .iter()
                .all(|c| f2.is_zero(&c.eval(&[a.clone(), b.clone()])));
            assert_eq!(over_l, over_k);
        }
    }
}

#[test]
fn weil_restriction_of_affine_space_has_d_times_n_variables() {
    for (ext, d) in [("F4", 2usize), ("F9", 2), ("F8", 3), ("F27", 3)] {
        let l = field(ext);
        let w = l.generator().unwrap();
        let basis: Vec<Scalar> = (0..d).map(|k| l.pow(&w, k as u64)).collect();
        let table = MultiplicationTable::from_basis(&l, basis).unwrap();
        assert_eq!(table.degree(), d);
        for n in 1..=3 {
            let vars = Variables::indexed("x", n);
            let eq = MultiPoly::var(l.clone(), vars.clone(), n - 1).mul(&MultiPoly::var(
                l.clone(),
                vars,
                0,
            ));
            let out = weil_restrict(&[eq], &table).unwrap();
            assert_eq!(out.len(), d);
            assert!(out.iter().all(|p| p.nvars() == d * n), "{ext} n={n}");
        }
    }
}

#[test]
fn weil_restriction_solution_sets_match_on_a_cubic() {
    let f4 = field("F4");
    let eq = parse_poly(&f4, "x0^3+w*x1^2*x0+x1+1").unwrap();
    let w = f4.generator().unwrap();
    let table =
        MultiplicationTable::from_basis(&f4, vec![f4.one(), f4.add(&w, &f4.one())]).unwrap();
    let comps = weil_restrict(std::slice::from_ref(&eq), &table).unwrap();
    let f2 = field("F2");
    let mut count = 0;
    for code in 0..16u64 {
        let ys: Vec<Scalar> = (0..4).map(|i| f2.element(code >> i & 1)).collect();
        let xs = [table.combine(&ys[0..2]), table.combine(&ys[2..4])];
        let over_l = f4.is_zero(&eq.eval(&xs));
        let over_k = comps.iter().all(|c| f2.is_zero(&c.eval(&ys)));
        assert_eq!(over_l, over_k);
        count += over_l as usize;
    }
    assert!(count > 0);
}
