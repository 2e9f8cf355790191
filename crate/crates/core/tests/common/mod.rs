//! Helpers shared by the integration tests, including oracles that avoid
//! the library code paths they check.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use unirat_core::algebra::{parse_field, parse_poly, Monomial, Variables};
use unirat_core::points::{char2_point, PointsError};
use unirat_core::{CubicHypersurface, Field, MultiPoly, ProjectivePoint, Ring, Scalar};

pub fn field(d: &str) -> Field {
    parse_field(d).unwrap()
}

pub fn hypersurface(field_d: &str, form: &str) -> CubicHypersurface {
    CubicHypersurface::new(parse_poly(&field(field_d), form).unwrap()).unwrap()
}

pub fn point(x: &CubicHypersurface, coords: &[i64]) -> ProjectivePoint {
    ProjectivePoint::from_i64(x.field(), coords).unwrap()
}

/// `∂F/∂x_i(p)` read off as the `s`-coefficient of `F(p + s·e_i)`, which is
/// computed by substitution rather than by differentiation.
pub fn gradient_oracle(form: &MultiPoly, p: &[Scalar]) -> Vec<Scalar> {
    let f = form.ring().clone();
    let s = Variables::new(["s"]);
    (0..p.len())
        .map(|i| {
            let args: Vec<MultiPoly> = p
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let base = MultiPoly::constant(f.clone(), s.clone(), c.clone());
                    if i == j {
                        base.add(&MultiPoly::var(f.clone(), s.clone(), 0))
                    } else {
                        base
                    }
                })
                .collect();
            let g = form.compose(&args);
            g.terms()
                .iter()
                .find(|(m, _)| m.exponents() == [1])
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| f.zero())
        })
        .collect()
}

pub fn oracle_smooth(x: &CubicHypersurface, p: &ProjectivePoint) -> bool {
    let f = x.field();
    f.is_zero(&x.form().eval(p.coords()))
        && gradient_oracle(x.form(), p.coords())
            .iter()
            .any(|g| !f.is_zero(g))
}

/// Projection from `p` is inseparable iff `F(s·p + y)` has no term linear in
/// `s` (the `s³` term vanishes because `p ∈ X`). Checked symbolically in
/// `s, y_0..y_m`, with no change of frame.
pub fn oracle_inseparable(x: &CubicHypersurface, p: &ProjectivePoint) -> bool {
    let f = x.field().clone();
    let m = x.ambient_len();
    let mut names = vec!["s".to_string()];
    names.extend((0..m).map(|i| format!("y{i}")));
    let v = Variables::new(names);
    let s = MultiPoly::var(f.clone(), v.clone(), 0);
    let args: Vec<MultiPoly> = p
        .coords()
        .iter()
        .enumerate()
        .map(|(i, c)| s.scale(c).add(&MultiPoly::var(f.clone(), v.clone(), i + 1)))
        .collect();
    let g = x.form().compose(&args);
    g.terms()
        .iter()
        .all(|(mono, _)| mono.exponents()[0] % 2 == 0)
}

/// All points of `P^{m−1}(F_q)` on `X`, by brute force over affine vectors
/// (normalized by the first nonzero coordinate).
pub fn brute_points(x: &CubicHypersurface) -> Vec<ProjectivePoint> {
    let f = x.field();
    let q = f.order().unwrap();
    let m = x.ambient_len();
    let mut out = Vec::new();
    for code in 1..q.pow(m as u32) {
        let v: Vec<Scalar> = (0..m)
            .map(|i| f.element(code / q.pow(i as u32) % q))
            .collect();
        let lead = v.iter().find(|c| !f.is_zero(c)).unwrap();
        if !f.is_one(lead) {
            continue;
        }
        if f.is_zero(&x.form().eval(&v)) {
            out.push(ProjectivePoint::new(f, v).unwrap());
        }
    }
    out
}

/// Coefficients for `Σ ℓ_j(y)·x_j² + g(y)` with `k` x-variables and `m − k`
/// y-variables; `None` if some x-variable or y-variable would not have the
/// intended role.
pub fn char2_form(f: &Field, m: usize, k: usize, ell: &[u64], g: &[u64]) -> Option<MultiPoly> {
    let vars = Variables::indexed("x", m);
    let ys = m - k;
    let mut terms = Vec::new();
    let mut touched = vec![false; ys];
    for j in 0..k {
        let row = &ell[j * ys..(j + 1) * ys];
        if row.iter().all(|&c| c == 0) {
            return None;
        }
        for (i, &c) in row.iter().enumerate() {
            if c != 0 {
                touched[i] = true;
                let mut e = vec![0u16; m];
                e[j] = 2;
                e[k + i] = 1;
                terms.push((Monomial::from_exponents(&e), f.element(c)));
            }
        }
    }
    if touched.contains(&false) {
        return None;
    }
    let mut slot = 0;
    for a in 0..ys {
        for b in a..ys {
            for c in b..ys {
                let coeff = g[slot];
                slot += 1;
                if coeff != 0 {
                    let mut e = vec![0u16; m];
                    e[k + a] += 1;
                    e[k + b] += 1;
                    e[k + c] += 1;
                    terms.push((Monomial::from_exponents(&e), f.element(coeff)));
                }
            }
        }
    }
    Some(MultiPoly::from_terms(f.clone(), vars, terms))
}

/// Checks one generated form against brute force; returns whether a point
/// was produced.
pub fn check_char2(x: &CubicHypersurface, k: usize) -> bool {
    let f = x.field();
    let good: Vec<ProjectivePoint> = brute_points(x)
        .into_iter()
        .filter(|p| {
            p.coords()[k..].iter().any(|c| !f.is_zero(c))
                && oracle_smooth(x, p)
                && !oracle_inseparable(x, p)
        })
        .collect();
    match char2_point(x, 10_000_000) {
        Ok(found) => {
            assert!(oracle_smooth(x, &found.point), "{}", x.form());
            assert!(!oracle_inseparable(x, &found.point), "{}", x.form());
            assert!(good.contains(&found.point), "{}", x.form());
            assert_eq!(found.x_vars, (0..k).collect::<Vec<_>>());
            true
        }
        Err(PointsError::NoSmoothPoint) => {
            assert!(good.is_empty(), "{}: missed {:?}", x.form(), good[0]);
            false
        }
        Err(e) => panic!("{}: {e:?}", x.form()),
    }
}

/// Seeded forms `Σ ℓ_j(y)·x_j² + g(y)` over `F₂` and `F₄`, each checked by
/// [`check_char2`]; returns how many produced a point.
pub fn char2_suite() -> usize {
    let produced = std::cell::Cell::new(0);
    for (fd, q) in [("F2", 2u64), ("F4", 4)] {
        let f = field(fd);
        for (m, k) in [(4usize, 1usize), (4, 2), (5, 2), (5, 3)] {
            let ys = m - k;
            let cubics = ys * (ys + 1) * (ys + 2) / 6;
            let strategy = (
                prop::collection::vec(0..q, k * ys),
                prop::collection::vec(0..q, cubics),
            );
            let mut runner = TestRunner::new_with_rng(
                Config {
                    cases: 6,
                    failure_persistence: None,
                    ..Config::default()
                },
                TestRng::from_seed(RngAlgorithm::ChaCha, b"unirat-char2-generated-forms-v1!"),
            );
            runner
                .run(&strategy, |(ell, g)| {
                    let Some(form) = char2_form(&f, m, k, &ell, &g) else {
                        return Ok(());
                    };
                    let x = CubicHypersurface::new(form).unwrap();
                    if check_char2(&x, k) {
                        produced.set(produced.get() + 1);
                    }
                    Ok(())
                })
                .unwrap();
        }
    }
    produced.get()
}
