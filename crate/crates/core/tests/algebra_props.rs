//! Seeded property suites for the exact arithmetic kernel.

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use unirat_core::algebra::{Monomial, Variables};
use unirat_core::quadext::{QuadExtElement, QuadExtRing};
use unirat_core::{Field, MultiPoly, RationalFunction, Ring, Scalar};

const SEED: [u8; 32] = *b"unirat-kernel-property-suite-v1!";

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &SEED),
    )
}

fn fields() -> Vec<Field> {
    ["Q", "F2", "F3", "F4", "F5", "F8", "F9", "F16", "F101"]
        .iter()
        .map(|d| unirat_core::algebra::parse_field(d).unwrap())
        .collect()
}

fn scalar(field: &Field, raw: i64) -> Scalar {
    match field.order() {
        None => Scalar::Rational(BigRational::new(raw.into(), (1 + raw.rem_euclid(4)).into())),
        Some(q) => field.element(raw.rem_euclid(q as i64) as u64),
    }
}

type RawPoly = Vec<([u16; 3], i64)>;

fn raw_poly() -> impl Strategy<Value = RawPoly> {
    prop::collection::vec(([0u16..4, 0u16..4, 0u16..4], -9i64..10), 0..7)
}

fn vars() -> Variables {
    Variables::indexed("x", 3)
}

fn build(field: &Field, raw: &RawPoly) -> MultiPoly {
    MultiPoly::from_terms(
        field.clone(),
        vars(),
        raw.iter()
            .map(|(e, c)| (Monomial::from_exponents(e), scalar(field, *c))),
    )
}

/// Homogeneous of degree 3: the exponent of `x2` is forced.
fn build_cubic(field: &Field, raw: &RawPoly) -> MultiPoly {
    MultiPoly::from_terms(
        field.clone(),
        vars(),
        raw.iter().filter(|(e, _)| e[0] + e[1] <= 3).map(|(e, c)| {
            let exps = [e[0], e[1], 3 - e[0] - e[1]];
            (Monomial::from_exponents(&exps), scalar(field, *c))
        }),
    )
}

#[test]
fn ring_axioms_on_random_triples() {
    for field in fields() {
        runner(48)
            .run(&(raw_poly(), raw_poly(), raw_poly()), |(a, b, c)| {
                let (a, b, c) = (build(&field, &a), build(&field, &b), build(&field, &c));
                let zero = MultiPoly::zero(field.clone(), vars());
                let one = MultiPoly::one(field.clone(), vars());
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.add(&zero), a.clone());
                prop_assert_eq!(a.mul(&one), a.clone());
                prop_assert!(a.sub(&a).is_zero());
                Ok(())
            })
            .unwrap_or_else(|e| panic!("{}: {e}", field.designator()));
    }
}

#[test]
fn scalar_field_axioms() {
    for field in fields() {
        runner(64)
            .run(&(-50i64..50, -50i64..50, -50i64..50), |(a, b, c)| {
                let (a, b, c) = (scalar(&field, a), scalar(&field, b), scalar(&field, c));
                prop_assert_eq!(
                    field.mul(&a, &field.add(&b, &c)),
                    field.add(&field.mul(&a, &b), &field.mul(&a, &c))
                );
                prop_assert_eq!(
                    field.mul(&field.mul(&a, &b), &c),
                    field.mul(&a, &field.mul(&b, &c))
                );
                if !field.is_zero(&b) {
                    let q = field.div(&a, &b).unwrap();
                    prop_assert_eq!(field.mul(&q, &b), a);
                }
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn leibniz_rule() {
    for field in fields() {
        runner(48)
            .run(&(raw_poly(), raw_poly(), 0usize..3), |(f, g, i)| {
                let (f, g) = (build(&field, &f), build(&field, &g));
                let lhs = f.mul(&g).derivative(i);
                let rhs = f.derivative(i).mul(&g).add(&f.mul(&g.derivative(i)));
                prop_assert_eq!(lhs, rhs);
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn euler_identity_for_cubics() {
    for field in fields() {
        runner(48)
            .run(&raw_poly(), |f| {
                let f = build_cubic(&field, &f);
                let euler = (0..3).fold(MultiPoly::zero(field.clone(), vars()), |acc, i| {
                    acc.add(&MultiPoly::var(field.clone(), vars(), i).mul(&f.derivative(i)))
                });
                prop_assert_eq!(&euler, &f.scale(&field.from_i64(3)));
                if field.characteristic() == 3 {
                    prop_assert!(euler.is_zero());
                }
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn frobenius_square_roots_exhaustive() {
    for q in [2u64, 4, 8, 16] {
        let field = Field::finite(q).unwrap();
        let mut roots = std::collections::BTreeSet::new();
        for a in field.elements() {
            let s = field.frobenius_sqrt(&a).unwrap();
            assert_eq!(field.mul(&s, &s), a, "F{q}");
            roots.insert(field.index_of(&s));
        }
        assert_eq!(roots.len() as u64, q, "square root is a bijection of F{q}");
    }
}

#[test]
fn frobenius_square_root_needs_characteristic_two() {
    let f5 = Field::finite(5).unwrap();
    assert!(f5.frobenius_sqrt(&f5.from_i64(4)).is_err());
}

#[test]
fn quadratic_extension_norm_is_multiplicative() {
    let field = Field::finite(7).unwrap();
    let v = Variables::indexed("s", 1);
    let c = |k: i64| {
        RationalFunction::from_poly(MultiPoly::constant(
            field.clone(),
            v.clone(),
            field.from_i64(k),
        ))
    };
    let s = RationalFunction::from_poly(MultiPoly::var(field.clone(), v.clone(), 0));
    let ring = QuadExtRing::new(s.clone(), c(3), s.add(&c(1))).unwrap();
    runner(32)
        .run(&(-6i64..7, -6i64..7, -6i64..7, -6i64..7), |(a, b, x, y)| {
            let u = QuadExtElement::new(&ring, c(a), s.mul(&c(b)));
            let w = QuadExtElement::new(&ring, c(x).add(&s), c(y));
            let lhs = u.mul(&w).norm().unwrap();
            let rhs = u.norm().unwrap().mul(&w.norm().unwrap());
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(u.conjugate().conjugate(), u.clone());
            prop_assert_eq!(u.mul(&w).conjugate(), u.conjugate().mul(&w.conjugate()));
            Ok(())
        })
        .unwrap();
}
