//! The acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines come out in order; exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::hypersurface;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;
use sha2::{Digest, Sha256};
use unirat::{psi_from_doc, psi_to_doc, run, PsiDoc};
use unirat_core::algebra::{parse_poly_in, Variables};
use unirat_core::cubic::{smooth_from_double_point, DEFAULT_CLASSIFY_BUDGET};
use unirat_core::points::{char3_fixture_check, enumerate_lines, enumerate_points};
use unirat_core::rng::{seeded, DEFAULT_SEED};
use unirat_core::segre::{
    build_psi, slice_to_dim, verify_psi, weil_restrict, weil_variables, MultiplicationTable,
    VerifyMode, SLICE_RETRIES,
};
use unirat_core::{Field, MultiPoly, PsiMap, Ring};

const FERMAT: &str = "x0^3+x1^3+x2^3+x3^3";

struct Fixture {
    form: &'static str,
    point: &'static str,
    inputs: u64,
    limit: Duration,
    file: &'static str,
}

const FIXTURES: [Fixture; 4] = [
    Fixture {
        form: FERMAT,
        point: "1,-1,0,0",
        inputs: 4,
        limit: Duration::from_secs(120),
        file: "fermat.json",
    },
    Fixture {
        form: "x0^2*x3+x1^3+x2^3+x3^3",
        point: "0,1,-1,0",
        inputs: 4,
        limit: Duration::from_secs(600),
        file: "surface_a.json",
    },
    Fixture {
        form: "x0^2*x3+x1^2*x2+x2^3+x3^3",
        point: "0,1,0,0",
        inputs: 4,
        limit: Duration::from_secs(600),
        file: "surface_b.json",
    },
    Fixture {
        form: "x0^2*x4+x1^3+x2^3+x3^3+x4^3",
        point: "1,0,0,0,0",
        inputs: 7,
        limit: Duration::from_secs(600),
        file: "threefold.json",
    },
];

fn cli(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["unirat"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

fn parametrize(dir: &Path, f: &Fixture) -> (Value, Duration) {
    let path = dir.join(f.file);
    let start = Instant::now();
    let (code, v) = cli(&[
        "parametrize",
        "--field",
        "Q",
        "--form",
        f.form,
        "--point",
        f.point,
        "--psi-out",
        path.to_str().unwrap(),
    ]);
    let took = start.elapsed();
    assert_eq!(code, 0, "{}: {v}", f.form);
    (v, took)
}

fn read_psi(path: &Path) -> PsiMap {
    let doc: PsiDoc = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    psi_from_doc(&doc).unwrap()
}

/// The Fermat map from criterion 1, rebuilt through the CLI if that run did
/// not leave it behind.
fn fermat_psi(dir: &Path) -> PsiMap {
    let path = dir.join(FIXTURES[0].file);
    if !path.exists() {
        parametrize(dir, &FIXTURES[0]);
    }
    read_psi(&path)
}

fn c1(dir: &Path, reports: &mut Vec<Value>) {
    for f in &FIXTURES {
        let (v, took) = parametrize(dir, f);
        let r = &v["result"];
        assert_eq!(r["inputs"], f.inputs, "{}", f.form);
        assert_eq!(r["verification"]["passed"], true);
        assert_eq!(r["verification"]["mode"], "exact");
        assert_eq!(r["rank"]["full"], true);
        assert_eq!(r["rank"]["rank"], r["dimension"]);
        assert!(took < f.limit, "{}: {took:?} over {:?}", f.form, f.limit);
        println!("    {} @ ({}): {:.1}s", f.form, f.point, took.as_secs_f64());
        reports.push(v);
    }
}

fn c2(reports: &[Value]) {
    assert_eq!(reports.len(), FIXTURES.len(), "criterion 1 did not finish");
    for v in reports {
        let ids = &v["result"]["trace"]["identities"];
        for key in [
            "tangent",
            "split",
            "line_is_base",
            "factorization",
            "third_root",
        ] {
            assert_eq!(ids[key], true, "{key}");
        }
    }
    // the quotient formula for λ₃ against Vieta, as rational functions
    for (fd, form, p) in [
        ("F7", FERMAT, &[1, -1, 0, 0]),
        ("Q", "x0^2*x3+x1^2*x2+x2^3+x3^3", &[0, 1, 0, 0]),
        ("F5", "x0^2*x3+x1^2*x2+x2^3+x3^3", &[0, 1, 0, 0]),
    ] {
        let x = hypersurface(fd, form);
        for conjugated in [false, true] {
            let (_, trace) = build_psi(&x, &common::point(&x, p), conjugated).unwrap();
            assert_eq!(
                trace.lambda3().unwrap(),
                trace.lambda3_vieta().unwrap(),
                "{fd} {form}"
            );
            assert!(trace.check_identities().unwrap().all());
        }
    }
}

fn c3(dir: &Path) {
    for f in &FIXTURES {
        let path = dir.join(f.file);
        if !path.exists() {
            parametrize(dir, f);
        }
        let cli_digest = Sha256::digest(std::fs::read(&path).unwrap());
        let x = hypersurface("Q", f.form);
        let coords: Vec<i64> = f.point.split(',').map(|c| c.parse().unwrap()).collect();
        let (psi, _) = build_psi(&x, &common::point(&x, &coords), true).unwrap();
        let mut bytes = serde_json::to_vec(&psi_to_doc(&psi)).unwrap();
        bytes.push(b'\n');
        assert_eq!(Sha256::digest(&bytes), cli_digest, "{}", f.form);
    }
}

fn c4(dir: &Path) {
    let psi = fermat_psi(dir);
    let x = hypersurface("Q", FERMAT);
    let s = slice_to_dim(&psi, DEFAULT_SEED).unwrap();
    assert_eq!(s.map.num_inputs(), 2);
    assert_eq!(s.rank.rank, 2);
    assert!(s.attempts <= SLICE_RETRIES);
    verify_psi(&x, &s.map, VerifyMode::Exact).unwrap();
    println!("    {} attempt(s)", s.attempts);
}

fn c5(dir: &Path) {
    let path = dir.join(FIXTURES[0].file);
    fermat_psi(dir);
    let start = Instant::now();
    let (code, v) = cli(&[
        "generate",
        "--field",
        "Q",
        "--form",
        FERMAT,
        "--psi",
        path.to_str().unwrap(),
        "--count",
        "100",
    ]);
    let took = start.elapsed();
    assert_eq!(code, 0, "{v}");
    let pts = v["result"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 100);
    let mut seen = std::collections::HashSet::new();
    for p in pts {
        let coords: Vec<BigRational> = p
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().parse().unwrap())
            .collect();
        let cube_sum = coords
            .iter()
            .fold(BigRational::from_integer(0.into()), |acc, c| {
                acc + c * c * c
            });
        assert_eq!(cube_sum, BigRational::from_integer(0.into()), "{p}");
        assert!(seen.insert(p.to_string()), "duplicate {p}");
    }
    assert!(took < Duration::from_secs(60), "{took:?}");
    println!("    {:.1}s", took.as_secs_f64());
}

fn c6() {
    // x³ = x on F₂: the plane Σ x_i; on F₄ cubes of units are 1, so an even
    // number of nonzero coordinates, counted up to the 3 scalings
    let hand = [("F2", 2u64.pow(3) - 1), ("F4", (6 * 9 + 81) / 3)];
    for (fd, expected) in hand {
        let x = hypersurface(fd, FERMAT);
        assert_eq!(
            enumerate_points(&x, 1 << 24, 0).unwrap().count,
            expected,
            "{fd}"
        );
        assert_eq!(common::brute_points(&x).len() as u64, expected);
    }
    assert_eq!(hand.map(|h| h.1), [7, 45]);
    for fd in ["F2", "F4", "F16"] {
        let start = Instant::now();
        let set = enumerate_lines(&hypersurface(fd, FERMAT), 1 << 24).unwrap();
        assert_eq!(set.coverage(), 1.0, "{fd}");
        assert!(start.elapsed() < Duration::from_secs(300), "{fd}");
    }
}

fn c7() {
    let cone = ["--field", "Q", "--form", "x0^3+x1^3+x2^3", "--vars", "4"];
    let (code, v) = cli(&[&["analyze"][..], &cone].concat());
    assert_eq!(code, 1);
    assert_eq!(v["error"]["error"], "ConeInput");
    assert_eq!(v["result"]["is_cone"], true);
    assert_eq!(
        v["result"]["triple_point_basis"],
        serde_json::json!([["0", "0", "0", "1"]])
    );
    let (code, v) = cli(&[&["parametrize"][..], &cone].concat());
    assert_eq!(code, 1);
    assert_eq!(v["error"]["error"], "ConeInput");

    let (_, v) = cli(&["enumerate", "--field", "F3", "--form", FERMAT]);
    assert_eq!(v["result"]["count"], 13);
    assert_eq!(v["result"]["smooth"], 0);
    let x = hypersurface("F3", FERMAT);
    assert!(common::brute_points(&x)
        .iter()
        .all(|p| !common::oracle_smooth(&x, p)));
}

fn c8() {
    for (fd, form) in [
        ("Q", "x0*x1*x2+x1^3+x2^3+x3^3"),
        ("Q", "x0*(x1^2-x2*x3)+x1^3+x2^3+x3^3"),
        ("F5", "x0*x1*x2+x1^3+x2^3+x3^3"),
        ("F5", "x0*(x1^2+2*x2^2+3*x3^2)+x1^3+x2*x3^2"),
    ] {
        let x = hypersurface(fd, form);
        let p = common::point(&x, &[1, 0, 0, 0]);
        assert!(!common::oracle_smooth(&x, &p));
        let mut rng = seeded(DEFAULT_SEED);
        let q = smooth_from_double_point(&x, &p, &mut rng, DEFAULT_CLASSIFY_BUDGET).unwrap();
        assert!(common::oracle_smooth(&x, &q), "{fd} {form}");
    }
}

fn c9() {
    let produced = common::char2_suite();
    assert!(produced >= 5, "{produced}");
    println!("    {produced} forms with a point");
}

fn c10() {
    let f4 = common::field("F4");
    let f2 = common::field("F2");
    let w = f4.generator().unwrap();
    let table = MultiplicationTable::from_basis(&f4, vec![f4.one(), w.clone()]).unwrap();
    let eq = parse_poly_in(&f4, &Variables::new(["x"]), "x^2+x+w").unwrap();
    let comps = weil_restrict(std::slice::from_ref(&eq), &table).unwrap();
    let y = weil_variables(1, 2);
    let expected = ["y1^2+y2^2+y1", "y2^2+y2+1"].map(|s| parse_poly_in(&f2, &y, s).unwrap());
    assert_eq!(comps, expected);
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
    for (ext, d) in [("F4", 2usize), ("F9", 2), ("F8", 3), ("F27", 3)] {
        let l = common::field(ext);
        let g = l.generator().unwrap();
        let table =
            MultiplicationTable::from_basis(&l, (0..d).map(|k| l.pow(&g, k as u64)).collect())
                .unwrap();
        for n in 1..=3 {
            let vars = Variables::indexed("x", n);
            let eq = MultiPoly::var(l.clone(), vars, 0);
            let out = weil_restrict(&[eq], &table).unwrap();
            assert!(out.iter().all(|p| p.nvars() == d * n), "{ext} n={n}");
        }
    }
}

fn c11() {
    let start = Instant::now();
    let report = char3_fixture_check(2).unwrap();
    let took = start.elapsed();
    assert_eq!(report.listed_points.len(), 3);
    assert!(report.listed_points.iter().all(|(_, on)| *on));
    assert!(report.solutions.is_empty());
    assert!(took < Duration::from_secs(10), "{took:?}");
    println!(
        "    {} triples in {:.2}s",
        report.searched,
        took.as_secs_f64()
    );
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: 64,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, b"unirat-acceptance-kernel-checks!"),
    )
}

fn poly(field: &Field, raw: &[([u16; 3], u64)], cubic: bool) -> MultiPoly {
    let vars = Variables::indexed("x", 3);
    let terms = raw
        .iter()
        .filter(|(e, _)| !cubic || e[0] + e[1] <= 3)
        .map(|(e, c)| {
            let e = if cubic {
                [e[0], e[1], 3 - e[0] - e[1]]
            } else {
                *e
            };
            let c = match field.order() {
                Some(q) => field.element(c % q),
                None => field.from_i64(*c as i64 - 8),
            };
            (unirat_core::algebra::Monomial::from_exponents(&e), c)
        });
    MultiPoly::from_terms(field.clone(), vars, terms)
}

fn c12() {
    let raw = || prop::collection::vec(([0u16..4, 0u16..4, 0u16..4], 0u64..17), 0..6);
    for fd in ["Q", "F2", "F3", "F4", "F9", "F101"] {
        let field = common::field(fd);
        runner()
            .run(&(raw(), raw(), raw(), 0usize..3), |(a, b, c, i)| {
                let (a, b, c) = (
                    poly(&field, &a, false),
                    poly(&field, &b, false),
                    poly(&field, &c, false),
                );
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(
                    a.mul(&b).derivative(i),
                    a.derivative(i).mul(&b).add(&a.mul(&b.derivative(i)))
                );
                Ok(())
            })
            .unwrap_or_else(|e| panic!("{fd}: {e}"));
        runner()
            .run(&raw(), |f| {
                let f = poly(&field, &f, true);
                let vars = f.vars().clone();
                let euler = (0..3).fold(MultiPoly::zero(field.clone(), vars.clone()), |acc, i| {
                    acc.add(&MultiPoly::var(field.clone(), vars.clone(), i).mul(&f.derivative(i)))
                });
                prop_assert_eq!(&euler, &f.scale(&field.from_i64(3)));
                prop_assert!(field.characteristic() != 3 || euler.is_zero());
                Ok(())
            })
            .unwrap_or_else(|e| panic!("{fd}: {e}"));
    }
    for q in [2u64, 4, 8, 16] {
        let field = Field::finite(q).unwrap();
        let roots: std::collections::HashSet<u64> = field
            .elements()
            .map(|a| {
                let s = field.frobenius_sqrt(&a).unwrap();
                assert_eq!(field.mul(&s, &s), a);
                field.index_of(&s)
            })
            .collect();
        assert_eq!(roots.len() as u64, q);
    }
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let dir: PathBuf = dir.path().to_path_buf();
    let mut reports = Vec::new();
    let mut failed = 0;
    let mut check = |n: u32, name: &str, f: &mut dyn FnMut()| {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {n:>2} PASS  {name} ({secs:.1}s)"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {n:>2} FAIL  {name} ({secs:.1}s): {msg}");
            }
        }
    };
    check(1, "end-to-end parametrization", &mut || {
        c1(&dir, &mut reports)
    });
    check(2, "trace identities", &mut || c2(&reports));
    check(3, "conjugation symmetry", &mut || c3(&dir));
    check(4, "slicing to dimension", &mut || c4(&dir));
    check(5, "point generation", &mut || c5(&dir));
    check(6, "finite-field counts and lines", &mut c6);
    check(7, "degenerate inputs", &mut c7);
    check(8, "singular point upgrade", &mut c8);
    check(9, "characteristic 2", &mut c9);
    check(10, "Weil restriction", &mut c10);
    check(11, "characteristic 3 example", &mut c11);
    check(12, "algebra kernel", &mut c12);
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
