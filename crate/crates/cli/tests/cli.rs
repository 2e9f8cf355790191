use std::process::Command;

use serde_json::Value;
use unirat::{psi_from_doc, psi_to_doc, run, PsiDoc, SEED_ENV};
use unirat_core::algebra::{parse_field, parse_poly};
use unirat_core::segre::build_psi;
use unirat_core::{CubicHypersurface, ProjectivePoint};

const SMALL: &str = "x0^2*x3+x1^2*x2+x2^3+x3^3";

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["unirat"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out.stdout));
    (out.code, v)
}

fn binary() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_unirat"));
    c.env_remove(SEED_ENV);
    c
}

#[test]
fn bad_input_exits_with_code_2() {
    let (code, v) = json(&["analyze", "--field", "F6", "--form", "x0^3+x1^3+x2^3+x3^3"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["module"], "algebra");

    let (code, v) = json(&["analyze", "--field", "Q", "--form", "x0^3+*x1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["module"], "algebra");

    let (code, v) = json(&["parametrize", "--field", "Q", "--form", "x0^3+x1^3"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["error"], "DimensionTooSmall");

    let out = run(["unirat", "analyze", "--no-such-flag"]);
    assert_eq!(out.code, 2);
    assert!(out.report.is_none());
    assert!(!out.stderr.is_empty());
}

#[test]
fn cones_exit_with_code_1_and_name_the_vertex() {
    let cone = ["--field", "Q", "--form", "x0^3+x1^3+x2^3", "--vars", "4"];
    let (code, v) = json(&[&["analyze"][..], &cone].concat());
    assert_eq!(code, 1);
    assert_eq!(v["error"]["module"], "segre");
    assert_eq!(v["error"]["error"], "ConeInput");
    assert_eq!(
        v["result"]["triple_point_basis"],
        serde_json::json!([["0", "0", "0", "1"]])
    );

    let (code, v) = json(&[&["parametrize"][..], &cone].concat());
    assert_eq!(code, 1);
    assert_eq!(v["error"]["error"], "ConeInput");
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let args = [
        "enumerate",
        "--field",
        "F2",
        "--form",
        "x0^3+x1^3+x2^3+x3^3",
    ];
    let (_, v) = json(&args);
    assert_eq!(v["seed"], unirat_core::rng::DEFAULT_SEED);
    let (_, v) = json(&[&args[..], &["--seed", "99"]].concat());
    assert_eq!(v["seed"], 99);

    let out = binary().args(args).env(SEED_ENV, "1234").output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 1234);
}

#[test]
fn binary_exit_codes() {
    let ok = binary()
        .args([
            "enumerate",
            "--field",
            "F2",
            "--form",
            "x0^3+x1^3+x2^3+x3^3",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = binary()
        .args(["enumerate", "--field", "F9x"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let cone = binary()
        .args([
            "parametrize",
            "--field",
            "Q",
            "--form",
            "x0^3+x1^3+x2^3",
            "--vars",
            "4",
        ])
        .output()
        .unwrap();
    assert_eq!(cone.status.code(), Some(1));
}

#[test]
fn same_configuration_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let p = path.to_str().unwrap();
    let args = [
        "unirat",
        "parametrize",
        "--field",
        "F7",
        "--form",
        SMALL,
        "--point",
        "0,1,0,0",
        "--psi-out",
        p,
    ];
    let first = run(args);
    let file = std::fs::read(&path).unwrap();
    let second = run(args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(file, std::fs::read(&path).unwrap());
}

#[test]
fn parametrize_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let p = path.to_str().unwrap();
    let (code, v) = json(&[
        "parametrize",
        "--field",
        "F7",
        "--form",
        SMALL,
        "--point",
        "0,1,0,0",
        "--psi-out",
        p,
    ]);
    assert_eq!(code, 0, "{v}");
    let r = &v["result"];
    assert_eq!(r["inputs"], 4);
    assert_eq!(r["verification"]["passed"], true);
    assert_eq!(r["rank"]["full"], true);
    assert_eq!(r["trace"]["identities"]["all"], true);
    assert_eq!(r["psi_file"], p);

    let (code, v) = json(&["verify", "--field", "F7", "--form", SMALL, "--psi", p]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["verification"]["passed"], true);
    assert_eq!(v["result"]["rank"]["rank"], 2);

    // the same map on another surface is rejected
    let (code, v) = json(&[
        "verify",
        "--field",
        "F7",
        "--form",
        "x0^2*x3+x1^2*x2+x2^3+2*x3^3",
        "--psi",
        p,
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verification"]["passed"], false);
}

#[test]
fn psi_documents_round_trip_exactly() {
    for (fd, form, pt) in [
        ("F7", SMALL, "0,1,0,0"),
        ("Q", SMALL, "0,1,0,0"),
        ("F4", "x0^3+x1^3+x2^3+w*x3^3+x0*x1*x3", ""),
    ] {
        let field = parse_field(fd).unwrap();
        let x = CubicHypersurface::new(parse_poly(&field, form).unwrap()).unwrap();
        let p = if pt.is_empty() {
            match unirat_core::points::find_smooth_point(&x, 1 << 20).unwrap() {
                unirat_core::points::SmoothSearch::Found(p) => p,
                other => panic!("{other:?}"),
            }
        } else {
            ProjectivePoint::from_i64(&field, &[0, 1, 0, 0]).unwrap()
        };
        let (psi, _) = build_psi(&x, &p, false).unwrap();
        let text = serde_json::to_string(&psi_to_doc(&psi)).unwrap();
        let doc: PsiDoc = serde_json::from_str(&text).unwrap();
        let back = psi_from_doc(&doc).unwrap();
        assert_eq!(back, psi, "{fd}");
        assert_eq!(serde_json::to_string(&psi_to_doc(&back)).unwrap(), text);
    }
}

#[test]
fn lines_over_f4() {
    let (code, v) = json(&["lines", "--field", "F4", "--form", "x0^3+x1^3+x2^3+x3^3"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["coverage"], 1.0);
    assert_eq!(r["lines_on_surface"], 27);
    assert_eq!(r["point_count"], 45);
    assert_eq!(r["lines_in_space"], 357);
}

#[test]
fn weil_restriction_example() {
    let (code, v) = json(&["weilres", "--field", "F4", "--form", "x^2+x+w"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(
        v["result"]["equations"],
        serde_json::json!(["y1^2 + y2^2 + y1", "y2^2 + y2 + 1"])
    );
    assert_eq!(v["result"]["variables"].as_array().unwrap().len(), 2);
}

#[test]
fn generate_points_from_a_psi_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let p = path.to_str().unwrap();
    let (code, _) = json(&[
        "parametrize",
        "--field",
        "Q",
        "--form",
        SMALL,
        "--point",
        "0,1,0,0",
        "--psi-out",
        p,
    ]);
    assert_eq!(code, 0);
    let (code, v) = json(&[
        "generate", "--field", "Q", "--form", SMALL, "--psi", p, "--count", "12",
    ]);
    assert_eq!(code, 0, "{v}");
    let pts = v["result"]["points"].as_array().unwrap();
    assert_eq!(pts.len(), 12);
}

#[test]
fn enumerate_reports_all_singular_char3_fermat() {
    let (code, v) = json(&[
        "enumerate",
        "--field",
        "F3",
        "--form",
        "x0^3+x1^3+x2^3+x3^3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 13);
    assert_eq!(v["result"]["smooth"], 0);
}

#[test]
fn human_output_is_readable() {
    let out = run([
        "unirat",
        "enumerate",
        "--field",
        "F2",
        "--form",
        "x0^3+x1^3+x2^3+x3^3",
        "--out",
        "human",
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("count: 7"), "{}", out.stdout);
    assert!(serde_json::from_str::<Value>(&out.stdout).is_err());
}
