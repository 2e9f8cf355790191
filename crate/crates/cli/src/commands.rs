//! Subcommand implementations. Each returns the `result` value of the report
//! or a [`Failure`].

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use unirat_core::algebra::{parse_field, parse_poly, parse_poly_in, Variables};
use unirat_core::cubic::{
    self, classify, inseparable_projection_test, projective_count, projective_points,
    smooth_from_double_point, ClassificationReport, TheoremCase, Verdict,
};
use unirat_core::points::{
    char2_point, char3_fixture_check, enumerate_lines, enumerate_points, generate_points,
    line_count, EnumerationResult, PointsError, SamplerConfig,
};
use unirat_core::rng::seeded;
use unirat_core::segre::{
    build_psi, dominance_rank, slice_to_dim, verify_psi, weil_restrict, weil_variables,
    MultiplicationTable, PsiTrace, SegreError, VerifyMode,
};
use unirat_core::{CubicHypersurface, Field, MultiPoly, ProjectivePoint, PsiMap, Ring, Scalar};

use crate::doc::{
    parse_point, parse_scalars, psi_from_doc, psi_to_doc, show_point, show_scalar, PsiDoc, RankDoc,
    VerificationDoc,
};
use crate::error::Failure;
use crate::{
    AnalyzeArgs, EnumerateArgs, FormArgs, GenerateArgs, LinesArgs, Mode, ParametrizeArgs,
    VerifyArgs, WeilArgs,
};

type CmdResult = Result<Value, Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report fields serialize")
}

fn hypersurface(field_text: &str, form: &FormArgs) -> Result<CubicHypersurface, Failure> {
    let field = parse_field(field_text)?;
    let poly = match form.vars {
        Some(n) => parse_poly_in(&field, &Variables::indexed("x", n), &form.form)?,
        None => parse_poly(&field, &form.form)?,
    };
    Ok(CubicHypersurface::new(poly)?)
}

fn verify_mode(m: Mode) -> VerifyMode {
    match m {
        Mode::Exact => VerifyMode::Exact,
        Mode::Modular => VerifyMode::Modular,
    }
}

fn points_of(field: &Field, ps: &[ProjectivePoint]) -> Vec<Vec<String>> {
    ps.iter().map(|p| show_point(field, p)).collect()
}

#[derive(Serialize)]
struct ClassificationDoc {
    case: &'static str,
    is_cone: bool,
    triple_point_dimension: i64,
    triple_point_basis: Vec<Vec<String>>,
    nonnormal: &'static str,
    singular_dimension_estimate: Option<i64>,
    point_count: Option<u64>,
    singular_count: Option<u64>,
    smooth_point_total: usize,
    smooth_points_found: Vec<Vec<String>>,
    notes: Vec<String>,
}

fn classification_doc(field: &Field, r: &ClassificationReport) -> ClassificationDoc {
    ClassificationDoc {
        case: match r.case {
            TheoremCase::Cone => "cone",
            TheoremCase::Nonnormal => "nonnormal",
            TheoremCase::SmoothPoint => "smooth_point",
            TheoremCase::Undetermined => "undetermined",
        },
        is_cone: r.is_cone,
        triple_point_dimension: r.triple_point_dimension(),
        triple_point_basis: points_of(field, &r.triple_point_basis),
        nonnormal: match r.nonnormal {
            Verdict::Normal => "normal",
            Verdict::Nonnormal => "nonnormal",
            Verdict::Unknown => "unknown",
        },
        singular_dimension_estimate: r.singular_dimension_estimate,
        point_count: r.point_count,
        singular_count: r.singular_count,
        smooth_point_total: r.smooth_point_total,
        smooth_points_found: points_of(field, &r.smooth_points_found),
        notes: r.notes.clone(),
    }
}

#[derive(Serialize)]
struct CensusDoc {
    field: String,
    count: u64,
    smooth: u64,
    singular: u64,
    cap: usize,
    points: Vec<Vec<String>>,
}

fn census_doc(e: &EnumerationResult) -> CensusDoc {
    CensusDoc {
        field: e.field.designator(),
        count: e.count,
        smooth: e.smooth,
        singular: e.singular,
        cap: e.cap,
        points: points_of(&e.field, &e.points),
    }
}

pub fn analyze(a: &AnalyzeArgs) -> CmdResult {
    let x = hypersurface(&a.common.field, &a.form)?;
    let report = classify(&x, a.budget_enum)?;
    let mut out = to_value(&classification_doc(x.field(), &report));
    if let Some(d) = a.degree_bound {
        if x.field().order() != Some(3) {
            return Err(Failure::input(
                "DegreeBoundNeedsF3",
                "--degree-bound applies to F3 only",
            ));
        }
        let c = char3_fixture_check(d)?;
        out["char3_fixture"] = json!({
            "degree_bound": c.degree_bound,
            "listed_points": c.listed_points.iter().map(|((y, z), ok)| json!({"y": y, "z": z, "on_curve": ok})).collect::<Vec<_>>(),
            "searched": c.searched,
            "solutions": c.solutions,
        });
    }
    if report.is_cone {
        let err: Failure = SegreError::ConeInput.into();
        return Err(err.with_partial(out));
    }
    Ok(out)
}

/// How the base point was obtained.
struct PointChoice {
    point: ProjectivePoint,
    source: &'static str,
    notes: Vec<String>,
}

const PERFECT_FIELD_NOTE: &str =
    "singular input point replaced by the residual intersection of a line through it; this assumes a perfect base field";

/// First smooth point in scan order, with a separable projection in
/// characteristic 2.
fn scan_for_point(x: &CubicHypersurface, budget: u64) -> Result<Option<ProjectivePoint>, Failure> {
    let field = x.field();
    let q = field.order().ok_or(PointsError::NotFinite)?;
    match projective_count(q, x.ambient_len()) {
        Some(n) if n <= budget => {}
        needed => {
            return Err(PointsError::BudgetExceeded {
                needed: needed.unwrap_or(u64::MAX),
                budget,
            }
            .into())
        }
    }
    let char2 = field.characteristic() == 2;
    for v in projective_points(field, x.ambient_len()) {
        if !field.is_zero(&x.form().eval(&v)) {
            continue;
        }
        let p = ProjectivePoint::new(field, v)?;
        if !x.is_smooth_point(&p)? {
            continue;
        }
        if char2 && inseparable_projection_test(x, &p)? {
            continue;
        }
        return Ok(Some(p));
    }
    Ok(None)
}

fn no_point(x: &CubicHypersurface, budget: u64) -> Failure {
    let err: Failure = PointsError::NoSmoothPoint.into();
    match enumerate_points(x, budget, 64) {
        Ok(census) => err.with_partial(json!({ "census": to_value(&census_doc(&census)) })),
        Err(_) => err,
    }
}

fn choose_point(
    x: &CubicHypersurface,
    given: Option<&str>,
    seed: u64,
    budget: u64,
) -> Result<PointChoice, Failure> {
    let field = x.field();
    let char2 = field.characteristic() == 2;
    if let Some(text) = given {
        let p = parse_point(field, text)?;
        if p.len() != x.ambient_len() {
            return Err(Failure::input(
                "PointLength",
                format!(
                    "point has {} coordinates, the form has {}",
                    p.len(),
                    x.ambient_len()
                ),
            ));
        }
        if !x.contains(&p)? {
            return Err(cubic::CubicError::PointNotOnHypersurface.into());
        }
        let mut choice = PointChoice {
            point: p,
            source: "given",
            notes: Vec::new(),
        };
        if !x.is_smooth_point(&choice.point)? {
            let mut rng = seeded(seed);
            choice.point = smooth_from_double_point(x, &choice.point, &mut rng, budget)?;
            choice.source = "upgraded_from_singular";
            choice.notes.push(PERFECT_FIELD_NOTE.into());
        }
        if char2 && inseparable_projection_test(x, &choice.point)? {
            match scan_for_point(x, budget)? {
                Some(q) => {
                    choice.point = q;
                    choice.source = "separable_replacement";
                    choice
                        .notes
                        .push("projection from the given point is inseparable".into());
                }
                None => return Err(no_point(x, budget)),
            }
        }
        return Ok(choice);
    }
    if field.is_finite() {
        if char2 {
            match char2_point(x, budget) {
                Ok(c) => {
                    return Ok(PointChoice {
                        point: c.point,
                        source: "char2_construction",
                        notes: vec![format!("branch {:?}", c.branch)],
                    })
                }
                Err(PointsError::ShapeMismatch(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        return match scan_for_point(x, budget)? {
            Some(p) => Ok(PointChoice {
                point: p,
                source: "searched",
                notes: Vec::new(),
            }),
            None => Err(no_point(x, budget)),
        };
    }
    let report = classify(x, budget)?;
    match report.smooth_points_found.first() {
        Some(p) => Ok(PointChoice {
            point: p.clone(),
            source: "searched",
            notes: Vec::new(),
        }),
        None => {
            let err: Failure = PointsError::NoSmoothPoint.into();
            Err(err.with_partial(json!({
                "classification": to_value(&classification_doc(x.field(), &report))
            })))
        }
    }
}

fn refuse_cone(x: &CubicHypersurface) -> Result<(), Failure> {
    let basis = cubic::triple_point_locus(x)?;
    if basis.is_empty() {
        return Ok(());
    }
    let field = x.field();
    let vertices = basis
        .into_iter()
        .map(|b| ProjectivePoint::new(field, b).map(|p| show_point(field, &p)))
        .collect::<Result<Vec<_>, _>>()?;
    let err: Failure = SegreError::ConeInput.into();
    Err(err.with_partial(json!({ "triple_point_basis": vertices })))
}

fn trace_doc(field: &Field, psi: &PsiMap, trace: &PsiTrace) -> Result<Value, Failure> {
    let ids = trace.check_identities()?;
    let terms = |v: &[MultiPoly]| v.iter().map(|p| p.num_terms()).collect::<Vec<_>>();
    Ok(json!({
        "form_scale": show_scalar(field, &trace.form_scale),
        "conjugated": trace.conjugated,
        "alpha_beta_cc_power": trace.alpha_beta_cc_power,
        "psi_cc_power": trace.psi_cc_power,
        "identities": {
            "tangent": ids.tangent,
            "split": ids.split,
            "line_is_base": ids.line_is_base,
            "factorization": ids.factorization,
            "third_root": ids.third_root,
            "all": ids.all(),
        },
        "terms": {
            "alpha": terms(&trace.alpha),
            "g": terms(&trace.g),
            "psi": terms(&psi.homogeneous()),
        },
        "degree": psi.homogeneous().iter().map(|p| p.total_degree()).max().unwrap_or(0),
    }))
}

fn write_psi(path: &Path, psi: &PsiMap) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, &psi_to_doc(psi))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn read_psi(path: &Path) -> Result<PsiMap, Failure> {
    let mut v: Value = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    if v.get("schema").and_then(Value::as_str) == Some(crate::REPORT_SCHEMA) {
        v = v
            .pointer_mut("/result/psi")
            .map(Value::take)
            .ok_or_else(|| Failure::input("NoPsi", "report does not embed a parametrization"))?;
    }
    let doc: PsiDoc = serde_json::from_value(v)?;
    psi_from_doc(&doc)
}

/// Verification failures are reported as domain errors with the verdict
/// attached.
fn check(x: &CubicHypersurface, psi: &PsiMap, mode: Mode) -> Result<Value, Failure> {
    match verify_psi(x, psi, verify_mode(mode)) {
        Ok(c) => Ok(to_value(&VerificationDoc::from(&c))),
        Err(e) => {
            let failed = matches!(e, SegreError::VerificationFailed(_));
            let err: Failure = e.into();
            Err(if failed {
                err.with_partial(json!({ "verification": { "passed": false } }))
            } else {
                err
            })
        }
    }
}

pub fn parametrize(a: &ParametrizeArgs) -> CmdResult {
    let x = hypersurface(&a.common.field, &a.form)?;
    let field = x.field().clone();
    let seed = a.common.seed;
    refuse_cone(&x)?;
    let choice = choose_point(&x, a.point.as_deref(), seed, a.budget_enum)?;
    let (psi, trace) = build_psi(&x, &choice.point, a.conjugate)?;
    let trace = trace_doc(&field, &psi, &trace)?;
    let verification = check(&x, &psi, a.mode)?;
    let rank = dominance_rank(&psi, seed)?;
    let mut out = json!({
        "dimension": x.dimension(),
        "inputs": psi.num_inputs(),
        "point": show_point(&field, &choice.point),
        "point_source": choice.source,
        "notes": choice.notes,
        "trace": trace,
        "verification": verification,
        "rank": to_value(&RankDoc::new(&field, &rank)),
    });
    if a.slice {
        let s = slice_to_dim(&psi, seed)?;
        let v = check(&x, &s.map, a.mode)?;
        out["slice"] = json!({
            "attempts": s.attempts,
            "inputs": s.map.num_inputs(),
            "substitution": s.substitution.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "rank": to_value(&RankDoc::new(&field, &s.rank)),
            "verification": v,
            "map": to_value(&psi_to_doc(&s.map)),
        });
    }
    match &a.psi_out {
        Some(path) => {
            write_psi(path, &psi)?;
            out["psi_file"] = json!(path.display().to_string());
        }
        None => out["psi"] = to_value(&psi_to_doc(&psi)),
    }
    Ok(out)
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let x = hypersurface(&a.common.field, &a.form)?;
    let psi = read_psi(&a.psi)?;
    if psi.field() != x.field() || psi.frame().len() != x.ambient_len() {
        return Err(Failure::input(
            "Mismatch",
            "parametrization and form live over different spaces",
        ));
    }
    let field = x.field().clone();
    let verification = check(&x, &psi, a.mode)?;
    let rank = dominance_rank(&psi, a.common.seed)?;
    Ok(json!({
        "inputs": psi.num_inputs(),
        "base_point": show_point(&field, psi.base_point()),
        "verification": verification,
        "rank": to_value(&RankDoc::new(&field, &rank)),
    }))
}

pub fn generate(a: &GenerateArgs) -> CmdResult {
    let x = hypersurface(&a.common.field, &a.form)?;
    let field = x.field().clone();
    let seed = a.common.seed;
    let (psi, source) = match &a.psi {
        Some(path) => (read_psi(path)?, "file"),
        None => {
            refuse_cone(&x)?;
            let choice = choose_point(&x, a.point.as_deref(), seed, a.budget_enum)?;
            (build_psi(&x, &choice.point, false)?.0, choice.source)
        }
    };
    let config = SamplerConfig {
        seed,
        height: a.height,
        max_attempts: a.budget_attempts,
    };
    let pts = generate_points(&x, &psi, a.count, &config)?;
    Ok(json!({
        "psi_source": source,
        "base_point": show_point(&field, psi.base_point()),
        "count": pts.len(),
        "points": points_of(&field, &pts),
    }))
}

pub fn enumerate(a: &EnumerateArgs) -> CmdResult {
    let x = hypersurface(&a.common.field, &a.form)?;
    let census = enumerate_points(&x, a.budget_enum, a.cap)?;
    Ok(to_value(&census_doc(&census)))
}

pub fn lines(a: &LinesArgs) -> CmdResult {
    let x = hypersurface(&a.common.field, &a.form)?;
    let field = x.field().clone();
    let set = enumerate_lines(&x, a.budget_enum)?;
    let q = field.order().ok_or(PointsError::NotFinite)?;
    let listed: Vec<Value> = set
        .lines
        .iter()
        .take(a.cap)
        .map(|l| {
            json!({
                "basis": points_of(&field, &l.basis),
                "points": points_of(&field, &l.points),
            })
        })
        .collect();
    Ok(json!({
        "field": field.designator(),
        "lines_in_space": line_count(q),
        "lines_scanned": set.lines_scanned,
        "lines_on_surface": set.lines.len(),
        "point_count": set.point_count,
        "covered_points": set.covered_points,
        "coverage": set.coverage(),
        "cap": a.cap,
        "lines": listed,
    }))
}

/// Variables shared by several forms: `x0..x<max>` when every name is
/// indexed, otherwise all names in sorted order.
fn shared_variables(field: &Field, forms: &[String]) -> Result<Variables, Failure> {
    let mut names = std::collections::BTreeSet::new();
    for f in forms {
        names.extend(parse_poly(field, f)?.vars().names().iter().cloned());
    }
    let indexed: Option<Vec<usize>> = names
        .iter()
        .map(|n| n.strip_prefix('x').and_then(|d| d.parse().ok()))
        .collect();
    Ok(match indexed {
        Some(idx) if !idx.is_empty() => Variables::indexed("x", idx.into_iter().max().unwrap() + 1),
        _ => Variables::new(names),
    })
}

pub fn weilres(a: &WeilArgs) -> CmdResult {
    let ext = parse_field(&a.common.field)?;
    let d = ext.degree() as usize;
    if d < 2 {
        return Err(Failure::input(
            "NotAnExtension",
            "weilres needs a proper extension of a prime field",
        ));
    }
    let vars = match a.vars {
        Some(n) => Variables::indexed("x", n),
        None => shared_variables(&ext, &a.forms)?,
    };
    let eqs = a
        .forms
        .iter()
        .map(|f| parse_poly_in(&ext, &vars, f))
        .collect::<Result<Vec<_>, _>>()?;
    let basis: Vec<Scalar> = match &a.basis {
        Some(text) => parse_scalars(&ext, text)?,
        None => {
            let w = ext.generator().expect("extension field");
            let mut pow = ext.one();
            let mut out = Vec::with_capacity(d);
            for _ in 0..d {
                out.push(pow.clone());
                pow = ext.mul(&pow, &w);
            }
            out
        }
    };
    let table = MultiplicationTable::from_basis(&ext, basis)?;
    let restricted = weil_restrict(&eqs, &table)?;
    let base = table.base().clone();
    let table_doc: Vec<Vec<Vec<String>>> = table
        .table()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.iter().map(|c| show_scalar(&base, c)).collect())
                .collect()
        })
        .collect();
    Ok(json!({
        "extension": ext.designator(),
        "base": base.designator(),
        "degree": d,
        "basis": table.basis().iter().map(|c| show_scalar(&ext, c)).collect::<Vec<_>>(),
        "table": table_doc,
        "input_variables": vars.names(),
        "variables": weil_variables(vars.len(), d).names(),
        "equations": restricted.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    }))
}
