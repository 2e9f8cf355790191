//! Serialized forms: the `unirat-psi` document for parametrizations and the
//! helpers that render library values into report fields.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use unirat_core::algebra::{parse_field, parse_poly_in, Monomial, Variables};
use unirat_core::segre::{Certificate, RankCertificate, VerifyMethod, VerifyMode};
use unirat_core::{Field, LineCertificate, MultiPoly, ProjectivePoint, PsiMap, Scalar};

use crate::error::Failure;

pub const REPORT_SCHEMA: &str = "unirat-report";
pub const PSI_SCHEMA: &str = "unirat-psi";
pub const SCHEMA_VERSION: u32 = 1;

/// One term: exponent vector over the document's variables, coefficient.
pub type TermDoc = (Vec<u16>, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiDoc {
    pub schema: String,
    pub version: u32,
    pub field: String,
    pub dimension: usize,
    pub variables: Vec<String>,
    pub denominator: Vec<TermDoc>,
    pub numerators: Vec<Vec<TermDoc>>,
    pub frame: Vec<Vec<String>>,
    pub base_point: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<LineCertificateDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCertificateDoc {
    pub alpha: Vec<Vec<TermDoc>>,
    pub beta: Vec<Vec<TermDoc>>,
    pub a: Vec<TermDoc>,
    pub b: Vec<TermDoc>,
    pub cq: Vec<TermDoc>,
    pub m0: Vec<TermDoc>,
    pub factor: Vec<TermDoc>,
    pub scale: Vec<TermDoc>,
}

/// Coefficient code: `a/b` (or `a`) over `Q`, the residue code otherwise.
pub fn encode_scalar(c: &Scalar) -> String {
    match c {
        Scalar::Rational(r) => r.to_string(),
        Scalar::Residue(r) => r.to_string(),
    }
}

pub fn decode_scalar(field: &Field, s: &str) -> Result<Scalar, Failure> {
    let bad = || {
        Failure::input(
            "BadCoefficient",
            format!("invalid coefficient {s:?} for {}", field.designator()),
        )
    };
    match field.order() {
        None => BigRational::from_str(s)
            .map(Scalar::Rational)
            .map_err(|_| bad()),
        Some(q) => match s.parse::<u64>() {
            Ok(r) if r < q => Ok(Scalar::Residue(r)),
            _ => Err(bad()),
        },
    }
}

/// Field element as it prints in the form grammar.
pub fn show_scalar(field: &Field, c: &Scalar) -> String {
    field.element_of(c.clone()).to_string()
}

pub fn show_point(field: &Field, p: &ProjectivePoint) -> Vec<String> {
    p.coords().iter().map(|c| show_scalar(field, c)).collect()
}

/// Comma-separated field elements in the form grammar (so `w + 1` and
/// `-2/3` are accepted).
pub fn parse_scalars(field: &Field, text: &str) -> Result<Vec<Scalar>, Failure> {
    let none = Variables::new(Vec::<String>::new());
    text.split(',')
        .map(|c| Ok(parse_poly_in(field, &none, c)?.constant_coeff()))
        .collect()
}

pub fn parse_point(field: &Field, text: &str) -> Result<ProjectivePoint, Failure> {
    Ok(ProjectivePoint::new(field, parse_scalars(field, text)?)?)
}

fn encode_poly(p: &MultiPoly) -> Vec<TermDoc> {
    p.terms()
        .iter()
        .map(|(m, c)| (m.exponents().to_vec(), encode_scalar(c)))
        .collect()
}

fn decode_poly(field: &Field, vars: &Variables, terms: &[TermDoc]) -> Result<MultiPoly, Failure> {
    let mut out = Vec::with_capacity(terms.len());
    for (exps, c) in terms {
        if exps.len() != vars.len() {
            return Err(Failure::input(
                "BadTerm",
                format!(
                    "exponent vector of length {} for {} variables",
                    exps.len(),
                    vars.len()
                ),
            ));
        }
        out.push((Monomial::from_exponents(exps), decode_scalar(field, c)?));
    }
    Ok(MultiPoly::from_terms(field.clone(), vars.clone(), out))
}

fn encode_matrix(m: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|row| row.iter().map(encode_scalar).collect())
        .collect()
}

pub fn psi_to_doc(psi: &PsiMap) -> PsiDoc {
    let polys = |v: &[MultiPoly]| v.iter().map(encode_poly).collect();
    PsiDoc {
        schema: PSI_SCHEMA.into(),
        version: SCHEMA_VERSION,
        field: psi.field().designator(),
        dimension: psi.dimension(),
        variables: psi.vars().names().to_vec(),
        denominator: encode_poly(psi.denominator()),
        numerators: polys(psi.numerators()),
        frame: encode_matrix(psi.frame()),
        base_point: psi
            .base_point()
            .coords()
            .iter()
            .map(encode_scalar)
            .collect(),
        certificate: psi.certificate().map(|c| LineCertificateDoc {
            alpha: polys(&c.alpha),
            beta: polys(&c.beta),
            a: encode_poly(&c.a),
            b: encode_poly(&c.b),
            cq: encode_poly(&c.cq),
            m0: encode_poly(&c.m0),
            factor: encode_poly(&c.factor),
            scale: encode_poly(&c.scale),
        }),
    }
}

pub fn psi_from_doc(doc: &PsiDoc) -> Result<PsiMap, Failure> {
    if doc.schema != PSI_SCHEMA || doc.version != SCHEMA_VERSION {
        return Err(Failure::input(
            "SchemaMismatch",
            format!(
                "expected {PSI_SCHEMA} version {SCHEMA_VERSION}, got {} version {}",
                doc.schema, doc.version
            ),
        ));
    }
    let field = parse_field(&doc.field)?;
    let vars = Variables::new(doc.variables.clone());
    let poly = |t: &[TermDoc]| decode_poly(&field, &vars, t);
    let polys = |v: &[Vec<TermDoc>]| v.iter().map(|t| poly(t)).collect::<Result<Vec<_>, _>>();
    let frame = doc
        .frame
        .iter()
        .map(|row| row.iter().map(|c| decode_scalar(&field, c)).collect())
        .collect::<Result<Vec<Vec<Scalar>>, _>>()?;
    let coords = doc
        .base_point
        .iter()
        .map(|c| decode_scalar(&field, c))
        .collect::<Result<Vec<_>, _>>()?;
    let base_point = ProjectivePoint::new(&field, coords)?;
    let numerators = polys(&doc.numerators)?;
    if numerators.len() != doc.dimension + 1 {
        return Err(Failure::input(
            "BadShape",
            "numerator count does not match the dimension",
        ));
    }
    let psi = PsiMap::new(
        field.clone(),
        numerators,
        poly(&doc.denominator)?,
        frame,
        base_point,
    )?;
    match &doc.certificate {
        None => Ok(psi),
        Some(c) => Ok(psi.with_certificate(LineCertificate {
            alpha: polys(&c.alpha)?,
            beta: polys(&c.beta)?,
            a: poly(&c.a)?,
            b: poly(&c.b)?,
            cq: poly(&c.cq)?,
            m0: poly(&c.m0)?,
            factor: poly(&c.factor)?,
            scale: poly(&c.scale)?,
        })?),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationDoc {
    pub passed: bool,
    pub mode: &'static str,
    pub method: &'static str,
    pub primes: Vec<u64>,
    pub degree_bound: u32,
    pub component_terms: usize,
}

impl From<&Certificate> for VerificationDoc {
    fn from(c: &Certificate) -> Self {
        VerificationDoc {
            passed: true,
            mode: match c.mode {
                VerifyMode::Exact => "exact",
                VerifyMode::Modular => "modular",
            },
            method: match c.method {
                VerifyMethod::Expansion => "expansion",
                VerifyMethod::LineCertificate => "line_certificate",
            },
            primes: c.primes.clone(),
            degree_bound: c.degree_bound,
            component_terms: c.component_terms,
        }
    }
}

/// A rank at one sample is a witness for dominance, not a proof of it.
#[derive(Clone, Debug, Serialize)]
pub struct RankDoc {
    pub kind: &'static str,
    pub rank: usize,
    pub target: usize,
    pub full: bool,
    pub seed: u64,
    pub attempts: usize,
    pub sample: Vec<String>,
    pub modulus: Option<u64>,
}

impl RankDoc {
    pub fn new(field: &Field, r: &RankCertificate) -> Self {
        RankDoc {
            kind: "witness",
            rank: r.rank,
            target: r.target,
            full: r.is_full(),
            seed: r.seed,
            attempts: r.attempts,
            sample: r.sample.iter().map(|c| show_scalar(field, c)).collect(),
            modulus: r.modulus,
        }
    }
}
