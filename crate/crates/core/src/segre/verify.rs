//! Exact check of `F∘Ψ ≡ 0`.
//!
//! Small maps are checked by expanding `F(frame·Ψ_hom)`. Maps carrying a
//! [`LineCertificate`] are checked through its two identities instead, which
//! needs only products of the size of `Ψ` itself.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{Field, Integers, MultiPoly, Ring, Scalar, Variables};
use crate::cubic::CubicHypersurface;

use super::psi::line_coefficients;
use super::{LineCertificate, PsiMap, SegreError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Exact arithmetic over the field of definition.
    Exact,
    /// Arithmetic modulo several primes near `2^32` (for forms over `Q`;
    /// other fields fall back to exact).
    Modular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMethod {
    /// `F(frame·Ψ_hom)` expanded and compared with zero.
    Expansion,
    /// The identities of the attached [`LineCertificate`].
    LineCertificate,
}

/// Maps with at most this many terms in total are always expanded.
pub const EXPANSION_TERM_LIMIT: usize = 2000;

/// Large primes used by the modular mode, largest first.
pub const MODULAR_PRIMES: [u64; 4] = [4294967291, 4294967279, 4294967231, 4294967197];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub mode: VerifyMode,
    pub method: VerifyMethod,
    /// Primes actually used (modular mode only).
    pub primes: Vec<u64>,
    /// Total degree of `F(Ψ_hom)` before cancellation.
    pub degree_bound: u32,
    /// Number of terms of the largest ambient component.
    pub component_terms: usize,
}

fn monomial_name(r: &MultiPoly<impl Ring>) -> String {
    r.leading_term()
        .map(|(m, _)| {
            let vars = r.vars();
            let parts: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    if *e == 1 {
                        vars.name(i).into()
                    } else {
                        format!("{}^{e}", vars.name(i))
                    }
                })
                .collect();
            if parts.is_empty() {
                "1".into()
            } else {
                parts.join("*")
            }
        })
        .unwrap_or_default()
}

pub(crate) fn reduce_mod(p: u64, c: &Scalar) -> Option<Scalar> {
    let Scalar::Rational(r) = c else {
        return None;
    };
    let pb = BigInt::from(p);
    let den = (r.denom() % &pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = {
        let m = r.numer() % &pb;
        let m = if m < BigInt::zero() { m + &pb } else { m };
        m.to_u64()?
    };
    let field = Field::Prime(p);
    field.div(&Scalar::Residue(num), &Scalar::Residue(den)).ok()
}

pub(crate) fn reduce_poly(p: u64, f: &MultiPoly) -> Option<MultiPoly> {
    let field = Field::Prime(p);
    let mut terms = Vec::with_capacity(f.num_terms());
    for (m, c) in f.terms() {
        terms.push((m.clone(), reduce_mod(p, c)?));
    }
    Some(MultiPoly::from_terms(field, f.vars().clone(), terms))
}

/// `f` over `Z` if every coefficient is an integer.
fn to_integers(f: &MultiPoly) -> Option<MultiPoly<Integers>> {
    let integral = f
        .terms()
        .iter()
        .all(|(_, c)| matches!(c, Scalar::Rational(r) if r.is_integer()));
    integral.then(|| {
        f.map_ring(Integers, |c| match c {
            Scalar::Rational(r) => r.to_integer(),
            Scalar::Residue(_) => unreachable!(),
        })
    })
}

/// The data to check, over any coefficient ring.
struct Instance<R: Ring> {
    form: MultiPoly<R>,
    hom: Vec<MultiPoly<R>>,
    cert: Option<Parts<R>>,
}

#[derive(Clone)]
struct Parts<R: Ring> {
    alpha: Vec<MultiPoly<R>>,
    beta: Vec<MultiPoly<R>>,
    a: MultiPoly<R>,
    b: MultiPoly<R>,
    cq: MultiPoly<R>,
    m0: MultiPoly<R>,
    factor: MultiPoly<R>,
    scale: MultiPoly<R>,
}

impl<R: Ring> Instance<R> {
    fn map<S: Ring>(
        &self,
        f: impl Fn(&MultiPoly<R>) -> Option<MultiPoly<S>>,
    ) -> Option<Instance<S>> {
        let all = |v: &[MultiPoly<R>]| v.iter().map(&f).collect::<Option<Vec<_>>>();
        let cert = match &self.cert {
            None => None,
            Some(c) => Some(Parts {
                alpha: all(&c.alpha)?,
                beta: all(&c.beta)?,
                a: f(&c.a)?,
                b: f(&c.b)?,
                cq: f(&c.cq)?,
                m0: f(&c.m0)?,
                factor: f(&c.factor)?,
                scale: f(&c.scale)?,
            }),
        };
        Some(Instance {
            form: f(&self.form)?,
            hom: all(&self.hom)?,
            cert,
        })
    }

    fn check(&self) -> Result<(), SegreError> {
        match &self.cert {
            None => {
                let r = self.form.compose(&self.hom);
                if r.is_zero() {
                    Ok(())
                } else {
                    Err(SegreError::VerificationFailed(monomial_name(&r)))
                }
            }
            Some(c) => check_certificate(&self.form, &self.hom, c),
        }
    }
}

fn check_certificate<R: Ring>(
    form: &MultiPoly<R>,
    hom: &[MultiPoly<R>],
    c: &Parts<R>,
) -> Result<(), SegreError> {
    let fail = |what: &str, r: MultiPoly<R>| {
        Err(SegreError::VerificationFailed(format!(
            "{what}: {}",
            monomial_name(&r)
        )))
    };
    if c.scale.is_zero() {
        return Err(SegreError::VerificationFailed("zero scale".into()));
    }
    for (i, h) in hom.iter().enumerate() {
        let r =
            c.a.mul(&c.alpha[i])
                .sub(&c.b.mul(&c.beta[i]))
                .sub(&c.scale.mul(h));
        if !r.is_zero() {
            return fail("scale identity", r);
        }
    }
    let g = line_coefficients(form, &c.alpha, &c.beta);
    let fa = c.factor.mul(&c.a);
    let fb = c.factor.mul(&c.b);
    let expected = [
        fb.mul(&c.m0),
        fa.mul(&c.m0).add(&fb.mul(&c.cq)),
        fb.add(&fa.mul(&c.cq)),
        fa,
    ];
    for (j, (gj, ej)) in g.iter().zip(&expected).enumerate() {
        let r = gj.sub(ej);
        if !r.is_zero() {
            return fail(&format!("line coefficient {j}"), r);
        }
    }
    Ok(())
}

/// `F∘frame` in variables `z0..z{n+1}`.
fn pointed_form(form: &MultiPoly, frame: &[Vec<Scalar>]) -> MultiPoly {
    let field = form.ring().clone();
    let m = frame.len();
    let vars = Variables::new((0..m).map(|i| format!("z{i}")));
    let zero = MultiPoly::zero(field.clone(), vars.clone());
    let args: Vec<MultiPoly> = frame
        .iter()
        .map(|row| {
            row.iter().enumerate().fold(zero.clone(), |acc, (j, c)| {
                if field.is_zero(c) {
                    acc
                } else {
                    acc.add(&MultiPoly::var(field.clone(), vars.clone(), j).scale(c))
                }
            })
        })
        .collect();
    form.compose(&args)
}

fn certificate_parts(c: &LineCertificate) -> Parts<Field> {
    Parts {
        alpha: c.alpha.clone(),
        beta: c.beta.clone(),
        a: c.a.clone(),
        b: c.b.clone(),
        cq: c.cq.clone(),
        m0: c.m0.clone(),
        factor: c.factor.clone(),
        scale: c.scale.clone(),
    }
}

/// Exact check over `Q`, run over `Z` after clearing the denominators of
/// the form when everything else is integral.
fn check_rational(inst: &Instance<Field>) -> Result<(), SegreError> {
    use num_integer::Integer;
    let lcm = inst
        .form
        .terms()
        .iter()
        .fold(BigInt::one(), |l, (_, c)| match c {
            Scalar::Rational(r) => l.lcm(r.denom()),
            Scalar::Residue(_) => l,
        });
    let d = Scalar::Rational(BigRational::from_integer(lcm));
    let scaled = Instance {
        form: inst.form.scale(&d),
        hom: inst.hom.clone(),
        cert: inst.cert.as_ref().map(|c| Parts {
            factor: c.factor.scale(&d),
            ..c.clone()
        }),
    };
    match scaled.map(to_integers) {
        Some(int) => int.check(),
        None => inst.check(),
    }
}

/// Checks `F(frame·Ψ_hom) = 0`, by expansion for small maps and maps without
/// a certificate, through the certificate otherwise.
pub fn verify_psi(
    x: &CubicHypersurface,
    psi: &PsiMap,
    mode: VerifyMode,
) -> Result<Certificate, SegreError> {
    if x.field() != psi.field() || x.ambient_len() != psi.frame().len() {
        return Err(SegreError::InternalInconsistency(
            "parametrization does not match the hypersurface".into(),
        ));
    }
    let ambient = psi.ambient();
    let degree_bound = 3 * ambient.iter().map(|p| p.total_degree()).max().unwrap_or(0);
    let component_terms = ambient.iter().map(|p| p.num_terms()).max().unwrap_or(0);
    let use_cert = psi.certificate().is_some() && psi.total_terms() > EXPANSION_TERM_LIMIT;
    let inst = if use_cert {
        Instance {
            form: pointed_form(x.form(), psi.frame()),
            hom: psi.homogeneous(),
            cert: psi.certificate().map(certificate_parts),
        }
    } else {
        Instance {
            form: x.form().clone(),
            hom: ambient,
            cert: None,
        }
    };
    let method = if use_cert {
        VerifyMethod::LineCertificate
    } else {
        VerifyMethod::Expansion
    };
    let modular = mode == VerifyMode::Modular && *x.field() == Field::Rationals;
    let mut primes = Vec::new();
    if modular {
        for &p in MODULAR_PRIMES.iter() {
            let Some(reduced) = inst.map(|f| reduce_poly(p, f)) else {
                continue;
            };
            if reduced.cert.as_ref().is_some_and(|c| c.scale.is_zero()) {
                continue;
            }
            reduced.check()?;
            primes.push(p);
        }
        if primes.is_empty() {
            return Err(SegreError::InternalInconsistency(
                "no modular prime is usable".into(),
            ));
        }
    } else if *x.field() == Field::Rationals {
        check_rational(&inst)?;
    } else {
        inst.check()?;
    }
    Ok(Certificate {
        mode: if modular {
            VerifyMode::Modular
        } else {
            VerifyMode::Exact
        },
        method,
        primes,
        degree_bound,
        component_terms,
    })
}
