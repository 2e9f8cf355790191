//! The map `Ψ: A^{3n-2}(u, v, w) ⇢ X`.
//!
//! Conventions. With `F = L + Q + C` at the origin and `cL, cQ, cC` the
//! values of `L, Q, C` at `(u, 1)`, the roots `t₁, t₂` of
//! `cL + τ·cQ + τ²·cC` are handled through the integral generator
//! `T = cC·t`, a root of the monic `T² + cQ·T + cL·cC`. Over a polynomial
//! base this keeps every step division-free. Points are projective
//! `(z0, y_1..y_{n+1})`, so the universal point `(t·u, t)` becomes
//! `(cC : T·u : T)` and the tangent direction is scaled by
//! `cC·∂F/∂y_{n+1}`.
//!
//! `Q₁ = H₃·P − H₂·d = α + T·β`. The line through `Q₁` and its conjugate is
//! `μ ↦ α + μ·β`, on which `T₁, T₂` are roots of `G'(α + μβ)`; the quotient
//! by `μ² + cQ·μ + cL·cC` is `A·μ + B` and `Ψ = A·α − B·β`. In the `t`
//! normalization (`μ = cC·λ`) the line coefficients are `G_j = cC^j·G_j^T`
//! and `λ₃ = −G₂/G₃ + cQ/cC`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::univariate::Series;
use crate::algebra::{
    Algebra, Field, Integers, MultiPoly, RationalFunction, Ring, Scalar, Variables,
};
use crate::cubic::{self, CubicHypersurface, ProjectivePoint};
use crate::quadext::{QuadExtElement, QuadExtRing};

use super::SegreError;

/// `u1..un, v1..v{n-1}, w1..w{n-1}`.
pub fn psi_variables(n: usize) -> Variables {
    let mut names = Vec::with_capacity(3 * n - 2);
    names.extend((1..=n).map(|i| format!("u{i}")));
    names.extend((1..n).map(|i| format!("v{i}")));
    names.extend((1..n).map(|i| format!("w{i}")));
    Variables::new(names)
}

/// The parametrization in the affine chart of the pointed frame: `y_i =
/// numerators[i-1] / denominator`, and `x = frame·(1, y)` in the original
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiMap {
    field: Field,
    n: usize,
    vars: Variables,
    numerators: Vec<MultiPoly>,
    denominator: MultiPoly,
    frame: Matrix,
    base_point: ProjectivePoint,
    certificate: Option<LineCertificate>,
}

/// Data proving `G'(Ψ_hom) = 0` without expanding it, where `G' = F∘frame`:
///
/// * `scale·Ψ_hom = a·α − b·β` with `scale ≠ 0`;
/// * `G'(α + μβ) = factor·(a·μ + b)·(μ² + cq·μ + m0)`.
///
/// Homogenizing the second identity and substituting `(μ : 1) = (−b : a)`
/// gives `G'(a·α − b·β) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCertificate {
    pub alpha: Vec<MultiPoly>,
    pub beta: Vec<MultiPoly>,
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub cq: MultiPoly,
    pub m0: MultiPoly,
    pub factor: MultiPoly,
    pub scale: MultiPoly,
}

impl PsiMap {
    pub fn new(
        field: Field,
        numerators: Vec<MultiPoly>,
        denominator: MultiPoly,
        frame: Matrix,
        base_point: ProjectivePoint,
    ) -> Result<Self, SegreError> {
        let n = numerators
            .len()
            .checked_sub(1)
            .ok_or(SegreError::DimensionTooSmall(0))?;
        let vars = denominator.vars().clone();
        let consistent = numerators
            .iter()
            .all(|p| p.vars() == &vars && p.ring() == &field)
            && denominator.ring() == &field
            && !denominator.is_zero()
            && frame.len() == n + 2
            && frame.iter().all(|r| r.len() == n + 2)
            && base_point.len() == n + 2;
        if !consistent {
            return Err(SegreError::InternalInconsistency(
                "malformed parametrization data".into(),
            ));
        }
        Ok(PsiMap {
            field,
            n,
            vars,
            numerators,
            denominator,
            frame,
            base_point,
            certificate: None,
        })
    }

    /// Attaches a line certificate; its polynomials must live in the same
    /// ring as the map.
    pub fn with_certificate(mut self, cert: LineCertificate) -> Result<Self, SegreError> {
        let m = self.n + 2;
        let same = |p: &MultiPoly| p.vars() == &self.vars && p.ring() == &self.field;
        let ok = cert.alpha.len() == m
            && cert.beta.len() == m
            && cert.alpha.iter().chain(&cert.beta).all(same)
            && [
                &cert.a,
                &cert.b,
                &cert.cq,
                &cert.m0,
                &cert.factor,
                &cert.scale,
            ]
            .into_iter()
            .all(same)
            && !cert.scale.is_zero();
        if !ok {
            return Err(SegreError::InternalInconsistency(
                "malformed line certificate".into(),
            ));
        }
        self.certificate = Some(cert);
        Ok(self)
    }

    pub fn certificate(&self) -> Option<&LineCertificate> {
        self.certificate.as_ref()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn num_inputs(&self) -> usize {
        self.vars.len()
    }

    pub fn numerators(&self) -> &[MultiPoly] {
        &self.numerators
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.denominator
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn base_point(&self) -> &ProjectivePoint {
        &self.base_point
    }

    /// The `n + 1` affine components.
    pub fn components(&self) -> Vec<RationalFunction> {
        self.numerators
            .iter()
            .map(|p| RationalFunction::from_parts_unreduced(p.clone(), self.denominator.clone()))
            .collect()
    }

    /// `(D, N_1, …, N_{n+1})` in the pointed frame.
    pub fn homogeneous(&self) -> Vec<MultiPoly> {
        let mut out = Vec::with_capacity(self.n + 2);
        out.push(self.denominator.clone());
        out.extend(self.numerators.iter().cloned());
        out
    }

    /// Homogeneous coordinates in the original frame.
    pub fn ambient(&self) -> Vec<MultiPoly> {
        let hom = self.homogeneous();
        self.frame
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&hom)
                    .filter(|(c, _)| !self.field.is_zero(c))
                    .fold(
                        MultiPoly::zero(self.field.clone(), self.vars.clone()),
                        |acc, (c, p)| acc.add(&p.scale(c)),
                    )
            })
            .collect()
    }

    /// Original-frame coordinates at a parameter value, `None` when the
    /// common denominator vanishes there.
    pub fn eval_ambient(&self, args: &[Scalar]) -> Option<Vec<Scalar>> {
        let d = self.denominator.eval(args);
        if self.field.is_zero(&d) {
            return None;
        }
        let mut hom = vec![d];
        hom.extend(self.numerators.iter().map(|p| p.eval(args)));
        Some(linalg::mat_vec(&self.field, &self.frame, &hom))
    }

    /// Same map with new numerators and denominator over another variable
    /// list (used by slicing).
    pub fn with_polys(&self, numerators: Vec<MultiPoly>, denominator: MultiPoly) -> Self {
        PsiMap {
            field: self.field.clone(),
            n: self.n,
            vars: denominator.vars().clone(),
            numerators,
            denominator,
            frame: self.frame.clone(),
            base_point: self.base_point.clone(),
            certificate: None,
        }
    }

    pub fn total_terms(&self) -> usize {
        self.denominator.num_terms() + self.numerators.iter().map(|p| p.num_terms()).sum::<usize>()
    }
}

/// Intermediate values of one build, in the `T = cC·t` normalization.
/// Polynomials are over the field of the hypersurface in the `Ψ` variables.
/// Over `Q` the build runs on the integral multiple `form_scale·G'` of the
/// pointed form, and the trace records the values for that multiple.
#[derive(Clone, Debug)]
pub struct PsiTrace {
    pub form_scale: Scalar,
    pub cl: MultiPoly,
    pub cq: MultiPoly,
    pub cc: MultiPoly,
    /// `(a, b)` pairs for `a + b·T`.
    pub point: Vec<(MultiPoly, MultiPoly)>,
    pub direction: Vec<(MultiPoly, MultiPoly)>,
    pub h: [(MultiPoly, MultiPoly); 4],
    pub alpha: Vec<MultiPoly>,
    pub beta: Vec<MultiPoly>,
    /// Power of `cC` removed jointly from `(α, β)`.
    pub alpha_beta_cc_power: u32,
    /// `Q₁ = alpha_beta_divisor·(α + T·β)`.
    pub alpha_beta_divisor: MultiPoly,
    /// `G'(α + μβ) = Σ μ^j·G_j^T`.
    pub g: [MultiPoly; 4],
    pub a: MultiPoly,
    pub b: MultiPoly,
    /// Power of `cC` removed from `A·α − B·β`.
    pub psi_cc_power: u32,
    /// Whether the build used the conjugate root.
    pub conjugated: bool,
}

impl PsiTrace {
    /// `G_j = cC^j·G_j^T`, the coefficients for the line `α + λ·(cC·β)`.
    pub fn g_t_normalized(&self) -> [MultiPoly; 4] {
        let mut pow = self.cc.one_like();
        let mut out: [MultiPoly; 4] = core::array::from_fn(|_| self.cc.zero_like());
        for (j, gj) in self.g.iter().enumerate() {
            out[j] = gj.mul(&pow);
            pow = pow.mul(&self.cc);
        }
        out
    }

    /// `λ₃ = −G₂/G₃ + cQ/cC`.
    pub fn lambda3(&self) -> Result<RationalFunction, SegreError> {
        let g = self.g_t_normalized();
        let r = |p: &MultiPoly| RationalFunction::from_poly(p.clone());
        let ratio = r(&g[2]).div(&r(&g[3]))?;
        Ok(ratio.neg().add(&r(&self.cq).div(&r(&self.cc))?))
    }

    /// `−G₂/G₃ − (t₁ + t₂)` with the root sum taken from the extension ring
    /// `k(u,v,w)[t]/(cC·t² + cQ·t + cL)`.
    pub fn lambda3_vieta(&self) -> Result<RationalFunction, SegreError> {
        let g = self.g_t_normalized();
        let r = |p: &MultiPoly| RationalFunction::from_poly(p.clone());
        let ring = QuadExtRing::new(r(&self.cl), r(&self.cq), r(&self.cc))?;
        let t = QuadExtElement::t(&ring);
        let sum = t.add(&t.conjugate());
        if !sum.is_base() {
            return Err(SegreError::InternalInconsistency(
                "t₁ + t₂ is not base".into(),
            ));
        }
        let ratio = r(&g[2]).div(&r(&g[3]))?;
        Ok(ratio.neg().sub(sum.a()))
    }
}

/// Outcome of [`PsiTrace::check_identities`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceIdentities {
    /// `H₀ = H₁ = 0`.
    pub tangent: bool,
    /// `Q₁ = H₃·P − H₂·d` splits as `divisor·(α + T·β)`.
    pub split: bool,
    /// The line `(μ − T₂)·Q₁ − (μ − T₁)·Q₂` equals `(T₁ − T₂)·(α + μ·β)`,
    /// so it and every point on it (`Ψ` included) has zero `t`-component.
    pub line_is_base: bool,
    /// `Σ μ^j·G_j = (A·μ + B)(μ² + cQ·μ + cL·cC)`.
    pub factorization: bool,
    /// `t₁ + t₂ = −cQ/cC` in the extension, so `−G₂/G₃ + cQ/cC` is the
    /// Vieta root `−G₂/G₃ − (t₁ + t₂)`; also `B = G₂ − cQ·G₃`.
    pub third_root: bool,
}

impl TraceIdentities {
    pub fn all(&self) -> bool {
        self.tangent && self.split && self.line_is_base && self.factorization && self.third_root
    }
}

impl PsiTrace {
    /// Rechecks the construction's identities from the recorded values,
    /// without expanding anything larger than the `G_j`.
    pub fn check_identities(&self) -> Result<TraceIdentities, SegreError> {
        let one = self.cc.one_like();
        let m0 = self.cl.mul(&self.cc);
        let ring = QuadExtRing::new(m0.clone(), self.cq.clone(), one.clone())?;
        let ext =
            |(a, b): &(MultiPoly, MultiPoly)| QuadExtElement::new(&ring, a.clone(), b.clone());
        let tangent = self.h[0].0.is_zero()
            && self.h[0].1.is_zero()
            && self.h[1].0.is_zero()
            && self.h[1].1.is_zero();

        let (h2, h3) = (ext(&self.h[2]), ext(&self.h[3]));
        let reduced: Vec<QuadExtElement<MultiPoly>> = self
            .alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| QuadExtElement::new(&ring, a.clone(), b.clone()))
            .collect();
        let split = self
            .point
            .iter()
            .zip(&self.direction)
            .zip(&reduced)
            .all(|((p, d), r)| {
                let q = h3.mul(&ext(p)).sub(&h2.mul(&ext(d)));
                let q = if self.conjugated { q.conjugate() } else { q };
                q == r.scale(&self.alpha_beta_divisor)
            });

        // with μ-coefficients: μ·(Q₁ − Q₂) + (T·Q₂ − T̄·Q₁)
        let t = QuadExtElement::t(&ring);
        let tbar = t.conjugate();
        let diff = t.sub(&tbar);
        let line_is_base =
            reduced
                .iter()
                .zip(self.alpha.iter().zip(&self.beta))
                .all(|(q1, (a, b))| {
                    let q2 = q1.conjugate();
                    let slope = q1.sub(&q2);
                    let offset = t.mul(&q2).sub(&tbar.mul(q1));
                    slope == diff.scale(b) && offset == diff.scale(a)
                });

        let [g0, g1, g2, g3] = &self.g;
        let factorization = *g3 == self.a
            && *g2 == self.b.add(&self.cq.mul(&self.a))
            && *g1 == self.a.mul(&m0).add(&self.b.mul(&self.cq))
            && *g0 == self.b.mul(&m0);

        let r = |p: &MultiPoly| RationalFunction::from_poly(p.clone());
        let fun_ring = QuadExtRing::new(r(&self.cl), r(&self.cq), r(&self.cc))?;
        let tf = QuadExtElement::t(&fun_ring);
        let sum = tf.add(&tf.conjugate());
        let third_root = sum.is_base()
            && *sum.a() == r(&self.cq).div(&r(&self.cc))?.neg()
            && self.b == g2.sub(&self.cq.mul(g3));

        Ok(TraceIdentities {
            tangent,
            split,
            line_is_base,
            factorization,
            third_root,
        })
    }
}

/// Ring-generic pieces: the builder runs over `Z` for forms over `Q` and
/// over the field itself otherwise.
struct Core<R: Ring> {
    cl: MultiPoly<R>,
    cq: MultiPoly<R>,
    cc: MultiPoly<R>,
    point: Vec<QuadExtElement<MultiPoly<R>>>,
    direction: Vec<QuadExtElement<MultiPoly<R>>>,
    h: Vec<QuadExtElement<MultiPoly<R>>>,
    ab_power: u32,
    ab_divisor: MultiPoly<R>,
    /// From the chosen root.
    line: Line<R>,
    /// From `t₁`, when `t₂` was chosen.
    cert_line: Option<Line<R>>,
}

struct Line<R: Ring> {
    alpha: Vec<MultiPoly<R>>,
    beta: Vec<MultiPoly<R>>,
    g: Vec<MultiPoly<R>>,
    a: MultiPoly<R>,
    b: MultiPoly<R>,
    psi: Vec<MultiPoly<R>>,
    psi_power: u32,
    a_red: MultiPoly<R>,
    b_red: MultiPoly<R>,
    factor: MultiPoly<R>,
    scale: MultiPoly<R>,
}

type Ext<R> = QuadExtElement<MultiPoly<R>>;

fn inconsistent(msg: &str) -> SegreError {
    SegreError::InternalInconsistency(msg.into())
}

/// Divides every entry by `factor` as often as all of them allow.
fn strip_joint_factor<R: Ring>(polys: &mut [MultiPoly<R>], factor: &MultiPoly<R>) -> u32 {
    if factor.is_constant() || polys.iter().all(|p| p.is_zero()) {
        return 0;
    }
    let mut k = 0;
    loop {
        // smallest first: most likely to fail fast
        let mut order: Vec<usize> = (0..polys.len()).filter(|&i| !polys[i].is_zero()).collect();
        order.sort_by_key(|&i| polys[i].num_terms());
        let mut quotients: Vec<Option<MultiPoly<R>>> = vec![None; polys.len()];
        for &i in &order {
            match polys[i].div_exact(factor) {
                Some(q) => quotients[i] = Some(q),
                None => return k,
            }
        }
        for (p, q) in polys.iter_mut().zip(quotients) {
            if let Some(q) = q {
                *p = q;
            }
        }
        k += 1;
    }
}

/// Removes the common monomial factor and scalar content; the first nonzero
/// entry gets a normalized leading coefficient. Returns the removed divisor.
fn normalize_joint<R: Ring>(polys: &mut [MultiPoly<R>]) -> MultiPoly<R> {
    let Some(first) = polys.iter().find(|p| !p.is_zero()) else {
        return MultiPoly::one(polys[0].ring().clone(), polys[0].vars().clone());
    };
    let ring = first.ring().clone();
    let first_vars = first.vars().clone();
    let mono = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monomial_content())
        .reduce(|a, b| a.gcd(&b))
        .unwrap();
    let lead = first.leading_coeff();
    let scalar = if ring.is_field() {
        lead
    } else {
        let g = polys
            .iter()
            .filter(|p| !p.is_zero())
            .fold(ring.zero(), |g, p| ring.content_gcd(&g, &p.content()));
        ring.mul(&g, &ring.normalizing_unit(&lead))
    };
    for p in polys.iter_mut() {
        if p.is_zero() {
            continue;
        }
        let mut q = p.div_monomial(&mono).expect("common monomial");
        q = q.div_scalar(&scalar).expect("common content");
        *p = q;
    }
    MultiPoly::one(ring, first_vars).mul_term(&mono, &scalar)
}

fn build_core<R: Ring>(
    hom: &MultiPoly<R>,
    n: usize,
    vars: &Variables,
    conjugated: bool,
) -> Result<Core<R>, SegreError> {
    let ring = hom.ring().clone();
    let zero = MultiPoly::zero(ring.clone(), vars.clone());
    let one = MultiPoly::one(ring.clone(), vars.clone());
    let var = |i: usize| MultiPoly::var(ring.clone(), vars.clone(), i);
    let u: Vec<MultiPoly<R>> = (0..n).map(var).collect();
    let v = |i: usize| if i + 1 < n { var(n + i) } else { one.clone() };
    let w = |i: usize| {
        if i + 1 < n {
            var(2 * n - 1 + i)
        } else {
            zero.clone()
        }
    };

    // cL, cQ, cC: the z0-graded pieces of the homogenized form at (u, 1)
    let parts = hom.coefficients_in(0);
    let piece = |k: usize| parts.get(k).cloned().unwrap_or_else(|| hom.zero_like());
    let mut at_u1: Vec<MultiPoly<R>> = vec![one.clone()];
    at_u1.extend(u.iter().cloned());
    at_u1.push(one.clone());
    let cl = piece(2).compose(&at_u1);
    let cq = piece(1).compose(&at_u1);
    let cc = piece(0).compose(&at_u1);
    if cc.is_zero() {
        return Err(SegreError::CubicPartVanishes);
    }
    if cl.is_zero() {
        return Err(SegreError::NotSmooth);
    }

    let ext_ring = QuadExtRing::new(cl.mul(&cc), cq.clone(), one.clone())?;
    let base = |p: MultiPoly<R>| QuadExtElement::base(&ext_ring, p);
    let tt = |p: MultiPoly<R>| QuadExtElement::new(&ext_ring, zero.clone(), p);
    let mut point: Vec<Ext<R>> = vec![base(cc.clone())];
    point.extend(u.iter().map(|ui| tt(ui.clone())));
    point.push(tt(one.clone()));

    let embed = |c: &R::Elem| base(MultiPoly::constant(ring.clone(), vars.clone(), c.clone()));
    let grad: Vec<Ext<R>> = (1..=n + 1)
        .map(|i| hom.derivative(i).eval_in(&point, embed))
        .collect();
    let gl = &grad[n];
    if gl.is_zero() {
        return Err(SegreError::DegenerateTangentDirection(
            "∂F/∂y_{n+1} vanishes along the universal line",
        ));
    }
    let e: Vec<Ext<R>> = (0..n)
        .map(|i| QuadExtElement::new(&ext_ring, cc.mul(&v(i)), w(i)))
        .collect();
    let mut direction: Vec<Ext<R>> = vec![base(zero.clone())];
    direction.extend(e.iter().map(|ei| gl.mul(ei)));
    let slope = grad[..n]
        .iter()
        .zip(&e)
        .fold(base(zero.clone()), |acc, (g, ei)| acc.add(&g.mul(ei)));
    direction.push(slope.neg());

    let line: Vec<Series<Ext<R>>> = point
        .iter()
        .zip(&direction)
        .map(|(p, d)| Series::linear(p.clone(), d.clone()))
        .collect();
    let hs = hom.eval_in(&line, |c| Series::constant(embed(c)));
    let h: Vec<Ext<R>> = (0..4).map(|j| hs.coeff(j)).collect();
    if !h[0].is_zero() || !h[1].is_zero() {
        return Err(inconsistent("H0 or H1 is nonzero on the tangent line"));
    }
    if h[3].is_zero() {
        return Err(SegreError::DegenerateTangentDirection(
            "the tangent line lies in X (H3 = 0)",
        ));
    }

    let q1: Vec<Ext<R>> = point
        .iter()
        .zip(&direction)
        .map(|(p, d)| {
            let q = h[3].mul(p).sub(&h[2].mul(d));
            if conjugated {
                q.conjugate()
            } else {
                q
            }
        })
        .collect();
    let (alpha, beta, ab_power, ab_divisor) = joint_basis(
        q1.iter().map(|q| q.a().clone()).collect(),
        q1.iter().map(|q| q.b().clone()).collect(),
        &cc,
    );
    if beta.iter().all(|b| b.is_zero()) {
        return Err(SegreError::DegenerateTangentDirection(
            "Q1 is defined over the base field",
        ));
    }
    let line = on_line(hom, alpha, beta, &cq, &cl.mul(&cc), &cc)?;
    // The certificate is always written in the basis coming from t1. From t2
    // the basis is (α − cQ·β, −β) up to normalization, so map back.
    let cert_line = if conjugated {
        let alpha: Vec<MultiPoly<R>> = line
            .alpha
            .iter()
            .zip(&line.beta)
            .map(|(x, y)| x.sub(&cq.mul(y)))
            .collect();
        let beta = line.beta.iter().map(|y| y.neg()).collect();
        let (alpha, beta, _, _) = joint_basis(alpha, beta, &cc);
        let canonical = on_line(hom, alpha, beta, &cq, &cl.mul(&cc), &cc)?;
        if canonical.psi != line.psi {
            return Err(inconsistent("the two roots give different maps"));
        }
        Some(canonical)
    } else {
        None
    };
    Ok(Core {
        cl,
        cq,
        cc,
        point,
        direction,
        h,
        ab_power,
        ab_divisor,
        line,
        cert_line,
    })
}

/// `(α, β)` with the joint `cC`-power and content removed.
#[allow(clippy::type_complexity)]
fn joint_basis<R: Ring>(
    alpha: Vec<MultiPoly<R>>,
    beta: Vec<MultiPoly<R>>,
    cc: &MultiPoly<R>,
) -> (Vec<MultiPoly<R>>, Vec<MultiPoly<R>>, u32, MultiPoly<R>) {
    let m = alpha.len();
    let mut ab = alpha;
    ab.extend(beta);
    let power = strip_joint_factor(&mut ab, cc);
    let divisor = normalize_joint(&mut ab).mul(&cc.pow(power));
    let beta = ab.split_off(m);
    (ab, beta, power, divisor)
}

/// Restricts the form to the line `α + μβ`, splits off the known quadratic
/// factor and forms `Ψ` from the remaining root.
fn on_line<R: Ring>(
    hom: &MultiPoly<R>,
    alpha: Vec<MultiPoly<R>>,
    beta: Vec<MultiPoly<R>>,
    cq: &MultiPoly<R>,
    clcc: &MultiPoly<R>,
    cc: &MultiPoly<R>,
) -> Result<Line<R>, SegreError> {
    let g: Vec<MultiPoly<R>> = line_coefficients(hom, &alpha, &beta).to_vec();
    // G'(α + μβ) = (Aμ + B)(μ² + cQ·μ + cL·cC)
    let a = g[3].clone();
    let b = g[2].sub(&cq.mul(&a));
    if g[1] != a.mul(clcc).add(&b.mul(cq)) || g[0] != b.mul(clcc) {
        return Err(inconsistent(
            "the restriction to the line is not divisible by the modulus",
        ));
    }
    if a.is_zero() {
        return Err(SegreError::LineContainedInX);
    }
    // only the ratio B/A matters
    let mut ab_pair = [a.clone(), b.clone()];
    let line_power = strip_joint_factor(&mut ab_pair, cc);
    let factor = normalize_joint(&mut ab_pair).mul(&cc.pow(line_power));
    let [a_red, b_red] = ab_pair;
    let mut psi: Vec<MultiPoly<R>> = alpha
        .iter()
        .zip(&beta)
        .map(|(x, y)| a_red.mul(x).sub(&b_red.mul(y)))
        .collect();
    let psi_power = strip_joint_factor(&mut psi, cc);
    let scale = normalize_joint(&mut psi).mul(&cc.pow(psi_power));
    Ok(Line {
        alpha,
        beta,
        g,
        a,
        b,
        psi,
        psi_power,
        a_red,
        b_red,
        factor,
        scale,
    })
}

/// `G'(α + μβ) = Σ μ^j·G_j` for a cubic form `G'`, by polarization: the
/// pairwise products of `α` and of `β` are formed once, and each `G_j` is a
/// sum of `big × small` products.
pub(crate) fn line_coefficients<R: Ring>(
    form: &MultiPoly<R>,
    alpha: &[MultiPoly<R>],
    beta: &[MultiPoly<R>],
) -> [MultiPoly<R>; 4] {
    let m = alpha.len();
    let zero = alpha[0].zero_like();
    let triples: Vec<([usize; 3], R::Elem)> = form
        .terms()
        .iter()
        .map(|(mono, c)| {
            let mut idx = [0usize; 3];
            let mut k = 0;
            for (i, e) in mono.exponents().iter().enumerate() {
                for _ in 0..*e {
                    idx[k] = i;
                    k += 1;
                }
            }
            assert_eq!(k, 3, "cubic form expected");
            (idx, c.clone())
        })
        .collect();
    // for x ∈ {α, β}: P_i with Σ x_i·P_i = G'(x), and D_l = ∂_l G'(x)
    let parts = |x: &[MultiPoly<R>]| {
        let mut pairs: BTreeMap<(usize, usize), MultiPoly<R>> = BTreeMap::new();
        let mut pair = |a: usize, b: usize| {
            let key = (a.min(b), a.max(b));
            pairs
                .entry(key)
                .or_insert_with(|| x[key.0].mul(&x[key.1]))
                .clone()
        };
        let mut p = vec![zero.clone(); m];
        let mut d = vec![zero.clone(); m];
        for ([i, j, k], c) in &triples {
            let jk = pair(*j, *k).scale(c);
            p[*i] = p[*i].add(&jk);
            d[*i] = d[*i].add(&jk);
            d[*j] = d[*j].add(&pair(*i, *k).scale(c));
            d[*k] = d[*k].add(&pair(*i, *j).scale(c));
        }
        (p, d)
    };
    let dot = |x: &[MultiPoly<R>], y: &[MultiPoly<R>]| {
        x.iter()
            .zip(y)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(zero.clone(), |acc, (a, b)| acc.add(&a.mul(b)))
    };
    let (pa, da) = parts(alpha);
    let (pb, db) = parts(beta);
    [
        dot(alpha, &pa),
        dot(beta, &da),
        dot(alpha, &db),
        dot(beta, &pb),
    ]
}

fn integer_to_field(p: &MultiPoly<Integers>) -> MultiPoly {
    p.map_ring(Field::Rationals, |c| {
        Scalar::Rational(BigRational::from_integer(c.clone()))
    })
}

/// Clears denominators of a form over `Q`: returns `(D, D·p)` with `D` the
/// lcm of the coefficient denominators.
fn to_integer_form(p: &MultiPoly) -> (BigInt, MultiPoly<Integers>) {
    use num_integer::Integer;
    let lcm = p.terms().iter().fold(BigInt::from(1), |l, (_, c)| match c {
        Scalar::Rational(r) => l.lcm(r.denom()),
        Scalar::Residue(_) => unreachable!("rational form"),
    });
    let int = p.map_ring(Integers, |c| match c {
        Scalar::Rational(r) => (r * BigRational::from_integer(lcm.clone())).to_integer(),
        Scalar::Residue(_) => unreachable!(),
    });
    (lcm, int)
}

fn pair_to_field<R: Ring>(
    e: &Ext<R>,
    conv: &impl Fn(&MultiPoly<R>) -> MultiPoly,
) -> (MultiPoly, MultiPoly) {
    (conv(e.a()), conv(e.b()))
}

/// Converts the ring-generic result; `form_scale` is the multiple of the
/// pointed form the core was run on.
fn finish<R: Ring>(
    core: Core<R>,
    conv: impl Fn(&MultiPoly<R>) -> MultiPoly,
    form_scale: Scalar,
    conjugated: bool,
) -> (Vec<MultiPoly>, LineCertificate, PsiTrace) {
    let line = &core.line;
    let cert_line = core.cert_line.as_ref().unwrap_or(line);
    let psi: Vec<MultiPoly> = line.psi.iter().map(&conv).collect();
    let cc = conv(&core.cc);
    let field = cc.ring().clone();
    let inv = field.inv(&form_scale).expect("nonzero form scale");
    let cert = LineCertificate {
        alpha: cert_line.alpha.iter().map(&conv).collect(),
        beta: cert_line.beta.iter().map(&conv).collect(),
        a: conv(&cert_line.a_red),
        b: conv(&cert_line.b_red),
        cq: conv(&core.cq),
        m0: conv(&core.cl.mul(&core.cc)),
        factor: conv(&cert_line.factor).scale(&inv),
        scale: conv(&cert_line.scale),
    };
    let trace = PsiTrace {
        form_scale,
        cl: conv(&core.cl),
        cq: conv(&core.cq),
        cc,
        point: core.point.iter().map(|e| pair_to_field(e, &conv)).collect(),
        direction: core
            .direction
            .iter()
            .map(|e| pair_to_field(e, &conv))
            .collect(),
        h: core::array::from_fn(|j| pair_to_field(&core.h[j], &conv)),
        alpha: line.alpha.iter().map(&conv).collect(),
        beta: line.beta.iter().map(&conv).collect(),
        alpha_beta_cc_power: core.ab_power,
        alpha_beta_divisor: conv(&core.ab_divisor),
        g: core::array::from_fn(|j| conv(&line.g[j])),
        a: conv(&line.a),
        b: conv(&line.b),
        psi_cc_power: line.psi_power,
        conjugated,
    };
    (psi, cert, trace)
}

/// Builds `Ψ` through a smooth point. With `conjugated` the construction
/// starts from the other root `t₂`; the resulting map is the same. The map
/// carries a [`LineCertificate`].
pub fn build_psi(
    x: &CubicHypersurface,
    p: &ProjectivePoint,
    conjugated: bool,
) -> Result<(PsiMap, PsiTrace), SegreError> {
    let n = x.dimension();
    if n < 2 {
        return Err(SegreError::DimensionTooSmall(n));
    }
    let field = x.field().clone();
    if !x.contains(p)? {
        return Err(SegreError::PointNotOnHypersurface);
    }
    if !x.is_smooth_point(p)? {
        return Err(SegreError::NotSmooth);
    }
    if !cubic::triple_point_locus(x)?.is_empty() {
        return Err(SegreError::ConeInput);
    }
    let pointed = cubic::decompose_at_point(x, p)?;
    let hom = pointed.homogenized();
    let vars = psi_variables(n);
    let (mut psi, cert, trace) = match field {
        Field::Rationals => {
            let (d, int) = to_integer_form(&hom);
            let core = build_core(&int, n, &vars, conjugated)?;
            let d = Scalar::Rational(BigRational::from_integer(d));
            finish(core, integer_to_field, d, conjugated)
        }
        _ => {
            let core = build_core(&hom, n, &vars, conjugated)?;
            let one = field.one();
            finish(core, |p: &MultiPoly| p.clone(), one, conjugated)
        }
    };
    let denominator = psi.remove(0);
    if denominator.is_zero() {
        return Err(SegreError::DegenerateTangentDirection(
            "the image lies in the hyperplane at infinity",
        ));
    }
    let map = PsiMap::new(field, psi, denominator, pointed.frame.clone(), p.clone())?
        .with_certificate(cert)?;
    Ok((map, trace))
}

/// `e_i`-th unit monomial in the `Ψ` variables, for tests and callers that
/// want to address `u`, `v`, `w` by name.
pub fn psi_var_index(n: usize, group: char, i: usize) -> Option<usize> {
    match group {
        'u' if (1..=n).contains(&i) => Some(i - 1),
        'v' if (1..n).contains(&i) => Some(n + i - 1),
        'w' if (1..n).contains(&i) => Some(2 * n - 2 + i),
        _ => None,
    }
}
