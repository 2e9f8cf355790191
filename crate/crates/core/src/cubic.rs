//! Cubic hypersurfaces, pointed decompositions and the classification steps.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::univariate::UniPoly;
use crate::algebra::{AlgebraError, Field, Monomial, MultiPoly, Ring, Scalar, Variables};
use crate::rng::SeededRng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CubicError {
    #[error("form is not a nonzero homogeneous cubic")]
    NotACubicForm,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point has all coordinates zero")]
    ZeroPoint,
    #[error("point is not on the hypersurface")]
    PointNotOnHypersurface,
    #[error("point is singular")]
    SingularPoint,
    #[error("point is a triple point")]
    TriplePoint,
    #[error("quadratic part vanishes at every searched direction")]
    QuadraticVanishesEverywhere,
    #[error("no smooth point found on the lines through the double point")]
    NoSmoothPointOnLines,
    #[error("operation needs characteristic {0}")]
    WrongCharacteristic(u64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Homogeneous coordinates; equality is up to scaling once normalized.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<Scalar>,
}

impl ProjectivePoint {
    /// Normalizes so the first nonzero coordinate is 1.
    pub fn new(field: &Field, coords: Vec<Scalar>) -> Result<Self, CubicError> {
        let Some(lead) = coords.iter().find(|c| !field.is_zero(c)).cloned() else {
            return Err(CubicError::ZeroPoint);
        };
        let inv = field.inv(&lead)?;
        let coords = coords.iter().map(|c| field.mul(c, &inv)).collect();
        Ok(ProjectivePoint { coords })
    }

    pub fn from_i64(field: &Field, coords: &[i64]) -> Result<Self, CubicError> {
        Self::new(field, coords.iter().map(|c| field.from_i64(*c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn display<'a>(&'a self, field: &'a Field) -> impl fmt::Display + 'a {
        DisplayPoint(field, self)
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjectivePoint({:?})", self.coords)
    }
}

struct DisplayPoint<'a>(&'a Field, &'a ProjectivePoint);

impl fmt::Display for DisplayPoint<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.1.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            let e = self.0.element_of(c.clone());
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Iterates the normalized representatives of `P^{m-1}(F_q)` in scan order:
/// first nonzero coordinate 1, remaining coordinates lexicographic.
pub fn projective_points(field: &Field, m: usize) -> impl Iterator<Item = Vec<Scalar>> + '_ {
    let q = field.order().expect("finite field");
    (0..m).rev().flat_map(move |lead| {
        let tail = lead as u32;
        let count = q.pow(tail);
        (0..count).map(move |code| {
            let mut v = vec![field.zero(); m];
            v[m - 1 - lead] = field.one();
            let mut c = code;
            for k in (m - lead..m).rev() {
                v[k] = field.element(c % q);
                c /= q;
            }
            v
        })
    })
}

/// Number of points of `P^{m-1}(F_q)`.
pub fn projective_count(q: u64, m: usize) -> Option<u64> {
    let mut total: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..m {
        total = total.checked_add(pow)?;
        pow = pow.checked_mul(q)?;
    }
    Some(total)
}

/// A cubic form `F` in `n + 2` variables over a field: `X ⊂ P^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicHypersurface {
    form: MultiPoly,
}

impl CubicHypersurface {
    pub fn new(form: MultiPoly) -> Result<Self, CubicError> {
        if form.is_zero() || !form.is_homogeneous() || form.total_degree() != 3 || form.nvars() < 2
        {
            return Err(CubicError::NotACubicForm);
        }
        Ok(CubicHypersurface { form })
    }

    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    pub fn field(&self) -> &Field {
        self.form.ring()
    }

    /// `n` for `X ⊂ P^{n+1}`.
    pub fn dimension(&self) -> usize {
        self.form.nvars() - 2
    }

    pub fn ambient_len(&self) -> usize {
        self.form.nvars()
    }

    fn check_len(&self, p: &ProjectivePoint) -> Result<(), CubicError> {
        if p.len() != self.ambient_len() {
            return Err(CubicError::DimensionMismatch {
                expected: self.ambient_len(),
                got: p.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, p: &ProjectivePoint) -> Result<bool, CubicError> {
        self.check_len(p)?;
        Ok(self.field().is_zero(&self.form.eval(p.coords())))
    }

    pub fn gradient_at(&self, p: &[Scalar]) -> Vec<Scalar> {
        (0..self.ambient_len())
            .map(|i| self.form.derivative(i).eval(p))
            .collect()
    }

    /// True iff some partial derivative is nonzero at `p`.
    pub fn is_smooth_point(&self, p: &ProjectivePoint) -> Result<bool, CubicError> {
        if !self.contains(p)? {
            return Err(CubicError::PointNotOnHypersurface);
        }
        let field = self.field();
        Ok(self
            .gradient_at(p.coords())
            .iter()
            .any(|g| !field.is_zero(g)))
    }

    /// The same hypersurface in coordinates `x = M·x'`.
    pub fn transform(&self, m: &Matrix) -> MultiPoly {
        let field = self.field().clone();
        let vars = self.form.vars().clone();
        let args: Vec<MultiPoly> = m
            .iter()
            .map(|row| linear_form(&field, &vars, row))
            .collect();
        self.form.compose(&args)
    }
}

fn linear_form(field: &Field, vars: &Variables, coeffs: &[Scalar]) -> MultiPoly {
    let n = vars.len();
    MultiPoly::from_terms(
        field.clone(),
        vars.clone(),
        coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (Monomial::var(n, j, 1), c.clone())),
    )
}

/// `F = L + Q + C` in affine coordinates `y_1..y_{n+1}` centered at a point,
/// with `x = M·(1, y)` mapping back to the original projective frame.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePointedForm {
    pub linear: MultiPoly,
    pub quadratic: MultiPoly,
    pub cubic: MultiPoly,
    /// Columns: the base point, then the images of `y_1..y_{n+1}`.
    pub frame: Matrix,
    pub singular: bool,
}

impl AffinePointedForm {
    pub fn nvars(&self) -> usize {
        self.linear.nvars()
    }

    /// `z0²·L + z0·Q + C` in variables `(z0, y_1..y_{n+1})`.
    pub fn homogenized(&self) -> MultiPoly {
        let n = self.nvars();
        let vars = homogeneous_vars(n);
        let field = self.linear.ring().clone();
        let lift = |f: &MultiPoly, k: u16| {
            let mapping: Vec<usize> = (1..=n).collect();
            let g = f.relabel(vars.clone(), &mapping);
            g.mul_term(&Monomial::var(n + 1, 0, k), &field.one())
        };
        lift(&self.linear, 2)
            .add(&lift(&self.quadratic, 1))
            .add(&lift(&self.cubic, 0))
    }

    /// Inverse frame applied to the homogenized form; equals `F` exactly.
    pub fn recompose(&self, original_vars: &Variables) -> Result<MultiPoly, CubicError> {
        let field = self.linear.ring().clone();
        let inv = linalg::inverse(&field, &self.frame)?;
        let args: Vec<MultiPoly> = inv
            .iter()
            .map(|row| linear_form(&field, original_vars, row))
            .collect();
        Ok(self.homogenized().compose(&args))
    }
}

pub fn affine_vars(n1: usize) -> Variables {
    Variables::new((1..=n1).map(|i| format!("y{i}")))
}

fn homogeneous_vars(n1: usize) -> Variables {
    Variables::new(core::iter::once(String::from("z0")).chain((1..=n1).map(|i| format!("y{i}"))))
}

fn unit(field: &Field, len: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); len];
    v[i] = field.one();
    v
}

/// Extends `start` to a basis of `k^len` with standard vectors.
fn complete_basis(field: &Field, start: Vec<Vec<Scalar>>, len: usize) -> Vec<Vec<Scalar>> {
    let mut basis = start;
    for i in 0..len {
        if basis.len() == len {
            break;
        }
        let mut trial = basis.clone();
        trial.push(unit(field, len, i));
        if linalg::rank(field, &trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

fn columns_to_matrix(cols: &[Vec<Scalar>]) -> Matrix {
    let len = cols[0].len();
    (0..len)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Moves `p` to the affine origin. At a smooth point the frame is chosen so
/// that `L = y_{n+1}`; at a singular point `L = 0` and the decomposition is
/// still returned, flagged.
pub fn decompose_at_point(
    x: &CubicHypersurface,
    p: &ProjectivePoint,
) -> Result<AffinePointedForm, CubicError> {
    if !x.contains(p)? {
        return Err(CubicError::PointNotOnHypersurface);
    }
    let field = x.field();
    let len = x.ambient_len();
    let grad = x.gradient_at(p.coords());
    let singular = grad.iter().all(|g| field.is_zero(g));
    let cols: Vec<Vec<Scalar>> = if singular {
        complete_basis(field, vec![p.coords().to_vec()], len)
    } else {
        // p lies in the tangent hyperplane g·x = 0 (Euler, valid in every
        // characteristic); pick a basis of it starting with p, then a vector
        // with g·m = 1
        let hyper = linalg::kernel(field, &vec![grad.clone()], len);
        let mut basis = vec![p.coords().to_vec()];
        for v in hyper {
            let mut trial = basis.clone();
            trial.push(v);
            if linalg::rank(field, &trial) == trial.len() {
                basis = trial;
            }
        }
        let k = grad.iter().position(|g| !field.is_zero(g)).unwrap();
        let mut last = vec![field.zero(); len];
        last[k] = field.inv(&grad[k])?;
        basis.push(last);
        basis
    };
    debug_assert_eq!(cols.len(), len);
    let frame = columns_to_matrix(&cols);
    let n1 = len - 1;
    let vars = affine_vars(n1);
    // x = M·(1, y)
    let args: Vec<MultiPoly> = frame
        .iter()
        .map(|row| {
            let mut f = MultiPoly::constant(field.clone(), vars.clone(), row[0].clone());
            for j in 1..len {
                f = f.add(&MultiPoly::var(field.clone(), vars.clone(), j - 1).scale(&row[j]));
            }
            f
        })
        .collect();
    let affine = x.form().compose(&args);
    debug_assert!(affine.homogeneous_part(0).is_zero());
    Ok(AffinePointedForm {
        linear: affine.homogeneous_part(1),
        quadratic: affine.homogeneous_part(2),
        cubic: affine.homogeneous_part(3),
        frame,
        singular,
    })
}

/// Coefficient polynomials of `F(p + y)` in `y`, as polynomials in `p`,
/// keyed by the `y`-exponent, for `|a| ≤ 2`.
fn translate_coefficients(form: &MultiPoly) -> Vec<(u32, MultiPoly)> {
    let field = form.ring().clone();
    let m = form.nvars();
    // variables p_0..p_{m-1}, y_0..y_{m-1}
    let vars = Variables::new(
        (0..m)
            .map(|i| format!("p{i}"))
            .chain((0..m).map(|i| format!("e{i}"))),
    );
    let args: Vec<MultiPoly> = (0..m)
        .map(|i| {
            MultiPoly::var(field.clone(), vars.clone(), i).add(&MultiPoly::var(
                field.clone(),
                vars.clone(),
                m + i,
            ))
        })
        .collect();
    let shifted = form.compose(&args);
    let pvars = form.vars().clone();
    let mut groups: alloc::collections::BTreeMap<Vec<u16>, Vec<(Monomial, Scalar)>> =
        alloc::collections::BTreeMap::new();
    for (mono, c) in shifted.terms() {
        let ye: Vec<u16> = mono.exponents()[m..].to_vec();
        let d: u32 = ye.iter().map(|e| *e as u32).sum();
        if d > 2 {
            continue;
        }
        let pe = Monomial::from_exponents(&mono.exponents()[..m]);
        groups.entry(ye).or_default().push((pe, c.clone()));
    }
    groups
        .into_iter()
        .map(|(ye, terms)| {
            let d = ye.iter().map(|e| *e as u32).sum();
            (
                d,
                MultiPoly::from_terms(field.clone(), pvars.clone(), terms),
            )
        })
        .collect()
}

/// Writes a polynomial restricted to `p = Σ s_i b_i` in the `s` variables.
fn restrict_to_span(f: &MultiPoly, basis: &[Vec<Scalar>]) -> MultiPoly {
    let field = f.ring().clone();
    let svars = Variables::indexed("s", basis.len());
    let args: Vec<MultiPoly> = (0..f.nvars())
        .map(|i| {
            let coeffs: Vec<Scalar> = basis.iter().map(|b| b[i].clone()).collect();
            linear_form(&field, &svars, &coeffs)
        })
        .collect();
    if basis.is_empty() {
        return MultiPoly::constant(field, svars, f.constant_coeff());
    }
    f.compose(&args)
}

/// Coefficients of a form `Σ c_j s_j^k` (no mixed terms), or `None`.
fn pure_power_coeffs(f: &MultiPoly, k: u16) -> Option<Vec<Scalar>> {
    let field = f.ring();
    let mut out = vec![field.zero(); f.nvars()];
    for (m, c) in f.terms() {
        let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
        if nz.len() != 1 || m[nz[0]] != k {
            return None;
        }
        out[nz[0]] = c.clone();
    }
    Some(out)
}

/// Basis (over `k`) of the linear space of triple points: where the
/// translate `F(p + y)` has no part of degree below 3.
///
/// Works from the translate coefficients directly so that characteristics 2
/// and 3 are covered: the degree-2 coefficients are linear in `p`; on their
/// common kernel the degree-1 coefficients are additive quadratic forms
/// (squares of linear forms in characteristic 2, zero otherwise), and on what
/// remains `F` is additive (a cube of a linear form in characteristic 3).
pub fn triple_point_locus(x: &CubicHypersurface) -> Result<Vec<Vec<Scalar>>, CubicError> {
    let field = x.field();
    let m = x.ambient_len();
    let coeffs = translate_coefficients(x.form());
    let mut rows: Matrix = Vec::new();
    for (d, c) in &coeffs {
        if *d == 2 {
            let mut row = vec![field.zero(); m];
            for (mono, a) in c.terms() {
                let i = (0..m).find(|&i| mono[i] == 1).expect("linear in p");
                row[i] = a.clone();
            }
            rows.push(row);
        }
    }
    let mut basis = if rows.is_empty() {
        (0..m).map(|i| unit(field, m, i)).collect()
    } else {
        linalg::kernel(field, &rows, m)
    };
    for (degree, root_exp) in [(1u32, 2u16), (0, 3)] {
        let mut extra: Matrix = Vec::new();
        for (d, c) in &coeffs {
            if *d != degree {
                continue;
            }
            let r = restrict_to_span(c, &basis);
            if r.is_zero() {
                continue;
            }
            let pure = pure_power_coeffs(&r, root_exp)
                .filter(|_| field.characteristic() == root_exp as u64)
                .ok_or(AlgebraError::UnsupportedField(format!(
                    "unexpected translate structure over {}",
                    field.designator()
                )))?;
            let lin: Vec<Scalar> = pure
                .iter()
                .map(|c| field.frobenius_root(c))
                .collect::<Result<_, _>>()?;
            // back to p-coordinates: s ↦ Σ s_i b_i is injective, so impose
            // the condition on the s-coefficients and map the kernel
            extra.push(lin);
        }
        if !extra.is_empty() {
            let ker = linalg::kernel(field, &extra, basis.len());
            basis = ker
                .iter()
                .map(|s| {
                    (0..m)
                        .map(|i| {
                            s.iter().zip(&basis).fold(field.zero(), |acc, (si, b)| {
                                field.add(&acc, &field.mul(si, &b[i]))
                            })
                        })
                        .collect()
                })
                .collect();
        }
    }
    Ok(basis)
}

/// Checks that every coefficient of `F(p + y)` of degree below 3 vanishes.
pub fn is_triple_point(x: &CubicHypersurface, p: &[Scalar]) -> bool {
    let field = x.field();
    let coeffs = translate_coefficients(x.form());
    coeffs.iter().all(|(_, c)| field.is_zero(&c.eval(p)))
}

/// The restriction of the pointed form to the tangent hyperplane `L = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentSection {
    /// In variables `s_1..s_n`.
    pub q: MultiPoly,
    pub c: MultiPoly,
    pub double_point: bool,
    /// `Some(true)` when a line certified that `q` and `c` share no factor,
    /// `Some(false)` when every tried line showed a common root, `None` when
    /// no informative line was found.
    pub coprime: Option<bool>,
}

impl TangentSection {
    pub fn is_cone(&self) -> bool {
        !self.double_point
    }
}

pub fn tangent_section(
    x: &CubicHypersurface,
    p: &ProjectivePoint,
    rng: &mut SeededRng,
) -> Result<(TangentSection, AffinePointedForm), CubicError> {
    let pointed = decompose_at_point(x, p)?;
    if pointed.singular {
        return Err(CubicError::SingularPoint);
    }
    let n = pointed.nvars() - 1;
    let field = x.field();
    let svars = Variables::indexed("s", n).renamed_from_one();
    let args: Vec<MultiPoly> = (0..=n)
        .map(|i| {
            if i < n {
                MultiPoly::var(field.clone(), svars.clone(), i)
            } else {
                MultiPoly::zero(field.clone(), svars.clone())
            }
        })
        .collect();
    let q = pointed.quadratic.compose(&args);
    let c = pointed.cubic.compose(&args);
    let section = section_from_parts(q, c, rng);
    Ok((section, pointed))
}

/// Flags for a given `(q, c)` pair.
pub fn section_from_parts(q: MultiPoly, c: MultiPoly, rng: &mut SeededRng) -> TangentSection {
    let double_point = !q.is_zero();
    let coprime = coprime_on_lines(&q, &c, rng, 16);
    TangentSection {
        q,
        c,
        double_point,
        coprime,
    }
}

/// Restricts two homogeneous forms to random affine lines `a + λb`. When
/// `f(b)`, `g(b)` are nonzero every common factor survives the restriction
/// with full degree, so a constant univariate gcd proves coprimality.
pub fn coprime_on_lines(
    f: &MultiPoly,
    g: &MultiPoly,
    rng: &mut SeededRng,
    trials: usize,
) -> Option<bool> {
    if f.is_zero() || g.is_zero() {
        return Some(false);
    }
    if f.is_constant() || g.is_constant() {
        return Some(true);
    }
    let field = f.ring().clone();
    let n = f.nvars();
    let mut saw_common = false;
    for _ in 0..trials {
        let a: Vec<Scalar> = (0..n).map(|_| field.random_integer(rng, 100)).collect();
        let b: Vec<Scalar> = (0..n).map(|_| field.random_integer(rng, 100)).collect();
        if field.is_zero(&f.eval(&b)) || field.is_zero(&g.eval(&b)) {
            continue;
        }
        let line: Vec<UniPoly<Field>> = a
            .iter()
            .zip(&b)
            .map(|(ai, bi)| UniPoly::linear(field.clone(), ai.clone(), bi.clone()))
            .collect();
        let embed = |c: &Scalar| UniPoly::constant(field.clone(), c.clone());
        let fl = f.eval_in(&line, embed);
        let gl = g.eval_in(&line, embed);
        if fl.gcd(&gl).degree() == Some(0) {
            return Some(true);
        }
        saw_common = true;
    }
    saw_common.then_some(false)
}

/// Which case of the classification applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremCase {
    /// Triple points exist: a cone, refused by the pipeline.
    Cone,
    /// Singular along a codimension-one locus (finite-field estimate).
    Nonnormal,
    /// A smooth rational point is known: unirational over the base field.
    SmoothPoint,
    /// Nothing certified.
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Normal,
    Nonnormal,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    /// Basis of the triple-point space; empty means no triple points.
    pub triple_point_basis: Vec<ProjectivePoint>,
    pub is_cone: bool,
    pub nonnormal: Verdict,
    /// Estimated dimension of the singular locus over a finite field.
    pub singular_dimension_estimate: Option<i64>,
    pub point_count: Option<u64>,
    pub singular_count: Option<u64>,
    pub smooth_points_found: Vec<ProjectivePoint>,
    pub smooth_point_total: usize,
    pub notes: Vec<String>,
    pub case: TheoremCase,
}

impl ClassificationReport {
    /// `-1` when empty.
    pub fn triple_point_dimension(&self) -> i64 {
        self.triple_point_basis.len() as i64 - 1
    }
}

/// Cap on the number of smooth points kept in a report.
pub const SMOOTH_POINT_CAP: usize = 64;

/// Classification budget: number of projective points scanned over a finite
/// field, or coordinate vectors searched over `Q`.
pub const DEFAULT_CLASSIFY_BUDGET: u64 = 10_000_000;

pub fn classify(x: &CubicHypersurface, budget: u64) -> Result<ClassificationReport, CubicError> {
    let field = x.field();
    let n = x.dimension();
    let mut notes = Vec::new();
    let basis = triple_point_locus(x)?;
    let triple_point_basis: Vec<ProjectivePoint> = basis
        .iter()
        .map(|b| ProjectivePoint::new(field, b.clone()))
        .collect::<Result<_, _>>()?;
    let is_cone = !basis.is_empty();
    if field.characteristic() == 3 {
        notes.push(if is_cone {
            "characteristic 3: triple points exist over the algebraic closure".into()
        } else {
            "characteristic 3: no triple points over the algebraic closure".into()
        });
    }
    let mut smooth = Vec::new();
    let mut smooth_total = 0usize;
    let mut point_count = None;
    let mut singular_count = None;
    let mut singular_dim = None;
    let mut nonnormal = Verdict::Unknown;
    let m = x.ambient_len();
    if let Some(q) = field.order() {
        match projective_count(q, m).filter(|c| *c <= budget) {
            Some(_) => {
                let (mut total, mut sing) = (0u64, 0u64);
                for v in projective_points(field, m) {
                    if !field.is_zero(&x.form().eval(&v)) {
                        continue;
                    }
                    total += 1;
                    if x.gradient_at(&v).iter().all(|g| field.is_zero(g)) {
                        sing += 1;
                    } else {
                        smooth_total += 1;
                        if smooth.len() < SMOOTH_POINT_CAP {
                            smooth.push(ProjectivePoint { coords: v });
                        }
                    }
                }
                point_count = Some(total);
                singular_count = Some(sing);
                let dim = dimension_estimate(sing, q);
                singular_dim = Some(dim);
                nonnormal = if n >= 1 && dim == n as i64 - 1 {
                    Verdict::Nonnormal
                } else {
                    Verdict::Normal
                };
                notes.push(format!(
                    "singular locus dimension estimated from {sing} singular points over {}",
                    field.designator()
                ));
            }
            None => notes.push("enumeration budget exceeded; normality not assessed".into()),
        }
    } else {
        notes.push("normality is not decided over an infinite field".into());
        // a small-height search gives cheap smooth points
        for v in small_height_points(m, 2, budget) {
            let v: Vec<Scalar> = v.iter().map(|c| field.from_i64(*c)).collect();
            if !field.is_zero(&x.form().eval(&v)) {
                continue;
            }
            if x.gradient_at(&v).iter().any(|g| !field.is_zero(g)) {
                let p = ProjectivePoint::new(field, v)?;
                if !smooth.contains(&p) {
                    smooth_total += 1;
                    if smooth.len() < SMOOTH_POINT_CAP {
                        smooth.push(p);
                    }
                }
            }
        }
    }
    if field.characteristic() == 2 {
        for p in smooth.iter() {
            if inseparable_projection_test(x, p)? {
                notes.push(format!(
                    "projection from {} is purely inseparable",
                    p.display(field)
                ));
            }
        }
    }
    let case = if is_cone {
        TheoremCase::Cone
    } else if nonnormal == Verdict::Nonnormal {
        TheoremCase::Nonnormal
    } else if !smooth.is_empty() {
        TheoremCase::SmoothPoint
    } else {
        TheoremCase::Undetermined
    };
    Ok(ClassificationReport {
        triple_point_basis,
        is_cone,
        nonnormal,
        singular_dimension_estimate: singular_dim,
        point_count,
        singular_count,
        smooth_points_found: smooth,
        smooth_point_total: smooth_total,
        notes,
        case,
    })
}

/// `⌊log_q(count)⌋`, or `-1` for no points.
fn dimension_estimate(count: u64, q: u64) -> i64 {
    if count == 0 {
        return -1;
    }
    let (mut d, mut pow) = (0i64, q);
    while pow <= count {
        d += 1;
        pow = pow.saturating_mul(q);
    }
    d
}

/// Integer vectors with entries in `[-h, h]`, first nonzero entry positive.
fn small_height_points(m: usize, h: i64, budget: u64) -> impl Iterator<Item = Vec<i64>> {
    let width = (2 * h + 1) as u64;
    let total = width.checked_pow(m as u32).unwrap_or(u64::MAX).min(budget);
    (0..total).filter_map(move |code| {
        let mut c = code;
        let mut v = vec![0i64; m];
        for slot in v.iter_mut() {
            *slot = (c % width) as i64 - h;
            c /= width;
        }
        match v.iter().find(|x| **x != 0) {
            Some(lead) if *lead > 0 => Some(v),
            _ => None,
        }
    })
}

/// Second intersection of the line through the origin in direction `dir`
/// with `q + c = 0`, projectively as `(z0, y)`: `τ = −q/c` gives
/// `(c(dir) : −q(dir)·dir)`; when `c(dir) = 0` the point is at infinity.
pub fn second_intersection(q: &MultiPoly, c: &MultiPoly, dir: &[Scalar]) -> Option<Vec<Scalar>> {
    let field = q.ring();
    let qv = q.eval(dir);
    if field.is_zero(&qv) {
        return None;
    }
    let cv = c.eval(dir);
    let mut out = vec![cv];
    out.extend(dir.iter().map(|d| field.neg(&field.mul(&qv, d))));
    Some(out)
}

/// Upgrades a double point to a smooth point: the line through `x` in a
/// direction where the quadratic part is nonzero meets `X` once more.
pub fn smooth_from_double_point(
    x: &CubicHypersurface,
    p: &ProjectivePoint,
    rng: &mut SeededRng,
    budget: u64,
) -> Result<ProjectivePoint, CubicError> {
    let pointed = decompose_at_point(x, p)?;
    if !pointed.singular {
        return Ok(p.clone());
    }
    if pointed.quadratic.is_zero() {
        return Err(CubicError::TriplePoint);
    }
    let field = x.field();
    let n1 = pointed.nvars();
    let mut saw_nonzero_q = false;
    let mut try_dir = |dir: Vec<Scalar>| -> Option<ProjectivePoint> {
        let proj = second_intersection(&pointed.quadratic, &pointed.cubic, &dir)?;
        saw_nonzero_q = true;
        let coords = linalg::mat_vec(field, &pointed.frame, &proj);
        let cand = ProjectivePoint::new(field, coords).ok()?;
        x.is_smooth_point(&cand).ok()?.then_some(cand)
    };
    match field.order() {
        Some(q) if q.checked_pow(n1 as u32).is_some_and(|c| c <= budget) => {
            for v in projective_points(field, n1) {
                if let Some(found) = try_dir(v) {
                    return Ok(found);
                }
            }
        }
        _ => {
            // Directions with entries in {0, 1, −1} first: they give small points.
            let small = 3u64.checked_pow(n1 as u32).unwrap_or(u64::MAX).min(budget);
            for code in 1..small {
                let dir: Vec<Scalar> = (0..n1)
                    .map(|i| field.from_i64((code / 3u64.pow(i as u32) % 3) as i64 - 1))
                    .collect();
                if dir.iter().all(|d| field.is_zero(d)) {
                    continue;
                }
                if let Some(found) = try_dir(dir) {
                    return Ok(found);
                }
            }
            for _ in 0..budget.min(crate::rng::SAMPLE_BUDGET as u64) {
                let dir: Vec<Scalar> = (0..n1).map(|_| field.random_integer(rng, 20)).collect();
                if dir.iter().all(|d| field.is_zero(d)) {
                    continue;
                }
                if let Some(found) = try_dir(dir) {
                    return Ok(found);
                }
            }
        }
    }
    if saw_nonzero_q {
        Err(CubicError::NoSmoothPointOnLines)
    } else {
        Err(CubicError::QuadraticVanishesEverywhere)
    }
}

/// In characteristic 2: after a frame change putting `p` at the first
/// coordinate vertex, does that coordinate occur only with even exponents?
/// The answer does not depend on the completion of the frame.
pub fn inseparable_projection_test(
    x: &CubicHypersurface,
    p: &ProjectivePoint,
) -> Result<bool, CubicError> {
    let field = x.field();
    if field.characteristic() != 2 {
        return Err(CubicError::WrongCharacteristic(2));
    }
    if !x.contains(p)? {
        return Err(CubicError::PointNotOnHypersurface);
    }
    let cols = complete_basis(field, vec![p.coords().to_vec()], x.ambient_len());
    let g = x.transform(&columns_to_matrix(&cols));
    Ok(g.terms().iter().all(|(m, _)| m[0] % 2 == 0))
}

trait RenameFromOne {
    fn renamed_from_one(self) -> Self;
}

impl RenameFromOne for Variables {
    /// `s0..s{n-1}` becomes `s1..sn`.
    fn renamed_from_one(self) -> Self {
        Variables::new(self.names().iter().map(|name| {
            let (head, idx) = name.split_at(1);
            format!("{head}{}", idx.parse::<usize>().unwrap() + 1)
        }))
    }
}
