//! Point-level services: finite-field censuses, lines on cubic surfaces,
//! smooth-point search, the characteristic-2 constructions and rational
//! points from a parametrization.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use num_bigint::BigInt;
use rand::Rng as _;

use crate::algebra::linalg;
use crate::algebra::univariate::UniPoly;
use crate::algebra::{Algebra, AlgebraError, Field, Integers, MultiPoly, Ring, Scalar, Variables};
use crate::cubic::{
    inseparable_projection_test, projective_count, projective_points, CubicError,
    CubicHypersurface, ProjectivePoint,
};
use crate::rng::{seeded, SeededRng, DEFAULT_SEED};
use crate::segre::PsiMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointsError {
    #[error("scan needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("form does not have the shape Σ ℓ_j(y)·x_j² + g(y): {0}")]
    ShapeMismatch(String),
    #[error("operation needs characteristic {expected}, field has {got}")]
    WrongCharacteristic { expected: u64, got: u64 },
    #[error("operation needs dimension {expected}, hypersurface has {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("operation needs a finite field")]
    NotFinite,
    #[error("found {found} of {requested} points in {attempts} attempts")]
    YieldTooLow {
        found: usize,
        requested: usize,
        attempts: usize,
    },
    #[error("no smooth point found within the search")]
    NoSmoothPoint,
    #[error("symbolic and pointwise line containment disagree")]
    InconsistentLineTests,
    #[error("parametrization and hypersurface disagree")]
    Mismatch,
    #[error(transparent)]
    Cubic(#[from] CubicError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Default scan budget for censuses and line scans.
pub const DEFAULT_SCAN_BUDGET: u64 = 10_000_000;

fn finite_order(field: &Field) -> Result<u64, PointsError> {
    field.order().ok_or(PointsError::NotFinite)
}

fn check_budget(needed: Option<u64>, budget: u64) -> Result<(), PointsError> {
    match needed {
        Some(n) if n <= budget => Ok(()),
        Some(n) => Err(PointsError::BudgetExceeded { needed: n, budget }),
        None => Err(PointsError::BudgetExceeded {
            needed: u64::MAX,
            budget,
        }),
    }
}

fn is_smooth_at(field: &Field, grad: &[MultiPoly], v: &[Scalar]) -> bool {
    grad.iter().any(|g| !field.is_zero(&g.eval(v)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumerationResult {
    pub field: Field,
    pub count: u64,
    pub smooth: u64,
    pub singular: u64,
    /// The first points in scan order, at most `cap` of them.
    pub points: Vec<ProjectivePoint>,
    pub cap: usize,
}

/// Exhaustive census of `X(F_q)` over normalized representatives.
pub fn enumerate_points(
    x: &CubicHypersurface,
    budget: u64,
    cap: usize,
) -> Result<EnumerationResult, PointsError> {
    let field = x.field();
    let q = finite_order(field)?;
    let m = x.ambient_len();
    check_budget(projective_count(q, m), budget)?;
    let grad = x.form().gradient();
    let (mut count, mut smooth) = (0u64, 0u64);
    let mut points = Vec::new();
    for v in projective_points(field, m) {
        if !field.is_zero(&x.form().eval(&v)) {
            continue;
        }
        count += 1;
        if is_smooth_at(field, &grad, &v) {
            smooth += 1;
        }
        if points.len() < cap {
            points.push(ProjectivePoint::new(field, v)?);
        }
    }
    Ok(EnumerationResult {
        field: field.clone(),
        count,
        smooth,
        singular: count - smooth,
        points,
        cap,
    })
}

/// A line of `P³` given by the rows of its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub basis: [ProjectivePoint; 2],
    /// The `q + 1` points of the line, normalized.
    pub points: Vec<ProjectivePoint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineSet {
    pub field: Field,
    pub lines: Vec<Line>,
    pub lines_scanned: u64,
    pub point_count: u64,
    pub covered_points: u64,
}

impl LineSet {
    /// Fraction of the points of `X` lying on at least one kept line; 0 when
    /// `X` has no points.
    pub fn coverage(&self) -> f64 {
        if self.point_count == 0 {
            0.0
        } else {
            self.covered_points as f64 / self.point_count as f64
        }
    }
}

/// Number of lines of `P³(F_q)`: `(q² + 1)(q² + q + 1)`.
pub fn line_count(q: u64) -> Option<u64> {
    let q2 = q.checked_mul(q)?;
    (q2 + 1).checked_mul(q2.checked_add(q)?.checked_add(1)?)
}

/// Reduced echelon `2×4` bases, one per line of `P³(F_q)`.
fn echelon_bases(field: &Field) -> impl Iterator<Item = [Vec<Scalar>; 2]> + '_ {
    let q = field.order().expect("finite field");
    let pivots: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .collect();
    pivots.into_iter().flat_map(move |(i, j)| {
        // free slots: row 0 after i except j, row 1 after j
        let free: Vec<(usize, usize)> = ((i + 1)..4)
            .filter(|&c| c != j)
            .map(|c| (0, c))
            .chain(((j + 1)..4).map(|c| (1, c)))
            .collect();
        let total = q.pow(free.len() as u32);
        let free2 = free.clone();
        (0..total).map(move |code| {
            let mut rows = [vec![field.zero(); 4], vec![field.zero(); 4]];
            rows[0][i] = field.one();
            rows[1][j] = field.one();
            let mut c = code;
            for &(r, col) in free2.iter().rev() {
                rows[r][col] = field.element(c % q);
                c /= q;
            }
            rows
        })
    })
}

/// `F(s·P + t·Q)` as a polynomial in `s, t`.
fn restrict_to_line(form: &MultiPoly, p: &[Scalar], q: &[Scalar]) -> MultiPoly {
    let field = form.ring().clone();
    let vars = Variables::new(["s", "t"]);
    let s = MultiPoly::var(field.clone(), vars.clone(), 0);
    let t = MultiPoly::var(field.clone(), vars.clone(), 1);
    let args: Vec<MultiPoly> = p
        .iter()
        .zip(q)
        .map(|(a, b)| s.scale(a).add(&t.scale(b)))
        .collect();
    form.compose(&args)
}

/// All lines of `P³(F_q)` contained in the surface `X`, with the coverage
/// of `X(F_q)` by them. Each kept line is checked both symbolically and at
/// its `q + 1` points.
pub fn enumerate_lines(x: &CubicHypersurface, budget: u64) -> Result<LineSet, PointsError> {
    if x.dimension() != 2 {
        return Err(PointsError::WrongDimension {
            expected: 2,
            got: x.dimension(),
        });
    }
    let field = x.field();
    let q = finite_order(field)?;
    check_budget(line_count(q), budget)?;
    let census = enumerate_points(x, budget, usize::MAX)?;
    let on_x: HashSet<ProjectivePoint> = census.points.iter().cloned().collect();
    let mut covered: HashSet<ProjectivePoint> = HashSet::new();
    let mut lines = Vec::new();
    let mut scanned = 0u64;
    for [p, r] in echelon_bases(field) {
        scanned += 1;
        let symbolic = restrict_to_line(x.form(), &p, &r).is_zero();
        let mut pts = Vec::with_capacity(q as usize + 1);
        pts.push(ProjectivePoint::new(field, r.clone())?);
        for a in field.elements() {
            let v: Vec<Scalar> = p
                .iter()
                .zip(&r)
                .map(|(pi, ri)| field.add(pi, &field.mul(&a, ri)))
                .collect();
            pts.push(ProjectivePoint::new(field, v)?);
        }
        let pointwise = pts.iter().all(|pt| on_x.contains(pt));
        if symbolic != pointwise && q >= 3 {
            // a nonzero binary cubic has at most 3 roots, so for q ≥ 3 the
            // two tests must agree
            return Err(PointsError::InconsistentLineTests);
        }
        if symbolic {
            covered.extend(pts.iter().cloned());
            lines.push(Line {
                basis: [
                    ProjectivePoint::new(field, p)?,
                    ProjectivePoint::new(field, r)?,
                ],
                points: pts,
            });
        }
    }
    Ok(LineSet {
        field: field.clone(),
        lines,
        lines_scanned: scanned,
        point_count: census.count,
        covered_points: covered.len() as u64,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmoothSearch {
    Found(ProjectivePoint),
    /// Every point of `X(F_q)` is singular.
    AllSingular {
        singular: u64,
    },
}

/// First smooth point in scan order.
pub fn find_smooth_point(x: &CubicHypersurface, budget: u64) -> Result<SmoothSearch, PointsError> {
    let field = x.field();
    let q = finite_order(field)?;
    let m = x.ambient_len();
    check_budget(projective_count(q, m), budget)?;
    let grad = x.form().gradient();
    let mut singular = 0u64;
    for v in projective_points(field, m) {
        if !field.is_zero(&x.form().eval(&v)) {
            continue;
        }
        if is_smooth_at(field, &grad, &v) {
            return Ok(SmoothSearch::Found(ProjectivePoint::new(field, v)?));
        }
        singular += 1;
    }
    Ok(SmoothSearch::AllSingular { singular })
}

/// Which step of the characteristic-2 construction produced the point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Char2Branch {
    /// Two non-proportional `ℓ`: `ℓ₂(y₀) = 0`, `x₁ = √(g/ℓ₁)`, `x₂` free.
    TwoVariables,
    /// One `x`-variable, `y₁ = 0` and `g = 0`: `x₁` free.
    OneVariableFree,
    /// One `x`-variable, `y₁ ≠ 0`: `x₁ = √(g/y₁)`.
    OneVariableRoot,
    /// The construction's candidate was singular; found by scanning.
    Search,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Char2Point {
    pub point: ProjectivePoint,
    /// Coordinates read as `x`-variables (even exponents only).
    pub x_vars: Vec<usize>,
    /// `x`-variables removed because their `ℓ` was proportional to another.
    pub eliminated: Vec<usize>,
    pub branch: Char2Branch,
}

/// `x`-variables, their linear forms `ℓ_j` (as coefficient vectors over all
/// coordinates) and `g`.
type Char2Shape = (Vec<usize>, Vec<Vec<Scalar>>, MultiPoly);

fn char2_shape(form: &MultiPoly) -> Result<Char2Shape, PointsError> {
    let field = form.ring();
    let m = form.nvars();
    let x_vars: Vec<usize> = (0..m)
        .filter(|&i| {
            form.terms().iter().all(|(mono, _)| mono[i] % 2 == 0) && form.degree_in(i) == 2
        })
        .collect();
    if x_vars.is_empty() {
        return Err(PointsError::ShapeMismatch(
            "no variable occurs only squared".into(),
        ));
    }
    if x_vars.len() == m {
        return Err(PointsError::ShapeMismatch("no y-variables".into()));
    }
    let mut ell = vec![vec![field.zero(); m]; x_vars.len()];
    let mut g_terms = Vec::new();
    for (mono, c) in form.terms() {
        match x_vars.iter().position(|&j| mono[j] == 2) {
            Some(slot) => {
                let k = (0..m).find(|&k| mono[k] == 1).expect("cubic term x_j²·y_k");
                ell[slot][k] = field.add(&ell[slot][k], c);
            }
            None => g_terms.push((mono.clone(), c.clone())),
        }
    }
    let g = MultiPoly::from_terms(field.clone(), form.vars().clone(), g_terms);
    Ok((x_vars, ell, g))
}

fn dot(field: &Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(field.zero(), |acc, (x, y)| {
        field.add(&acc, &field.mul(x, y))
    })
}

/// `c` with `a = c·b`, if the vectors are proportional.
fn proportion(field: &Field, a: &[Scalar], b: &[Scalar]) -> Option<Scalar> {
    let k = b.iter().position(|c| !field.is_zero(c))?;
    let c = field.div(&a[k], &b[k]).ok()?;
    a.iter()
        .zip(b)
        .all(|(ai, bi)| *ai == field.mul(&c, bi))
        .then_some(c)
}

struct Char2Search<'a> {
    x: &'a CubicHypersurface,
    grad: Vec<MultiPoly>,
}

impl Char2Search<'_> {
    fn field(&self) -> &Field {
        self.x.field()
    }

    /// The point if it is on `X`, smooth, with nonzero `y`-part and a
    /// separable projection.
    fn accept(&self, v: &[Scalar], x_vars: &[usize]) -> Option<ProjectivePoint> {
        let field = self.field();
        if !field.is_zero(&self.x.form().eval(v)) || !is_smooth_at(field, &self.grad, v) {
            return None;
        }
        let y_nonzero = (0..v.len()).any(|i| !x_vars.contains(&i) && !field.is_zero(&v[i]));
        if !y_nonzero {
            return None;
        }
        let p = ProjectivePoint::new(field, v.to_vec()).ok()?;
        match inseparable_projection_test(self.x, &p) {
            Ok(false) => Some(p),
            _ => None,
        }
    }

    /// Points with `y`-part `y0` (zero on `x`-slots): the active `x`-variable
    /// solves the equation when its `ℓ` is nonzero, otherwise every value is
    /// tried.
    fn complete(
        &self,
        y0: &[Scalar],
        x_vars: &[usize],
        active: usize,
        ell: &[Scalar],
        g: &MultiPoly,
    ) -> Option<ProjectivePoint> {
        let field = self.field();
        let l = dot(field, ell, y0);
        let gv = g.eval(y0);
        if !field.is_zero(&l) {
            let r = field.frobenius_sqrt(&field.div(&gv, &l).ok()?).ok()?;
            let mut v = y0.to_vec();
            v[active] = r;
            return self.accept(&v, x_vars);
        }
        if !field.is_zero(&gv) {
            return None;
        }
        field.elements().find_map(|a| {
            let mut v = y0.to_vec();
            v[active] = a;
            self.accept(&v, x_vars)
        })
    }
}

/// A smooth point with nonzero `y`-part on `Σ ℓ_j(y)·x_j² + g(y)` over a
/// finite field of characteristic 2, following the elimination and branch
/// analysis of the construction; scans `y` as a last resort.
pub fn char2_point(x: &CubicHypersurface, budget: u64) -> Result<Char2Point, PointsError> {
    let field = x.field().clone();
    let ch = field.characteristic();
    if ch != 2 {
        return Err(PointsError::WrongCharacteristic {
            expected: 2,
            got: ch,
        });
    }
    let q = finite_order(&field)?;
    if x.dimension() < 2 {
        return Err(PointsError::WrongDimension {
            expected: 2,
            got: x.dimension(),
        });
    }
    let (x_vars, ell, g) = char2_shape(x.form())?;
    let m = x.ambient_len();
    let search = Char2Search {
        x,
        grad: x.form().gradient(),
    };

    // ℓ_a = c·ℓ_b: ℓ_a·x_a² + ℓ_b·x_b² = ℓ_b·(√c·x_a + x_b)², so x_a drops out
    let mut active: Vec<usize> = (0..x_vars.len()).collect();
    let mut eliminated = Vec::new();
    let mut k = 0;
    while k < active.len() {
        let a = active[k];
        let partner = active[..k]
            .iter()
            .any(|&b| proportion(&field, &ell[a], &ell[b]).is_some());
        if partner {
            eliminated.push(x_vars[a]);
            active.remove(k);
        } else {
            k += 1;
        }
    }
    let y_idx: Vec<usize> = (0..m).filter(|i| !x_vars.contains(i)).collect();
    let found = |point, branch| {
        Ok(Char2Point {
            point,
            x_vars: x_vars.clone(),
            eliminated: eliminated.clone(),
            branch,
        })
    };
    let embed = |coords: &[Scalar]| {
        let mut v = vec![field.zero(); m];
        for (i, c) in y_idx.iter().zip(coords) {
            v[*i] = c.clone();
        }
        v
    };
    let restrict = |l: &[Scalar]| -> Vec<Scalar> { y_idx.iter().map(|&i| l[i].clone()).collect() };

    if active.len() >= 2 {
        let (l1, l2) = (&ell[active[0]], &ell[active[1]]);
        let kernel = linalg::kernel(&field, &vec![restrict(l2)], y_idx.len());
        for b in &kernel {
            let y0 = embed(b);
            if field.is_zero(&dot(&field, l1, &y0)) {
                continue;
            }
            // x₁ = √(g/ℓ₁), x₂ free
            let x1 = field.frobenius_sqrt(&field.div(&g.eval(&y0), &dot(&field, l1, &y0))?)?;
            for a in field.elements() {
                let mut v = y0.clone();
                v[x_vars[active[0]]] = x1.clone();
                v[x_vars[active[1]]] = a;
                if let Some(p) = search.accept(&v, &x_vars) {
                    return found(p, Char2Branch::TwoVariables);
                }
            }
        }
    } else {
        let slot = x_vars[active[0]];
        let l = &ell[active[0]];
        // coordinates with y₁' = ℓ(y): y_{i0} = (y₁' − Σ_{k≠i0} ℓ_k·y_k)/ℓ_{i0}
        let i0 = *y_idx
            .iter()
            .find(|&&i| !field.is_zero(&l[i]))
            .expect("ℓ ≠ 0");
        let others: Vec<usize> = y_idx.iter().copied().filter(|&i| i != i0).collect();
        let vars = x.form().vars().clone();
        let var = |i: usize| MultiPoly::var(field.clone(), vars.clone(), i);
        let mut sub: Vec<MultiPoly> = (0..m).map(var).collect();
        let inv = field.inv(&l[i0])?;
        sub[i0] = others
            .iter()
            .fold(var(i0), |acc, &k| acc.sub(&var(k).scale(&l[k])))
            .scale(&inv);
        // g' in the new coordinates, where the slot i0 holds y₁'
        let g_new = g.compose(&sub);
        let parts = g_new.coefficients_in(i0);
        let part = |d: usize| parts.get(d).cloned().unwrap_or_else(|| g_new.zero_like());
        let (g1, g3) = (part(2), part(0));
        // a nontrivial zero of the linear form g₁ on the remaining y
        let g1_row: Vec<Scalar> = others
            .iter()
            .map(|&k| {
                let mut e = vec![field.zero(); m];
                e[k] = field.one();
                g1.eval(&e)
            })
            .collect();
        let zeros = linalg::kernel(&field, &vec![g1_row], others.len());
        for z in &zeros {
            let mut p_new = vec![field.zero(); m];
            for (k, c) in others.iter().zip(z) {
                p_new[*k] = c.clone();
            }
            let p1 = if field.is_zero(&g3.eval(&p_new)) {
                field.zero()
            } else {
                field.one()
            };
            p_new[i0] = p1.clone();
            let y0 = sub.iter().map(|s| s.eval(&p_new)).collect::<Vec<_>>();
            let branch = if field.is_zero(&p1) {
                Char2Branch::OneVariableFree
            } else {
                Char2Branch::OneVariableRoot
            };
            let mut y0 = y0;
            y0[slot] = field.zero();
            if let Some(p) = search.complete(&y0, &x_vars, slot, l, &g) {
                return found(p, branch);
            }
        }
    }

    // scan y over P(F_q^{|y|}) with the first active x-variable solved for
    let needed = projective_count(q, y_idx.len());
    check_budget(needed, budget)?;
    let slot = x_vars[active[0]];
    let l = &ell[active[0]];
    for yv in projective_points(&field, y_idx.len()) {
        let y0 = embed(&yv);
        if let Some(p) = search.complete(&y0, &x_vars, slot, l, &g) {
            return found(p, Char2Branch::Search);
        }
    }
    Err(PointsError::NoSmoothPoint)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Over `Q`, inputs are integers in `[−height, height]`.
    pub height: i64,
    /// Samples drawn before giving up.
    pub max_attempts: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: DEFAULT_SEED,
            height: 3,
            max_attempts: 10_000,
        }
    }
}

/// Evaluates `Ψ_hom` at a sample; over `Q` with integral polynomials this
/// runs on integers.
enum Evaluator {
    Integral(Vec<MultiPoly<Integers>>),
    Field(Vec<MultiPoly>),
}

impl Evaluator {
    fn new(psi: &PsiMap) -> Self {
        let hom = psi.homogeneous();
        if *psi.field() == Field::Rationals {
            let integral = hom.iter().all(|p| {
                p.terms()
                    .iter()
                    .all(|(_, c)| matches!(c, Scalar::Rational(r) if r.is_integer()))
            });
            if integral {
                return Evaluator::Integral(
                    hom.iter()
                        .map(|p| {
                            p.map_ring(Integers, |c| match c {
                                Scalar::Rational(r) => r.to_integer(),
                                Scalar::Residue(_) => unreachable!(),
                            })
                        })
                        .collect(),
                );
            }
        }
        Evaluator::Field(hom)
    }

    fn eval(&self, field: &Field, s: &[Scalar]) -> Vec<Scalar> {
        match self {
            Evaluator::Integral(polys) => {
                let ints: Vec<BigInt> = s
                    .iter()
                    .map(|c| match c {
                        Scalar::Rational(r) => r.to_integer(),
                        Scalar::Residue(_) => unreachable!(),
                    })
                    .collect();
                polys
                    .iter()
                    .map(|p| field.from_bigint(&p.eval(&ints)))
                    .collect()
            }
            Evaluator::Field(polys) => polys.iter().map(|p| p.eval(s)).collect(),
        }
    }
}

fn sample(field: &Field, rng: &mut SeededRng, len: usize, height: i64) -> Vec<Scalar> {
    match field {
        Field::Rationals => (0..len)
            .map(|_| field.from_i64(rng.gen_range(-height..=height)))
            .collect(),
        _ => (0..len).map(|_| field.random_element(rng, 0)).collect(),
    }
}

/// Distinct points of `X` obtained by specializing `Ψ` at seeded samples,
/// skipping zeros of the denominator; each is checked on `X`.
pub fn generate_points(
    x: &CubicHypersurface,
    psi: &PsiMap,
    count: usize,
    config: &SamplerConfig,
) -> Result<Vec<ProjectivePoint>, PointsError> {
    if x.field() != psi.field() || x.ambient_len() != psi.frame().len() {
        return Err(PointsError::Mismatch);
    }
    let field = x.field();
    let eval = Evaluator::new(psi);
    let mut rng = seeded(config.seed);
    let mut seen: HashSet<ProjectivePoint> = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        if attempts >= config.max_attempts {
            return Err(PointsError::YieldTooLow {
                found: out.len(),
                requested: count,
                attempts,
            });
        }
        attempts += 1;
        let s = sample(field, &mut rng, psi.num_inputs(), config.height);
        let hom = eval.eval(field, &s);
        if field.is_zero(&hom[0]) {
            continue;
        }
        let coords = linalg::mat_vec(field, psi.frame(), &hom);
        let p = ProjectivePoint::new(field, coords)?;
        if !x.contains(&p)? {
            return Err(PointsError::Mismatch);
        }
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Outcome of the characteristic-3 checks on `y³ − y·z² = Σ t_i·x_i³`.
#[derive(Clone, Debug, PartialEq)]
pub struct Char3Report {
    /// `(y, z)` of the listed points `(y : z : 0 : … : 0)` and whether the
    /// equation vanishes there identically in the `t_i`.
    pub listed_points: Vec<((i64, i64), bool)>,
    pub degree_bound: usize,
    /// Triples `(f, g, h)` examined.
    pub searched: u64,
    /// Coefficient lists (constant first) of any solution with `h ≠ 0` and
    /// `gcd(f, g) = 1`.
    pub solutions: Vec<[Vec<u64>; 3]>,
}

/// Number of `t_i` used in the symbolic membership check.
pub const CHAR3_PARAMETERS: usize = 3;

/// Checks the listed points of the characteristic-3 example symbolically and
/// searches `F₃[t]` for `f(f−g)(f+g) = t·h³` with `deg ≤ degree_bound`.
pub fn char3_fixture_check(degree_bound: usize) -> Result<Char3Report, PointsError> {
    let f3 = Field::prime(3)?;
    let n = CHAR3_PARAMETERS;
    let mut names: Vec<String> = vec!["y".into(), "z".into()];
    names.extend((1..=n).map(|i| format!("x{i}")));
    names.extend((1..=n).map(|i| format!("t{i}")));
    let vars = Variables::new(names);
    let var = |i: usize| MultiPoly::var(f3.clone(), vars.clone(), i);
    let (y, z) = (var(0), var(1));
    let rhs = (0..n).fold(MultiPoly::zero(f3.clone(), vars.clone()), |acc, i| {
        acc.add(&var(2 + n + i).mul(&var(2 + i).pow(3)))
    });
    let eq = y.pow(3).sub(&y.mul(&z.pow(2))).sub(&rhs);
    let listed = [(0i64, 1i64), (1, 1), (1, -1)];
    let listed_points = listed
        .iter()
        .map(|&(yv, zv)| {
            let mut args: Vec<MultiPoly> = (0..2 + 2 * n).map(var).collect();
            args[0] = MultiPoly::constant(f3.clone(), vars.clone(), f3.from_i64(yv));
            args[1] = MultiPoly::constant(f3.clone(), vars.clone(), f3.from_i64(zv));
            for slot in args.iter_mut().skip(2).take(n) {
                *slot = MultiPoly::zero(f3.clone(), vars.clone());
            }
            ((yv, zv), eq.compose(&args).is_zero())
        })
        .collect();

    let size = 3u64.pow(degree_bound as u32 + 1);
    let poly = |code: u64| {
        let mut c = code;
        let coeffs: Vec<Scalar> = (0..=degree_bound)
            .map(|_| {
                let d = c % 3;
                c /= 3;
                Scalar::Residue(d)
            })
            .collect();
        UniPoly::new(f3.clone(), coeffs)
    };
    let all: Vec<UniPoly<Field>> = (0..size).map(poly).collect();
    let t = UniPoly::linear(f3.clone(), f3.zero(), f3.one());
    let mut searched = 0u64;
    let mut solutions = Vec::new();
    for f in &all {
        for g in &all {
            if f.degree().is_none() && g.degree().is_none() {
                continue;
            }
            if f.gcd(g).degree() != Some(0) {
                continue;
            }
            let lhs = f.mul(&f.sub(g)).mul(&f.add(g));
            for h in &all {
                searched += 1;
                if h.degree().is_none() {
                    continue;
                }
                if lhs == t.mul(&h.mul(h).mul(h)) {
                    let code = |p: &UniPoly<Field>| {
                        p.coeffs()
                            .iter()
                            .map(|c| match c {
                                Scalar::Residue(r) => *r,
                                Scalar::Rational(_) => unreachable!(),
                            })
                            .collect()
                    };
                    solutions.push([code(f), code(g), code(h)]);
                }
            }
        }
    }
    Ok(Char3Report {
        listed_points,
        degree_bound,
        searched,
        solutions,
    })
}
