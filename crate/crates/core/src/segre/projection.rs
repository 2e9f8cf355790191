//! Inverse of the projection from a smooth point, and the third
//! intersection point of a line with `X`.

use alloc::vec::Vec;

use crate::algebra::linalg::Matrix;
use crate::algebra::univariate::Series;
use crate::algebra::{Algebra, Field, MultiPoly, RationalFunction, Ring, Scalar, Variables};
use crate::cubic::{CubicHypersurface, ProjectivePoint, TangentSection};

use super::SegreError;

/// `π_p: s ↦ τ(s)·s` with `τ = −q(s)/c(s)` inside the tangent hyperplane
/// `y_{n+1} = 0` of the pointed frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjParam {
    pub base_point: ProjectivePoint,
    /// Affine components `y_1..y_{n+1}` as rational functions of `s`.
    pub components: Vec<RationalFunction>,
    /// `(c : −q·s_1 : … : −q·s_n : 0)` pushed through the frame.
    pub ambient: Vec<MultiPoly>,
    pub frame: Matrix,
}

impl ProjParam {
    pub fn vars(&self) -> &Variables {
        self.ambient[0].vars()
    }

    /// Ambient coordinates at a direction, `None` where `q` vanishes (the
    /// image is the base point itself or undefined).
    pub fn eval_ambient(&self, s: &[Scalar]) -> Option<Vec<Scalar>> {
        let v: Vec<Scalar> = self.ambient.iter().map(|p| p.eval(s)).collect();
        let field = self.ambient[0].ring();
        (!v.iter().all(|c| field.is_zero(c))).then_some(v)
    }
}

pub fn projection_param(section: &TangentSection, frame: &Matrix) -> Result<ProjParam, SegreError> {
    let (q, c) = (&section.q, &section.c);
    if q.is_zero() || c.is_zero() {
        return Err(SegreError::DegenerateSection);
    }
    let field = q.ring().clone();
    let vars = q.vars().clone();
    let n = vars.len();
    if frame.len() != n + 2 {
        return Err(SegreError::InternalInconsistency("frame size".into()));
    }
    let zero = MultiPoly::zero(field.clone(), vars.clone());
    let mut hom = Vec::with_capacity(n + 2);
    hom.push(c.clone());
    for i in 0..n {
        hom.push(q.mul(&MultiPoly::var(field.clone(), vars.clone(), i)).neg());
    }
    hom.push(zero.clone());
    let components = hom[1..]
        .iter()
        .map(|p| RationalFunction::new(p.clone(), c.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let ambient = frame
        .iter()
        .map(|row| {
            row.iter().zip(&hom).fold(zero.clone(), |acc, (m, h)| {
                if field.is_zero(m) {
                    acc
                } else {
                    acc.add(&h.scale(m))
                }
            })
        })
        .collect();
    let base: Vec<Scalar> = frame.iter().map(|row| row[0].clone()).collect();
    Ok(ProjParam {
        base_point: ProjectivePoint::new(&field, base)?,
        components,
        ambient,
        frame: frame.clone(),
    })
}

fn proportional<A: Algebra>(p1: &[A], p2: &[A]) -> bool {
    (0..p1.len())
        .all(|i| (i + 1..p1.len()).all(|j| p1[i].mul(&p2[j]).sub(&p1[j].mul(&p2[i])).is_zero()))
}

/// Third point of `X` on the line through `P1` and `P2`, with coordinates
/// in any algebra over the field of `form`. Writing `F(a·P1 + b·P2) =
/// a·b·(c21·a + c12·b)`, the residual root is `(c12 : −c21)`.
pub fn third_point<A: Algebra>(
    form: &MultiPoly,
    p1: &[A],
    p2: &[A],
    embed: impl Fn(&Scalar) -> A,
) -> Result<Vec<A>, SegreError> {
    if p1.len() != form.nvars() || p2.len() != form.nvars() {
        return Err(SegreError::InternalInconsistency("point length".into()));
    }
    if p1.iter().all(|c| c.is_zero()) || p2.iter().all(|c| c.is_zero()) || proportional(p1, p2) {
        return Err(SegreError::CoincidentPoints);
    }
    let line: Vec<Series<A>> = p1
        .iter()
        .zip(p2)
        .map(|(a, b)| Series::linear(a.clone(), b.clone()))
        .collect();
    let r = form.eval_in(&line, |c| Series::constant(embed(c)));
    if !r.coeff(0).is_zero() || !r.coeff(3).is_zero() {
        return Err(SegreError::PointNotOnHypersurface);
    }
    let (c21, c12) = (r.coeff(1), r.coeff(2));
    if c21.is_zero() && c12.is_zero() {
        return Err(SegreError::LineContainedInX);
    }
    Ok(p1
        .iter()
        .zip(p2)
        .map(|(a, b)| c12.mul(a).sub(&c21.mul(b)))
        .collect())
}

/// [`third_point`] for points with coordinates in the base field.
pub fn third_point_projective(
    x: &CubicHypersurface,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
) -> Result<ProjectivePoint, SegreError> {
    let field: Field = x.field().clone();
    let vars = Variables::new(Vec::<&str>::new());
    let lift = |c: &Scalar| MultiPoly::constant(field.clone(), vars.clone(), c.clone());
    let a: Vec<MultiPoly> = p1.coords().iter().map(lift).collect();
    let b: Vec<MultiPoly> = p2.coords().iter().map(lift).collect();
    let out = third_point(x.form(), &a, &b, lift)?;
    let coords = out.iter().map(|p| p.constant_coeff()).collect();
    Ok(ProjectivePoint::new(&field, coords)?)
}
