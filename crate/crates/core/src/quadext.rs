//! The rank-2 ring `B[t]/(cC·t² + cQ·t + cL)`.
//!
//! `t` stays symbolic. Over a polynomial base the modulus must be monic
//! (`cC = 1`) so that reduction needs no division; over a rational-function
//! base any nonzero `cC` works.

use alloc::sync::Arc;
use core::fmt;

use crate::algebra::{Algebra, AlgebraError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuadExtError {
    #[error("element has zero norm and is not invertible")]
    NonInvertible,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(&'static str),
    #[error("leading modulus coefficient is zero or does not divide the others")]
    BadModulus,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Modulus data. `t² = p·t + r` with `p = −cQ/cC`, `r = −cL/cC`.
#[derive(Debug, PartialEq)]
pub struct QuadExtRing<B: Algebra> {
    cl: B,
    cq: B,
    cc: B,
    p: B,
    r: B,
}

impl<B: Algebra> QuadExtRing<B> {
    pub fn new(cl: B, cq: B, cc: B) -> Result<Arc<Self>, QuadExtError> {
        if cc.is_zero() {
            return Err(QuadExtError::BadModulus);
        }
        let p = cq
            .neg()
            .try_div(&cc)
            .map_err(|_| QuadExtError::BadModulus)?;
        let r = cl
            .neg()
            .try_div(&cc)
            .map_err(|_| QuadExtError::BadModulus)?;
        Ok(Arc::new(QuadExtRing { cl, cq, cc, p, r }))
    }

    pub fn cl(&self) -> &B {
        &self.cl
    }

    pub fn cq(&self) -> &B {
        &self.cq
    }

    pub fn cc(&self) -> &B {
        &self.cc
    }

    /// `t₁ + t₂ = −cQ/cC`.
    pub fn trace_of_t(&self) -> &B {
        &self.p
    }
}

/// `a + b·t`.
#[derive(Clone)]
pub struct QuadExtElement<B: Algebra> {
    ring: Arc<QuadExtRing<B>>,
    a: B,
    b: B,
}

impl<B: Algebra> QuadExtElement<B> {
    pub fn new(ring: &Arc<QuadExtRing<B>>, a: B, b: B) -> Self {
        QuadExtElement {
            ring: ring.clone(),
            a,
            b,
        }
    }

    pub fn base(ring: &Arc<QuadExtRing<B>>, a: B) -> Self {
        let b = a.zero_like();
        Self::new(ring, a, b)
    }

    /// The generator `t`.
    pub fn t(ring: &Arc<QuadExtRing<B>>) -> Self {
        Self::new(ring, ring.cc.zero_like(), ring.cc.one_like())
    }

    pub fn ring(&self) -> &Arc<QuadExtRing<B>> {
        &self.ring
    }

    pub fn a(&self) -> &B {
        &self.a
    }

    pub fn b(&self) -> &B {
        &self.b
    }

    pub fn into_parts(self) -> (B, B) {
        (self.a, self.b)
    }

    /// True iff the `t`-component is zero.
    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.ring, self.a.add(&other.a), self.b.add(&other.b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.ring, self.a.sub(&other.a), self.b.sub(&other.b))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ring, self.a.neg(), self.b.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ac = self.a.mul(&other.a);
        if self.b.is_zero() && other.b.is_zero() {
            let z = ac.zero_like();
            return Self::new(&self.ring, ac, z);
        }
        let mut cross = self.a.mul(&other.b).add(&self.b.mul(&other.a));
        let bd = self.b.mul(&other.b);
        if bd.is_zero() {
            return Self::new(&self.ring, ac, cross);
        }
        cross = cross.add(&bd.mul(&self.ring.p));
        let a = ac.add(&bd.mul(&self.ring.r));
        Self::new(&self.ring, a, cross)
    }

    pub fn scale(&self, c: &B) -> Self {
        Self::new(&self.ring, self.a.mul(c), self.b.mul(c))
    }

    /// `t ↦ t₂ = −cQ/cC − t`.
    pub fn conjugate(&self) -> Self {
        let a = self.a.add(&self.b.mul(&self.ring.p));
        Self::new(&self.ring, a, self.b.neg())
    }

    /// `x·conjugate(x)` as a base element.
    pub fn norm(&self) -> Result<B, QuadExtError> {
        let n = self.mul(&self.conjugate());
        if !n.b.is_zero() {
            return Err(QuadExtError::InternalInconsistency(
                "norm has a nonzero t-component",
            ));
        }
        Ok(n.a)
    }

    pub fn inv(&self) -> Result<Self, QuadExtError> {
        let n = self.norm()?;
        if n.is_zero() {
            return Err(QuadExtError::NonInvertible);
        }
        let c = self.conjugate();
        Ok(Self::new(&self.ring, c.a.try_div(&n)?, c.b.try_div(&n)?))
    }

    pub fn div(&self, other: &Self) -> Result<Self, QuadExtError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        Algebra::pow(self, e)
    }
}

impl<B: Algebra> PartialEq for QuadExtElement<B> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl<B: Algebra> Algebra for QuadExtElement<B> {
    fn zero_like(&self) -> Self {
        Self::new(&self.ring, self.a.zero_like(), self.a.zero_like())
    }

    fn one_like(&self) -> Self {
        Self::new(&self.ring, self.a.one_like(), self.a.zero_like())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        QuadExtElement::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        QuadExtElement::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        QuadExtElement::mul(self, other)
    }

    fn neg(&self) -> Self {
        QuadExtElement::neg(self)
    }

    fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.div(other).map_err(|e| match e {
            QuadExtError::Algebra(e) => e,
            _ => AlgebraError::DivisionByZero,
        })
    }
}

impl<B: Algebra + fmt::Display> fmt::Display for QuadExtElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*t", self.a, self.b)
    }
}

impl<B: Algebra> fmt::Debug for QuadExtElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExtElement({:?}, {:?})", self.a, self.b)
    }
}
