//! Dense univariate polynomials over a coefficient ring. Used for gcd
//! heuristics, restrictions to lines, and `σ`/`λ`-polynomials.

use alloc::vec;
use alloc::vec::Vec;

use super::{Algebra, AlgebraError, MultiPoly, Ring};

/// Coefficients from degree 0 upward, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().map(|c| ring.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { ring, coeffs }
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Self::new(ring, vec![c])
    }

    /// `a + b·s`.
    pub fn linear(ring: R, a: R::Elem, b: R::Elem) -> Self {
        Self::new(ring, vec![a, b])
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> R::Elem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let ring = &self.ring;
        self.coeffs
            .iter()
            .rev()
            .fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
    }

    /// Division with remainder over a field.
    pub fn div_rem(&self, other: &Self) -> Result<(Self, Self), AlgebraError> {
        let ring = &self.ring;
        let d = other.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lc = other.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= d {
            return Ok((Self::new(ring.clone(), Vec::new()), self.clone()));
        }
        let mut quot = vec![ring.zero(); n - d];
        for k in (d..n).rev() {
            let c = rem[k].clone();
            if ring.is_zero(&c) {
                continue;
            }
            let q = ring.div_exact(&c, &lc).ok_or(AlgebraError::NotDivisible)?;
            for (i, g) in other.coeffs.iter().enumerate() {
                let idx = k - d + i;
                rem[idx] = ring.sub(&rem[idx], &ring.mul(&q, g));
            }
            quot[k - d] = q;
        }
        Ok((Self::new(ring.clone(), quot), Self::new(ring.clone(), rem)))
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while b.degree().is_some() {
            let r = a.div_rem(&b).expect("field coefficients").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => {
                let ring = &self.ring;
                let coeffs = self
                    .coeffs
                    .iter()
                    .map(|c| ring.div_exact(c, lc).expect("field coefficients"))
                    .collect();
                Self::new(ring.clone(), coeffs)
            }
        }
    }

    /// Embeds as a polynomial in variable `i` of a multivariate ring.
    pub fn to_multi(&self, template: &MultiPoly<R>, i: usize) -> MultiPoly<R> {
        let x = MultiPoly::var(self.ring.clone(), template.vars().clone(), i);
        let mut acc = template.zero_like();
        let mut pow = template.one_like();
        for c in &self.coeffs {
            acc = acc.add(&pow.scale(c));
            pow = pow.mul(&x);
        }
        acc
    }

    /// Reads a polynomial whose only variable is `i`.
    pub fn from_multi(f: &MultiPoly<R>, i: usize) -> Option<Self> {
        let ring = f.ring().clone();
        let mut coeffs = vec![ring.zero(); f.degree_in(i) as usize + 1];
        for (m, c) in f.terms() {
            if m.exponents()
                .iter()
                .enumerate()
                .any(|(j, e)| j != i && *e > 0)
            {
                return None;
            }
            coeffs[m[i] as usize] = c.clone();
        }
        Some(Self::new(ring, coeffs))
    }
}

impl<R: Ring> Algebra for UniPoly<R> {
    fn zero_like(&self) -> Self {
        Self::new(self.ring.clone(), Vec::new())
    }

    fn one_like(&self) -> Self {
        Self::constant(self.ring.clone(), self.ring.one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let ring = &self.ring;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => ring.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(ring.clone(), coeffs)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        let ring = &self.ring;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return self.zero_like();
        }
        let mut out = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = ring.mul(a, b);
                ring.add_assign(&mut out[i + j], &p);
            }
        }
        Self::new(ring.clone(), out)
    }

    fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        Self::new(self.ring.clone(), coeffs)
    }

    fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = self.div_rem(other)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::NotDivisible)
        }
    }
}

/// Polynomials over an arbitrary algebra in one extra formal variable, used
/// where the coefficients are themselves polynomials or extension elements.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<A: Algebra> {
    coeffs: Vec<A>,
    zero: A,
}

impl<A: Algebra> Series<A> {
    pub fn new(zero: A, mut coeffs: Vec<A>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Series { coeffs, zero }
    }

    pub fn constant(c: A) -> Self {
        Self::new(c.zero_like(), vec![c])
    }

    /// `a + b·s`.
    pub fn linear(a: A, b: A) -> Self {
        Self::new(a.zero_like(), vec![a, b])
    }

    pub fn coeff(&self, k: usize) -> A {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.zero.clone())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn into_coeffs(self) -> Vec<A> {
        self.coeffs
    }
}

impl<A: Algebra> Algebra for Series<A> {
    fn zero_like(&self) -> Self {
        Self::new(self.zero.clone(), Vec::new())
    }

    fn one_like(&self) -> Self {
        Self::constant(self.zero.one_like())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(self.zero.clone(), coeffs)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return self.zero_like();
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.zero.clone(), out)
    }

    fn neg(&self) -> Self {
        Self::new(
            self.zero.clone(),
            self.coeffs.iter().map(|c| c.neg()).collect(),
        )
    }

    fn try_div(&self, _other: &Self) -> Result<Self, AlgebraError> {
        Err(AlgebraError::NotDivisible)
    }
}
