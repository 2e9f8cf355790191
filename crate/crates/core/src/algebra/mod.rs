//! Exact arithmetic: coefficient rings, sparse polynomials, rational functions.

mod field;
mod integers;
pub mod linalg;
mod monomial;
pub mod parse;
mod poly;
mod ratfun;
pub mod univariate;

use alloc::string::String;
use core::fmt;

pub use field::{Field, FieldElement, GaloisTables, Scalar};
pub use integers::Integers;
pub use monomial::{Exponent, Monomial};
pub use parse::{parse_field, parse_poly, parse_poly_in};
pub use poly::{MultiPoly, Variables};
pub use ratfun::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("unsupported field for this operation: {0}")]
    UnsupportedField(String),
    #[error("invalid field designator: {0}")]
    InvalidField(String),
    #[error("polynomials live over different variable lists")]
    VariableMismatch,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("composed denominator vanishes identically")]
    DenominatorVanishesIdentically,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A commutative coefficient ring with an explicit context object.
///
/// Elements carry no context of their own; every operation goes through the
/// ring value. This lets a runtime-selected field (say `F_p` for a user given
/// `p`) share one polynomial implementation with the integers.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `Some(q)` with `q·b = a`, or `None` when no such `q` exists.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn is_field(&self) -> bool;
    /// Unit `e` such that `e·a` is the canonical associate of `a`.
    fn normalizing_unit(&self, a: &Self::Elem) -> Self::Elem;
    /// A common divisor of `a` and `b` that is as large as the ring allows
    /// cheaply: the integer gcd over `Z`, one over a field.
    fn content_gcd(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Whether `fmt_elem` output needs parentheses when used as a factor.
    fn is_compound(&self, _a: &Self::Elem) -> bool {
        false
    }
}

/// Element-level arithmetic used by the generic evaluators: polynomials,
/// rational functions and quadratic-extension elements all implement it.
pub trait Algebra: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact division. Over polynomial rings this fails unless the divisor
    /// divides; over fields of fractions only a zero divisor fails.
    fn try_div(&self, other: &Self) -> Result<Self, AlgebraError>;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Binary operation selector for the checked entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked scalar arithmetic; both operands must share a field.
pub fn field_arith(
    a: &FieldElement,
    b: &FieldElement,
    op: Op,
) -> Result<FieldElement, AlgebraError> {
    match op {
        Op::Add => a.checked_add(b),
        Op::Sub => a.checked_sub(b),
        Op::Mul => a.checked_mul(b),
        Op::Div => a.checked_div(b),
    }
}

/// Checked polynomial arithmetic; `Div` is exact division.
pub fn poly_arith<R: Ring>(
    f: &MultiPoly<R>,
    g: &MultiPoly<R>,
    op: Op,
) -> Result<MultiPoly<R>, AlgebraError> {
    if f.vars() != g.vars() || f.ring() != g.ring() {
        return Err(AlgebraError::VariableMismatch);
    }
    Ok(match op {
        Op::Add => f.add(g),
        Op::Sub => f.sub(g),
        Op::Mul => f.mul(g),
        Op::Div => f.div_exact(g).ok_or(AlgebraError::NotDivisible)?,
    })
}
