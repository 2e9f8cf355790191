use core::cmp::Ordering;
use core::ops::Index;

use smallvec::SmallVec;

pub type Exponent = u16;

/// Exponent vector of a monomial. Ordered graded-lexicographically: total
/// degree first, then the first differing exponent in variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[Exponent; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize, e: Exponent) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = e;
        m
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn exponents_mut(&mut self) -> &mut [Exponent] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|e| *e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

impl Index<usize> for Monomial {
    type Output = Exponent;

    fn index(&self, i: usize) -> &Exponent {
        &self.0[i]
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
