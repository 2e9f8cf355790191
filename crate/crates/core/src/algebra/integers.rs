use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Ring;

/// The ring `Z`. Used as a denominator-free stand-in for `Q` in the heavy
/// polynomial pipelines: a form over `Q` is scaled to integer coefficients,
/// which leaves its zero set unchanged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn one(&self) -> BigInt {
        BigInt::one()
    }

    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn add_assign(&self, a: &mut BigInt, b: &BigInt) {
        *a += b;
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn is_field(&self) -> bool {
        false
    }

    fn normalizing_unit(&self, a: &BigInt) -> BigInt {
        if a.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }

    fn content_gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }

    fn fmt_elem(&self, a: &BigInt, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{a}")
    }
}
