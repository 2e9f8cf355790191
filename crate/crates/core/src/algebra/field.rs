use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;

use super::{AlgebraError, Ring};

/// Raw field element. Its meaning depends on the [`Field`] it is used with:
/// a reduced fraction over `Q`, a residue in `[0, p)` over `F_p`, or the
/// base-`p` code `Σ c_i p^i` of `Σ c_i w^i` over `F_{p^k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

/// Log/antilog tables for a small extension field `F_p[w]/(m(w))`.
#[derive(Debug)]
pub struct GaloisTables {
    p: u64,
    degree: u32,
    /// Monic modulus, coefficients from `w^0` up to `w^degree`.
    modulus: Vec<u64>,
    order: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Largest extension field order we build tables for.
pub const MAX_GALOIS_ORDER: u64 = 1 << 16;

impl GaloisTables {
    /// Builds the tables, failing unless `modulus` is irreducible.
    ///
    /// Irreducibility is certified by exhibiting an element of multiplicative
    /// order `p^k - 1` in the quotient ring.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 3 || *modulus.last().unwrap() != 1 {
            return Err(AlgebraError::InvalidField(
                "modulus must be monic of degree >= 2".into(),
            ));
        }
        let degree = (modulus.len() - 1) as u32;
        let order = p
            .checked_pow(degree)
            .filter(|q| *q <= MAX_GALOIS_ORDER)
            .ok_or_else(|| AlgebraError::InvalidField(format!("F_{p}^{degree} is too large")))?;
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let k = degree as usize;
        let decode = |mut code: u64| {
            let mut digits = vec![0u64; k];
            for d in digits.iter_mut() {
                *d = code % p;
                code /= p;
            }
            digits
        };
        let encode = |digits: &[u64]| digits.iter().rev().fold(0u64, |acc, d| acc * p + d);
        let mulmod = |a: &[u64], b: &[u64]| {
            let mut prod = vec![0u64; 2 * k - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for top in (k..prod.len()).rev() {
                let c = prod[top];
                if c != 0 {
                    for (i, m) in modulus[..k].iter().enumerate() {
                        let idx = top - k + i;
                        prod[idx] = (prod[idx] + (p - c) * m) % p;
                    }
                    prod[top] = 0;
                }
            }
            prod.truncate(k);
            prod
        };
        let group = (order - 1) as usize;
        // candidates: w first, then every other nonzero non-identity code
        let candidates = core::iter::once(p).chain((2..order).filter(|c| *c != p));
        for cand in candidates {
            let g = decode(cand);
            let mut exp = Vec::with_capacity(group);
            let mut x = decode(1);
            let mut ok = true;
            for i in 0..group {
                let code = encode(&x);
                if i > 0 && code == 1 {
                    ok = false;
                    break;
                }
                exp.push(code as u32);
                x = mulmod(&x, &g);
            }
            if ok && encode(&x) == 1 {
                let mut log = vec![u32::MAX; order as usize];
                for (i, e) in exp.iter().enumerate() {
                    log[*e as usize] = i as u32;
                }
                if log[1..].iter().all(|l| *l != u32::MAX) {
                    return Ok(GaloisTables {
                        p,
                        degree,
                        modulus,
                        order,
                        exp,
                        log,
                    });
                }
            }
        }
        Err(AlgebraError::InvalidField(format!(
            "modulus {modulus:?} is not irreducible over F_{p}"
        )))
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let (mut a, mut b, mut out, mut place) = (a, b, 0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn neg(&self, a: u64) -> u64 {
        let p = self.p;
        let (mut a, mut out, mut place) = (a, 0u64, 1u64);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let group = self.order - 1;
        let l = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % group;
        self.exp[l as usize] as u64
    }

    fn inv(&self, a: u64) -> u64 {
        let group = self.order - 1;
        let l = (group - self.log[a as usize] as u64) % group;
        self.exp[l as usize] as u64
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl PartialEq for GaloisTables {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for GaloisTables {}

/// A runtime-selected exact field: `Q`, a prime field, or a small extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Rationals,
    Prime(u64),
    Galois(Arc<GaloisTables>),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(AlgebraError::InvalidField(format!("F{p}")));
        }
        Ok(Field::Prime(p))
    }

    pub fn galois(p: u64, modulus: &[u64]) -> Result<Self, AlgebraError> {
        Ok(Field::Galois(Arc::new(GaloisTables::new(p, modulus)?)))
    }

    /// The field with `q` elements. Uses the fixed moduli `w²+w+1` (F4),
    /// `w³+w+1` (F8), `w²+1` (F9), `w⁴+w+1` (F16); other prime powers get the
    /// first irreducible monic polynomial in lexicographic coefficient order.
    pub fn finite(q: u64) -> Result<Self, AlgebraError> {
        if is_prime(q) {
            return Field::prime(q);
        }
        let modulus: Vec<u64> = match q {
            4 => vec![1, 1, 1],
            8 => vec![1, 1, 0, 1],
            9 => vec![1, 0, 1],
            16 => vec![1, 1, 0, 0, 1],
            _ => {
                let (p, k) =
                    prime_power(q).ok_or_else(|| AlgebraError::InvalidField(format!("F{q}")))?;
                if q > MAX_GALOIS_ORDER {
                    return Err(AlgebraError::InvalidField(format!("F{q} is too large")));
                }
                for code in 0..q {
                    let mut m: Vec<u64> = (0..k).map(|i| (code / p.pow(i)) % p).collect();
                    m.push(1);
                    if let Ok(t) = GaloisTables::new(p, &m) {
                        return Ok(Field::Galois(Arc::new(t)));
                    }
                }
                return Err(AlgebraError::InvalidField(format!("F{q}")));
            }
        };
        let p = prime_power(q).map(|(p, _)| p).unwrap();
        Field::galois(p, &modulus)
    }

    /// `Q`, `F<p>` or `F<p^k>`.
    pub fn designator(&self) -> String {
        match self {
            Field::Rationals => "Q".into(),
            Field::Prime(p) => format!("F{p}"),
            Field::Galois(t) => format!("F{}", t.order),
        }
    }

    /// Number of elements, `None` for `Q`.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
            Field::Galois(t) => Some(t.order),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn prime_subfield(&self) -> Field {
        match self {
            Field::Galois(t) => Field::Prime(t.p),
            other => other.clone(),
        }
    }

    /// Extension degree over the prime field (1 for `Q` and `F_p`).
    pub fn degree(&self) -> u32 {
        match self {
            Field::Galois(t) => t.degree,
            _ => 1,
        }
    }

    /// The `index`-th element in the deterministic scan order of a finite
    /// field (residue code order, zero first).
    pub fn element(&self, index: u64) -> Scalar {
        debug_assert!(self.is_finite());
        Scalar::Residue(index)
    }

    /// Position of a finite-field element in the scan order.
    pub fn index_of(&self, a: &Scalar) -> u64 {
        match a {
            Scalar::Residue(r) => *r,
            Scalar::Rational(_) => panic!("index_of on a rational scalar"),
        }
    }

    /// All elements of a finite field in scan order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.order().expect("finite field")).map(Scalar::Residue)
    }

    /// The generator `w` of an extension field.
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            Field::Galois(t) => Some(Scalar::Residue(t.p)),
            _ => None,
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, AlgebraError> {
        if self.is_zero(a) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match (self, a) {
            (Field::Rationals, Scalar::Rational(r)) => Scalar::Rational(r.recip()),
            (Field::Prime(p), Scalar::Residue(r)) => Scalar::Residue(inv_mod(*r, *p)),
            (Field::Galois(t), Scalar::Residue(r)) => Scalar::Residue(t.inv(*r)),
            _ => panic!("scalar does not belong to {}", self.designator()),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, AlgebraError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Square root in a finite field of characteristic 2: `a^(q/2)`.
    pub fn frobenius_sqrt(&self, a: &Scalar) -> Result<Scalar, AlgebraError> {
        match self.order() {
            Some(q) if self.characteristic() == 2 => Ok(self.pow(a, q / 2)),
            _ => Err(AlgebraError::UnsupportedField(self.designator())),
        }
    }

    /// The unique `p`-th root `a^(q/p)` in a finite field of characteristic `p`.
    pub fn frobenius_root(&self, a: &Scalar) -> Result<Scalar, AlgebraError> {
        match self.order() {
            Some(q) => Ok(self.pow(a, q / self.characteristic())),
            None => Err(AlgebraError::UnsupportedField(self.designator())),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            _ => {
                let p = self.characteristic();
                Scalar::Residue(n.mod_floor(&BigInt::from(p)).to_u64().unwrap())
            }
        }
    }

    /// Image of a rational number; fails when the denominator is divisible by
    /// the characteristic.
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar, AlgebraError> {
        match self {
            Field::Rationals => Ok(Scalar::Rational(r.clone())),
            _ => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                self.div(&n, &d)
            }
        }
    }

    /// Rational value of a scalar over `Q`.
    pub fn to_rational(&self, a: &Scalar) -> Option<BigRational> {
        match a {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Residue(_) => None,
        }
    }

    /// Uniform element of a finite field; over `Q` a small random fraction
    /// with numerator in `[-bound, bound]` and denominator in `[1, bound]`.
    pub fn random_element<G: rand::RngCore>(&self, rng: &mut G, bound: i64) -> Scalar {
        match self.order() {
            Some(q) => Scalar::Residue(rng.gen_range(0..q)),
            None => {
                let n = rng.gen_range(-bound..=bound);
                let d = if rng.gen_bool(0.25) {
                    rng.gen_range(1..=bound.max(1))
                } else {
                    1
                };
                Scalar::Rational(BigRational::new(n.into(), d.into()))
            }
        }
    }

    /// Random integer-valued element (or residue) in `[-bound, bound]`.
    pub fn random_integer<G: rand::RngCore>(&self, rng: &mut G, bound: i64) -> Scalar {
        match self.order() {
            Some(q) => Scalar::Residue(rng.gen_range(0..q)),
            None => self.from_i64(rng.gen_range(-bound..=bound)),
        }
    }

    pub fn element_of(&self, value: Scalar) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl Ring for Field {
    type Elem = Scalar;

    fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            _ => Scalar::Residue(0),
        }
    }

    fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::one()),
            _ => Scalar::Residue(1),
        }
    }

    fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            Field::Prime(p) => Scalar::Residue(n.rem_euclid(*p as i64) as u64),
            Field::Galois(t) => Scalar::Residue(t.from_i64(n)),
        }
    }

    fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue((x + y) % p)
            }
            (Field::Galois(t), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(t.add(*x, *y))
            }
            _ => panic!("scalar does not belong to {}", self.designator()),
        }
    }

    fn add_assign(&self, a: &mut Scalar, b: &Scalar) {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => *x += y,
            (a, b) => *a = self.add(a, b),
        }
    }

    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (Field::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            (Field::Galois(t), Scalar::Residue(x)) => Scalar::Residue(t.neg(*x)),
            _ => panic!("scalar does not belong to {}", self.designator()),
        }
    }

    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Field::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(x * y % p),
            (Field::Galois(t), Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(t.mul(*x, *y))
            }
            _ => panic!("scalar does not belong to {}", self.designator()),
        }
    }

    fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.div(a, b).ok()
    }

    fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
            Field::Galois(t) => t.p,
        }
    }

    fn is_field(&self) -> bool {
        true
    }

    fn normalizing_unit(&self, a: &Scalar) -> Scalar {
        self.inv(a).unwrap_or_else(|_| self.one())
    }

    fn content_gcd(&self, _a: &Scalar, _b: &Scalar) -> Scalar {
        self.one()
    }

    fn fmt_elem(&self, a: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, a) {
            (Field::Galois(t), Scalar::Residue(code)) => {
                if *code == 0 {
                    return write!(f, "0");
                }
                let mut first = true;
                for i in (0..t.degree).rev() {
                    let c = (code / t.p.pow(i)) % t.p;
                    if c == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match (i, c) {
                        (0, c) => write!(f, "{c}")?,
                        (1, 1) => write!(f, "w")?,
                        (1, c) => write!(f, "{c}*w")?,
                        (i, 1) => write!(f, "w^{i}")?,
                        (i, c) => write!(f, "{c}*w^{i}")?,
                    }
                }
                Ok(())
            }
            (_, Scalar::Residue(r)) => write!(f, "{r}"),
            (_, Scalar::Rational(r)) => write!(f, "{r}"),
        }
    }

    fn is_compound(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Field::Galois(t), Scalar::Residue(code)) => {
                (0..t.degree)
                    .filter(|i| (code / t.p.pow(*i)) % t.p != 0)
                    .count()
                    > 1
            }
            _ => false,
        }
    }
}

/// A scalar bundled with its field, for checked user-facing arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Scalar,
}

impl FieldElement {
    fn same_field(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(
                self.field.designator(),
                other.field.designator(),
            ));
        }
        Ok(())
    }

    fn wrap(&self, value: Scalar) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(&self.value, &other.value)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(&self.value, &other.value)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(&self.value, &other.value)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(&self.value, &other.value)?))
    }

    pub fn frobenius_sqrt(&self) -> Result<Self, AlgebraError> {
        Ok(self.wrap(self.field.frobenius_sqrt(&self.value)?))
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt_elem(&self.value, f)
    }
}
