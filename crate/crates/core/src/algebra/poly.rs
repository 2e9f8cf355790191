use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use hashbrown::HashMap;

use super::{Algebra, AlgebraError, Exponent, Field, Monomial, Ring};

/// Ordered list of variable names shared by polynomials living in the same
/// ring. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Variables(Arc<[String]>);

impl Variables {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Variables(names.into_iter().map(Into::into).collect())
    }

    /// `prefix0, prefix1, ..., prefix{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Variables((0..n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

impl PartialEq for Variables {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Variables {}

/// Sparse multivariate polynomial with coefficients in `R`.
///
/// Terms are kept sorted in decreasing graded-lexicographic order with no
/// zero coefficients, so structural equality is polynomial equality.
#[derive(Clone)]
pub struct MultiPoly<R: Ring = Field> {
    ring: R,
    vars: Variables,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: Ring> PartialEq for MultiPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.ring == other.ring && self.terms == other.terms
    }
}

impl<R: Ring> Eq for MultiPoly<R> {}

impl<R: Ring> MultiPoly<R> {
    pub fn zero(ring: R, vars: Variables) -> Self {
        MultiPoly {
            ring,
            vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: R, vars: Variables, c: R::Elem) -> Self {
        let nvars = vars.len();
        let terms = if ring.is_zero(&c) {
            Vec::new()
        } else {
            vec![(Monomial::one(nvars), c)]
        };
        MultiPoly { ring, vars, terms }
    }

    pub fn one(ring: R, vars: Variables) -> Self {
        let one = ring.one();
        Self::constant(ring, vars, one)
    }

    /// The `i`-th variable.
    pub fn var(ring: R, vars: Variables, i: usize) -> Self {
        let nvars = vars.len();
        let one = ring.one();
        MultiPoly {
            ring,
            vars,
            terms: vec![(Monomial::var(nvars, i, 1), one)],
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(
        ring: R,
        vars: Variables,
        terms: impl IntoIterator<Item = (Monomial, R::Elem)>,
    ) -> Self {
        let mut acc: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent vector length");
            match acc.get_mut(&m) {
                Some(e) => ring.add_assign(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        MultiPoly { ring, vars, terms }
    }

    /// Trusts that `terms` is sorted decreasingly with nonzero coefficients.
    fn from_sorted(ring: R, vars: Variables, terms: Vec<(Monomial, R::Elem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        MultiPoly { ring, vars, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, R::Elem)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.ring.is_one(&self.terms[0].1)
    }

    /// Constant term.
    pub fn constant_coeff(&self) -> R::Elem {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.zero(),
        }
    }

    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        self.terms
            .binary_search_by(|(k, _)| m.cmp(k))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.ring.zero())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, R::Elem)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> R::Elem {
        self.terms
            .first()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Total degree; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m[i] as u32)
            .max()
            .unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|i| self.terms.iter().any(|(m, _)| m[*i] > 0))
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .cloned()
            .collect();
        Self::from_sorted(self.ring.clone(), self.vars.clone(), terms)
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.vars == other.vars && self.ring == other.ring,
            "polynomials over different rings or variable lists"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    let c = ring.add(&a[i].1, &b[j].1);
                    if !ring.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self::from_sorted(ring.clone(), self.vars.clone(), out)
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.ring.neg(c)))
            .collect();
        Self::from_sorted(self.ring.clone(), self.vars.clone(), terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(self.ring.clone(), self.vars.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), self.ring.mul(a, c)))
            .filter(|(_, a)| !self.ring.is_zero(a))
            .collect();
        Self::from_sorted(self.ring.clone(), self.vars.clone(), terms)
    }

    pub fn mul_term(&self, m: &Monomial, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(self.ring.clone(), self.vars.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (k.mul(m), self.ring.mul(a, c)))
            .filter(|(_, a)| !self.ring.is_zero(a))
            .collect();
        Self::from_sorted(self.ring.clone(), self.vars.clone(), terms)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone(), self.vars.clone());
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if let Some(p) = self.mul_packed(other) {
            return p;
        }
        let ring = &self.ring;
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let mut acc: HashMap<Monomial, R::Elem> =
            HashMap::with_capacity((small.len() * large.len()).min(1 << 20));
        for (ma, ca) in small.iter() {
            for (mb, cb) in large.iter() {
                let prod = ring.mul(ca, cb);
                match acc.entry(ma.mul(mb)) {
                    hashbrown::hash_map::Entry::Occupied(mut e) => {
                        ring.add_assign(e.get_mut(), &prod)
                    }
                    hashbrown::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, R::Elem)> =
            acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self::from_sorted(ring.clone(), self.vars.clone(), terms)
    }

    /// Multiplication with exponent vectors packed into one `u64`, used when
    /// every exponent of the product fits in `64 / nvars` bits.
    fn mul_packed(&self, other: &Self) -> Option<Self> {
        let n = self.nvars();
        if n == 0 || n > 16 {
            return None;
        }
        let bits = (64 / n).min(16) as u32;
        let limit = 1u32 << bits;
        for i in 0..n {
            if self.degree_in(i) + other.degree_in(i) >= limit {
                return None;
            }
        }
        let pack = |m: &Monomial| -> u64 {
            m.exponents()
                .iter()
                .fold(0u64, |acc, e| (acc << bits) | *e as u64)
        };
        let ring = &self.ring;
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let large_keys: Vec<u64> = large.iter().map(|(m, _)| pack(m)).collect();
        let mut acc: HashMap<u64, R::Elem> =
            HashMap::with_capacity((small.len() * large.len()).min(1 << 20));
        for (ma, ca) in small.iter() {
            let ka = pack(ma);
            for ((_, cb), kb) in large.iter().zip(&large_keys) {
                let prod = ring.mul(ca, cb);
                match acc.entry(ka + kb) {
                    hashbrown::hash_map::Entry::Occupied(mut e) => {
                        ring.add_assign(e.get_mut(), &prod)
                    }
                    hashbrown::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let mask = (1u64 << bits) - 1;
        let mut keyed: Vec<(u32, u64, R::Elem)> = acc
            .into_iter()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(k, c)| {
                let deg = (0..n)
                    .map(|i| ((k >> (bits * i as u32)) & mask) as u32)
                    .sum();
                (deg, k, c)
            })
            .collect();
        keyed.sort_unstable_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
        let terms = keyed
            .into_iter()
            .map(|(_, k, c)| {
                let mut m = Monomial::one(n);
                let e = m.exponents_mut();
                for i in 0..n {
                    let shift = bits * (n - 1 - i) as u32;
                    e[i] = ((k >> shift) & mask) as Exponent;
                }
                (m, c)
            })
            .collect();
        Some(Self::from_sorted(ring.clone(), self.vars.clone(), terms))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ring.clone(), self.vars.clone());
        let mut e = e;
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

    /// Formal partial derivative. Exponents enter as ring elements, so
    /// `∂(x^p)/∂x = 0` in characteristic `p`.
    pub fn derivative(&self, i: usize) -> Self {
        let ring = &self.ring;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[i] > 0)
            .map(|(m, c)| {
                let mut m2 = m.clone();
                m2.exponents_mut()[i] -= 1;
                (m2, ring.mul(c, &ring.from_i64(m[i] as i64)))
            })
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        // dividing every term by x_i preserves the monomial order
        Self::from_sorted(ring.clone(), self.vars.clone(), terms)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars()).map(|i| self.derivative(i)).collect()
    }

    /// Value at a point.
    fn power_table(&self, point: &[R::Elem]) -> Vec<Vec<R::Elem>> {
        let ring = &self.ring;
        point
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let d = self.degree_in(i) as usize;
                let mut p = Vec::with_capacity(d + 1);
                p.push(ring.one());
                for k in 0..d {
                    let next = ring.mul(&p[k], x);
                    p.push(next);
                }
                p
            })
            .collect()
    }

    pub fn eval(&self, point: &[R::Elem]) -> R::Elem {
        assert_eq!(point.len(), self.nvars());
        let ring = &self.ring;
        let powers = self.power_table(point);
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exponents().iter().enumerate() {
                if *e > 0 {
                    t = ring.mul(&t, &powers[i][*e as usize]);
                }
            }
            ring.add_assign(&mut acc, &t);
        }
        acc
    }

    /// Value and gradient at a point in one pass over the terms.
    pub fn eval_with_gradient(&self, point: &[R::Elem]) -> (R::Elem, Vec<R::Elem>) {
        assert_eq!(point.len(), self.nvars());
        let ring = &self.ring;
        let n = self.nvars();
        let powers = self.power_table(point);
        let mut value = ring.zero();
        let mut grad = vec![ring.zero(); n];
        // prefix[i] = c·Π_{k<i} x_k^{e_k}, suffix products folded in from the right
        let mut prefix = Vec::with_capacity(n + 1);
        for (m, c) in &self.terms {
            let e = m.exponents();
            prefix.clear();
            prefix.push(c.clone());
            for i in 0..n {
                let next = if e[i] > 0 {
                    ring.mul(&prefix[i], &powers[i][e[i] as usize])
                } else {
                    prefix[i].clone()
                };
                prefix.push(next);
            }
            ring.add_assign(&mut value, &prefix[n]);
            let mut suffix = ring.one();
            for i in (0..n).rev() {
                if e[i] > 0 {
                    let k = ring.mul(&ring.from_i64(e[i] as i64), &powers[i][e[i] as usize - 1]);
                    let d = ring.mul(&ring.mul(&prefix[i], &k), &suffix);
                    ring.add_assign(&mut grad[i], &d);
                    suffix = ring.mul(&suffix, &powers[i][e[i] as usize]);
                }
            }
        }
        (value, grad)
    }

    /// Evaluates in any algebra, embedding coefficients through `embed`.
    pub fn eval_in<A: Algebra>(&self, args: &[A], embed: impl Fn(&R::Elem) -> A) -> A {
        assert_eq!(args.len(), self.nvars());
        let zero = match args.first() {
            Some(a) => a.zero_like(),
            None => return embed(&self.constant_coeff()),
        };
        let mut powers: Vec<Vec<A>> = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let d = self.degree_in(i) as usize;
            let mut p = Vec::with_capacity(d + 1);
            p.push(a.one_like());
            for k in 0..d {
                let next = if k == 0 { a.clone() } else { p[k].mul(a) };
                p.push(next);
            }
            powers.push(p);
        }
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t: Option<A> = None;
            for (i, e) in m.exponents().iter().enumerate() {
                if *e > 0 {
                    let f = &powers[i][*e as usize];
                    t = Some(match t {
                        None => f.clone(),
                        Some(t) => t.mul(f),
                    });
                }
            }
            let coeff = embed(c);
            let term = match t {
                None => coeff,
                Some(t) if self.ring.is_one(c) => t,
                Some(t) => t.mul(&coeff),
            };
            acc = acc.add(&term);
        }
        acc
    }

    /// Polynomial composition `self(args)`; all `args` share a ring.
    pub fn compose(&self, args: &[MultiPoly<R>]) -> MultiPoly<R> {
        let target = &args[0];
        let ring = target.ring.clone();
        let vars = target.vars.clone();
        self.eval_in(args, |c| {
            MultiPoly::constant(ring.clone(), vars.clone(), c.clone())
        })
    }

    /// Composition by nested Horner evaluation, one variable at a time.
    /// Cheaper than [`compose`](Self::compose) when `self` has many terms and
    /// the arguments are small. Needs at least one variable.
    pub fn compose_horner(&self, args: &[MultiPoly<R>]) -> MultiPoly<R> {
        assert_eq!(args.len(), self.nvars());
        assert!(!args.is_empty(), "composition needs a variable");
        let mut terms: Vec<(&[Exponent], &R::Elem)> =
            self.terms.iter().map(|(m, c)| (m.exponents(), c)).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(b.0));
        if terms.is_empty() {
            return args[0].zero_like();
        }
        horner(&terms, 0, args)
    }

    /// Exact division: `Some(q)` with `q·divisor = self`, else `None`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.check_compatible(divisor);
        let ring = &self.ring;
        let (lm, lc) = divisor.terms.first()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        if divisor.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(lm)?, ring.div_exact(c, lc)?));
            }
            return Some(Self::from_sorted(ring.clone(), self.vars.clone(), terms));
        }
        if self.total_degree() < divisor.total_degree() {
            return None;
        }
        for i in 0..self.nvars() {
            if self.degree_in(i) < divisor.degree_in(i) {
                return None;
            }
        }
        let mut rem: BTreeMap<Monomial, R::Elem> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(lm)?;
            let qc = ring.div_exact(&c, lc)?;
            for (gm, gc) in divisor.terms.iter().skip(1) {
                let key = qm.mul(gm);
                let delta = ring.mul(&qc, gc);
                match rem.get_mut(&key) {
                    Some(e) => {
                        *e = ring.sub(e, &delta);
                        if ring.is_zero(e) {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, ring.neg(&delta));
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(Self::from_sorted(ring.clone(), self.vars.clone(), quotient))
    }

    /// Largest power `k` with `divisor^k | self` (capped at `max`) and the
    /// cofactor. The zero polynomial reports zero.
    pub fn strip_factor(&self, divisor: &Self, max: u32) -> (u32, Self) {
        let mut k = 0;
        let mut cur = self.clone();
        if cur.is_zero() || divisor.is_constant() {
            return (0, cur);
        }
        while k < max {
            match cur.div_exact(divisor) {
                Some(q) => {
                    cur = q;
                    k += 1;
                }
                None => break,
            }
        }
        (k, cur)
    }

    /// Content: gcd of coefficients over `Z` (sign of the leading
    /// coefficient), the leading coefficient over a field.
    pub fn content(&self) -> R::Elem {
        let ring = &self.ring;
        if self.is_zero() {
            return ring.zero();
        }
        if ring.is_field() {
            return self.leading_coeff();
        }
        let mut g = ring.zero();
        for (_, c) in &self.terms {
            g = ring.content_gcd(&g, c);
            if ring.is_one(&g) {
                break;
            }
        }
        let u = ring.normalizing_unit(&self.leading_coeff());
        ring.mul(&g, &u)
    }

    /// `self / content`: monic over a field, primitive with positive leading
    /// coefficient over `Z`.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| {
                (
                    m.clone(),
                    self.ring.div_exact(a, &c).expect("content divides"),
                )
            })
            .collect();
        Self::from_sorted(self.ring.clone(), self.vars.clone(), terms)
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar(&self, c: &R::Elem) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, a) in &self.terms {
            terms.push((m.clone(), self.ring.div_exact(a, c)?));
        }
        Some(Self::from_sorted(
            self.ring.clone(),
            self.vars.clone(),
            terms,
        ))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.nvars()),
            Some((m, _)) => it.fold(m.clone(), |g, (m, _)| g.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            terms.push((k.div(m)?, c.clone()));
        }
        Some(Self::from_sorted(
            self.ring.clone(),
            self.vars.clone(),
            terms,
        ))
    }

    /// Same polynomial over another coefficient ring.
    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> MultiPoly<S> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        MultiPoly::from_sorted(ring, self.vars.clone(), terms)
    }

    /// Moves the polynomial into another variable list, sending variable `i`
    /// to `mapping[i]`.
    pub fn relabel(&self, vars: Variables, mapping: &[usize]) -> Self {
        assert_eq!(mapping.len(), self.nvars());
        let n = vars.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = Monomial::one(n);
            for (i, x) in m.exponents().iter().enumerate() {
                e.exponents_mut()[mapping[i]] += *x;
            }
            (e, c.clone())
        });
        Self::from_terms(self.ring.clone(), vars, terms)
    }

    /// Coefficients with respect to variable `i`: entry `k` is the
    /// polynomial multiplying `x_i^k`, over the same variable list.
    pub fn coefficients_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut buckets: Vec<Vec<(Monomial, R::Elem)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let k = m[i] as usize;
            let mut m2 = m.clone();
            m2.exponents_mut()[i] = 0;
            buckets[k].push((m2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|t| Self::from_terms(self.ring.clone(), self.vars.clone(), t))
            .collect()
    }

    /// Same variables with `x_i` replaced by the value `c`.
    pub fn specialize(&self, i: usize, c: &R::Elem) -> Self {
        let ring = &self.ring;
        let mut powers = vec![ring.one()];
        for k in 0..self.degree_in(i) as usize {
            let next = ring.mul(&powers[k], c);
            powers.push(next);
        }
        let terms = self.terms.iter().map(|(m, a)| {
            let mut m2 = m.clone();
            let e = m2[i] as usize;
            m2.exponents_mut()[i] = 0;
            (m2, ring.mul(a, &powers[e]))
        });
        Self::from_terms(ring.clone(), self.vars.clone(), terms)
    }

    pub fn max_exponent(&self) -> Exponent {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.exponents().iter().copied())
            .max()
            .unwrap_or(0)
    }
}

impl<R: Ring> Algebra for MultiPoly<R> {
    fn zero_like(&self) -> Self {
        Self::zero(self.ring.clone(), self.vars.clone())
    }

    fn one_like(&self) -> Self {
        Self::one(self.ring.clone(), self.vars.clone())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        MultiPoly::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        MultiPoly::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        MultiPoly::mul(self, other)
    }

    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }

    fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        self.div_exact(other).ok_or(AlgebraError::NotDivisible)
    }
}

impl<'a, R: Ring> Add<&'a MultiPoly<R>> for &'a MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn add(self, rhs: &'a MultiPoly<R>) -> MultiPoly<R> {
        MultiPoly::add(self, rhs)
    }
}

impl<'a, R: Ring> Sub<&'a MultiPoly<R>> for &'a MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn sub(self, rhs: &'a MultiPoly<R>) -> MultiPoly<R> {
        MultiPoly::sub(self, rhs)
    }
}

impl<'a, R: Ring> Mul<&'a MultiPoly<R>> for &'a MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn mul(self, rhs: &'a MultiPoly<R>) -> MultiPoly<R> {
        MultiPoly::mul(self, rhs)
    }
}

impl<R: Ring> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        MultiPoly::neg(self)
    }
}

impl<R: Ring> fmt::Display for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ring = &self.ring;
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let signed = ring.characteristic() == 0;
            let negative = signed && is_negative(ring, c);
            let c_abs = if negative { ring.neg(c) } else { c.clone() };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = ring.is_one(&c_abs);
            let mut wrote = false;
            if !unit || m.is_one() {
                if ring.is_compound(&c_abs) && !m.is_one() {
                    write!(f, "(")?;
                    ring.fmt_elem(&c_abs, f)?;
                    write!(f, ")")?;
                } else {
                    ring.fmt_elem(&c_abs, f)?;
                }
                wrote = true;
            }
            for (i, e) in m.exponents().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.vars.name(i))?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// `Σ args[var]^e·(inner part)` over terms sorted lexicographically by
/// exponent vector, all sharing their exponents before `var`.
fn horner<R: Ring>(
    terms: &[(&[Exponent], &R::Elem)],
    var: usize,
    args: &[MultiPoly<R>],
) -> MultiPoly<R> {
    let a = &args[var];
    if var + 1 == args.len() {
        let mut acc: Option<(MultiPoly<R>, Exponent)> = None;
        for (e, c) in terms.iter().rev() {
            let c = MultiPoly::constant(a.ring.clone(), a.vars.clone(), (*c).clone());
            acc = Some(match acc {
                None => (c, e[var]),
                Some((p, prev)) => (p.mul(&a.pow((prev - e[var]) as u32)).add(&c), e[var]),
            });
        }
        let (p, low) = acc.expect("nonempty group");
        return p.mul(&a.pow(low as u32));
    }
    let mut groups: Vec<(Exponent, usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=terms.len() {
        if i == terms.len() || terms[i].0[var] != terms[start].0[var] {
            groups.push((terms[start].0[var], start, i));
            start = i;
        }
    }
    let mut acc: Option<(MultiPoly<R>, Exponent)> = None;
    for &(e, lo, hi) in groups.iter().rev() {
        let inner = horner(&terms[lo..hi], var + 1, args);
        acc = Some(match acc {
            None => (inner, e),
            Some((p, prev)) => (p.mul(&a.pow((prev - e) as u32)).add(&inner), e),
        });
    }
    let (p, low) = acc.expect("nonempty group");
    p.mul(&a.pow(low as u32))
}

fn is_negative<R: Ring>(ring: &R, c: &R::Elem) -> bool {
    // sign via the display of the element: integers and rationals print a
    // leading '-' when negative
    let mut s = String::new();
    let _ = fmt::write(&mut s, format_args!("{}", DisplayElem(ring, c)));
    s.starts_with('-')
}

struct DisplayElem<'a, R: Ring>(&'a R, &'a R::Elem);

impl<R: Ring> fmt::Display for DisplayElem<'_, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_elem(self.1, f)
    }
}
