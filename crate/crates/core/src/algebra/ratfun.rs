use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use super::univariate::UniPoly;
use super::{Algebra, AlgebraError, Field, Monomial, MultiPoly, Ring};

/// Fraction of two polynomials over the same ring and variable list.
///
/// Reduction is heuristic: monomial and integer content, exact division in
/// either direction, and univariate gcds of single-variable contents. A
/// stored fraction may therefore be non-minimal; equality goes through
/// cross-multiplication and is exact regardless.
#[derive(Clone)]
pub struct RationalFunction<R: Ring = Field> {
    num: MultiPoly<R>,
    den: MultiPoly<R>,
}

impl<R: Ring> RationalFunction<R> {
    pub fn new(num: MultiPoly<R>, den: MultiPoly<R>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    pub fn from_poly(p: MultiPoly<R>) -> Self {
        let den = p.one_like();
        RationalFunction { num: p, den }
    }

    /// Builds without reduction; `den` must be nonzero.
    pub fn from_parts_unreduced(num: MultiPoly<R>, den: MultiPoly<R>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFunction { num, den }
    }

    pub fn num(&self) -> &MultiPoly<R> {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly<R> {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly<R>, MultiPoly<R>) {
        (self.num, self.den)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Polynomial value when the denominator is a unit constant.
    pub fn as_polynomial(&self) -> Option<MultiPoly<R>> {
        if !self.den.is_constant() {
            return None;
        }
        self.num.div_scalar(&self.den.leading_coeff())
    }

    fn reduced(num: MultiPoly<R>, den: MultiPoly<R>) -> Self {
        let ring = num.ring().clone();
        if num.is_zero() {
            let one = den.one_like();
            return RationalFunction { num, den: one };
        }
        let (mut num, mut den) = (num, den);
        // common monomial factor
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g).unwrap();
            den = den.div_monomial(&g).unwrap();
        }
        if !den.is_constant() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = den.one_like();
            } else if let Some(q) = den.div_exact(&num) {
                den = q;
                num = num.one_like();
            } else if ring.is_field() {
                let (n2, d2) = cancel_univariate_contents(num, den);
                num = n2;
                den = d2;
            }
        }
        // integer content over Z, leading-coefficient normalization
        let cn = num.content();
        let cd = den.content();
        let shared = ring.content_gcd(&cn, &cd);
        let unit = ring.normalizing_unit(&den.leading_coeff());
        if ring.is_field() {
            let lc = den.leading_coeff();
            num = num.scale(&unit);
            den = den.scale(&unit);
            debug_assert!(ring.is_one(&ring.mul(&lc, &unit)));
        } else {
            let shared = ring.mul(&shared, &unit);
            num = num.div_scalar(&shared).unwrap();
            den = den.div_scalar(&shared).unwrap();
        }
        RationalFunction { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::reduced(self.num.add(&other.num), self.den.clone());
        }
        if !other.den.is_constant() {
            if let Some(k) = self.den.div_exact(&other.den) {
                let n = self.num.add(&other.num.mul(&k));
                return Self::reduced(n, self.den.clone());
            }
        }
        if !self.den.is_constant() {
            if let Some(k) = other.den.div_exact(&self.den) {
                let n = self.num.mul(&k).add(&other.num);
                return Self::reduced(n, other.den.clone());
            }
        }
        let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::reduced(n, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.zero_like();
        }
        // cancel across before multiplying
        let (mut n1, mut d2) = (self.num.clone(), other.den.clone());
        if !d2.is_constant() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = d2.one_like();
            }
        }
        let (mut n2, mut d1) = (other.num.clone(), self.den.clone());
        if !d1.is_constant() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = d1.one_like();
            }
        }
        Self::reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    /// Formal partial derivative `(n'd - nd')/d²`.
    pub fn derivative(&self, i: usize) -> Self {
        if self.den.is_constant() {
            return RationalFunction {
                num: self.num.derivative(i),
                den: self.den.clone(),
            };
        }
        let n = self
            .num
            .derivative(i)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(i)));
        Self::reduced(n, self.den.mul(&self.den))
    }

    /// Value at a point, or `ZeroDenominator` when the point is a pole (or an
    /// indeterminacy) of this representation.
    pub fn eval(&self, point: &[R::Elem]) -> Result<R::Elem, AlgebraError> {
        let ring = self.num.ring();
        let d = self.den.eval(point);
        if ring.is_zero(&d) {
            return Err(AlgebraError::ZeroDenominator);
        }
        ring.div_exact(&self.num.eval(point), &d)
            .ok_or(AlgebraError::NotDivisible)
    }

    /// Composition with rational bindings, one per variable.
    pub fn substitute(&self, bindings: &[RationalFunction<R>]) -> Result<Self, AlgebraError> {
        let n = substitute(&self.num, bindings)?;
        let d = substitute(&self.den, bindings)?;
        if d.is_zero() {
            return Err(AlgebraError::DenominatorVanishesIdentically);
        }
        n.div(&d)
    }
}

/// `f(bindings)`, one binding per variable of `f`.
pub fn substitute<R: Ring>(
    f: &MultiPoly<R>,
    bindings: &[RationalFunction<R>],
) -> Result<RationalFunction<R>, AlgebraError> {
    if bindings.len() != f.nvars() {
        return Err(AlgebraError::VariableMismatch);
    }
    let Some(first) = bindings.first() else {
        return Err(AlgebraError::VariableMismatch);
    };
    let (ring, vars) = (first.num.ring().clone(), first.num.vars().clone());
    if bindings
        .iter()
        .any(|b| b.num.vars() != &vars || b.num.ring() != &ring)
    {
        return Err(AlgebraError::VariableMismatch);
    }
    if f.ring() != &ring {
        return Err(AlgebraError::VariableMismatch);
    }
    // shared denominators are common in practice (projective charts), so
    // substitute over a single common denominator when possible
    let same_den = bindings.windows(2).all(|w| w[0].den == w[1].den);
    if same_den && f.is_homogeneous() && !f.is_zero() {
        let nums: Vec<MultiPoly<R>> = bindings.iter().map(|b| b.num.clone()).collect();
        let n = f.compose(&nums);
        let d = first.den.pow(f.total_degree());
        return Ok(RationalFunction::reduced(n, d));
    }
    Ok(f.eval_in(bindings, |c| {
        RationalFunction::from_poly(MultiPoly::constant(ring.clone(), vars.clone(), c.clone()))
    }))
}

/// Splits `f` into univariate coefficient polynomials in variable `i`, keyed
/// by the monomial in the remaining variables.
fn univariate_slices<R: Ring>(f: &MultiPoly<R>, i: usize) -> Vec<UniPoly<R>> {
    let ring = f.ring().clone();
    let mut groups: HashMap<Monomial, Vec<R::Elem>> = HashMap::new();
    for (m, c) in f.terms() {
        let mut rest = m.clone();
        let e = rest[i] as usize;
        rest.exponents_mut()[i] = 0;
        let slot = groups.entry(rest).or_default();
        if slot.len() <= e {
            slot.resize(e + 1, ring.zero());
        }
        slot[e] = c.clone();
    }
    groups
        .into_values()
        .map(|cs| UniPoly::new(ring.clone(), cs))
        .collect()
}

/// Content of `f` as a polynomial in `x_i` over the other variables'
/// monomials: the gcd of all univariate slices.
fn univariate_content<R: Ring>(f: &MultiPoly<R>, i: usize) -> UniPoly<R> {
    let slices = univariate_slices(f, i);
    let mut it = slices.into_iter();
    let first = it.next().expect("nonzero polynomial");
    let mut g = first.monic();
    for s in it {
        if g.degree() == Some(0) {
            break;
        }
        g = g.gcd(&s);
    }
    g
}

fn cancel_univariate_contents<R: Ring>(
    mut num: MultiPoly<R>,
    mut den: MultiPoly<R>,
) -> (MultiPoly<R>, MultiPoly<R>) {
    for i in 0..num.nvars() {
        if den.degree_in(i) == 0 || num.degree_in(i) == 0 {
            continue;
        }
        let cd = univariate_content(&den, i);
        if cd.degree().unwrap_or(0) == 0 {
            continue;
        }
        let cn = univariate_content(&num, i);
        let h = cd.gcd(&cn);
        if h.degree().unwrap_or(0) == 0 {
            continue;
        }
        let hm = h.to_multi(&num, i);
        num = num.div_exact(&hm).expect("content divides");
        den = den.div_exact(&hm).expect("content divides");
    }
    (num, den)
}

impl RationalFunction<Field> {
    /// Randomized coprimality certificate: restricts numerator and
    /// denominator to random lines and checks the univariate gcd. A constant
    /// gcd on any line proves the fraction has no common factor of positive
    /// degree in the line's direction; `true` means some line certified it.
    pub fn coprime_on_random_lines<G: rand::RngCore>(&self, rng: &mut G, trials: usize) -> bool {
        let field = self.num.ring().clone();
        if self.den.is_constant() || self.num.is_constant() {
            return true;
        }
        let n = self.num.nvars();
        for _ in 0..trials {
            let args: Vec<UniPoly<Field>> = (0..n)
                .map(|_| {
                    UniPoly::linear(
                        field.clone(),
                        field.random_integer(rng, 50),
                        field.random_integer(rng, 50),
                    )
                })
                .collect();
            let embed = |c: &super::Scalar| UniPoly::constant(field.clone(), c.clone());
            let a = self.num.eval_in(&args, embed);
            let b = self.den.eval_in(&args, embed);
            // the restriction must keep the full degrees to be informative
            if a.degree() != Some(self.num.total_degree() as usize)
                || b.degree() != Some(self.den.total_degree() as usize)
            {
                continue;
            }
            if a.gcd(&b).degree() == Some(0) {
                return true;
            }
        }
        false
    }
}

impl<R: Ring> PartialEq for RationalFunction<R> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl<R: Ring> Algebra for RationalFunction<R> {
    fn zero_like(&self) -> Self {
        RationalFunction {
            num: self.num.zero_like(),
            den: self.den.one_like(),
        }
    }

    fn one_like(&self) -> Self {
        RationalFunction {
            num: self.num.one_like(),
            den: self.den.one_like(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        RationalFunction::add(self, other)
    }

    fn sub(&self, other: &Self) -> Self {
        RationalFunction::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        RationalFunction::mul(self, other)
    }

    fn neg(&self) -> Self {
        RationalFunction::neg(self)
    }

    fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.div(other)
    }
}

impl<R: Ring> fmt::Display for RationalFunction<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl<R: Ring> fmt::Debug for RationalFunction<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly_in, Variables};
    use alloc::format;

    fn rf(num: &str, den: &str) -> RationalFunction {
        let vars = Variables::new(["x", "y", "u", "v"]);
        let f = Field::Rationals;
        RationalFunction::new(
            parse_poly_in(&f, &vars, num).unwrap(),
            parse_poly_in(&f, &vars, den).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn difference_of_squares_cancels() {
        assert_eq!(format!("{}", rf("x^2-y^2", "x-y")), "x + y");
    }

    #[test]
    fn scalar_content() {
        assert_eq!(format!("{}", rf("2*x", "4")), "1/2*x");
    }

    #[test]
    fn monomial_cancellation() {
        assert_eq!(format!("{}", rf("u^3*v", "u^2")), "u*v");
    }

    #[test]
    fn univariate_factor_cancels() {
        // (x-1)(x+y) / ((x-1)(x+2))
        let r = rf("(x-1)*(x+y)", "(x-1)*(x+2)");
        assert_eq!(format!("{r}"), "(x + y)/(x + 2)");
    }

    #[test]
    fn zero_denominator_rejected() {
        let vars = Variables::new(["x"]);
        let f = Field::Rationals;
        let x = MultiPoly::var(f.clone(), vars.clone(), 0);
        assert!(matches!(
            RationalFunction::new(x, MultiPoly::zero(f, vars)),
            Err(AlgebraError::ZeroDenominator)
        ));
    }

    #[test]
    fn substitution_of_fraction() {
        let f = Field::Rationals;
        let vars = Variables::new(["u", "v"]);
        let target = Variables::new(["x"]);
        let x2 = parse_poly_in(&f, &target, "x^2").unwrap();
        let u = MultiPoly::var(f.clone(), vars.clone(), 0);
        let v = MultiPoly::var(f.clone(), vars.clone(), 1);
        let r = substitute(&x2, &[RationalFunction::new(u, v).unwrap()]).unwrap();
        assert_eq!(format!("{r}"), "(u^2)/(v^2)");
    }

    #[test]
    fn cancelling_substitution() {
        let f = Field::Rationals;
        let vars = Variables::new(["s"]);
        let target = Variables::new(["x", "y"]);
        let form = parse_poly_in(&f, &target, "x^3+y^3").unwrap();
        let s = RationalFunction::from_poly(MultiPoly::var(f.clone(), vars.clone(), 0));
        let r = substitute(&form, &[s.clone(), s.neg()]).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn vanishing_denominator() {
        let f = Field::Rationals;
        let vars = Variables::new(["s"]);
        let target = Variables::new(["x", "y"]);
        let one = parse_poly_in(&f, &target, "1").unwrap();
        let den = parse_poly_in(&f, &target, "x-y").unwrap();
        let r = RationalFunction::new(one, den).unwrap();
        let s = RationalFunction::from_poly(MultiPoly::var(f.clone(), vars.clone(), 0));
        assert_eq!(
            r.substitute(&[s.clone(), s]),
            Err(AlgebraError::DenominatorVanishesIdentically)
        );
    }

    #[test]
    fn coprimality_certificate() {
        let mut rng = crate::rng::seeded(7);
        assert!(rf("x+y", "x-y").coprime_on_random_lines(&mut rng, 8));
        let shared = RationalFunction::from_parts_unreduced(
            rf("(x+y*u)*(x+1)", "1").num().clone(),
            rf("(x+y*u)*(y+1)", "1").num().clone(),
        );
        assert!(!shared.coprime_on_random_lines(&mut rng, 8));
    }
}
