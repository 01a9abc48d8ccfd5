//! Sparse multivariate polynomials over the rationals and quotients of them.
//!
//! Terms are kept in graded lexicographic order, so two polynomials are equal
//! exactly when their term maps are equal. Rational functions are normalized
//! by cancelling the common monomial factor and making the leading coefficient
//! of the denominator one; equality is decided by cross-multiplication.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn gcd(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    fn div(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The indeterminate `a_{i+1}` (zero-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut p = Poly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn monomial_gcd(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |g, m| g.gcd(m)))
    }

    fn div_monomial(&self, m: &Monomial) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.div(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(self.nvars, Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*a{}", i + 1)?,
                    _ => write!(f, "*a{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Quotient of two polynomials over a fixed set of indeterminates.
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.check(&den);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars;
        RatFunc {
            num: p,
            den: Poly::constant(n, Rational::one()),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let nvars = num.nvars;
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::constant(nvars, Rational::one()),
            };
        }
        let g = num
            .monomial_gcd()
            .zip(den.monomial_gcd())
            .map(|(a, b)| a.gcd(&b))
            .unwrap_or_else(|| Monomial::one(nvars));
        let (num, den) = if g.degree() > 0 {
            (num.div_monomial(&g), den.div_monomial(&g))
        } else {
            (num, den)
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn recip(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }
}

/// Exact identity test: `f - g` vanishes as a rational function.
pub fn ratfunc_equal(f: &RatFunc, g: &RatFunc) -> bool {
    f.num.check(&g.num);
    if f.num.is_zero() || g.num.is_zero() {
        return f.num.is_zero() && g.num.is_zero();
    }
    &f.num * &g.den == &g.num * &f.den
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        ratfunc_equal(self, other)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn a(i: usize) -> RatFunc {
        RatFunc::var(2, i)
    }

    #[test]
    fn difference_of_squares() {
        let lhs = (&(&a(0) * &a(0)) - &(&a(1) * &a(1))).div(&(&a(0) - &a(1))).unwrap();
        let rhs = &a(0) + &a(1);
        assert!(ratfunc_equal(&lhs, &rhs));
        assert!(!ratfunc_equal(&a(0), &a(1)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RatFunc::new(Poly::var(2, 0), Poly::zero(2)),
            Err(Error::DivisionByZero)
        ));
        assert!(RatFunc::constant(2, rat(0, 1)).recip().is_err());
    }

    #[test]
    fn monomial_order_is_graded() {
        let x = Monomial::var(2, 0);
        let y2 = Monomial(vec![0, 2]);
        assert!(x < y2);
        assert!(Monomial(vec![0, 1]) < Monomial(vec![1, 0]));
    }

    #[test]
    fn normal_form_cancels_monomials() {
        // (a1^2 a2) / (2 a1 a2^2) -> (a1/2) / a2
        let num = &(&Poly::var(2, 0) * &Poly::var(2, 0)) * &Poly::var(2, 1);
        let den = (&(&Poly::var(2, 0) * &Poly::var(2, 1)) * &Poly::var(2, 1)).scale(&rat(2, 1));
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.denominator(), &Poly::var(2, 1));
        assert_eq!(f.numerator(), &Poly::var(2, 0).scale(&rat(1, 2)));
    }

    fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
        let poly = proptest::collection::vec(((0u32..3, 0u32..3), -3i64..=3), 1..4).prop_map(|ts| {
            let mut p = Poly::zero(2);
            for ((e0, e1), c) in ts {
                p.add_term(Monomial(vec![e0, e1]), rat(c, 1));
            }
            p
        });
        (poly.clone(), poly)
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn equality_is_an_equivalence(f in small_ratfunc(), g in small_ratfunc(), h in small_ratfunc()) {
            prop_assert!(ratfunc_equal(&f, &f));
            prop_assert_eq!(ratfunc_equal(&f, &g), ratfunc_equal(&g, &f));
            if ratfunc_equal(&f, &g) && ratfunc_equal(&g, &h) {
                prop_assert!(ratfunc_equal(&f, &h));
            }
            // Rescaled numerator and denominator describe the same function.
            let g2 = RatFunc::new(f.numerator().scale(&rat(3, 7)), f.denominator().scale(&rat(3, 7))).unwrap();
            prop_assert!(ratfunc_equal(&f, &g2));
        }

        #[test]
        fn arithmetic_agrees_with_evaluation(f in small_ratfunc(), g in small_ratfunc(), x in -5i64..5, y in -5i64..5) {
            let pt = [rat(2 * x + 1, 3), rat(2 * y + 1, 5)];
            if let (Ok(fv), Ok(gv)) = (f.eval(&pt), g.eval(&pt)) {
                if let Ok(s) = (&f + &g).eval(&pt) { prop_assert_eq!(s, &fv + &gv); }
                if let Ok(p) = (&f * &g).eval(&pt) { prop_assert_eq!(p, &fv * &gv); }
            }
        }
    }
}
