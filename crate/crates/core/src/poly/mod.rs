//! Sparse multivariate polynomials.

mod line;
mod monomial;
mod order;
mod system;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{Complex, Rational, Scalar};

pub use line::{clebsch_cubic, clebsch_lines_system, substitute_line, LineCoefficients, LINE_VARS};
pub use monomial::Monomial;
pub use order::{MonomialOrder, OrderKind};
pub use system::PolySystem;
pub use text::{default_names, format_polynomial, parse_polynomial, parse_system, ParseError, SystemFile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("the zero polynomial has no support")]
    ZeroPolynomial,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("empty polynomial system")]
    EmptySystem,
    #[error("unknown monomial order `{0}`")]
    UnknownOrder(String),
    #[error("variable precedence is not a permutation")]
    BadPrecedence,
    #[error("line substitution produced degree {0} in t, expected at most 3")]
    LineDegree(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A polynomial `Σ c_α x^α` with finitely many nonzero coefficients.
///
/// Zero coefficients are never stored and every monomial has exactly
/// `nvars` exponents.
#[derive(Clone, PartialEq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), C::one())
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(PolyError::DimensionMismatch {
                    expected: nvars,
                    got: m.nvars(),
                });
            }
            if !c.is_finite() {
                return Err(PolyError::NonFinite);
            }
            p.add_term(m, c);
        }
        Ok(p)
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

    /// Total degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[var]).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.checked_mul(mb)?, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> Result<Self, PolyError> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(k.checked_mul(m)?, v.clone());
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self, PolyError> {
        let mut result = Polynomial::constant(self.nvars, C::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Evaluates at `point`, using nested Horner schemes in each variable.
    pub fn evaluate(&self, point: &[C]) -> Result<C, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let terms: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        Ok(horner(&terms, 0, point))
    }

    /// Formal partial derivative with respect to variable `var` (0-based).
    pub fn differentiate(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VariableIndex {
                index: var,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c.clone() * C::from_i64(e as i64));
        }
        Ok(out)
    }

    /// The exponent set `{α : c_α ≠ 0}`.
    pub fn support(&self) -> Result<BTreeSet<Monomial>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(self.terms.keys().cloned().collect())
    }

    /// Substitutes `x_i ↦ images[i]`; the result lives in the ring of the images.
    pub fn compose(&self, images: &[Polynomial<C>], target_nvars: usize) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|p| p.nvars != target_nvars) {
            return Err(PolyError::DimensionMismatch {
                expected: target_nvars,
                got: bad.nvars,
            });
        }
        let mut powers: Vec<Vec<Polynomial<C>>> = Vec::with_capacity(self.nvars);
        for (i, img) in images.iter().enumerate() {
            let maxe = self.degree_in(i);
            let mut pw = vec![Polynomial::constant(target_nvars, C::one())];
            for k in 1..=maxe as usize {
                let next = pw[k - 1].try_mul(img)?;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.try_mul(&powers[i][e as usize])?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Re-embeds into a ring with more variables; variable `i` maps to `positions[i]`.
    pub fn embed(&self, target_nvars: usize, positions: &[usize]) -> Self {
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; target_nvars];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[positions[i]] += x;
            }
            out.add_term(Monomial::new(e), c.clone());
        }
        out
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_complex(&self) -> Polynomial<Complex> {
        self.map_coefficients(|c| c.to_complex())
    }

    /// Homogeneous component of the given degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, names }
    }
}

impl Polynomial<Rational> {
    pub fn parse(s: &str, names: &[String]) -> Result<Self, ParseError> {
        parse_polynomial(s, names)
    }
}

fn horner<C: Scalar>(terms: &[(&Monomial, &C)], var: usize, point: &[C]) -> C {
    if terms.is_empty() {
        return C::zero();
    }
    if var == point.len() {
        return terms.iter().fold(C::zero(), |a, (_, c)| a + (*c).clone());
    }
    // Within `terms` all earlier exponents agree, so the BTreeMap order
    // groups them by the exponent of `var`, ascending.
    let x = &point[var];
    let mut acc = C::zero();
    let mut prev: Option<u32> = None;
    let mut end = terms.len();
    while end > 0 {
        let e = terms[end - 1].0.exponents()[var];
        let mut start = end - 1;
        while start > 0 && terms[start - 1].0.exponents()[var] == e {
            start -= 1;
        }
        if let Some(p) = prev {
            acc = acc * pow_scalar(x, p - e);
        }
        acc = acc + horner(&terms[start..end], var + 1, point);
        prev = Some(e);
        end = start;
    }
    acc * pow_scalar(x, prev.unwrap_or(0))
}

pub(crate) fn pow_scalar<C: Scalar>(x: &C, mut e: u32) -> C {
    let mut result = C::one();
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    result
}

pub struct PolyDisplay<'a, C> {
    poly: &'a Polynomial<C>,
    names: &'a [String],
}

impl<C: Scalar> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_generic(self.poly, self.names))
    }
}

impl<C: Scalar> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        write!(f, "{}", text::format_generic(self, &names))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<C: Scalar> $tr<&Polynomial<C>> for &Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: &Polynomial<C>) -> Polynomial<C> {
                self.$try(rhs).expect(concat!("polynomial ", stringify!($m)))
            }
        }
        impl<C: Scalar> $tr<Polynomial<C>> for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: Polynomial<C>) -> Polynomial<C> {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.scale(&-C::one())
    }
}

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> Polynomial<Rational> {
        parse_polynomial(s, &names(&["x", "y"])).unwrap()
    }

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn curves_vanish_at_rational_points() {
        let f = p("-7*x - 9*y - 10*x^2 + 17*x*y + 10*y^2 + 16*x^2*y - 17*x*y^2");
        let g = p("2*x - 5*y + 5*x^2 + 5*x*y + 5*y^2 - 6*x^2*y - 6*x*y^2");
        for pt in [[r(0), r(0)], [r(1), r(1)]] {
            assert_eq!(f.evaluate(&pt).unwrap(), r(0));
            assert_eq!(g.evaluate(&pt).unwrap(), r(0));
        }
        assert_eq!(f.evaluate(&[r(2), r(-1)]).unwrap(), r(-14 + 9 - 40 - 34 + 10 - 64 - 34));
    }

    #[test]
    fn constant_and_mismatch() {
        let five = Polynomial::constant(2, r(5));
        assert_eq!(five.evaluate(&[r(3), r(-8)]).unwrap(), r(5));
        assert!(matches!(
            five.evaluate(&[r(1)]),
            Err(PolyError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        let f = p("3*x^2*y - 7/5*y + 1");
        assert!((&f + &f.scale(&r(-1))).is_zero());
        assert_eq!(p("x + 1").pow(3).unwrap(), p("x^3 + 3*x^2 + 3*x + 1"));
        assert_eq!(Polynomial::<Rational>::zero(2).degree(), -1);
        assert_eq!(f.degree(), 3);
    }

    #[test]
    fn dimension_mismatch_in_arithmetic() {
        let a = Polynomial::<Rational>::var(2, 0);
        let b = Polynomial::<Rational>::var(3, 0);
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x^2 + y^2").differentiate(0).unwrap(), p("2*x"));
        assert!(p("17").differentiate(0).unwrap().is_zero());
        let nm = names(&["x", "y", "L1"]);
        let arm = parse_polynomial("x^2 + y^2 - L1^2", &nm).unwrap();
        assert_eq!(arm.differentiate(0).unwrap(), parse_polynomial("2*x", &nm).unwrap());
        assert!(matches!(
            p("x").differentiate(2),
            Err(PolyError::VariableIndex { index: 2, nvars: 2 })
        ));
    }

    #[test]
    fn supports() {
        let f = p("-7*x - 9*y - 10*x^2 + 17*x*y + 10*y^2 + 16*x^2*y - 17*x*y^2");
        let expect: BTreeSet<Monomial> = [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2], [2, 1], [1, 2]]
            .iter()
            .map(|e| Monomial::new(e.to_vec()))
            .collect();
        assert_eq!(f.support().unwrap(), expect);
        let u = parse_polynomial("x^12 - 1", &names(&["x"])).unwrap();
        let su: Vec<_> = u.support().unwrap().into_iter().map(|m| m.exponents()[0]).collect();
        assert_eq!(su, vec![0, 12]);
        let g = p("3 + 2*x^2 - y^2 + 5*x^2*y^2");
        let sg: BTreeSet<Vec<u32>> = g.support().unwrap().iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(sg, [[0, 0], [2, 0], [0, 2], [2, 2]].iter().map(|e| e.to_vec()).collect());
        assert_eq!(Polynomial::<Rational>::zero(2).support(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn non_finite_rejected() {
        let bad = Polynomial::from_terms(1, [(Monomial::one(1), Complex::new(f64::NAN, 0.0))]);
        assert_eq!(bad, Err(PolyError::NonFinite));
    }

    #[test]
    fn composition() {
        // (x + y)^2 with x -> x*y, y -> 1
        let f = p("x^2 + 2*x*y + y^2");
        let g = f.compose(&[p("x*y"), p("1")], 2).unwrap();
        assert_eq!(g, p("x^2*y^2 + 2*x*y + 1"));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial<Rational>> {
        proptest::collection::vec(((0u32..4, 0u32..4), -6i64..7, 1i64..4), 0..6).prop_map(|ts| {
            Polynomial::from_terms(
                2,
                ts.into_iter()
                    .map(|((a, b), n, d)| (Monomial::new(vec![a, b]), rat(n, d))),
            )
            .unwrap()
        })
    }

    fn point() -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec((-5i64..6, 1i64..4).prop_map(|(n, d)| rat(n, d)), 2)
    }

    fn cpoint() -> impl Strategy<Value = Vec<Complex>> {
        proptest::collection::vec((-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| Complex::new(a, b)), 2)
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(f in small_poly(), g in small_poly(), pt in point()) {
            let fe = f.evaluate(&pt).unwrap();
            let ge = g.evaluate(&pt).unwrap();
            prop_assert_eq!((&f * &g).evaluate(&pt).unwrap(), fe.clone() * ge.clone());
            prop_assert_eq!((&f + &g).evaluate(&pt).unwrap(), fe + ge);
        }

        #[test]
        fn float_evaluation_is_a_ring_homomorphism(f in small_poly(), g in small_poly(), pt in cpoint()) {
            let (fc, gc) = (f.to_complex(), g.to_complex());
            let fe = fc.evaluate(&pt).unwrap();
            let ge = gc.evaluate(&pt).unwrap();
            let prod = (&fc * &gc).evaluate(&pt).unwrap();
            let sum = (&fc + &gc).evaluate(&pt).unwrap();
            let scale = 1.0 + fe.norm() * ge.norm();
            prop_assert!((prod - fe * ge).norm() <= 1e-12 * scale * 10.0);
            prop_assert!((sum - (fe + ge)).norm() <= 1e-12 * (1.0 + fe.norm() + ge.norm()) * 10.0);
        }

        #[test]
        fn derivative_rules(f in small_poly(), g in small_poly(), i in 0usize..2) {
            let d = |h: &Polynomial<Rational>| h.differentiate(i).unwrap();
            prop_assert_eq!(d(&(&f + &g)), &d(&f) + &d(&g));
            prop_assert_eq!(d(&(&f * &g)), &(&d(&f) * &g) + &(&f * &d(&g)));
        }

        #[test]
        fn derivative_matches_central_difference(f in small_poly(), pt in cpoint(), i in 0usize..2) {
            let fc = f.to_complex();
            let h = 1e-6;
            let mut plus = pt.clone();
            let mut minus = pt.clone();
            plus[i] += h;
            minus[i] -= h;
            let fd = (fc.evaluate(&plus).unwrap() - fc.evaluate(&minus).unwrap()) / (2.0 * h);
            let exact = fc.differentiate(i).unwrap().evaluate(&pt).unwrap();
            // relative error with a floor for derivatives near zero
            prop_assert!((fd - exact).norm() <= 1e-5 * exact.norm().max(1.0));
        }

        #[test]
        fn product_support_in_minkowski_sum(f in small_poly(), g in small_poly()) {
            let prod = &f * &g;
            if !prod.is_zero() {
                let sf = f.support().unwrap();
                let sg = g.support().unwrap();
                for m in prod.support().unwrap() {
                    prop_assert!(sf.iter().any(|a| sg.iter().any(|b| a.mul(b) == m)));
                }
            }
        }
    }
}
