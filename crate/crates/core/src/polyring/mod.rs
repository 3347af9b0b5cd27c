//! Exact multivariate polynomials over the rationals in the fixed
//! indeterminates `s`, `t`, `λ` and `u`.
//!
//! `u` stands for `(1+λ)^s`. The ring does not know about that relation;
//! it only matters when a polynomial is specialized, which is done with
//! [`Polynomial::substitute`] or [`Polynomial::eval`].

mod format;

pub use format::{parse, JsonPolynomial, JsonTerm};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// One of the four indeterminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    S,
    T,
    Lambda,
    U,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::S, Var::T, Var::Lambda, Var::U];

    /// Position in the exponent vector and in the JSON `exp` array.
    pub fn index(self) -> usize {
        match self {
            Var::S => 0,
            Var::T => 1,
            Var::Lambda => 2,
            Var::U => 3,
        }
    }

    /// Name used in canonical text.
    pub fn symbol(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::T => "t",
            Var::Lambda => "λ",
            Var::U => "u",
        }
    }

    /// Name used in the JSON `vars` list and on the command line.
    pub fn ascii_name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::T => "t",
            Var::Lambda => "lambda",
            Var::U => "u",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "s" => Some(Var::S),
            "t" => Some(Var::T),
            "λ" | "lambda" | "l" => Some(Var::Lambda),
            "u" => Some(Var::U),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Display precedence of the variables inside the graded order.
const PRECEDENCE: [Var; 4] = [Var::T, Var::S, Var::Lambda, Var::U];

/// A power product `s^a t^b λ^c u^d`, stored as a dense exponent vector
/// indexed by [`Var::index`]. A dense vector has exactly one representation
/// per monomial, so equality of monomials is equality of vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial([u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(exponents: [u32; 4]) -> Self {
        Monomial(exponents)
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut m = [0; 4];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn exponents(&self) -> [u32; 4] {
        self.0
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn without(&self, v: Var) -> Self {
        let mut m = self.0;
        m[v.index()] = 0;
        Monomial(m)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(m)
    }
}

/// Graded lexicographic order with `t > s > λ > u`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            PRECEDENCE
                .iter()
                .map(|v| self.exp(*v).cmp(&other.exp(*v)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite sum of rational multiples of monomials. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        Self::term(Rational::one(), Monomial::var_pow(v, e))
    }

    /// `v + shift`.
    pub fn affine(v: Var, shift: i64) -> Self {
        Self::var(v) + Self::constant(int(shift))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in canonical (descending graded lex) order.
    pub fn canonical_terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn max_exp(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Indeterminates that occur with a positive exponent.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m.exp(*v) > 0))
            .collect()
    }

    /// Exact evaluation. Every indeterminate that occurs in `self` must be
    /// assigned.
    pub fn eval(&self, assignment: &Assignment) -> Result<Rational> {
        for v in self.vars() {
            if assignment.get(v).is_none() {
                return Err(Error::MissingAssignment(v.symbol()));
            }
        }
        let mut powers: [Vec<Rational>; 4] = Default::default();
        for v in Var::ALL {
            if let Some(x) = assignment.get(v) {
                let top = self.max_exp(v) as usize;
                let mut pw = Vec::with_capacity(top + 1);
                pw.push(Rational::one());
                for i in 0..top {
                    let next = &pw[i] * x;
                    pw.push(next);
                }
                powers[v.index()] = pw;
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v) as usize;
                if e > 0 {
                    t *= &powers[v.index()][e];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replaces `var` by `value`, leaving the other indeterminates alone.
    pub fn substitute(&self, var: Var, value: &Polynomial) -> Polynomial {
        let top = self.max_exp(var);
        if top == 0 {
            return self.clone();
        }
        let mut powers = vec![Polynomial::one()];
        for i in 0..top as usize {
            let next = &powers[i] * value;
            powers.push(next);
        }
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let rest = Polynomial::term(c.clone(), m.without(var));
            out += &(&rest * &powers[m.exp(var) as usize]);
        }
        out
    }

    pub fn substitute_value(&self, var: Var, value: &Rational) -> Polynomial {
        self.substitute(var, &Polynomial::constant(value.clone()))
    }

    /// Univariate view: coefficients of successive powers of `v`, each a
    /// polynomial free of `v`. Index `k` holds the coefficient of `v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(); self.max_exp(v) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exp(v) as usize].add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn canonical_text(&self) -> String {
        format::to_text(self)
    }

    pub fn to_json(&self) -> JsonPolynomial {
        format::to_json(self)
    }

    pub fn from_json(j: &JsonPolynomial) -> Result<Polynomial> {
        format::from_json(j)
    }

    pub fn to_latex(&self) -> String {
        format::to_latex(self)
    }
}

/// The binomial polynomial `C(var + shift, k)`.
pub fn binom_affine(var: Var, shift: i64, k: u32) -> Polynomial {
    let mut p = Polynomial::one();
    let mut fact = BigInt::one();
    for i in 0..k as i64 {
        p = &p * &Polynomial::affine(var, shift - i);
        fact *= BigInt::from(i + 1);
    }
    p.scale(&Rational::new(BigInt::one(), fact))
}

/// A partial map from indeterminates to rational values.
#[derive(Clone, Debug, Default)]
pub struct Assignment([Option<Rational>; 4]);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, x: Rational) -> Self {
        self.set(v, x);
        self
    }

    pub fn set(&mut self, v: Var, x: Rational) {
        self.0[v.index()] = Some(x);
    }

    pub fn get(&self, v: Var) -> Option<&Rational> {
        self.0[v.index()].as_ref()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Sign helper used by the formatters.
pub(crate) fn is_negative(c: &Rational) -> bool {
    c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Polynomial {
        Polynomial::var(Var::T)
    }
    fn s() -> Polynomial {
        Polynomial::var(Var::S)
    }
    fn lam() -> Polynomial {
        Polynomial::var(Var::Lambda)
    }

    #[test]
    fn additive_inverse() {
        assert!((&t() - &t()).is_zero());
        assert!((t() + (-t())).is_zero());
    }

    #[test]
    fn binomial_square() {
        let p = Polynomial::affine(Var::Lambda, 1);
        let sq = &p * &p;
        let expected = lam().pow(2) + lam().scale(&int(2)) + Polynomial::one();
        assert_eq!(sq, expected);
    }

    #[test]
    fn multiplicative_identity() {
        let p = Polynomial::term(rat(3, 8), Monomial::new([2, 2, 0, 0]));
        assert_eq!(&p * &Polynomial::one(), p);
    }

    #[test]
    fn binomials() {
        let expected = (t().pow(2) - t()).scale(&rat(1, 2));
        assert_eq!(binom_affine(Var::T, 0, 2), expected);
        assert_eq!(binom_affine(Var::S, -1, 1), Polynomial::affine(Var::S, -1));
        assert_eq!(binom_affine(Var::S, 0, 0), Polynomial::one());
    }

    #[test]
    fn binomial_matches_integer_binomial() {
        for n in 0..=12i64 {
            for k in 0..=n {
                let got = binom_affine(Var::T, 0, k as u32)
                    .eval(&Assignment::new().with(Var::T, int(n)))
                    .unwrap();
                let mut c = 1i64;
                for i in 0..k {
                    c = c * (n - i) / (i + 1);
                }
                assert_eq!(got, int(c), "C({n},{k})");
            }
        }
    }

    #[test]
    fn evaluation() {
        let half_lambda = lam().scale(&rat(1, 2));
        let v = half_lambda
            .eval(&Assignment::new().with(Var::Lambda, int(1)))
            .unwrap();
        assert_eq!(v, rat(1, 2));

        let p = Polynomial::term(rat(3, 8), Monomial::new([2, 2, 0, 0]));
        let v = p
            .eval(&Assignment::new().with(Var::S, int(1)).with(Var::T, int(3)))
            .unwrap();
        assert_eq!(v, rat(27, 8));

        let q = Polynomial::affine(Var::U, -1);
        let v = q.eval(&Assignment::new().with(Var::U, int(4))).unwrap();
        assert_eq!(v, int(3));
    }

    #[test]
    fn missing_assignment_is_an_error() {
        let p = &s() * &t();
        let err = p.eval(&Assignment::new().with(Var::S, int(2))).unwrap_err();
        assert!(matches!(err, Error::MissingAssignment("t")));
        // unused variables need no value
        assert_eq!(
            Polynomial::constant(int(5)).eval(&Assignment::new()).unwrap(),
            int(5)
        );
    }

    #[test]
    fn substitution() {
        let ut = &Polynomial::var(Var::U) * &t();
        let got = ut.substitute(Var::U, &Polynomial::affine(Var::Lambda, 1));
        assert_eq!(got, &Polynomial::affine(Var::Lambda, 1) * &t());

        let p = Polynomial::affine(Var::S, -1);
        assert!(p.substitute_value(Var::S, &int(1)).is_zero());

        let l2ish = Polynomial::term(rat(3, 8), Monomial::new([2, 2, 0, 0]))
            - Polynomial::term(rat(3, 8), Monomial::new([2, 1, 0, 0]))
            - Polynomial::constant(rat(1, 4));
        let got = l2ish.substitute_value(Var::S, &int(1));
        // (3t^2 - 3t - 2) / 8
        let expected = (t().pow(2).scale(&int(3)) - t().scale(&int(3)) - Polynomial::constant(int(2)))
            .scale(&rat(1, 8));
        assert_eq!(got, expected);
    }

    #[test]
    fn monomial_order_is_graded_with_t_first() {
        let t2 = Monomial::var_pow(Var::T, 2);
        let ts = Monomial::new([1, 1, 0, 0]);
        let s2 = Monomial::var_pow(Var::S, 2);
        let u3 = Monomial::var_pow(Var::U, 3);
        assert!(t2 > ts && ts > s2);
        assert!(u3 > t2, "total degree dominates");
        assert!(Monomial::var(Var::Lambda) > Monomial::var(Var::U));
        assert!(Monomial::var(Var::S) > Monomial::var(Var::Lambda));
    }
}
