//! Canonical text, JSON and LaTeX renderings, plus a parser for the text form.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{is_negative, Monomial, Polynomial, Rational, Var, PRECEDENCE};
use crate::error::{Error, Result};

/// Wire form: exponents are listed in `vars` order, terms in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPolynomial {
    pub vars: Vec<String>,
    pub terms: Vec<JsonTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exp: [u32; 4],
    pub num: String,
    pub den: String,
}

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for v in PRECEDENCE {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(v.symbol());
        if e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

pub(super) fn to_text(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.canonical_terms().enumerate() {
        let neg = is_negative(c);
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        if m.is_one() {
            write!(out, "{a}").unwrap();
        } else {
            if !a.is_one() {
                write!(out, "{a}*").unwrap();
            }
            write_monomial(&mut out, m);
        }
    }
    out
}

pub(super) fn to_json(p: &Polynomial) -> JsonPolynomial {
    JsonPolynomial {
        vars: Var::ALL.iter().map(|v| v.ascii_name().to_string()).collect(),
        terms: p
            .canonical_terms()
            .map(|(m, c)| JsonTerm {
                exp: m.exponents(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect(),
    }
}

pub(super) fn from_json(j: &JsonPolynomial) -> Result<Polynomial> {
    let expected: Vec<&str> = Var::ALL.iter().map(|v| v.ascii_name()).collect();
    if j.vars.iter().map(String::as_str).ne(expected.iter().copied()) {
        return Err(Error::Parse(format!("unexpected vars {:?}", j.vars)));
    }
    let mut p = Polynomial::zero();
    for term in &j.terms {
        let num: BigInt = term
            .num
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator {:?}", term.num)))?;
        let den: BigInt = term
            .den
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator {:?}", term.den)))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        p.add_term(Monomial::new(term.exp), Rational::new(num, den));
    }
    Ok(p)
}

fn latex_rational(out: &mut String, a: &Rational) {
    if a.is_integer() {
        write!(out, "{}", a.numer()).unwrap();
    } else {
        write!(out, "\\frac{{{}}}{{{}}}", a.numer(), a.denom()).unwrap();
    }
}

fn latex_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for v in PRECEDENCE {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        if !first {
            out.push_str(" \\, ");
        }
        first = false;
        out.push_str(match v {
            Var::Lambda => "\\lambda",
            other => other.symbol(),
        });
        if e > 1 {
            write!(out, "^{{{e}}}").unwrap();
        }
    }
}

fn latex_flat(p: &Polynomial) -> String {
    let mut out = String::new();
    for (i, (m, c)) in p.canonical_terms().enumerate() {
        let neg = is_negative(c);
        match (i, neg) {
            (0, true) => out.push_str("- "),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        if m.is_one() {
            latex_rational(&mut out, &a);
        } else {
            if !a.is_one() {
                latex_rational(&mut out, &a);
                out.push_str(" \\, ");
            }
            latex_monomial(&mut out, m);
        }
    }
    out
}

/// Groups terms by descending power of `t`, one bracketed coefficient per
/// power.
pub(super) fn to_latex(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let groups = p.coefficients_in(Var::T);
    let mut out = String::new();
    for (k, c) in groups.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let first = out.is_empty();
        let single = c.len() == 1;
        let body = if single {
            let (m, a) = c.canonical_terms().next().unwrap();
            let neg = a.is_negative();
            let mono = Polynomial::term(a.abs(), *m);
            (neg, latex_flat(&mono))
        } else {
            (false, format!("\\left({}\\right)", latex_flat(c)))
        };
        match (first, body.0) {
            (true, true) => out.push_str("- "),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        let const_one = single && c.canonical_terms().next().map(|(m, a)| m.is_one() && a.abs().is_one()) == Some(true);
        if k == 0 || !const_one {
            out.push_str(&body.1);
        }
        if k > 0 {
            if !const_one {
                out.push_str(" \\, ");
            }
            out.push('t');
            if k > 1 {
                write!(out, "^{{{k}}}").unwrap();
            }
        }
    }
    out
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|(_, c)| *c)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.src))
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = match self.chars.peek() {
            Some((i, c)) if c.is_ascii_digit() => *i,
            _ => return Err(self.err("expected digits")),
        };
        let mut end = start;
        while let Some((i, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                end = i + 1;
                self.chars.next();
            } else {
                break;
            }
        }
        Ok(self.src[start..end].parse().unwrap())
    }

    fn ident(&mut self) -> Result<Var> {
        self.skip_ws();
        let start = match self.chars.peek() {
            Some((i, c)) if c.is_alphabetic() => *i,
            _ => return Err(self.err("expected a variable")),
        };
        let mut end = start;
        while let Some((i, c)) = self.chars.peek() {
            if c.is_alphabetic() {
                end = i + c.len_utf8();
                self.chars.next();
            } else {
                break;
            }
        }
        let name = &self.src[start..end];
        Var::from_name(name).ok_or_else(|| self.err(&format!("unknown variable {name:?}")))
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.number()?;
                if self.peek() == Some('/') {
                    self.chars.next();
                    let den = self.number()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Polynomial::constant(Rational::new(num, den)))
                } else {
                    Ok(Polynomial::constant(Rational::from_integer(num)))
                }
            }
            Some('(') => {
                self.chars.next();
                let p = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.chars.next();
                self.power(p)
            }
            Some(_) => {
                let v = self.ident()?;
                self.power(Polynomial::var(v))
            }
            None => Err(self.err("unexpected end")),
        }
    }

    fn power(&mut self, base: Polynomial) -> Result<Polynomial> {
        if self.peek() == Some('^') {
            self.chars.next();
            let e = self.number()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.chars.next();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        let mut sign = match self.peek() {
            Some('-') => {
                self.chars.next();
                -Rational::one()
            }
            Some('+') => {
                self.chars.next();
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            acc += &self.product()?.scale(&sign);
            match self.peek() {
                Some('+') => sign = Rational::one(),
                Some('-') => sign = -Rational::one(),
                _ => break,
            }
            self.chars.next();
        }
        Ok(acc)
    }
}

/// Parses canonical text (and slightly more: parentheses, repeated
/// factors, `lambda` for `λ`).
pub fn parse(src: &str) -> Result<Polynomial> {
    let mut p = Parser {
        chars: src.char_indices().peekable(),
        src,
    };
    let out = p.sum()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, rat};

    #[test]
    fn zero_and_half_lambda() {
        assert_eq!(Polynomial::zero().canonical_text(), "0");
        let p = Polynomial::var(Var::Lambda).scale(&rat(1, 2));
        assert_eq!(p.canonical_text(), "1/2*λ");
    }

    #[test]
    fn text_orders_terms_by_graded_lex() {
        let p = parse("-1/4 + 3/8*s^2*t^2 + u*t").unwrap();
        assert_eq!(p.canonical_text(), "3/8*t^2*s^2 + t*u - 1/4");
        let q = parse("-t").unwrap();
        assert_eq!(q.canonical_text(), "-t");
    }

    #[test]
    fn parser_accepts_products_and_groups() {
        let p = parse("(lambda + 1)^2").unwrap();
        assert_eq!(p.canonical_text(), "λ^2 + 2*λ + 1");
        assert_eq!(parse("2*3/4*s").unwrap(), Polynomial::var(Var::S).scale(&rat(3, 2)));
        assert!(parse("3 +").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1/0").is_err());
    }

    #[test]
    fn json_shape() {
        let p = parse("1/2*λ - 3").unwrap();
        let j = p.to_json();
        let v = serde_json::to_value(&j).unwrap();
        assert_eq!(v["vars"], serde_json::json!(["s", "t", "lambda", "u"]));
        assert_eq!(v["terms"][0]["exp"], serde_json::json!([0, 0, 1, 0]));
        assert_eq!(v["terms"][0]["num"], "1");
        assert_eq!(v["terms"][0]["den"], "2");
        assert_eq!(v["terms"][1]["num"], "-3");
        assert_eq!(Polynomial::from_json(&j).unwrap(), p);
    }

    #[test]
    fn latex_groups_by_t() {
        let p = parse("3/8*s^2*t^2 + 1/4*u*s*t - 3/8*s^2*t - 1/4").unwrap();
        let tex = p.to_latex();
        assert_eq!(
            tex,
            "\\frac{3}{8} \\, s^{2} \\, t^{2} + \\left(- \\frac{3}{8} \\, s^{2} + \\frac{1}{4} \\, s \\, u\\right) \\, t - \\frac{1}{4}"
        );
        assert_eq!(parse("t").unwrap().to_latex(), "t");
        assert_eq!(Polynomial::constant(int(-2)).to_latex(), "- 2");
    }
}
