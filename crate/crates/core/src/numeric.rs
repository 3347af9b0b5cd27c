//! Fixed-precision reals for logarithms of exact rationals.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::polyring::Rational;

/// Mantissa bits of every [`Real`].
pub const PRECISION: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

/// A real number carried to [`PRECISION`] bits.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

fn consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::Numeric(format!("{e:?}")))
}

fn checked(x: BigFloat) -> Result<Real> {
    if x.is_nan() || x.is_inf() {
        return Err(Error::Numeric("non-finite result".into()));
    }
    Ok(Real(x))
}

impl Real {
    pub fn from_rational(q: &Rational) -> Result<Real> {
        let mut cc = consts()?;
        let num = BigFloat::parse(&q.numer().to_string(), Radix::Dec, PRECISION, RM, &mut cc);
        let den = BigFloat::parse(&q.denom().to_string(), Radix::Dec, PRECISION, RM, &mut cc);
        checked(num.div(&den, PRECISION, RM))
    }

    /// Natural logarithm of a positive rational.
    pub fn ln(q: &Rational) -> Result<Real> {
        if !q.is_positive() {
            return Err(Error::Numeric(format!("logarithm of non-positive {q}")));
        }
        let mut cc = consts()?;
        // ln(a/b) = ln a - ln b keeps huge numerators and denominators exact
        // until the logarithm itself
        let num = BigFloat::parse(&q.numer().to_string(), Radix::Dec, PRECISION, RM, &mut cc);
        let den = BigFloat::parse(&q.denom().to_string(), Radix::Dec, PRECISION, RM, &mut cc);
        let value = num.ln(PRECISION, RM, &mut cc).sub(&den.ln(PRECISION, RM, &mut cc), PRECISION, RM);
        checked(value)
    }

    pub fn add(&self, other: &Real) -> Real {
        Real(self.0.add(&other.0, PRECISION, RM))
    }

    pub fn mul(&self, other: &Real) -> Real {
        Real(self.0.mul(&other.0, PRECISION, RM))
    }

    pub fn sub(&self, other: &Real) -> Real {
        Real(self.0.sub(&other.0, PRECISION, RM))
    }

    pub fn abs(&self) -> Real {
        if self.0.is_negative() {
            Real(self.0.neg())
        } else {
            self.clone()
        }
    }

    /// Whether `self <= other + 2^{-64}`, absorbing rounding in both.
    pub fn le_with_slack(&self, other: &Real) -> bool {
        let slack = BigFloat::from_f64(2f64.powi(-64), PRECISION);
        self.0 <= other.0.add(&slack, PRECISION, RM)
    }

    pub fn to_f64(&self) -> f64 {
        let mut cc = consts().expect("constants cache");
        let text = self.0.format(Radix::Dec, RM, &mut cc).expect("finite value");
        text.parse().expect("decimal float text")
    }

    /// Decimal text with the given number of significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self.to_f64())
    }
}

/// `ln 2`.
pub fn ln2() -> Real {
    Real::ln(&Rational::from_integer(2.into())).expect("ln 2")
}
