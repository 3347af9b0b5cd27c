use crate::error::{Error, Result};
use crate::numeric::{ln2, Real};
use crate::polyring::{int, Assignment, Polynomial, Rational, Var};

/// Truncated cluster-expansion estimates for `K_{s,s}^t`.
#[derive(Clone, Debug)]
pub struct TruncatedEstimate {
    /// `Σ_{j<=k} L̂_j (2s)^t / (1+λ)^{jst}` at the requested `λ`, exact.
    pub cluster_sum: Rational,
    /// `(n/2) ln(1+λ) + ln 2 + cluster_sum`.
    pub log_z: Real,
    /// The same estimate at `λ = 1`, i.e. for the number of independent sets.
    pub log_i: Real,
}

/// The cluster sum with the given coefficients, which must be symbolic in
/// `λ` (or free of it).
pub fn cluster_sum(coefficients: &[Polynomial], s: u32, t: u32, lambda: &Rational) -> Result<Rational> {
    let one_plus = lambda + int(1);
    let u = num_traits::pow(one_plus.clone(), s as usize);
    let at = Assignment::new()
        .with(Var::S, int(s as i64))
        .with(Var::T, int(t as i64))
        .with(Var::Lambda, lambda.clone())
        .with(Var::U, u);
    let n = num_traits::pow(int(2 * s as i64), t as usize);
    let mut sum = int(0);
    for (idx, l) in coefficients.iter().enumerate() {
        let j = idx + 1;
        let damp = num_traits::pow(one_plus.clone(), j * (s * t) as usize);
        sum += l.eval(&at)? * &n / damp;
    }
    Ok(sum)
}

/// Estimates `log Z(K_{s,s}^t, λ)` and `log i(K_{s,s}^t)` from `L̂_1..L̂_k`.
/// The factor 2 accounts for the two symmetric defect sides.
pub fn truncated_estimate(coefficients: &[Polynomial], s: u32, t: u32, lambda: &Rational) -> Result<TruncatedEstimate> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidInput("s and t must be positive".into()));
    }
    if lambda <= &int(0) {
        return Err(Error::InvalidInput("λ must be positive".into()));
    }
    let half_n = num_traits::pow(int(2 * s as i64), t as usize) / int(2);
    let sum = cluster_sum(coefficients, s, t, lambda)?;
    let sum_at_one = cluster_sum(coefficients, s, t, &int(1))?;
    let base = Real::ln(&(lambda + int(1)))?;
    let scaled = |x: &Real, k: &Rational| -> Result<Real> {
        // (n/2) ln(1+λ) without forming (1+λ)^{n/2}
        let k = Real::from_rational(k)?;
        Ok(Real::mul(x, &k))
    };
    let log_z = scaled(&base, &half_n)?.add(&ln2()).add(&Real::from_rational(&sum)?);
    let log_i = scaled(&ln2(), &(half_n + int(1)))?.add(&Real::from_rational(&sum_at_one)?);
    Ok(TruncatedEstimate { cluster_sum: sum, log_z, log_i })
}
