use serde::Serialize;

use super::graph::ExplicitGraph;
use super::hardcore::z_exact;
use super::polymer::zhat_exact;
use crate::cluster::{coefficient, truncated_estimate, CoefficientOptions, LambdaMode};
use crate::error::{Error, Result};
use crate::numeric::{ln2, Real};
use crate::polyring::{int, Polynomial, Rational};
use crate::window::ProductSpec;

#[derive(Clone, Debug, Serialize)]
pub struct EstimateRow {
    pub k: usize,
    pub log_estimate: String,
    /// `|log Z − estimate(k)|`.
    pub error: f64,
    /// `|log Ẑ − estimate(k)|`.
    pub error_vs_zhat: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub graph: String,
    pub s: u32,
    pub t: u32,
    #[serde(serialize_with = "super::report::rational")]
    pub lambda: Rational,
    #[serde(serialize_with = "super::report::rational")]
    pub z: Rational,
    #[serde(serialize_with = "super::report::rational")]
    pub zhat: Rational,
    pub log_z: String,
    pub rows: Vec<EstimateRow>,
    /// `error(2) <= error(1)`.
    pub second_improves: bool,
    /// `error(0) >= error(k)` for every `k`.
    pub baseline_worst: bool,
}

impl EstimateReport {
    pub fn passed(&self) -> bool {
        self.second_improves && self.baseline_worst
    }
}

/// `s` when every base graph is the same `K_{s,s}`.
pub fn kss_parameters(spec: &ProductSpec) -> Option<(u32, u32)> {
    let first = &spec.bases()[0];
    let s = first.degree();
    let complete = first.order() == 2 * s && spec.bases().iter().all(|b| b == first);
    complete.then_some((s as u32, spec.dims() as u32))
}

/// Compares truncations of the expansion for `K_{s,s}^t` with the exact
/// partition function, for `k = 0..=kmax`.
pub fn estimate_vs_exact(spec: &ProductSpec, lambda: &Rational, kmax: usize) -> Result<EstimateReport> {
    let (s, t) = kss_parameters(spec)
        .ok_or_else(|| Error::InvalidInput("estimates need a power of one complete bipartite graph".into()))?;
    let g = ExplicitGraph::from_product(spec)?;
    let z = z_exact(&g, lambda)?;
    let zhat = zhat_exact(&g, lambda)?;
    let log_z = Real::ln(&z)?;
    let log_zhat = Real::ln(&zhat)?;
    let mut coeffs: Vec<Polynomial> = Vec::new();
    let half_n = int(g.order() as i64 / 2);
    let baseline = Real::ln(&(lambda + int(1)))?.mul(&Real::from_rational(&half_n)?).add(&ln2());
    let mut rows = Vec::new();
    let mut errors: Vec<Real> = Vec::new();
    for k in 0..=kmax {
        let value = if k == 0 {
            baseline.clone()
        } else {
            coeffs.push(coefficient(k, &LambdaMode::Symbolic, CoefficientOptions::default())?.polynomial);
            truncated_estimate(&coeffs, s, t, lambda)?.log_z
        };
        let err = value.sub(&log_z).abs();
        rows.push(EstimateRow {
            k,
            log_estimate: value.to_decimal(17),
            error: err.to_f64(),
            error_vs_zhat: value.sub(&log_zhat).abs().to_f64(),
        });
        errors.push(err);
    }
    let second_improves = errors.len() < 3 || errors[2].le_with_slack(&errors[1]);
    let baseline_worst = errors.iter().all(|e| e.le_with_slack(&errors[0]));
    Ok(EstimateReport {
        graph: g.name().to_string(),
        s,
        t,
        lambda: lambda.clone(),
        z,
        zhat,
        log_z: log_z.to_decimal(17),
        rows,
        second_improves,
        baseline_worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognises_kss_powers() {
        assert_eq!(kss_parameters(&ProductSpec::from_token("Q4").unwrap()), Some((1, 4)));
        assert_eq!(kss_parameters(&ProductSpec::from_token("K22^2").unwrap()), Some((2, 2)));
        assert_eq!(kss_parameters(&ProductSpec::from_token("K22xK11").unwrap()), None);
        assert_eq!(kss_parameters(&ProductSpec::from_token("C6").unwrap()), None);
    }
}
