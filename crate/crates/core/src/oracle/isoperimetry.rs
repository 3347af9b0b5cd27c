use serde::Serialize;

use super::graph::{ExplicitGraph, Side};
use crate::error::{Error, Result};
use crate::window::ProductSpec;

/// Largest product the exhaustive check accepts.
pub const ISOPERIMETRY_LIMIT: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct IsoViolation {
    pub part: &'static str,
    pub side: Side,
    pub set: Vec<String>,
    pub size: usize,
    pub neighborhood: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoperimetryReport {
    pub graph: String,
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub co_degree: usize,
    pub subsets_checked: u64,
    /// Smallest `|N(X)| / |X|` minus the right-hand side of (c), over all `X`.
    pub tightest_margin: f64,
    pub tightest_set: Vec<String>,
    /// Smallest `|N(X)| / (t|X|)` over `|X| <= t`.
    pub small_set_ratio: f64,
    pub violations: Vec<IsoViolation>,
}

impl IsoperimetryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `|N(X)| >= (1 + 2√2(1-β)/(m√t)) |X|` with `β = 2|X|/n`, squared so
/// that it stays in integers: `(|N|-|X|)² m² t n² >= 8 (n-2|X|)² |X|²`.
pub fn large_set_bound_holds(nx: usize, x: usize, n: usize, m: usize, t: usize) -> bool {
    if nx < x {
        return false;
    }
    let lhs = ((nx - x) as u128).pow(2) * (m as u128).pow(2) * t as u128 * (n as u128).pow(2);
    let rhs = 8 * ((n - 2 * x) as u128).pow(2) * (x as u128).pow(2);
    lhs >= rhs
}

fn large_set_margin(nx: usize, x: usize, n: usize, m: usize, t: usize) -> f64 {
    let beta = 2.0 * x as f64 / n as f64;
    nx as f64 / x as f64 - 1.0 - 2.0 * 2f64.sqrt() * (1.0 - beta) / (m as f64 * (t as f64).sqrt())
}

/// Checks the co-degree bound and the large-set expansion over every
/// nonempty subset of each class.
pub fn verify_isoperimetry(spec: &ProductSpec, m: usize) -> Result<IsoperimetryReport> {
    let n = spec.order();
    if n > ISOPERIMETRY_LIMIT {
        return Err(Error::SizeLimit { n, limit: ISOPERIMETRY_LIMIT });
    }
    if spec.bases().iter().any(|b| b.order() > m || b.order() < 2) {
        return Err(Error::InvalidInput(format!("base graphs must have between 2 and {m} vertices")));
    }
    let g = ExplicitGraph::from_product(spec)?;
    let t = spec.dims();
    let co_degree = g.co_degree();
    let mut violations = Vec::new();
    if co_degree > m {
        violations.push(IsoViolation { part: "a", side: Side::O, set: Vec::new(), size: 2, neighborhood: co_degree });
    }
    let mut checked = 0;
    let mut tightest = (f64::INFINITY, 0u64);
    let mut small = f64::INFINITY;
    for side in Side::BOTH {
        let d: Vec<usize> = super::graph::bits(g.side(side)).collect();
        let mut nb = vec![0u64; 1 << d.len()];
        for sub in 1usize..1 << d.len() {
            let low = sub.trailing_zeros() as usize;
            nb[sub] = nb[sub & (sub - 1)] | g.adjacency(d[low]);
            let x = sub.count_ones() as usize;
            let nx = nb[sub].count_ones() as usize;
            checked += 1;
            let mask = super::graph::bits(sub as u64).fold(0u64, |acc, k| acc | 1 << d[k]);
            if !large_set_bound_holds(nx, x, n, m, t) {
                violations.push(IsoViolation { part: "c", side, set: g.labels_of(mask), size: x, neighborhood: nx });
            }
            let margin = large_set_margin(nx, x, n, m, t);
            if margin < tightest.0 {
                tightest = (margin, mask);
            }
            if x <= t {
                small = small.min(nx as f64 / (t * x) as f64);
            }
        }
    }
    Ok(IsoperimetryReport {
        graph: g.name().to_string(),
        n,
        t,
        m,
        co_degree,
        subsets_checked: checked,
        tightest_margin: tightest.0,
        tightest_set: g.labels_of(tightest.1),
        small_set_ratio: small,
        violations,
    })
}
