use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::estimate::estimate_vs_exact;
use super::graph::{ExplicitGraph, Side};
use super::hardcore::{z_exact, z_transfer};
use super::isoperimetry::verify_isoperimetry;
use super::measures::{measure_table, sampler_report};
use super::polymer::{capture_report, xi_by_defect_sets, xi_exact};
use crate::error::Result;
use crate::polyring::{int, rat, Rational};
use crate::window::ProductSpec;

/// Version of every JSON document this crate writes.
pub const SCHEMA: u32 = 1;

/// Test graphs small enough for every exhaustive check.
pub const ROSTER: [&str; 7] = ["C4", "C6", "Q3", "Q4", "K22", "K22^2", "K22xK11"];

/// Graphs and fugacities of the identity suite.
pub const IDENTITY_GRAPHS: [&str; 5] = ["C4", "Q3", "Q4", "K22", "K22^2"];
pub fn identity_lambdas() -> Vec<Rational> {
    vec![rat(1, 2), int(1), int(2)]
}

pub const SAMPLER_SAMPLES: u64 = 100_000;
pub const TV_TOLERANCE: (i64, i64) = (1, 100);

pub(crate) fn rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Isoperimetry,
    Sampler,
    Estimates,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Isoperimetry => "isoperimetry",
            Suite::Sampler => "sampler",
            Suite::Estimates => "estimates",
        }
    }
}

/// Parameters of one suite run; `None` selects the suite's defaults.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub graph: Option<String>,
    pub lambda: Option<Rational>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub graph: String,
    pub lambda: Option<String>,
    pub passed: bool,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: &str, graph: &str, lambda: Option<&Rational>, passed: bool, witness: Value) -> Check {
    Check { name: name.into(), graph: graph.into(), lambda: lambda.map(|l| l.to_string()), passed, witness }
}

fn graphs(config: &SuiteConfig, default: &[&str]) -> Vec<String> {
    match &config.graph {
        Some(g) => vec![g.clone()],
        None => default.iter().map(|s| s.to_string()).collect(),
    }
}

fn lambdas(config: &SuiteConfig, default: Vec<Rational>) -> Vec<Rational> {
    config.lambda.clone().map_or(default, |l| vec![l])
}

/// Capture identity, `Ξ^D >= 1` by two routes, and exact table totals.
pub fn identity_checks(token: &str, lambda: &Rational) -> Result<Vec<Check>> {
    let g = ExplicitGraph::from_token(token)?;
    let mut out = Vec::new();
    let z = z_exact(&g, lambda)?;
    let zt = z_transfer(&g, lambda)?;
    out.push(check(
        "z_enumeration_matches_transfer",
        token,
        Some(lambda),
        z == zt,
        json!({ "enumeration": z.to_string(), "transfer": zt.to_string() }),
    ));
    let cap = capture_report(&g, lambda);
    out.push(match cap {
        Ok(r) => check("capture_identity", token, Some(lambda), r.difference == r.doubly_captured_weight, serde_json::to_value(&r)?),
        Err(e) => check("capture_identity", token, Some(lambda), false, json!({ "error": e.to_string() })),
    });
    for side in Side::BOTH {
        let xi = xi_exact(&g, side, lambda)?;
        let other = xi_by_defect_sets(&g, side, lambda)?;
        out.push(check(
            &format!("xi_{side}_at_least_one"),
            token,
            Some(lambda),
            xi >= int(1) && xi == other,
            json!({ "polymer_configurations": xi.to_string(), "defect_sets": other.to_string() }),
        ));
    }
    let table = measure_table(&g, lambda);
    out.push(match table {
        Ok(t) => {
            let totals = t.totals();
            let ok = totals.iter().all(|(_, v)| *v == int(1));
            let witness: serde_json::Map<String, Value> =
                totals.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect();
            check("measure_tables_sum_to_one", token, Some(lambda), ok, Value::Object(witness))
        }
        Err(e) => check("measure_tables_sum_to_one", token, Some(lambda), false, json!({ "error": e.to_string() })),
    });
    Ok(out)
}

pub fn isoperimetry_check(token: &str) -> Result<Check> {
    let spec = ProductSpec::from_token(token)?;
    let r = verify_isoperimetry(&spec, spec.max_base_order())?;
    Ok(check("isoperimetry", token, None, r.passed(), serde_json::to_value(&r)?))
}

pub fn sampler_check(token: &str, lambda: &Rational, seed: u64, samples: u64) -> Result<Check> {
    let g = ExplicitGraph::from_token(token)?;
    let r = sampler_report(&g, lambda, seed, samples)?;
    let ok = r.invalid == 0 && r.tv_empirical_muhat < rat(TV_TOLERANCE.0, TV_TOLERANCE.1);
    let mut witness = serde_json::to_value(&r)?;
    witness["tv_empirical_muhat_decimal"] = json!(num_traits::ToPrimitive::to_f64(&r.tv_empirical_muhat));
    witness["tv_muhat_mu_decimal"] = json!(num_traits::ToPrimitive::to_f64(&r.tv_muhat_mu));
    Ok(check("sampler_fidelity", token, Some(lambda), ok, witness))
}

pub fn estimate_check(token: &str, lambda: &Rational, kmax: usize) -> Result<Check> {
    let r = estimate_vs_exact(&ProductSpec::from_token(token)?, lambda, kmax)?;
    Ok(check("truncation_quality", token, Some(lambda), r.passed(), serde_json::to_value(&r)?))
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    match suite {
        Suite::Identities => {
            for g in graphs(config, &IDENTITY_GRAPHS) {
                for l in lambdas(config, identity_lambdas()) {
                    checks.extend(identity_checks(&g, &l)?);
                }
            }
        }
        Suite::Isoperimetry => {
            for g in graphs(config, &ROSTER) {
                checks.push(isoperimetry_check(&g)?);
            }
        }
        Suite::Sampler => {
            for g in graphs(config, &["C4"]) {
                for l in lambdas(config, vec![int(1)]) {
                    checks.push(sampler_check(&g, &l, config.seed.unwrap_or(0), SAMPLER_SAMPLES)?);
                }
            }
        }
        Suite::Estimates => {
            for g in graphs(config, &["Q4", "K22^2"]) {
                for l in lambdas(config, vec![int(1)]) {
                    checks.push(estimate_check(&g, &l, 4)?);
                }
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { schema: SCHEMA, suite: suite.name(), passed, checks })
}
