use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::graph::{bits, ExplicitGraph, Mask, Side};
use super::hardcore::independent_sets;
use super::polymer::{captured_by, polymer_weight, xi_exact, DefectConfig};
use crate::error::{Error, Result};
use crate::polyring::{int, Rational};

/// Exact probabilities of every independent set under the measures of
/// the hard-core model and its two polymer approximations.
#[derive(Clone, Debug)]
pub struct MeasureTable {
    pub sets: Vec<Mask>,
    /// `λ^{|I|} / Z`.
    pub mu: Vec<Rational>,
    /// `μ̂*(O, I) + μ̂*(E, I)`.
    pub muhat: Vec<Rational>,
    pub muhat_star_o: Vec<Rational>,
    pub muhat_star_e: Vec<Rational>,
    /// `ν^D(I)`, zero unless `I ⊆ D` is a valid defect set.
    pub nu_o: Vec<Rational>,
    pub nu_e: Vec<Rational>,
    pub xi_o: Rational,
    pub xi_e: Rational,
    pub z: Rational,
}

/// `ν^D(A) = λ^{|A|} / ((1+λ)^{|N(A)|} Ξ^D)`; cross-checked against
/// `∏_S w(S) / Ξ^D` over the 2-linked pieces.
pub fn nu(g: &ExplicitGraph, side: Side, a: Mask, lambda: &Rational, xi: &Rational) -> Result<Rational> {
    let cfg = DefectConfig::new(g, side, a)?;
    if !cfg.is_valid(g) {
        return Ok(int(0));
    }
    let direct = polymer_weight(g, a, lambda) / xi;
    let by_pieces = cfg.weight(g, lambda) / xi;
    if direct != by_pieces {
        return Err(Error::IdentityViolation(format!("ν^{side} does not factorise on {:?}", g.labels_of(a))));
    }
    Ok(direct)
}

/// `μ̂*(D, I) = (1+λ)^{-n/2} 1{I^D ∈ Ω^D} λ^{|I|} / (Ξ^O + Ξ^E)`.
fn muhat_star(g: &ExplicitGraph, side: Side, i: Mask, lambda: &Rational, scale: &Rational) -> Rational {
    if captured_by(g, i, side) {
        num_traits::pow(lambda.clone(), i.count_ones() as usize) * scale
    } else {
        int(0)
    }
}

pub fn measure_table(g: &ExplicitGraph, lambda: &Rational) -> Result<MeasureTable> {
    let sets = independent_sets(g)?;
    let xi_o = xi_exact(g, Side::O, lambda)?;
    let xi_e = xi_exact(g, Side::E, lambda)?;
    let scale = int(1) / (num_traits::pow(lambda + int(1), g.order() / 2) * (&xi_o + &xi_e));
    let weights: Vec<Rational> = sets.iter().map(|&i| num_traits::pow(lambda.clone(), i.count_ones() as usize)).collect();
    let z: Rational = weights.iter().sum();
    let mu = weights.iter().map(|w| w / &z).collect();
    let star_o: Vec<Rational> = sets.iter().map(|&i| muhat_star(g, Side::O, i, lambda, &scale)).collect();
    let star_e: Vec<Rational> = sets.iter().map(|&i| muhat_star(g, Side::E, i, lambda, &scale)).collect();
    let muhat = star_o.iter().zip(&star_e).map(|(a, b)| a + b).collect();
    let nu_side = |side: Side, xi: &Rational| -> Result<Vec<Rational>> {
        sets.iter()
            .map(|&i| if i & !g.side(side) == 0 { nu(g, side, i, lambda, xi) } else { Ok(int(0)) })
            .collect()
    };
    let nu_o = nu_side(Side::O, &xi_o)?;
    let nu_e = nu_side(Side::E, &xi_e)?;
    Ok(MeasureTable { sets, mu, muhat, muhat_star_o: star_o, muhat_star_e: star_e, nu_o, nu_e, xi_o, xi_e, z })
}

impl MeasureTable {
    /// Column totals of `μ`, `μ̂`, `μ̂*`, `ν^O`, `ν^E`; each should be 1.
    pub fn totals(&self) -> [(&'static str, Rational); 5] {
        let sum = |c: &[Rational]| c.iter().sum::<Rational>();
        [
            ("mu", sum(&self.mu)),
            ("muhat", sum(&self.muhat)),
            ("muhat_star", sum(&self.muhat_star_o) + sum(&self.muhat_star_e)),
            ("nu_O", sum(&self.nu_o)),
            ("nu_E", sum(&self.nu_e)),
        ]
    }

    pub fn index_of(&self, i: Mask) -> Option<usize> {
        self.sets.binary_search(&i).ok()
    }

    /// `‖μ̂ − μ‖_TV`, as the sum of the positive parts.
    pub fn tv_muhat_mu(&self) -> Rational {
        positive_part_sum(&self.muhat, &self.mu)
    }
}

fn positive_part_sum(p: &[Rational], q: &[Rational]) -> Rational {
    p.iter().zip(q).filter(|(a, b)| a > b).map(|(a, b)| a - b).sum()
}

/// Draws `(D, I)` by picking the defect side with probability
/// proportional to `Ξ^D`, a defect set from `ν^D`, and then each free
/// vertex of the other side with probability `λ/(1+λ)`.
pub struct Sampler<'g> {
    graph: &'g ExplicitGraph,
    p_odd: f64,
    q: f64,
    /// Valid defect sets per side with cumulative `ν^D` mass.
    defects: [Vec<(f64, Mask)>; 2],
    rng: ChaCha8Rng,
}

fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

impl<'g> Sampler<'g> {
    pub fn new(g: &'g ExplicitGraph, lambda: &Rational, seed: u64) -> Result<Self> {
        g.check_limit()?;
        let mut xi = Vec::new();
        let mut defects: [Vec<(f64, Mask)>; 2] = Default::default();
        for (k, side) in Side::BOTH.into_iter().enumerate() {
            let x = xi_exact(g, side, lambda)?;
            let d: Vec<usize> = bits(g.side(side)).collect();
            let mut acc = int(0);
            for sub in 0u64..1 << d.len() {
                let a = bits(sub).fold(0, |m, b| m | 1 << d[b]);
                let p = nu(g, side, a, lambda, &x)?;
                if p > int(0) {
                    acc += p;
                    defects[k].push((to_f64(&acc), a));
                }
            }
            xi.push(x);
        }
        let p_odd = to_f64(&(&xi[0] / (&xi[0] + &xi[1])));
        let q = to_f64(&(lambda / (lambda + int(1))));
        Ok(Sampler { graph: g, p_odd, q, defects, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn sample(&mut self) -> (Side, Mask) {
        let g = self.graph;
        let side = if self.rng.gen_bool(self.p_odd) { Side::O } else { Side::E };
        let table = &self.defects[(side == Side::E) as usize];
        let r: f64 = self.rng.gen::<f64>() * table.last().map_or(1.0, |e| e.0);
        let pos = table.partition_point(|e| e.0 <= r).min(table.len() - 1);
        let defect = table[pos].1;
        let free = g.side(side.other()) & !g.neighborhood(defect);
        let mut other = 0;
        for v in bits(free) {
            if self.rng.gen_bool(self.q) {
                other |= 1 << v;
            }
        }
        (side, defect | other)
    }
}

/// One seeded independent set from `μ̂`.
pub fn sample_muhat(g: &ExplicitGraph, lambda: &Rational, seed: u64) -> Result<Mask> {
    Ok(Sampler::new(g, lambda, seed)?.sample().1)
}

/// Empirical frequencies of `μ̂` against the exact table.
#[derive(Clone, Debug, Serialize)]
pub struct SamplerReport {
    pub samples: u64,
    pub seed: u64,
    /// Exact TV distance between the empirical and exact `μ̂`.
    #[serde(serialize_with = "super::report::rational")]
    pub tv_empirical_muhat: Rational,
    /// Exact `‖μ̂ − μ‖_TV`.
    #[serde(serialize_with = "super::report::rational")]
    pub tv_muhat_mu: Rational,
    /// Independent sets whose frequency is more than 3σ from `μ̂`.
    pub outside_three_sigma: Vec<Vec<String>>,
    /// Samples that were not independent or not captured by their side.
    pub invalid: u64,
}

pub fn sampler_report(g: &ExplicitGraph, lambda: &Rational, seed: u64, samples: u64) -> Result<SamplerReport> {
    let table = measure_table(g, lambda)?;
    let mut sampler = Sampler::new(g, lambda, seed)?;
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut invalid = 0;
    for _ in 0..samples {
        let (side, i) = sampler.sample();
        match table.index_of(i) {
            Some(k) if captured_by(g, i, side) => *counts.entry(k).or_default() += 1,
            _ => invalid += 1,
        }
    }
    let n = Rational::from_integer(samples.into());
    let empirical: Vec<Rational> =
        (0..table.sets.len()).map(|k| Rational::from_integer(counts.get(&k).copied().unwrap_or(0).into()) / &n).collect();
    let mut outside = Vec::new();
    for (k, p) in table.muhat.iter().enumerate() {
        let p = to_f64(p);
        let f = to_f64(&empirical[k]);
        let sigma = (p * (1.0 - p) / samples as f64).sqrt();
        if (f - p).abs() > 3.0 * sigma + 1e-12 {
            outside.push(g.labels_of(table.sets[k]));
        }
    }
    Ok(SamplerReport {
        samples,
        seed,
        tv_empirical_muhat: positive_part_sum(&empirical, &table.muhat),
        tv_muhat_mu: table.tv_muhat_mu(),
        outside_three_sigma: outside,
        invalid,
    })
}
