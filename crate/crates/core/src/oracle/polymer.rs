use serde::Serialize;

use super::graph::{bits, ExplicitGraph, Mask, Side};
use super::hardcore::independent_sets;
use crate::cluster::{ursell, SmallGraph};
use crate::error::{Error, Result};
use crate::polyring::{int, Rational};

/// `[A] = {v ∈ D : N(v) ⊆ N(A)}`.
pub fn closure(g: &ExplicitGraph, a: Mask, side: Side) -> Result<Mask> {
    let d = g.side(side);
    if a & !d != 0 {
        return Err(Error::SideMismatch);
    }
    let na = g.neighborhood(a);
    Ok(bits(d).filter(|&v| g.adjacency(v) & !na == 0).fold(0, |m, v| m | 1 << v))
}

/// Maximal 2-linked pieces of a set within one class, each as a mask,
/// ordered by least vertex.
pub fn two_linked_components(g: &ExplicitGraph, a: Mask) -> Vec<Mask> {
    let mut left = a;
    let mut out = Vec::new();
    while left != 0 {
        let mut comp = left & left.wrapping_neg();
        loop {
            // members sharing a neighbour with the component so far
            let reach = g.neighborhood(g.neighborhood(comp)) & left;
            if reach | comp == comp {
                break;
            }
            comp |= reach;
        }
        left &= !comp;
        out.push(comp);
    }
    out
}

/// `floor(n/4)`, the largest closure a polymer may have.
pub fn closure_bound(g: &ExplicitGraph) -> usize {
    g.order() / 4
}

/// A 2-linked set on side `D` is a polymer when its closure is small.
pub fn is_polymer(g: &ExplicitGraph, s: Mask, side: Side) -> Result<bool> {
    Ok(s != 0
        && two_linked_components(g, s).len() == 1
        && closure(g, s, side)?.count_ones() as usize <= closure_bound(g))
}

/// `w(S) = λ^{|S|} / (1+λ)^{|N(S)|}`.
pub fn polymer_weight(g: &ExplicitGraph, s: Mask, lambda: &Rational) -> Rational {
    num_traits::pow(lambda.clone(), s.count_ones() as usize)
        / num_traits::pow(lambda + int(1), g.neighborhood(s).count_ones() as usize)
}

/// A defect side, the defect set on it, and that set's 2-linked pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectConfig {
    pub side: Side,
    pub set: Mask,
    pub components: Vec<Mask>,
}

impl DefectConfig {
    pub fn new(g: &ExplicitGraph, side: Side, set: Mask) -> Result<Self> {
        if set & !g.side(side) != 0 {
            return Err(Error::SideMismatch);
        }
        Ok(DefectConfig { side, set, components: two_linked_components(g, set) })
    }

    /// Whether the set lies in `Ω^D`: every piece is a polymer.
    pub fn is_valid(&self, g: &ExplicitGraph) -> bool {
        self.components
            .iter()
            .all(|&c| closure(g, c, self.side).map(|cl| cl.count_ones() as usize <= closure_bound(g)).unwrap_or(false))
    }

    /// `∏_{S∈σ} w(S)` over the pieces.
    pub fn weight(&self, g: &ExplicitGraph, lambda: &Rational) -> Rational {
        self.components.iter().map(|&c| polymer_weight(g, c, lambda)).product()
    }
}

/// `I ∩ D ∈ Ω^D`.
pub fn captured_by(g: &ExplicitGraph, i: Mask, side: Side) -> bool {
    DefectConfig::new(g, side, i & g.side(side)).map(|c| c.is_valid(g)).unwrap_or(false)
}

/// All polymers on side `D`, by increasing mask.
pub fn polymers(g: &ExplicitGraph, side: Side) -> Result<Vec<Mask>> {
    g.check_limit()?;
    let d: Vec<usize> = bits(g.side(side)).collect();
    let mut out = Vec::new();
    for sub in 1u64..1 << d.len() {
        let s = bits(sub).fold(0, |m, k| m | 1 << d[k]);
        if is_polymer(g, s, side)? {
            out.push(s);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Two polymers are compatible when their union is not 2-linked.
pub fn incompatible(g: &ExplicitGraph, a: Mask, b: Mask) -> bool {
    g.neighborhood(a) & g.neighborhood(b) != 0
}

/// `Ξ^D` as a sum over sets of pairwise compatible polymers.
pub fn xi_exact(g: &ExplicitGraph, side: Side, lambda: &Rational) -> Result<Rational> {
    let list = polymers(g, side)?;
    let weights: Vec<Rational> = list.iter().map(|&s| polymer_weight(g, s, lambda)).collect();
    fn go(g: &ExplicitGraph, list: &[Mask], weights: &[Rational], from: usize, chosen: &mut Vec<usize>, acc: &Rational) -> Rational {
        let mut total = acc.clone();
        for k in from..list.len() {
            if chosen.iter().all(|&c| !incompatible(g, list[c], list[k])) {
                chosen.push(k);
                total += go(g, list, weights, k + 1, chosen, &(acc * &weights[k]));
                chosen.pop();
            }
        }
        total
    }
    Ok(go(g, &list, &weights, 0, &mut Vec::new(), &int(1)))
}

/// `Ξ^D` as `Σ_{A∈Ω^D} λ^{|A|}/(1+λ)^{|N(A)|}` over defect sets.
pub fn xi_by_defect_sets(g: &ExplicitGraph, side: Side, lambda: &Rational) -> Result<Rational> {
    g.check_limit()?;
    let d: Vec<usize> = bits(g.side(side)).collect();
    let mut total = int(0);
    for sub in 0u64..1 << d.len() {
        let a = bits(sub).fold(0, |m, k| m | 1 << d[k]);
        if DefectConfig::new(g, side, a)?.is_valid(g) {
            total += polymer_weight(g, a, lambda);
        }
    }
    Ok(total)
}

/// `Ẑ = (1+λ)^{n/2} (Ξ^O + Ξ^E)`.
pub fn zhat_exact(g: &ExplicitGraph, lambda: &Rational) -> Result<Rational> {
    let xi = xi_exact(g, Side::O, lambda)? + xi_exact(g, Side::E, lambda)?;
    Ok(num_traits::pow(lambda + int(1), g.order() / 2) * xi)
}

/// The difference between `Ẑ` and `Z`, seen from both ends.
#[derive(Clone, Debug, Serialize)]
pub struct CaptureReport {
    #[serde(serialize_with = "super::report::rational")]
    pub z: Rational,
    #[serde(serialize_with = "super::report::rational")]
    pub zhat: Rational,
    /// `Σ_I ω̂(I)`, summed directly.
    #[serde(serialize_with = "super::report::rational")]
    pub zhat_direct: Rational,
    #[serde(serialize_with = "super::report::rational")]
    pub difference: Rational,
    /// `Σ_{I∈B} λ^{|I|}` over independent sets captured by both sides.
    #[serde(serialize_with = "super::report::rational")]
    pub doubly_captured_weight: Rational,
    pub independent_sets: usize,
    pub doubly_captured: usize,
    pub captured_by_o_only: usize,
    pub captured_by_e_only: usize,
    /// `P_{μ̂*}(D ≠ M(I))`, with `O` the minority side on ties.
    #[serde(serialize_with = "super::report::rational")]
    pub defect_not_minority: Rational,
}

/// The minority side of `I`; `O` on ties.
pub fn minority_side(g: &ExplicitGraph, i: Mask) -> Side {
    if (i & g.side(Side::O)).count_ones() <= (i & g.side(Side::E)).count_ones() {
        Side::O
    } else {
        Side::E
    }
}

/// Enumerates independent sets, checks every one is captured by some side
/// and that `Ẑ − Z` equals the weight of the doubly captured sets.
pub fn capture_report(g: &ExplicitGraph, lambda: &Rational) -> Result<CaptureReport> {
    let sets = independent_sets(g)?;
    let pow = |k: u32| num_traits::pow(lambda.clone(), k as usize);
    let (mut z, mut zhat_direct, mut doubled, mut not_minority) = (int(0), int(0), int(0), int(0));
    let (mut both, mut o_only, mut e_only) = (0, 0, 0);
    for &i in &sets {
        let w = pow(i.count_ones());
        let o = captured_by(g, i, Side::O);
        let e = captured_by(g, i, Side::E);
        match (o, e) {
            (false, false) => {
                return Err(Error::IdentityViolation(format!(
                    "independent set {:?} is captured by neither side",
                    g.labels_of(i)
                )))
            }
            (true, true) => {
                both += 1;
                doubled += &w;
            }
            (true, false) => o_only += 1,
            (false, true) => e_only += 1,
        }
        // unnormalised μ̂*(M'(I), I)
        if captured_by(g, i, minority_side(g, i).other()) {
            not_minority += &w;
        }
        z += &w;
        zhat_direct += w * int(o as i64 + e as i64);
    }
    let zhat = zhat_exact(g, lambda)?;
    if zhat != zhat_direct {
        return Err(Error::IdentityViolation(format!("Ẑ = {zhat} by polymer models but {zhat_direct} directly")));
    }
    let difference = &zhat - &z;
    if difference != doubled {
        return Err(Error::IdentityViolation(format!("Ẑ − Z = {difference} but doubly captured weight is {doubled}")));
    }
    let defect_not_minority = not_minority / &zhat;
    if &doubled / &zhat > defect_not_minority {
        return Err(Error::IdentityViolation("doubly captured mass exceeds P(D ≠ M(I))".into()));
    }
    Ok(CaptureReport {
        z,
        zhat,
        zhat_direct,
        difference,
        doubly_captured_weight: doubled,
        independent_sets: sets.len(),
        doubly_captured: both,
        captured_by_o_only: o_only,
        captured_by_e_only: e_only,
        defect_not_minority,
    })
}

/// Partial sums `Σ_{j≤k} L^D_j` for `k = 1..=kmax`, where `L^D_j` sums
/// `w(Γ)` over clusters of polymers with total size `j`.
pub fn cluster_sum_small(g: &ExplicitGraph, side: Side, lambda: &Rational, kmax: usize) -> Result<Vec<Rational>> {
    if kmax > 6 {
        return Err(Error::InvalidInput(format!("kmax = {kmax} exceeds 6")));
    }
    let list: Vec<Mask> = polymers(g, side)?.into_iter().filter(|s| s.count_ones() as usize <= kmax).collect();
    let weights: Vec<Rational> = list.iter().map(|&s| polymer_weight(g, s, lambda)).collect();
    let mut levels = vec![int(0); kmax + 1];
    let mut chosen: Vec<usize> = Vec::new();
    fn go(
        g: &ExplicitGraph,
        list: &[Mask],
        weights: &[Rational],
        from: usize,
        size: usize,
        kmax: usize,
        chosen: &mut Vec<usize>,
        levels: &mut [Rational],
    ) -> Result<()> {
        if !chosen.is_empty() {
            let mut h = SmallGraph::empty(chosen.len());
            for a in 0..chosen.len() {
                for b in a + 1..chosen.len() {
                    if incompatible(g, list[chosen[a]], list[chosen[b]]) {
                        h.add_edge(a, b);
                    }
                }
            }
            if h.is_connected() {
                // ordered tuples per multiset: k! / ∏ m!
                let fact = |n: usize| (1..=n as u64).product::<u64>();
                let mut tuples = fact(chosen.len());
                let mut run = 1;
                for w in 1..=chosen.len() {
                    if w < chosen.len() && chosen[w] == chosen[w - 1] {
                        run += 1;
                    } else {
                        tuples /= fact(run);
                        run = 1;
                    }
                }
                let w: Rational = chosen.iter().map(|&c| weights[c].clone()).product();
                levels[size] += ursell(&h)? * w * int(tuples as i64);
            }
        }
        for k in from..list.len() {
            let next = size + list[k].count_ones() as usize;
            if next <= kmax && chosen.len() < crate::cluster::MAX_NODES {
                chosen.push(k);
                go(g, list, weights, k, next, kmax, chosen, levels)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    go(g, &list, &weights, 0, 0, kmax, &mut chosen, &mut levels)?;
    let mut acc = int(0);
    Ok(levels[1..]
        .iter()
        .map(|l| {
            acc += l;
            acc.clone()
        })
        .collect())
}
