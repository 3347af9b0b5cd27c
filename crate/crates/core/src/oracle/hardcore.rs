use std::collections::BTreeMap;

use super::graph::{ExplicitGraph, Mask};
use crate::error::Result;
use crate::polyring::{int, Rational};

/// Every independent set, in increasing order of the mask.
pub fn independent_sets(g: &ExplicitGraph) -> Result<Vec<Mask>> {
    g.check_limit()?;
    fn go(g: &ExplicitGraph, v: usize, chosen: Mask, out: &mut Vec<Mask>) {
        if v == g.order() {
            out.push(chosen);
            return;
        }
        go(g, v + 1, chosen, out);
        if g.adjacency(v) & chosen == 0 {
            go(g, v + 1, chosen | 1 << v, out);
        }
    }
    let mut out = Vec::new();
    go(g, 0, 0, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Number of independent sets of each size.
pub fn size_counts(g: &ExplicitGraph) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; g.order() + 1];
    for i in independent_sets(g)? {
        counts[i.count_ones() as usize] += 1;
    }
    Ok(counts)
}

fn eval_counts(counts: &[u64], lambda: &Rational) -> Rational {
    let mut z = int(0);
    for c in counts.iter().rev() {
        z = z * lambda + Rational::from_integer((*c).into());
    }
    z
}

/// `Z(G, λ)` by enumerating independent sets.
pub fn z_exact(g: &ExplicitGraph, lambda: &Rational) -> Result<Rational> {
    Ok(eval_counts(&size_counts(g)?, lambda))
}

/// `Z(G, λ)` by a vertex-by-vertex transfer sweep: the state is the
/// chosen part of the frontier, the processed vertices that still have
/// unprocessed neighbours.
pub fn z_transfer(g: &ExplicitGraph, lambda: &Rational) -> Result<Rational> {
    g.check_limit()?;
    let n = g.order();
    let mut states: BTreeMap<Mask, Rational> = BTreeMap::from([(0, int(1))]);
    for v in 0..n {
        let later: Mask = if v + 1 >= 64 { 0 } else { !((1u64 << (v + 1)) - 1) };
        // frontier after placing v: processed vertices with a neighbour beyond v
        let keep = |m: Mask| {
            let mut out = 0;
            for w in super::graph::bits(m) {
                if g.adjacency(w) & later != 0 {
                    out |= 1 << w;
                }
            }
            out
        };
        let mut next: BTreeMap<Mask, Rational> = BTreeMap::new();
        for (state, weight) in states {
            *next.entry(keep(state)).or_insert_with(|| int(0)) += &weight;
            if g.adjacency(v) & state == 0 {
                *next.entry(keep(state | 1 << v)).or_insert_with(|| int(0)) += weight * lambda;
            }
        }
        states = next;
    }
    Ok(states.into_values().sum())
}
