use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::polyring::Rational;

/// Largest graph the bitmask representation holds.
pub const MAX_NODES: usize = 16;

/// Simple undirected graph on `0..n`, adjacency as bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: usize,
    adj: [u16; MAX_NODES],
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_NODES);
        SmallGraph { n, adj: [0; MAX_NODES] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.n && b < self.n);
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn all(&self) -> u16 {
        ((1u32 << self.n) - 1) as u16
    }

    fn reach(&self, from: usize, within: u16) -> u16 {
        let mut seen = 1u16 << from;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= self.adj[v];
                f &= f - 1;
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reach(0, self.all()) == self.all()
    }

    fn first_edge(&self) -> Option<(usize, usize)> {
        (0..self.n).find(|&a| self.adj[a] != 0).map(|a| (a, self.adj[a].trailing_zeros() as usize))
    }

    fn delete(&self, a: usize, b: usize) -> SmallGraph {
        let mut g = *self;
        g.adj[a] &= !(1 << b);
        g.adj[b] &= !(1 << a);
        g
    }

    /// Merges `b` into `a` and relabels the last node as `b`; parallel
    /// edges collapse.
    fn contract(&self, a: usize, b: usize) -> SmallGraph {
        let mut g = *self;
        let nb = g.adj[b] & !(1 << a);
        g.adj[a] = (g.adj[a] | nb) & !(1 << b) & !(1 << a);
        for v in 0..g.n {
            if nb >> v & 1 == 1 {
                g.adj[v] = (g.adj[v] & !(1 << b)) | 1 << a;
            }
        }
        g.adj[b] = 0;
        let last = g.n - 1;
        if b != last {
            g.adj[b] = g.adj[last];
            for v in 0..last {
                if g.adj[v] >> last & 1 == 1 {
                    g.adj[v] = (g.adj[v] & !(1 << last)) | 1 << b;
                }
            }
        }
        g.adj[last] = 0;
        g.n = last;
        g
    }
}

/// `T_G(1, 0)` by deletion and contraction. Optionally memoised on the
/// labelled graph.
#[derive(Default)]
pub struct Tutte {
    cache: Option<HashMap<SmallGraph, u64>>,
}

impl Tutte {
    pub fn new(cache: bool) -> Self {
        Tutte { cache: cache.then(HashMap::new) }
    }

    /// Requires `g` connected.
    pub fn t10(&mut self, g: &SmallGraph) -> u64 {
        if let Some(&v) = self.cache.as_ref().and_then(|c| c.get(g)) {
            return v;
        }
        let value = match g.first_edge() {
            None => 1,
            Some((a, b)) => {
                let deleted = g.delete(a, b);
                let contracted = self.t10(&g.contract(a, b));
                if deleted.reach(a, g.all()) >> b & 1 == 0 {
                    contracted
                } else {
                    contracted + self.t10(&deleted)
                }
            }
        };
        if let Some(c) = self.cache.as_mut() {
            c.insert(*g, value);
        }
        value
    }
}

/// `φ(H) = (-1)^{v-1} T_H(1, 0) / v!`.
pub fn ursell(h: &SmallGraph) -> Result<Rational> {
    if !h.is_connected() || h.order() == 0 {
        return Err(Error::Disconnected);
    }
    let t = Tutte::new(false).t10(h);
    let fact: u64 = (1..=h.order() as u64).product();
    let sign = if h.order() % 2 == 1 { 1 } else { -1 };
    let phi = Rational::new((sign * t as i64).into(), (fact as i64).into());
    if t == 0 {
        return Err(Error::IdentityViolation("T(1,0) vanished on a connected graph".into()));
    }
    Ok(phi)
}

/// Acyclic orientations of `h` whose only sink is `sink`, by brute force
/// over all `2^|E|` orientations.
pub fn acyclic_orientations_unique_sink(h: &SmallGraph, sink: usize) -> u64 {
    let edges = h.edges();
    assert!(edges.len() < 32, "brute force over orientations is for small graphs");
    let n = h.order();
    let mut count = 0;
    for mask in 0u32..1 << edges.len() {
        let mut out = vec![0u16; n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                out[a] |= 1 << b;
            } else {
                out[b] |= 1 << a;
            }
        }
        if (0..n).any(|v| v != sink && out[v] == 0) || out[sink] != 0 {
            continue;
        }
        // acyclic iff repeatedly deleting sinks empties the graph
        let mut alive: u16 = ((1u32 << n) - 1) as u16;
        loop {
            let sinks: u16 = (0..n).filter(|&v| alive >> v & 1 == 1 && out[v] & alive == 0).fold(0, |m, v| m | 1 << v);
            if sinks == 0 {
                break;
            }
            alive &= !sinks;
        }
        if alive == 0 {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    #[test]
    fn small_values() {
        assert_eq!(ursell(&SmallGraph::empty(1)).unwrap(), rat(1, 1));
        assert_eq!(ursell(&SmallGraph::complete(2)).unwrap(), rat(-1, 2));
        assert_eq!(ursell(&SmallGraph::complete(3)).unwrap(), rat(1, 3));
        assert!(matches!(ursell(&SmallGraph::empty(2)), Err(Error::Disconnected)));
        assert_eq!(acyclic_orientations_unique_sink(&SmallGraph::empty(1), 0), 1);
        assert_eq!(acyclic_orientations_unique_sink(&SmallGraph::complete(2), 0), 1);
        assert_eq!(acyclic_orientations_unique_sink(&SmallGraph::complete(3), 0), 2);
    }

    #[test]
    fn known_tutte_values() {
        // T_{K_n}(1,0) = (n-1)!, T_{C_n}(1,0) = n-1, trees give 1
        let mut tutte = Tutte::new(false);
        for n in 1..=7 {
            let fact: u64 = (1..n as u64).product();
            assert_eq!(tutte.t10(&SmallGraph::complete(n)), fact.max(1));
        }
        let c5 = SmallGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(tutte.t10(&c5), 4);
        let path = SmallGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(tutte.t10(&path), 1);
    }

    #[test]
    fn cache_does_not_change_values() {
        let mut plain = Tutte::new(false);
        let mut cached = Tutte::new(true);
        for mask in 0u32..1 << 10 {
            let mut g = SmallGraph::empty(5);
            let mut k = 0;
            for a in 0..5 {
                for b in a + 1..5 {
                    if mask >> k & 1 == 1 {
                        g.add_edge(a, b);
                    }
                    k += 1;
                }
            }
            if g.is_connected() {
                assert_eq!(plain.t10(&g), cached.t10(&g));
            }
        }
    }
}
