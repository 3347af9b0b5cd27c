use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::{ProductSpec, Vertex};

/// Default bound on `|V(G)|` for exhaustive enumeration.
pub const DEFAULT_LIMIT: usize = 24;

/// Vertex subsets as bitmasks over vertex indices.
pub type Mask = u64;

/// A bipartition class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    O,
    E,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::O, Side::E];

    pub fn other(self) -> Side {
        match self {
            Side::O => Side::E,
            Side::E => Side::O,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::O => "O",
            Side::E => "E",
        })
    }
}

/// A regular, balanced bipartite graph on at most 64 vertices.
///
/// For graphs built from a product, `E` holds the vertices whose
/// coordinate sum is even (the root's class) and `O` the rest.
#[derive(Clone, Debug)]
pub struct ExplicitGraph {
    name: String,
    labels: Vec<String>,
    adj: Vec<Mask>,
    odd: Mask,
    even: Mask,
    limit: usize,
}

pub(crate) fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(v)
    })
}

impl ExplicitGraph {
    /// Builds a graph from an edge list on `0..n`. Vertex 0 lies in `E`.
    pub fn new(name: impl Into<String>, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let name = name.into();
        let bad = |why: &str| Error::InvalidInput(format!("{name}: {why}"));
        if n == 0 || n > 64 {
            return Err(bad("needs between 1 and 64 vertices"));
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(bad("edge endpoint out of range or loop"));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        // two-colour every component, starting each at its least vertex
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in bits(adj[v]) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!colour[v].unwrap());
                            queue.push_back(w);
                        }
                        Some(c) if c == colour[v].unwrap() => return Err(bad("not bipartite")),
                        _ => {}
                    }
                }
            }
        }
        let odd = (0..n).filter(|&v| colour[v] == Some(true)).fold(0, |m, v| m | 1 << v);
        let labels = (0..n).map(|v| v.to_string()).collect();
        Self::assemble(name, labels, adj, odd)
    }

    fn assemble(name: String, labels: Vec<String>, adj: Vec<Mask>, odd: Mask) -> Result<Self> {
        let n = adj.len();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let even = all & !odd;
        let degree = adj[0].count_ones();
        if adj.iter().any(|a| a.count_ones() != degree) {
            return Err(Error::InvalidInput(format!("{name}: not regular")));
        }
        if odd.count_ones() != even.count_ones() {
            return Err(Error::InvalidInput(format!("{name}: classes are unbalanced")));
        }
        for v in 0..n {
            let own = if odd >> v & 1 == 1 { odd } else { even };
            if adj[v] & own != 0 {
                return Err(Error::InvalidInput(format!("{name}: edge inside a class")));
            }
        }
        Ok(ExplicitGraph { name, labels, adj, odd, even, limit: DEFAULT_LIMIT })
    }

    pub fn from_product(spec: &ProductSpec) -> Result<Self> {
        let n = spec.order();
        if n > 64 {
            return Err(Error::SizeLimit { n, limit: 64 });
        }
        let vertices = spec.vertices();
        let index: BTreeMap<&Vertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![0u64; n];
        let mut odd = 0;
        for (i, v) in vertices.iter().enumerate() {
            for w in spec.neighbors(v)?.iter() {
                adj[i] |= 1 << index[w];
            }
            if v.class() == 1 {
                odd |= 1 << i;
            }
        }
        let labels = vertices.iter().map(|v| format!("{v:?}")).collect();
        Self::assemble(product_name(spec), labels, adj, odd)
    }

    pub fn from_token(token: &str) -> Result<Self> {
        let mut g = Self::from_product(&ProductSpec::from_token(token)?)?;
        g.name = token.to_string();
        Ok(g)
    }

    /// Raises or lowers the enumeration bound.
    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self) -> usize {
        self.adj[0].count_ones() as usize
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels_of(&self, m: Mask) -> Vec<String> {
        bits(m).map(|v| self.labels[v].clone()).collect()
    }

    pub fn adjacency(&self, v: usize) -> Mask {
        self.adj[v]
    }

    pub fn side(&self, side: Side) -> Mask {
        match side {
            Side::O => self.odd,
            Side::E => self.even,
        }
    }

    pub fn all(&self) -> Mask {
        self.odd | self.even
    }

    pub fn side_of(&self, v: usize) -> Side {
        if self.odd >> v & 1 == 1 {
            Side::O
        } else {
            Side::E
        }
    }

    /// `N(A)`.
    pub fn neighborhood(&self, a: Mask) -> Mask {
        bits(a).fold(0, |m, v| m | self.adj[v])
    }

    pub fn is_independent(&self, a: Mask) -> bool {
        bits(a).all(|v| self.adj[v] & a == 0)
    }

    /// Largest `|N(u) ∩ N(v)|` over distinct `u, v`.
    pub fn co_degree(&self) -> usize {
        let n = self.order();
        let mut best = 0;
        for u in 0..n {
            for v in u + 1..n {
                best = best.max((self.adj[u] & self.adj[v]).count_ones() as usize);
            }
        }
        best
    }

    pub(crate) fn check_limit(&self) -> Result<()> {
        if self.order() > self.limit {
            return Err(Error::SizeLimit { n: self.order(), limit: self.limit });
        }
        Ok(())
    }
}

fn product_name(spec: &ProductSpec) -> String {
    spec.bases().iter().map(|b| b.name()).collect::<Vec<_>>().join("□")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_are_split_by_parity() {
        let c4 = ExplicitGraph::from_token("C4").unwrap();
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.degree(), 2);
        assert_eq!(c4.side(Side::E).count_ones(), 2);
        assert_eq!(c4.side_of(0), Side::E);
        let q3 = ExplicitGraph::from_token("Q3").unwrap();
        assert_eq!((q3.order(), q3.degree(), q3.co_degree()), (8, 3, 2));
        let k = ExplicitGraph::from_token("K22^2").unwrap();
        assert_eq!((k.order(), k.degree(), k.co_degree()), (16, 4, 2));
    }

    #[test]
    fn edge_lists_are_validated() {
        let c4 = ExplicitGraph::new("c4", 4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.side(Side::E), 0b0101);
        assert!(ExplicitGraph::new("tri", 3, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(ExplicitGraph::new("path", 3, &[(0, 1), (1, 2)]).is_err());
        let sized = ExplicitGraph::from_token("Q3").unwrap().with_limit(4);
        assert!(matches!(sized.check_limit(), Err(Error::SizeLimit { n: 8, limit: 4 })));
    }
}
