//! Cartesian products of small regular bipartite base graphs.
//!
//! [`ProductSpec`] works with arbitrary base graphs and plain coordinate
//! vectors; it backs the brute-force oracles. [`Window`] is the packed
//! special case `K_{j,j}^{2j}` used by the compressed-set enumeration.

mod packed;

pub use packed::{Point, Window, MAX_WINDOW_J};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A connected, regular, bipartite graph on `0..n` whose even labels form
/// one bipartition class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGraph {
    name: String,
    adj: Vec<Vec<u32>>,
}

impl BaseGraph {
    pub fn new(name: impl Into<String>, n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let name = name.into();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n || a == b {
                return Err(Error::InvalidBaseGraph(format!("{name}: bad edge {a}-{b}")));
            }
            if (a ^ b) & 1 == 0 {
                return Err(Error::InvalidBaseGraph(format!(
                    "{name}: edge {a}-{b} joins labels of equal parity"
                )));
            }
            if !adj[a as usize].contains(&b) {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = BaseGraph { name, adj };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.adj.len();
        if n < 2 {
            return Err(Error::InvalidBaseGraph(format!("{}: needs at least 2 vertices", self.name)));
        }
        let d = self.adj[0].len();
        if self.adj.iter().any(|l| l.len() != d) {
            return Err(Error::InvalidBaseGraph(format!("{}: not regular", self.name)));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w as usize);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidBaseGraph(format!("{}: not connected", self.name)));
        }
        Ok(())
    }

    /// `K_{s,s}` on labels `0..2s`.
    pub fn complete_bipartite(s: u32) -> Result<Self> {
        let mut edges = Vec::new();
        for a in (0..2 * s).step_by(2) {
            for b in (1..2 * s).step_by(2) {
                edges.push((a, b));
            }
        }
        Self::new(format!("Kss:{s}"), 2 * s as usize, &edges)
    }

    /// The cycle `C_n` for even `n >= 4`, labelled in cyclic order.
    pub fn even_cycle(n: u32) -> Result<Self> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::InvalidBaseGraph(format!("C:{n}: need an even length >= 4")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(format!("C:{n}"), n as usize, &edges)
    }

    /// Whitespace-separated `a b` pairs, one per line; `#` starts a comment.
    pub fn from_edge_list(name: impl Into<String>, text: &str) -> Result<Self> {
        let name = name.into();
        let mut edges = Vec::new();
        let mut n = 0;
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<u32> = line
                .split_whitespace()
                .map(|x| x.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidBaseGraph(format!("{name}: bad line {line:?}")))?;
            if nums.len() != 2 {
                return Err(Error::InvalidBaseGraph(format!("{name}: bad line {line:?}")));
            }
            n = n.max(nums[0].max(nums[1]) as usize + 1);
            edges.push((nums[0], nums[1]));
        }
        Self::new(name, n, &edges)
    }

    /// `Kss:<s>`, `C:<n>`, or a path to an edge-list file.
    pub fn from_token(token: &str) -> Result<Self> {
        let bad = || Error::InvalidBaseGraph(format!("cannot parse base graph token {token:?}"));
        if let Some(s) = token.strip_prefix("Kss:") {
            return Self::complete_bipartite(s.parse().map_err(|_| bad())?);
        }
        if let Some(n) = token.strip_prefix("C:") {
            return Self::even_cycle(n.parse().map_err(|_| bad())?);
        }
        let path = Path::new(token);
        if path.is_file() {
            let text = std::fs::read_to_string(path)?;
            return Self::from_edge_list(token, &text);
        }
        Err(bad())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self) -> usize {
        self.adj[0].len()
    }

    pub fn neighbors(&self, x: u32) -> &[u32] {
        &self.adj[x as usize]
    }
}

/// An ordered list of base graphs `H_1, …, H_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpec {
    bases: Vec<BaseGraph>,
}

impl ProductSpec {
    pub fn new(bases: Vec<BaseGraph>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::InvalidInput("a product needs at least one base graph".into()));
        }
        Ok(ProductSpec { bases })
    }

    pub fn power(base: BaseGraph, t: usize) -> Result<Self> {
        Self::new(vec![base; t])
    }

    /// `K_{s,s}^t`.
    pub fn kss_power(s: u32, t: usize) -> Result<Self> {
        Self::power(BaseGraph::complete_bipartite(s)?, t)
    }

    /// Parses a product token. Factors are comma separated; each factor is a
    /// base-graph token optionally followed by `^k`. A few names are built
    /// in: `C4` (= `Kss:1^2`), `C6` (= `C:6`), `Q<t>` (= `Kss:1^t`),
    /// `K22` (= `Kss:2`), `K22^2`, `K22xK11`.
    pub fn from_token(token: &str) -> Result<Self> {
        let expanded = match token {
            "C4" => "Kss:1^2".to_string(),
            "C6" => "C:6".to_string(),
            "K22" => "Kss:2".to_string(),
            "K22^2" => "Kss:2^2".to_string(),
            "K22xK11" => "Kss:2,Kss:1".to_string(),
            tok => match tok.strip_prefix('Q').and_then(|d| d.parse::<usize>().ok()) {
                Some(d) => format!("Kss:1^{d}"),
                None => tok.to_string(),
            },
        };
        let mut bases = Vec::new();
        for factor in expanded.split(',') {
            let (base, k) = match factor.rsplit_once('^') {
                Some((b, k)) => (
                    b,
                    k.parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad power in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let g = BaseGraph::from_token(base)?;
            bases.extend(std::iter::repeat(g).take(k));
        }
        Self::new(bases)
    }

    pub fn bases(&self) -> &[BaseGraph] {
        &self.bases
    }

    /// Number of base graphs `t`.
    pub fn dims(&self) -> usize {
        self.bases.len()
    }

    /// Largest base graph order `m`.
    pub fn max_base_order(&self) -> usize {
        self.bases.iter().map(BaseGraph::order).max().unwrap()
    }

    pub fn degree(&self) -> usize {
        self.bases.iter().map(BaseGraph::degree).sum()
    }

    pub fn order(&self) -> usize {
        self.bases.iter().map(BaseGraph::order).product()
    }

    pub fn root(&self) -> Vertex {
        Vertex(vec![0; self.dims()])
    }

    pub fn check(&self, v: &Vertex) -> Result<()> {
        if v.0.len() != self.dims() {
            return Err(Error::WrongArity(v.0.clone()));
        }
        for (i, (&x, g)) in v.0.iter().zip(&self.bases).enumerate() {
            if x as usize >= g.order() {
                return Err(Error::CoordinateOutOfRange { vertex: v.0.clone(), coord: i });
            }
        }
        Ok(())
    }

    /// All vertices, in lexicographic order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = vec![Vertex(Vec::new())];
        for g in &self.bases {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..g.order() as u32).map(move |x| {
                        let mut c = v.0.clone();
                        c.push(x);
                        Vertex(c)
                    })
                })
                .collect();
        }
        out
    }

    fn neighbors_unchecked(&self, v: &Vertex) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.degree());
        for (i, g) in self.bases.iter().enumerate() {
            for &y in g.neighbors(v.0[i]) {
                let mut w = v.clone();
                w.0[i] = y;
                out.push(w);
            }
        }
        out
    }

    /// Vertices joined to `v` by one base-graph edge in one coordinate.
    pub fn neighbors(&self, v: &Vertex) -> Result<VertexSet> {
        self.check(v)?;
        Ok(VertexSet::from_iter(self.neighbors_unchecked(v)))
    }

    /// Vertices at distance 1 or 2 from `set`, excluding `set` itself.
    pub fn second_neighborhood(&self, set: &VertexSet) -> Result<VertexSet> {
        self.same_class(set)?;
        let mut out = BTreeSet::new();
        for v in set.iter() {
            for w in self.neighbors_unchecked(v) {
                for x in self.neighbors_unchecked(&w) {
                    out.insert(x);
                }
                out.insert(w);
            }
        }
        for v in set.iter() {
            out.remove(v);
        }
        Ok(VertexSet(out.into_iter().collect()))
    }

    fn same_class(&self, set: &VertexSet) -> Result<()> {
        for v in set.iter() {
            self.check(v)?;
        }
        let mut classes = set.iter().map(Vertex::class);
        if let Some(c) = classes.next() {
            if classes.any(|d| d != c) {
                return Err(Error::MixedClass);
            }
        }
        Ok(())
    }

    /// Graph distance between two vertices: the sum of base-graph distances.
    pub fn distance(&self, a: &Vertex, b: &Vertex) -> usize {
        a.0.iter()
            .zip(&b.0)
            .zip(&self.bases)
            .map(|((&x, &y), g)| base_distance(g, x, y))
            .sum()
    }

    /// Whether `set` is connected in the square of the graph. Empty sets
    /// and singletons are.
    pub fn is_two_linked(&self, set: &VertexSet) -> bool {
        let items = set.as_slice();
        if items.len() <= 1 {
            return true;
        }
        let mut seen = vec![false; items.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..items.len() {
                if !seen[j] && self.distance(&items[i], &items[j]) <= 2 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

fn base_distance(g: &BaseGraph, x: u32, y: u32) -> usize {
    if x == y {
        return 0;
    }
    let mut dist = vec![usize::MAX; g.order()];
    dist[x as usize] = 0;
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                if w == y {
                    return dist[w as usize];
                }
                queue.push_back(w);
            }
        }
    }
    unreachable!("base graphs are connected")
}

/// Coordinates `(x_1, …, x_t)` of a product vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(pub Vec<u32>);

impl Vertex {
    pub fn new(coords: Vec<u32>) -> Self {
        Vertex(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// 0 for the class of the all-zero vertex, 1 for the other class.
    pub fn class(&self) -> u32 {
        self.0.iter().fold(0, |acc, x| acc ^ (x & 1))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Sorted, duplicate-free list of vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.0.binary_search(v).is_ok()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort();
        v.dedup();
        VertexSet(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Zero-based coordinates in which some member of `set` differs from `root`.
pub fn active_coordinates(set: &VertexSet, root: &Vertex) -> Result<BTreeSet<usize>> {
    if !set.contains(root) {
        return Err(Error::RootMissing);
    }
    Ok((0..root.0.len())
        .filter(|&i| set.iter().any(|v| v.0[i] != root.0[i]))
        .collect())
}
