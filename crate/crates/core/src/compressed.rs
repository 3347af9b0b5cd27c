//! Enumeration of compressed 2-linked sets in the window `K_{j,j}^{2j}`.
//!
//! A set containing the all-zero root is compressed when its active
//! coordinates are `0..a` and, in each active coordinate, the odd values it
//! uses are `1, 3, …` and the even values are `0, 2, …` (both prefixes).
//! Every 2-linked set of size at most `j` in any `K_{s,s}^t` is the image of
//! exactly one compressed set under coordinate and value relabelling, so the
//! window suffices for all `s` and `t`.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::polyring::{binom_affine, Polynomial, Rational, Var};
use crate::window::{Point, ProductSpec, Vertex, VertexSet, Window};

const ODD: u16 = 0xaaaa;
const EVEN: u16 = 0x5555;

/// Used values per coordinate, bit `x` of entry `i` set when some vertex has
/// value `x` in coordinate `i`.
type Masks = [u16; 16];

/// Which subtrees the enumeration may skip. All rules are exact: the
/// emitted family does not depend on the choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Prune {
    Off,
    /// Stop extending when the inactive coordinates below the largest active
    /// one outnumber `2(j - |S|)`.
    ActivePrefix,
    /// Stop extending when inactive coordinates plus missing values in
    /// active coordinates outnumber `2(j - |S|)`. Each new vertex adds at
    /// most two (coordinate, value) pairs, so no compressed superset exists.
    #[default]
    Deficit,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GenOptions {
    pub prune: Prune,
    /// Additionally require `|O_i| + |E_i|` to be non-increasing in `i`.
    /// Each representative then stands for `a! / ∏ m_k!` base-compressed
    /// sets, `m_k` counting active coordinates with `|O_i| + |E_i| = k`, and
    /// its embedding count carries that factor.
    pub monotone: bool,
}

/// A compressed set in window coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompressedSet {
    points: Vec<Point>,
    active: usize,
    profile: Vec<(u8, u8)>,
    orbit: u64,
}

impl CompressedSet {
    fn from_parts(points: &[Point], masks: &Masks, monotone: bool) -> Self {
        let mut points = points.to_vec();
        points.sort_unstable();
        let active = masks.iter().take_while(|&&m| m & !1 != 0).count();
        let profile = masks[..active]
            .iter()
            .map(|&m| ((m & ODD).count_ones() as u8, (m & EVEN).count_ones() as u8))
            .collect::<Vec<_>>();
        let orbit = if monotone { orbit_factor(&profile) } else { 1 };
        CompressedSet { points, active, profile, orbit }
    }

    /// Vertices in increasing order; the root `Point(0)` comes first.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// `|A(S)|`; the active coordinates are `0..active`.
    pub fn active(&self) -> usize {
        self.active
    }

    /// `(|O_i|, |E_i|)` for each active coordinate `i`.
    pub fn profile(&self) -> &[(u8, u8)] {
        &self.profile
    }

    pub fn to_vertex_set(&self, window: &Window) -> VertexSet {
        self.points.iter().map(|&p| window.to_vertex(p)).collect()
    }

    /// Number of base-compressed sets this set represents: 1 unless the
    /// monotone convention is in force.
    pub fn orbit(&self) -> u64 {
        self.orbit
    }

    /// Embeddings with a fixed root image, as a polynomial in `s`, `t`,
    /// summed over the represented base-compressed sets.
    pub fn embedding_count_half(&self) -> Polynomial {
        embedding_count_half(self.active, &self.profile).scale(&Rational::from_integer(self.orbit.into()))
    }
}

/// `a! / ∏ m_k!` where `m_k` counts coordinates with `|O_i| + |E_i| = k`.
pub fn orbit_factor(profile: &[(u8, u8)]) -> u64 {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    let mut sizes: Vec<u8> = profile.iter().map(|&(o, e)| o + e).collect();
    sizes.sort_unstable();
    let mut denom = 1;
    for run in sizes.chunk_by(|a, b| a == b) {
        denom *= fact(run.len());
    }
    fact(sizes.len()) / denom
}

/// `C(t, a) · ∏ C(s, |O_i|) · C(s - 1, |E_i| - 1)`.
pub fn embedding_count_half(active: usize, profile: &[(u8, u8)]) -> Polynomial {
    let mut p = binom_affine(Var::T, 0, active as u32);
    for &(o, e) in profile {
        p = &p * &binom_affine(Var::S, 0, o as u32);
        p = &p * &binom_affine(Var::S, -1, e as u32 - 1);
    }
    p
}

fn add_point(masks: &Masks, window: &Window, p: Point) -> Masks {
    let mut m = *masks;
    for (i, slot) in m.iter_mut().enumerate().take(window.dims()) {
        *slot |= 1 << window.coord(p, i);
    }
    m
}

/// (inactive coordinates below the largest active one, missing values).
fn deficit(masks: &Masks) -> (u32, u32) {
    let mut active = 0;
    let mut top = 0;
    let mut missing = 0;
    for (i, &m) in masks.iter().enumerate() {
        if m & !1 == 0 {
            continue;
        }
        active += 1;
        top = i as u32 + 1;
        let odd = m & ODD;
        if odd != 0 {
            let hi = 15 - odd.leading_zeros();
            missing += (hi + 1) / 2 - odd.count_ones();
        }
        let even = m & EVEN;
        let hi = 15 - even.leading_zeros();
        missing += hi / 2 + 1 - even.count_ones();
    }
    (top - active, missing)
}

fn masks_compressed(masks: &Masks, monotone: bool) -> bool {
    if deficit(masks) != (0, 0) {
        return false;
    }
    if monotone {
        let used: Vec<u32> = masks.iter().take_while(|&&m| m & !1 != 0).map(|m| m.count_ones()).collect();
        return used.windows(2).all(|w| w[0] >= w[1]);
    }
    true
}

/// Whether `set` is compressed with respect to the all-zero `root`.
pub fn is_compressed(spec: &ProductSpec, set: &VertexSet, root: &Vertex, j: usize) -> Result<bool> {
    if root.coords().iter().any(|&x| x != 0) {
        return Err(Error::InvalidInput("the root must be the all-zero vertex".into()));
    }
    crate::window::active_coordinates(set, root)?;
    if set.iter().any(|v| v.class() != root.class()) {
        return Err(Error::MixedClass);
    }
    if !spec.is_two_linked(set) {
        return Err(Error::InvalidInput("set is not 2-linked".into()));
    }
    let dims = spec.dims();
    let mut used: Vec<u64> = vec![0; dims];
    for v in set.iter() {
        for (i, &x) in v.coords().iter().enumerate() {
            if x >= 64 {
                return Ok(false);
            }
            used[i] |= 1 << x;
        }
    }
    let prefix = |bits: u64| bits & (bits + 1) == 0;
    let compress = |bits: u64, parity: u32| {
        (0..32).filter(|k| bits >> (2 * k + parity) & 1 == 1).fold(0u64, |acc, k| acc | 1 << k)
    };
    let active: Vec<usize> = (0..dims).filter(|&i| used[i] & !1 != 0).collect();
    if active.iter().enumerate().any(|(k, &i)| k != i) || active.len() > 2 * j {
        return Ok(false);
    }
    Ok(active
        .iter()
        .all(|&i| prefix(compress(used[i], 1)) && prefix(compress(used[i], 0))))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenStats {
    /// Invocations of the recursive procedure, the initial one included.
    pub calls: u64,
    /// `emitted[k]` is the number of compressed sets of size `k`.
    pub emitted: Vec<u64>,
    pub max_depth: usize,
}

impl GenStats {
    fn new(j: usize) -> Self {
        GenStats { calls: 0, emitted: vec![0; j + 1], max_depth: 0 }
    }

    fn merge(mut self, other: GenStats) -> Self {
        self.calls += other.calls;
        for (a, b) in self.emitted.iter_mut().zip(other.emitted) {
            *a += b;
        }
        self.max_depth = self.max_depth.max(other.max_depth);
        self
    }

    pub fn total(&self) -> u64 {
        self.emitted.iter().sum()
    }
}

/// Observer of the recursion. `visit` sees every call's `(S, Q, R)`.
pub trait Sink {
    fn emit(&mut self, set: &CompressedSet);
    fn visit(&mut self, _s: &[Point], _q: &[Point], _r: &FxHashSet<Point>) {}
    const VISITS: bool = false;
}

impl<F: FnMut(&CompressedSet)> Sink for F {
    fn emit(&mut self, set: &CompressedSet) {
        self(set)
    }
}

struct Frame<'a, K: Sink> {
    window: &'a Window,
    j: usize,
    opts: GenOptions,
    r: FxHashSet<Point>,
    stats: GenStats,
    sink: K,
}

impl<K: Sink> Frame<'_, K> {
    fn extends(&self, masks: &Masks, size: usize) -> bool {
        if size >= self.j {
            return false;
        }
        let budget = 2 * (self.j - size) as u32;
        match self.opts.prune {
            Prune::Off => true,
            Prune::ActivePrefix => deficit(masks).0 <= budget,
            Prune::Deficit => {
                let (c, v) = deficit(masks);
                c + v <= budget
            }
        }
    }

    fn enter(&mut self, s: &[Point], masks: &Masks, q: &[Point]) {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(s.len());
        if K::VISITS {
            self.sink.visit(s, q, &self.r);
        }
        if masks_compressed(masks, self.opts.monotone) {
            self.stats.emitted[s.len()] += 1;
            self.sink.emit(&CompressedSet::from_parts(s, masks, self.opts.monotone));
        }
    }

    /// Runs the loop body for `q[i]`: the recursive call on
    /// `(Q[i+1..] ++ N²(v) \ R, R ∪ N²(v), S ∪ {v})`.
    fn child(&mut self, s: &mut Vec<Point>, masks: &Masks, q: &[Point], i: usize) {
        let v = q[i];
        let m2 = add_point(masks, self.window, v);
        s.push(v);
        if self.extends(&m2, s.len()) || K::VISITS {
            let added: Vec<Point> =
                self.window.ball2(v).into_iter().filter(|p| !self.r.contains(p)).collect();
            self.r.extend(added.iter().copied());
            let mut q2 = Vec::with_capacity(q.len() - i - 1 + added.len());
            q2.extend_from_slice(&q[i + 1..]);
            q2.extend_from_slice(&added);
            self.enter(s, &m2, &q2);
            if self.extends(&m2, s.len()) {
                for k in 0..q2.len() {
                    self.child(s, &m2, &q2, k);
                }
            }
            for p in &added {
                self.r.remove(p);
            }
        } else {
            // A call that neither extends nor is observed only tests S.
            self.enter(s, &m2, &[]);
        }
        s.pop();
    }
}

/// Configured enumeration of compressed sets of size at most `j`.
#[derive(Clone, Debug)]
pub struct Generator {
    window: Window,
    j: usize,
    opts: GenOptions,
}

impl Generator {
    pub fn new(j: usize, opts: GenOptions) -> Result<Self> {
        Ok(Generator { window: Window::new(j.max(1))?, j, opts })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    fn root_frame<K: Sink>(&self, sink: K) -> (Frame<'_, K>, Vec<Point>, Masks, Vec<Point>) {
        let root = Point(0);
        let q0 = self.window.ball2(root);
        let mut r: FxHashSet<Point> = q0.iter().copied().collect();
        r.insert(root);
        let mut masks = [0u16; 16];
        masks[..self.window.dims()].fill(1);
        let frame = Frame { window: &self.window, j: self.j, opts: self.opts, r, stats: GenStats::new(self.j), sink };
        (frame, vec![root], masks, q0)
    }

    /// Runs sequentially, in deterministic order.
    pub fn run<K: Sink>(&self, sink: K) -> (K, GenStats) {
        let (mut frame, mut s, masks, q0) = self.root_frame(sink);
        frame.enter(&s, &masks, &q0);
        if frame.extends(&masks, 1) {
            for i in 0..q0.len() {
                frame.child(&mut s, &masks, &q0, i);
            }
        }
        (frame.sink, frame.stats)
    }

    pub fn for_each(&self, f: impl FnMut(&CompressedSet)) -> GenStats {
        self.run(f).1
    }

    pub fn collect(&self) -> (Vec<CompressedSet>, GenStats) {
        let mut out = Vec::new();
        let stats = self.for_each(|c| out.push(c.clone()));
        (out, stats)
    }

    /// Explores the root's subtrees in parallel. Each worker folds the sets
    /// it meets into its own `T`; the partial results are combined with
    /// `reduce`, which must be associative and commutative.
    pub fn par_fold<T, I, F, R>(&self, init: I, fold: F, reduce: R) -> (T, GenStats)
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(&mut T, &CompressedSet) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        let (mut frame, s, masks, q0) = self.root_frame(|_: &CompressedSet| {});
        frame.enter(&s, &masks, &q0);
        let mut root_acc = init();
        if masks_compressed(&masks, self.opts.monotone) {
            fold(&mut root_acc, &CompressedSet::from_parts(&s, &masks, self.opts.monotone));
        }
        let root_stats = frame.stats.clone();
        if self.j <= 1 {
            return (root_acc, root_stats);
        }
        let r0 = frame.r;
        let (acc, stats) = (0..q0.len())
            .into_par_iter()
            .map(|i| {
                let mut acc = init();
                let stats = {
                    let sink = |c: &CompressedSet| fold(&mut acc, c);
                    let mut f = Frame {
                        window: &self.window,
                        j: self.j,
                        opts: self.opts,
                        r: r0.clone(),
                        stats: GenStats::new(self.j),
                        sink,
                    };
                    let mut s = vec![Point(0)];
                    f.child(&mut s, &masks, &q0, i);
                    f.stats
                };
                (acc, stats)
            })
            .reduce(|| (init(), GenStats::new(self.j)), |a, b| (reduce(a.0, b.0), a.1.merge(b.1)));
        (reduce(root_acc, acc), root_stats.merge(stats))
    }
}

/// All compressed sets of size at most `j`, in emission order.
pub fn generate_compressed(j: usize, prune: bool) -> Result<Vec<CompressedSet>> {
    if j == 0 {
        return Err(Error::InvalidInput("j must be positive".into()));
    }
    let prune = if prune { Prune::Deficit } else { Prune::Off };
    Ok(Generator::new(j, GenOptions { prune, monotone: false })?.collect().0)
}

/// Number of compressed sets of each size `0..=j`, computed in parallel.
pub fn count_compressed(j: usize, opts: GenOptions) -> Result<GenStats> {
    if j == 0 {
        return Err(Error::InvalidInput("j must be positive".into()));
    }
    Ok(Generator::new(j, opts)?.par_fold(|| (), |_, _| {}, |_, _| ()).1)
}
