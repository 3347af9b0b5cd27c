use super::affine::{neighborhood_affine, AffineSize};
use super::ursell::SmallGraph;
use crate::window::{Point, Window};

/// A 2-linked subset of a compressed set, as a bitmask over its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub mask: u16,
    pub size: usize,
    pub affine: AffineSize,
    /// Members of the set within distance 2 of the candidate, itself included.
    touch: u16,
}

/// A multiset of candidates, as `(candidate index, multiplicity)` pairs
/// with strictly increasing indices.
pub type Cover = [(usize, usize)];

/// The candidate polymers of one set, precomputed.
///
/// Non-singletons come first, ordered lexicographically by their sorted
/// member indices; the singletons follow in vertex order.
#[derive(Clone, Debug)]
pub struct CoverContext {
    points: Vec<Point>,
    candidates: Vec<Candidate>,
    singles_from: usize,
}

impl CoverContext {
    /// `points` must be 2-linked, in one class, and at most 16 long.
    pub fn new(window: &Window, points: &[Point]) -> Self {
        let k = points.len();
        assert!(k <= 16);
        let near: Vec<u16> = points
            .iter()
            .map(|&p| {
                points
                    .iter()
                    .enumerate()
                    .filter(|&(_, &q)| window.distance(p, q) <= 2)
                    .fold(0u16, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let touch_of = |mask: u16| {
            (0..k).filter(|&i| mask >> i & 1 == 1).fold(0u16, |m, i| m | near[i])
        };
        let linked = |mask: u16| {
            let mut seen = 1u16 << mask.trailing_zeros();
            loop {
                let grow = touch_of(seen) & mask;
                if grow == seen {
                    return seen == mask;
                }
                seen = grow;
            }
        };
        let members = |mask: u16| -> Vec<usize> { (0..k).filter(|&i| mask >> i & 1 == 1).collect() };
        let make = |mask: u16| {
            let pts: Vec<Point> = members(mask).into_iter().map(|i| points[i]).collect();
            Candidate { mask, size: pts.len(), affine: neighborhood_affine(window, &pts), touch: touch_of(mask) }
        };
        let mut multi: Vec<u16> =
            (1u32..1 << k).map(|m| m as u16).filter(|m| m.count_ones() > 1 && linked(*m)).collect();
        multi.sort_by_key(|&m| members(m));
        let singles_from = multi.len();
        let candidates =
            multi.into_iter().chain((0..k).map(|i| 1u16 << i)).map(make).collect();
        CoverContext { points: points.to_vec(), candidates, singles_from }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn incompatible(&self, a: usize, b: usize) -> bool {
        self.candidates[a].touch & self.candidates[b].mask != 0
    }

    /// Calls `f` once per multiset of candidates whose union is the whole
    /// set and whose sizes, with multiplicity, sum to `j`.
    pub fn for_each_cover(&self, j: usize, mut f: impl FnMut(&Cover)) -> u64 {
        let mut chosen = Vec::new();
        let mut count = 0;
        self.grow(j, 0, 0, 0, &mut chosen, &mut |c| {
            count += 1;
            f(c)
        });
        count
    }

    fn full(&self) -> u16 {
        ((1u32 << self.points.len()) - 1) as u16
    }

    fn grow(
        &self,
        j: usize,
        start: usize,
        covered: u16,
        total: usize,
        chosen: &mut Vec<(usize, usize)>,
        f: &mut dyn FnMut(&Cover),
    ) {
        let missing = (self.full() & !covered).count_ones() as usize;
        if total + missing <= j {
            let mut extra = vec![0; self.points.len()];
            self.spread(j - total - missing, 0, covered, &mut extra, chosen, f);
        }
        for idx in start..self.singles_from {
            let cand = &self.candidates[idx];
            let now = covered | cand.mask;
            if total + cand.size + (self.full() & !now).count_ones() as usize > j {
                continue;
            }
            match chosen.last_mut() {
                Some((last, mult)) if *last == idx => *mult += 1,
                _ => chosen.push((idx, 1)),
            }
            self.grow(j, idx, now, total + cand.size, chosen, f);
            let last = chosen.last_mut().unwrap();
            if last.1 > 1 {
                last.1 -= 1;
            } else {
                chosen.pop();
            }
        }
    }

    /// Places `left` surplus singletons on vertices `from..` and emits.
    fn spread(
        &self,
        left: usize,
        from: usize,
        covered: u16,
        extra: &mut Vec<usize>,
        chosen: &mut Vec<(usize, usize)>,
        f: &mut dyn FnMut(&Cover),
    ) {
        let k = self.points.len();
        if left == 0 || from + 1 == k {
            if from < k {
                extra[from] += left;
            }
            let before = chosen.len();
            for v in 0..k {
                let mult = extra[v] + (covered >> v & 1 == 0) as usize;
                if mult > 0 {
                    chosen.push((self.singles_from + v, mult));
                }
            }
            f(chosen);
            chosen.truncate(before);
            if from < k {
                extra[from] -= left;
            }
            return;
        }
        for here in (0..=left).rev() {
            extra[from] += here;
            self.spread(left - here, from + 1, covered, extra, chosen, f);
            extra[from] -= here;
        }
    }

    /// The incompatibility graph of a cover, one node per polymer slot.
    pub fn incompatibility_graph(&self, cover: &Cover) -> SmallGraph {
        let slots: Vec<usize> = cover.iter().flat_map(|&(i, m)| std::iter::repeat(i).take(m)).collect();
        let mut g = SmallGraph::empty(slots.len());
        for a in 0..slots.len() {
            for b in a + 1..slots.len() {
                if self.incompatible(slots[a], slots[b]) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}

/// Ordered tuples realising a multiset: `k! / ∏ m_i!`.
pub fn ordered_tuple_count(cover: &Cover) -> u64 {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    let k: usize = cover.iter().map(|&(_, m)| m).sum();
    fact(k) / cover.iter().map(|&(_, m)| fact(m)).product::<u64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compressed::{GenOptions, Generator};

    fn expand(cover: &Cover) -> Vec<usize> {
        cover.iter().flat_map(|&(i, m)| std::iter::repeat(i).take(m)).collect()
    }

    #[test]
    fn named_examples() {
        let w = Window::new(2).unwrap();
        let root = CoverContext::new(&w, &[Point(0)]);
        let mut covers = Vec::new();
        root.for_each_cover(2, |c| covers.push(c.to_vec()));
        assert_eq!(covers, vec![vec![(0, 2)]]);
        assert_eq!(ordered_tuple_count(&covers[0]), 1);

        let s2 = [Point(0), w.with(w.with(Point(0), 0, 1), 1, 1)];
        let ctx = CoverContext::new(&w, &s2);
        let mut covers = Vec::new();
        ctx.for_each_cover(2, |c| covers.push(c.to_vec()));
        assert_eq!(covers.len(), 2);
        assert!(covers.contains(&vec![(0, 1)]));
        assert!(covers.contains(&vec![(1, 1), (2, 1)]));
        assert_eq!(ordered_tuple_count(&[(1, 1), (2, 1)]), 2);
        assert_eq!(ordered_tuple_count(&[(0, 1), (1, 1), (2, 1)]), 6);
    }

    /// Ordered tuples of candidates with union the whole set, total size
    /// `j` and connected incompatibility graph, counted directly.
    fn ordered_brute_force(ctx: &CoverContext, j: usize) -> u64 {
        fn go(ctx: &CoverContext, j: usize, tuple: &mut Vec<usize>, total: usize, out: &mut u64) {
            if total == j {
                let covered = tuple.iter().fold(0u16, |m, &i| m | ctx.candidates[i].mask);
                if covered == ctx.full() {
                    let mut g = SmallGraph::empty(tuple.len());
                    for a in 0..tuple.len() {
                        for b in a + 1..tuple.len() {
                            if ctx.incompatible(tuple[a], tuple[b]) {
                                g.add_edge(a, b);
                            }
                        }
                    }
                    if g.is_connected() {
                        *out += 1;
                    }
                }
                return;
            }
            for i in 0..ctx.candidates.len() {
                if total + ctx.candidates[i].size <= j {
                    tuple.push(i);
                    go(ctx, j, tuple, total + ctx.candidates[i].size, out);
                    tuple.pop();
                }
            }
        }
        let mut out = 0;
        go(ctx, j, &mut Vec::new(), 0, &mut out);
        out
    }

    #[test]
    fn multisets_match_ordered_tuples() {
        for j in 1..=3 {
            let g = Generator::new(j, GenOptions::default()).unwrap();
            let w = g.window().clone();
            g.for_each(|set| {
                let ctx = CoverContext::new(&w, set.points());
                let mut via_multisets = 0;
                let mut seen = std::collections::HashSet::new();
                ctx.for_each_cover(j, |c| {
                    via_multisets += ordered_tuple_count(c);
                    let mut e = expand(c);
                    e.sort_unstable();
                    assert!(seen.insert(e), "duplicate multiset");
                    assert!(ctx.incompatibility_graph(c).is_connected());
                    let size: usize = c.iter().map(|&(i, m)| m * ctx.candidates[i].size).sum();
                    assert_eq!(size, j);
                });
                assert_eq!(via_multisets, ordered_brute_force(&ctx, j));
            });
        }
    }

    #[test]
    fn cover_totals_for_small_levels() {
        let total = |j: usize, monotone: bool| {
            let g = Generator::new(j, GenOptions { monotone, ..Default::default() }).unwrap();
            let w = g.window().clone();
            let mut n = 0;
            g.for_each(|set| n += CoverContext::new(&w, set.points()).for_each_cover(j, |_| {}));
            n
        };
        assert_eq!(total(2, false), 5);
        assert_eq!(total(2, true), 5);
        assert_eq!(total(3, true), 151);
    }
}
