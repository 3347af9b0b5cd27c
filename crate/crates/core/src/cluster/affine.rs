use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{int, Polynomial, Var};
use crate::window::{Point, Vertex, VertexSet, Window};

/// `|N(S)| = a·st + b·s + c`, valid for `s >= |S|` and `t >= 2|S|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineSize {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl AffineSize {
    pub fn eval(&self, s: i64, t: i64) -> i64 {
        self.a * s * t + self.b * s + self.c
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let st = &Polynomial::var(Var::S) * &Polynomial::var(Var::T);
        &(&st.scale(&int(self.a)) + &Polynomial::var(Var::S).scale(&int(self.b))) + &Polynomial::constant(int(self.c))
    }
}

/// Neighbourhood size of a polymer given in window coordinates.
///
/// Every vertex has `st` neighbours. In coordinate `i` the members that
/// agree off `i` share their `s` neighbours there, so coordinate `i`
/// contributes `s` per group instead of `s` per vertex. A vertex `w` that
/// is a coordinate-`i` neighbour of one member and a coordinate-`k`
/// neighbour of another, `i != k`, is then counted once per such
/// coordinate; those surpluses make up `c`.
pub fn neighborhood_affine(window: &Window, polymer: &[Point]) -> AffineSize {
    let size = polymer.len() as i64;
    let dims = window.dims();
    let mut b = 0;
    let mut proj = Vec::with_capacity(polymer.len());
    for i in 0..dims {
        proj.clear();
        proj.extend(polymer.iter().map(|&p| window.with(p, i, 0)));
        proj.sort_unstable();
        proj.dedup();
        b += proj.len() as i64 - size;
    }
    let mut overlaps: Vec<Point> = Vec::new();
    for (x, &p) in polymer.iter().enumerate() {
        for &q in &polymer[x + 1..] {
            let diff = window.diff_coords(p, q);
            if diff.count_ones() == 2 && window.distance(p, q) == 2 {
                let i = diff.trailing_zeros() as usize;
                let k = 31 - diff.leading_zeros() as usize;
                overlaps.push(window.with(p, i, window.coord(q, i)));
                overlaps.push(window.with(p, k, window.coord(q, k)));
            }
        }
    }
    overlaps.sort_unstable();
    overlaps.dedup();
    let mut c = 0;
    for &w in &overlaps {
        let mut coords = 0u32;
        for &p in polymer {
            let diff = window.diff_coords(p, w);
            if diff.count_ones() == 1 {
                coords |= diff;
            }
        }
        c -= coords.count_ones() as i64 - 1;
    }
    AffineSize { a: size, b, c }
}

/// [`neighborhood_affine`] for a polymer given as product vertices. The
/// vertices may use any number of coordinates; values must be below 16.
pub fn neighborhood_affine_of(set: &VertexSet) -> Result<AffineSize> {
    let first = set.iter().next().ok_or_else(|| Error::InvalidInput("empty polymer".into()))?;
    let dims = first.coords().len();
    if set.iter().any(|v| v.class() != first.class()) {
        return Err(Error::MixedClass);
    }
    let window = Window::new(dims.div_ceil(2).clamp(1, crate::window::MAX_WINDOW_J))
        .map_err(|_| Error::InvalidInput(format!("polymer uses {dims} coordinates")))?;
    if dims > window.dims() {
        return Err(Error::InvalidInput(format!("polymer uses {dims} coordinates")));
    }
    let points: Vec<Point> = set
        .iter()
        .map(|v| {
            if v.coords().len() != dims {
                return Err(Error::WrongArity(v.coords().to_vec()));
            }
            let mut padded = v.coords().to_vec();
            padded.resize(window.dims(), 0);
            if padded.iter().any(|&x| x >= 16) {
                return Err(Error::InvalidInput("coordinate values must be below 16".into()));
            }
            Ok(padded)
        })
        .map(|r| r.and_then(|c| packed(&window, &c)))
        .collect::<Result<_>>()?;
    if !points_two_linked(&window, &points) {
        return Err(Error::InvalidInput("polymer is not 2-linked".into()));
    }
    Ok(neighborhood_affine(&window, &points))
}

fn packed(window: &Window, coords: &[u32]) -> Result<Point> {
    let mut p = Point(0);
    for (i, &x) in coords.iter().enumerate() {
        p = window.with(p, i, x);
    }
    Ok(p)
}

fn points_two_linked(window: &Window, points: &[Point]) -> bool {
    let mut seen = BTreeSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in 0..points.len() {
            if !seen.contains(&j) && window.distance(points[i], points[j]) <= 2 {
                seen.insert(j);
                stack.push(j);
            }
        }
    }
    seen.len() == points.len()
}

/// Explicit `|N(S)|` in `K_{s,s}^t` for a set given in coordinates below
/// `2s`, padded with zeros to `t` coordinates.
pub fn explicit_neighborhood_size(set: &VertexSet, s: u32, t: usize) -> usize {
    let mut out = BTreeSet::new();
    for v in set.iter() {
        let mut coords = v.coords().to_vec();
        coords.resize(t, 0);
        for i in 0..t {
            for y in (1 - coords[i] % 2..2 * s).step_by(2) {
                let mut w = coords.clone();
                w[i] = y;
                out.insert(Vertex::new(w));
            }
        }
    }
    out.len()
}
