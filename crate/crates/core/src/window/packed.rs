use super::{ProductSpec, Vertex};
use crate::error::{Error, Result};

/// Largest `j` whose window `K_{j,j}^{2j}` fits the packed layout.
pub const MAX_WINDOW_J: usize = 7;

const NIBBLES: u64 = 0x1111_1111_1111_1111;

/// A vertex of `K_{j,j}^{2j}` packed four bits per coordinate, coordinate 0
/// in the most significant used nibble, so integer order is lexicographic
/// coordinate order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point(pub u64);

/// The window `K_{j,j}^{2j}` that contains every compressed set of size `j`.
#[derive(Clone, Debug)]
pub struct Window {
    j: usize,
    dims: usize,
    mask: u64,
}

impl Window {
    pub fn new(j: usize) -> Result<Self> {
        if j == 0 || j > MAX_WINDOW_J {
            return Err(Error::InvalidInput(format!(
                "window size j={j} outside 1..={MAX_WINDOW_J}"
            )));
        }
        let dims = 2 * j;
        let mask = if dims == 16 { u64::MAX } else { (1u64 << (4 * dims)) - 1 };
        Ok(Window { j, dims, mask })
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Number of coordinates, `2j`.
    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Values per coordinate, `2j`.
    pub fn values(&self) -> u32 {
        2 * self.j as u32
    }

    pub fn spec(&self) -> ProductSpec {
        ProductSpec::kss_power(self.j as u32, self.dims).unwrap()
    }

    #[inline]
    fn shift(&self, i: usize) -> u32 {
        4 * (self.dims - 1 - i) as u32
    }

    #[inline]
    pub fn coord(&self, p: Point, i: usize) -> u32 {
        ((p.0 >> self.shift(i)) & 0xf) as u32
    }

    #[inline]
    pub fn with(&self, p: Point, i: usize, value: u32) -> Point {
        let s = self.shift(i);
        Point((p.0 & !(0xf << s)) | ((value as u64) << s))
    }

    /// Bitmask over coordinates, bit `i` set when `a` and `b` differ there.
    #[inline]
    pub fn diff_coords(&self, a: Point, b: Point) -> u32 {
        let x = a.0 ^ b.0;
        let nz = (x | x >> 1 | x >> 2 | x >> 3) & NIBBLES & self.mask;
        let mut out = 0u32;
        let mut m = nz;
        while m != 0 {
            let bit = m.trailing_zeros() / 4;
            out |= 1 << (self.dims as u32 - 1 - bit);
            m &= m - 1;
        }
        out
    }

    /// Graph distance in `K_{j,j}^{2j}`: 1 per coordinate whose parity
    /// differs, 2 per coordinate that differs with equal parity.
    #[inline]
    pub fn distance(&self, a: Point, b: Point) -> u32 {
        let x = a.0 ^ b.0;
        let nz = ((x | x >> 1 | x >> 2 | x >> 3) & NIBBLES).count_ones();
        let flips = (x & NIBBLES).count_ones();
        2 * nz - flips
    }

    /// The same-class vertices at distance exactly 2 from `p`, sorted.
    pub fn ball2(&self, p: Point) -> Vec<Point> {
        let vals = self.values();
        let mut out = Vec::with_capacity(self.ball2_size());
        for i in 0..self.dims {
            let xi = self.coord(p, i);
            for y in (xi & 1..vals).step_by(2) {
                if y != xi {
                    out.push(self.with(p, i, y));
                }
            }
            for k in i + 1..self.dims {
                let xk = self.coord(p, k);
                for y in (1 - (xi & 1)..vals).step_by(2) {
                    let q = self.with(p, i, y);
                    for z in (1 - (xk & 1)..vals).step_by(2) {
                        out.push(self.with(q, k, z));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn ball2_size(&self) -> usize {
        let j = self.j;
        self.dims * (j - 1) + self.dims * (self.dims - 1) / 2 * j * j
    }

    pub fn to_vertex(&self, p: Point) -> Vertex {
        Vertex((0..self.dims).map(|i| self.coord(p, i)).collect())
    }

    pub fn from_vertex(&self, v: &Vertex) -> Result<Point> {
        if v.0.len() != self.dims {
            return Err(Error::WrongArity(v.0.clone()));
        }
        let mut p = Point(0);
        for (i, &x) in v.0.iter().enumerate() {
            if x >= self.values() {
                return Err(Error::CoordinateOutOfRange { vertex: v.0.clone(), coord: i });
            }
            p = self.with(p, i, x);
        }
        Ok(p)
    }
}
