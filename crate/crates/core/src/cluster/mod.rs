//! Normalized cluster-expansion coefficients `L̂_j` for `K_{s,s}^t`.
//!
//! `L̂_j = L_j (1+λ)^{jst} / (2s)^t` is a polynomial in `s`, `t`, `λ` and
//! `u = (1+λ)^s`. It is assembled from the compressed sets of size at most
//! `j`, their covers by candidate polymers, the Ursell function of each
//! cover's incompatibility graph and the neighbourhood sizes.

mod affine;
mod covers;
mod estimate;
mod ursell;

pub use affine::{explicit_neighborhood_size, neighborhood_affine, neighborhood_affine_of, AffineSize};
pub use covers::{ordered_tuple_count, Candidate, Cover, CoverContext};
pub use estimate::{cluster_sum, truncated_estimate, TruncatedEstimate};
pub use ursell::{acyclic_orientations_unique_sink, ursell, SmallGraph, Tutte, MAX_NODES};

use rustc_hash::FxHashMap;

use crate::compressed::{embedding_count_half, orbit_factor, CompressedSet, GenOptions, GenStats, Generator};
use crate::error::{Error, Result};
use crate::polyring::{int, Monomial, Polynomial, Rational, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaMode {
    Symbolic,
    Value(Rational),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CoefficientOptions {
    pub generation: GenOptions,
    /// Memoise `T(1, 0)` across covers.
    pub tutte_cache: bool,
    /// Explore the compressed-set tree on the rayon pool.
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    pub j: usize,
    pub polynomial: Polynomial,
    pub compressed_sets: u64,
    pub covers: u64,
    pub calls: u64,
}

/// `λ^j · u^{-Σb} · (λ+1)^{-Σc}` for one ordered cluster whose polymers
/// have the given sizes, with multiplicity.
pub fn normalized_cluster_weight(sizes: &[(AffineSize, usize)]) -> Result<Polynomial> {
    let (mut j, mut eb, mut ec) = (0u32, 0u32, 0u32);
    for &(aff, mult) in sizes {
        if aff.b > 0 || aff.c > 0 {
            return Err(Error::ExponentSign(format!("{aff:?}")));
        }
        j += (aff.a as usize * mult) as u32;
        eb += ((-aff.b) as usize * mult) as u32;
        ec += ((-aff.c) as usize * mult) as u32;
    }
    let mono = Monomial::new([0, 0, j, eb]);
    Ok(&Polynomial::term(int(1), mono) * &Polynomial::affine(Var::Lambda, 1).pow(ec))
}

/// Per-worker partial sums. `terms[(|S|, sorted profile)][(eb, ec)]` holds
/// `j!` times the summed `ordered count · φ` of covers with those
/// exponents.
#[derive(Default)]
struct Partial {
    terms: FxHashMap<(usize, Vec<(u8, u8)>), FxHashMap<(u32, u32), i128>>,
    sets: u64,
    covers: u64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        for (key, inner) in other.terms {
            let slot = self.terms.entry(key).or_default();
            for (e, v) in inner {
                *slot.entry(e).or_default() += v;
            }
        }
        self.sets += other.sets;
        self.covers += other.covers;
        self
    }
}

struct Assembler<'a> {
    window: &'a crate::window::Window,
    j: usize,
    fact_j: i128,
}

impl Assembler<'_> {
    fn fold(&self, acc: &mut Partial, tutte: &mut Tutte, set: &CompressedSet) -> Result<()> {
        let ctx = CoverContext::new(self.window, set.points());
        let mut local: FxHashMap<(u32, u32), i128> = FxHashMap::default();
        let mut failure = None;
        let covers = ctx.for_each_cover(self.j, |cover| {
            let (mut eb, mut ec, mut slots) = (0i64, 0i64, 0usize);
            let mut denom: i128 = 1;
            for &(i, m) in cover {
                let aff = ctx.candidates()[i].affine;
                eb -= aff.b * m as i64;
                ec -= aff.c * m as i64;
                slots += m;
                denom *= (1..=m as i128).product::<i128>();
                if aff.b > 0 || aff.c > 0 {
                    failure = Some(Error::ExponentSign(format!("{aff:?}")));
                }
            }
            let t = tutte.t10(&ctx.incompatibility_graph(cover)) as i128;
            if t == 0 {
                failure = Some(Error::IdentityViolation("φ vanished on a cluster".into()));
            }
            let sign = if slots % 2 == 1 { 1 } else { -1 };
            *local.entry((eb as u32, ec as u32)).or_default() += sign * t * (self.fact_j / denom);
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let mut profile = set.profile().to_vec();
        profile.sort_unstable();
        let slot = acc.terms.entry((set.size(), profile)).or_default();
        for (e, v) in local {
            *slot.entry(e).or_default() += v;
        }
        acc.sets += 1;
        acc.covers += covers;
        Ok(())
    }
}

/// `L̂_j` as a polynomial in `s`, `t`, `u` and, when symbolic, `λ`.
pub fn coefficient(j: usize, lambda: &LambdaMode, opts: CoefficientOptions) -> Result<Coefficient> {
    if j == 0 {
        return Err(Error::InvalidInput("j must be positive".into()));
    }
    let generator = Generator::new(j, opts.generation)?;
    let asm = Assembler {
        window: generator.window(),
        j,
        fact_j: (1..=j as i128).product(),
    };
    type Work = (Partial, Tutte, Option<Error>);
    let init = || -> Work { (Partial::default(), Tutte::new(opts.tutte_cache), None) };
    let fold = |w: &mut Work, set: &CompressedSet| {
        if w.2.is_none() {
            if let Err(e) = asm.fold(&mut w.0, &mut w.1, set) {
                w.2 = Some(e);
            }
        }
    };
    let (partial, stats) = if opts.parallel {
        let reduce = |a: Work, b: Work| (a.0.merge(b.0), a.1, a.2.or(b.2));
        let (w, stats) = generator.par_fold(init, fold, reduce);
        if let Some(e) = w.2 {
            return Err(e);
        }
        (w.0, stats)
    } else {
        let mut w = init();
        let stats = generator.for_each(|set| fold(&mut w, set));
        if let Some(e) = w.2 {
            return Err(e);
        }
        (w.0, stats)
    };
    let lambda_pow = Polynomial::var_pow(Var::Lambda, j as u32);
    let one_plus = Polynomial::affine(Var::Lambda, 1);
    let mut total = Polynomial::zero();
    let mut keys: Vec<_> = partial.terms.into_iter().collect();
    keys.sort_by(|a, b| a.0.cmp(&b.0));
    for ((size, profile), inner) in keys {
        let mut weights = Polynomial::zero();
        let mut inner: Vec<_> = inner.into_iter().filter(|&(_, v)| v != 0).collect();
        inner.sort_unstable();
        for ((eb, ec), v) in inner {
            let term = Polynomial::term(Rational::from_integer(v.into()), Monomial::var_pow(Var::U, eb));
            weights += &(&term * &one_plus.pow(ec));
        }
        if weights.is_zero() {
            continue;
        }
        let orbit = if opts.generation.monotone { orbit_factor(&profile) } else { 1 };
        let embed = embedding_count_half(profile.len(), &profile);
        let scale = Rational::new(orbit.into(), (2 * size as i128 * asm.fact_j).into());
        total += &(&embed * &weights).scale(&scale);
    }
    let mut polynomial = &total * &lambda_pow;
    if let LambdaMode::Value(q) = lambda {
        polynomial = polynomial.substitute_value(Var::Lambda, q);
    }
    Ok(Coefficient { j, polynomial, compressed_sets: stats.total(), covers: partial.covers, calls: stats.calls })
}

/// Compressed sets and covers at level `j`, without assembling weights.
pub fn count_covers(j: usize, opts: CoefficientOptions) -> Result<(GenStats, u64)> {
    if j == 0 {
        return Err(Error::InvalidInput("j must be positive".into()));
    }
    let generator = Generator::new(j, opts.generation)?;
    let window = generator.window();
    let fold = |n: &mut u64, set: &CompressedSet| *n += CoverContext::new(window, set.points()).for_each_cover(j, |_| {});
    if opts.parallel {
        let (n, stats) = generator.par_fold(|| 0u64, fold, |a, b| a + b);
        Ok((stats, n))
    } else {
        let mut n = 0;
        let stats = generator.for_each(|set| fold(&mut n, set));
        Ok((stats, n))
    }
}

/// Substitutes `s ↦ 1`, `u ↦ λ + 1`, `t ↦ d` (kept as `t`), giving
/// `L_j (1+λ)^{jd} / 2^d` on the `d`-dimensional hypercube.
pub fn hypercube(p: &Polynomial) -> Polynomial {
    p.substitute_value(Var::S, &int(1)).substitute(Var::U, &Polynomial::affine(Var::Lambda, 1))
}
