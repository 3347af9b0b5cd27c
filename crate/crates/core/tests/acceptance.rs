//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero when a criterion fails that is expected to pass.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use common::golden;
use hardcore_expansion::cluster::{
    acyclic_orientations_unique_sink, coefficient, count_covers, hypercube, neighborhood_affine, ursell,
    CoefficientOptions, CoverContext, LambdaMode, SmallGraph,
};
use hardcore_expansion::compressed::{GenOptions, Generator};
use hardcore_expansion::oracle::{
    estimate_check, identity_checks, identity_lambdas, isoperimetry_check, sampler_check, IDENTITY_GRAPHS, ROSTER,
    SAMPLER_SAMPLES,
};
use hardcore_expansion::polyring::{binom_affine, int, Polynomial, Rational, Var};
use hardcore_expansion::window::{ProductSpec, Vertex, VertexSet};

/// Criteria that cannot hold on desk-sized graphs, with the reason.
const KNOWN_UNATTAINABLE: &[(usize, &str)] = &[(
    9,
    "on Q4 and K22^2 the doubly-captured mass makes Z-hat/Z about 1.52 at lambda=1; \
     the truncations approximate log Z-hat, which exceeds log Z by about 0.42, so errors against log Z grow past k=1",
)];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn at_one() -> LambdaMode {
    LambdaMode::Value(int(1))
}

fn monotone() -> CoefficientOptions {
    CoefficientOptions {
        generation: GenOptions { monotone: true, ..GenOptions::default() },
        ..CoefficientOptions::default()
    }
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    for j in 1..=4 {
        let c = coefficient(j, &at_one(), CoefficientOptions::default()).unwrap();
        if c.polynomial != golden(&format!("appendix_l{j}")) {
            bad.push(j);
        }
    }
    outcome(bad.is_empty(), format!("L-hat_1..L-hat_4 at lambda=1, mismatches at j={bad:?}"))
}

fn criterion_2(l5: &hardcore_expansion::cluster::Coefficient) -> Outcome {
    let expected = [(2usize, 3u64, 5u64), (3, 37, 151), (4, 1712, 14954), (5, 187082, 3338633)];
    let mut parts = Vec::new();
    let mut ok = true;
    for (j, sets, covers) in expected {
        let (got_sets, got_covers) = if j == 5 {
            (l5.compressed_sets, l5.covers)
        } else {
            let (stats, n) = count_covers(j, monotone()).unwrap();
            (stats.total(), n)
        };
        ok &= got_sets == sets && got_covers == covers;
        parts.push(format!("j={j} {got_sets}/{got_covers}"));
    }
    let base: Vec<String> = (2..=4)
        .map(|j| {
            let (stats, n) = count_covers(j, CoefficientOptions::default()).unwrap();
            format!("{}/{}", stats.total(), n)
        })
        .collect();
    outcome(ok, format!("monotone {}; base convention j=2..4: {}", parts.join(", "), base.join(", ")))
}

fn criterion_3(l5: &Polynomial) -> Outcome {
    let l4 = coefficient(4, &at_one(), CoefficientOptions::default()).unwrap().polynomial;
    let on_cube = |p: &Polynomial| hypercube(p).substitute_value(Var::Lambda, &int(1));
    let ok4 = on_cube(&l4) == golden("hypercube_l4");
    let ok5 = on_cube(l5) == golden("hypercube_l5");
    let mut symbolic = true;
    for j in 1..=4 {
        let c = coefficient(j, &LambdaMode::Symbolic, CoefficientOptions::default()).unwrap();
        // these goldens are normalised by λ^j
        let scaled = &golden(&format!("hypercube_lambda_l{j}")) * &Polynomial::var_pow(Var::Lambda, j as u32);
        symbolic &= hypercube(&c.polynomial) == scaled;
    }
    let appendix5 = *l5 == golden("appendix_l5");
    outcome(
        ok4 && ok5 && symbolic && appendix5,
        format!(
            "L_4 2^(3d): {ok4}, L_5 2^(4d): {ok5}, symbolic lambda j<=4: {symbolic}, L-hat_5: {appendix5}; j=6 not run"
        ),
    )
}

fn criterion_4() -> Outcome {
    let l2 = coefficient(2, &at_one(), CoefficientOptions::default()).unwrap().polynomial;
    let t = Polynomial::var(Var::T);
    let c_t_2 = binom_affine(Var::T, 0, 2);
    let quarter = Rational::new(1.into(), 4.into());
    let mut ok = true;
    let mut factored = Vec::new();
    for s in 1..=5i64 {
        let u = int(1 << s);
        let got = l2.substitute_value(Var::S, &int(s)).substitute_value(Var::U, &u);
        // L-hat_2 = L_2 2^{2st}/(2s)^t, so the prefactor (2s)^t/2^{2st+2} becomes 1/4
        let bracket = &(&c_t_2.scale(&int(3 * s * s)) + &t.scale(&((&u - int(1)) * int(s - 1)))) - &Polynomial::one();
        ok &= got == bracket.scale(&quarter);
        let short = &(&c_t_2.scale(&int(3)) + &t.scale(&((&u - int(1)) * int(s - 1)))) - &Polynomial::one();
        let matches = got == short.scale(&quarter);
        if s == 1 {
            ok &= matches;
        } else if !matches {
            factored.push(s);
        }
    }
    outcome(
        ok,
        format!(
            "unfactored form holds for s=1..5; factored form without s^2 on 3C(t,2) differs at s={factored:?}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut total = 0;
    let mut failed = Vec::new();
    for g in IDENTITY_GRAPHS {
        for l in identity_lambdas() {
            for c in identity_checks(g, &l).unwrap() {
                total += 1;
                if !c.passed {
                    failed.push(format!("{} {} lambda={}", c.name, c.graph, l));
                }
            }
        }
    }
    outcome(failed.is_empty(), format!("{total} checks, failures: {failed:?}"))
}

fn graph_from_mask(n: usize, mask: u32) -> SmallGraph {
    let mut g = SmallGraph::empty(n);
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if mask >> k & 1 == 1 {
                g.add_edge(a, b);
            }
            k += 1;
        }
    }
    g
}

fn edge_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| (0..=k).map(move |i| {
                let mut q = p.clone();
                q.insert(i, k);
                q
            }))
            .collect();
    }
    out
}

/// Edge slot images under every vertex permutation.
fn edge_permutations(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let slot: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    permutations(n)
        .iter()
        .map(|p| edges.iter().map(|&(a, b)| slot[&(p[a].min(p[b]), p[a].max(p[b]))]).collect())
        .collect()
}

fn canonical(mask: u32, perms: &[Vec<usize>]) -> u32 {
    perms
        .iter()
        .map(|p| p.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0u32, |m, (_, &j)| m | 1 << j))
        .min()
        .unwrap_or(mask)
}

/// `(1/v!) Σ (-1)^{|A|}` over connected spanning edge subsets `A`.
fn ursell_by_definition(n: usize, mask: u32) -> Rational {
    let mut sum = 0i64;
    let mut a = mask;
    loop {
        if graph_from_mask(n, a).is_connected() {
            sum += if a.count_ones() % 2 == 0 { 1 } else { -1 };
        }
        if a == 0 {
            break;
        }
        a = (a - 1) & mask;
    }
    let fact: i64 = (1..=n as i64).product();
    Rational::new(sum.into(), fact.into())
}

fn criterion_6() -> Outcome {
    let mut classes = 0;
    let mut ok = true;
    for n in 1..=6usize {
        let edges = edge_index(n);
        let perms = edge_permutations(n, &edges);
        let mut seen = HashMap::new();
        let fact: i64 = (1..=n as i64).product();
        for mask in 0..1u32 << edges.len() {
            let g = graph_from_mask(n, mask);
            if !g.is_connected() {
                continue;
            }
            let key = canonical(mask, &perms);
            if seen.contains_key(&key) {
                continue;
            }
            let phi = ursell(&g).unwrap();
            let orient = Rational::new(acyclic_orientations_unique_sink(&g, 0).into(), fact.into());
            let sign = if n % 2 == 1 { int(1) } else { int(-1) };
            ok &= phi == &orient * &sign && phi == ursell_by_definition(n, mask);
            seen.insert(key, phi);
            classes += 1;
        }
    }
    let k1 = ursell(&SmallGraph::complete(1)).unwrap() == int(1);
    let k2 = ursell(&SmallGraph::complete(2)).unwrap() == Rational::new((-1).into(), 2.into());
    outcome(ok && k1 && k2 && classes == 1 + 1 + 2 + 6 + 21 + 112, format!("{classes} isomorphism classes on <=6 vertices"))
}

fn criterion_7() -> Outcome {
    let spec = ProductSpec::kss_power(3, 6).unwrap();
    let mut checked = 0;
    let mut bad = 0;
    for j in 1..=3 {
        let generator = Generator::new(j, GenOptions::default()).unwrap();
        let window = generator.window().clone();
        let (sets, _) = generator.collect();
        for set in sets {
            let ctx = CoverContext::new(&window, set.points());
            for cand in ctx.candidates() {
                let pts: Vec<_> =
                    (0..set.points().len()).filter(|i| cand.mask >> i & 1 == 1).map(|i| set.points()[i]).collect();
                let vs: VertexSet = pts
                    .iter()
                    .map(|&p| {
                        let mut c = window.to_vertex(p).coords().to_vec();
                        c.resize(6, 0);
                        Vertex::new(c)
                    })
                    .collect();
                let mut nbhd = std::collections::BTreeSet::new();
                for v in vs.iter() {
                    nbhd.extend(spec.neighbors(v).unwrap().iter().cloned());
                }
                let aff = neighborhood_affine(&window, &pts);
                checked += 1;
                if aff.eval(3, 6) as usize != nbhd.len() || aff != cand.affine {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{checked} sub-polymers at (s,t)=(3,6), {bad} mismatches"))
}

fn criterion_8() -> Outcome {
    let mut failed = Vec::new();
    for g in ROSTER {
        if !isoperimetry_check(g).unwrap().passed {
            failed.push(g);
        }
    }
    outcome(failed.is_empty(), format!("{} roster graphs, violations on {failed:?}", ROSTER.len()))
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for g in ["Q4", "K22^2"] {
        let c = estimate_check(g, &int(1), 4).unwrap();
        ok &= c.passed;
        let rows: Vec<String> = c.witness["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                format!(
                    "k={} {:.3}/{:.3}",
                    r["k"],
                    r["error"].as_f64().unwrap(),
                    r["error_vs_zhat"].as_f64().unwrap()
                )
            })
            .collect();
        parts.push(format!("{g} error vs log Z / log Z-hat: {}", rows.join(" ")));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_10() -> Outcome {
    let c = sampler_check("C4", &int(1), 0, SAMPLER_SAMPLES).unwrap();
    outcome(
        c.passed,
        format!(
            "{SAMPLER_SAMPLES} samples, empirical TV {} ({:.5}), exact |mu-hat - mu|_TV {}",
            c.witness["tv_empirical_muhat"].as_str().unwrap_or("?"),
            c.witness["tv_empirical_muhat_decimal"].as_f64().unwrap_or(f64::NAN),
            c.witness["tv_muhat_mu"].as_str().unwrap_or("?"),
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let l5 = coefficient(5, &at_one(), monotone()).unwrap();
    println!("computed L-hat_5 at lambda=1 in {:.1?}", start.elapsed());
    let runs: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&l5))),
        (3, Box::new(|| criterion_3(&l5.polynomial))),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];
    let mut unexpected = 0;
    for (n, run) in runs {
        let t0 = Instant::now();
        let o = run();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {verdict} ({:.2?}) {}", t0.elapsed(), o.detail);
        match KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == n) {
            Some((_, why)) if !o.passed => println!("              expected failure: {why}"),
            Some(_) => println!("              passed although listed as unattainable"),
            None if !o.passed => unexpected += 1,
            None => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
