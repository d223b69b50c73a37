//! Acceptance suite. Runs every criterion in sequence, prints one PASS/FAIL
//! line per criterion and exits nonzero if any failed.
//!
//! The two 2^30-configuration oracle runs take about a minute each on one
//! core; their tallies are shared by the lower-bound and Monte Carlo checks.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use percolation_core::bounds::{
    branching_first_moment_bound, branching_second_moment_bound, plarge_first_moment_bound,
    plarge_second_moment_bound, BoundInputs,
};
use percolation_core::inclusion_exclusion::DEFAULT_SECOND_MOMENT_BUDGET;
use percolation_core::montecarlo::{
    birth_process, random_realization, sample_cluster_size, sample_rng, SimConfig,
};
use percolation_core::oracle::{exhaustive_tally, tally_to_moment_polynomial};
use percolation_core::{
    enumerate_pair_events, enumerate_paths, first_moment, second_moment, Graph, IntPolynomial,
    MomentKind, MomentReport, Solid,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Context) -> Outcome);

const TETRA_FIRST: [i64; 7] = [1, 3, 6, 0, -21, 21, -6];
const TETRA_SECOND: [i64; 7] = [1, 9, 36, 30, -171, 153, -42];
const CUBE_FIRST: [i64; 13] = [1, 3, 6, 12, 9, 12, -81, -75, 69, 473, -777, 447, -91];
const OCTA_FIRST: [i64; 13] = [
    1, 4, 12, 20, -14, -196, 12, 1316, -2815, 2824, -1564, 464, -58,
];
const DODECA_CUTOFF_5: [i64; 31] = [
    1, 3, 6, 12, 24, 30, -24, -30, -36, 3, -6, 42, -6, 18, -21, 14, 0, -6, -9, 0, 0, 6, 0, 0, -1,
    0, 0, 0, 0, 0, 0,
];
const ICOSA_CUTOFF_3: [i64; 31] = [
    1, 5, 20, 60, -90, -75, 0, 190, -10, -80, -60, 10, -5, 120, -35, -88, 35, 40, -35, 10, -1, 0,
    0, 0, 0, 0, 0, 0, 0, 0, 0,
];

/// Exact moment polynomials from the exhaustive oracle, computed on demand.
#[derive(Default)]
struct Exact {
    cache: HashMap<Solid, (IntPolynomial, IntPolynomial, Duration)>,
}

impl Exact {
    fn get(&mut self, solid: Solid) -> &(IntPolynomial, IntPolynomial, Duration) {
        self.cache.entry(solid).or_insert_with(|| {
            let start = Instant::now();
            let tally = exhaustive_tally(&solid.graph(), 0).expect("oracle");
            let first = tally_to_moment_polynomial(&tally, 1).expect("first moment");
            let second = tally_to_moment_polynomial(&tally, 2).expect("second moment");
            (first, second, start.elapsed())
        })
    }
}

#[derive(Default)]
struct Context {
    exact: Exact,
    ie_first: HashMap<Solid, MomentReport>,
    tetra_second: Option<MomentReport>,
}

fn grid(lo: usize, hi: usize) -> impl Iterator<Item = f64> {
    (lo..=hi).map(|i| i as f64 / 20.0)
}

fn check_coeffs(label: &str, got: &IntPolynomial, want: &[i64]) -> Result<(), String> {
    if got.coeffs() == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got}, expected {want:?}"))
    }
}

fn criterion_1(ctx: &mut Context) -> Outcome {
    let g = Solid::Tetrahedron.graph();
    let start = Instant::now();
    let first = first_moment(&g, None).map_err(|e| e.to_string())?;
    let second = second_moment(&g, DEFAULT_SECOND_MOMENT_BUDGET).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check_coeffs("E(S)", &first.polynomial, &TETRA_FIRST)?;
    check_coeffs("E(S^2)", &second.polynomial, &TETRA_SECOND)?;
    if first.kind != MomentKind::Exact || second.kind != MomentKind::Exact {
        return Err("tetrahedron moments not flagged exact".into());
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:.2?}, limit 1 s"));
    }
    ctx.ie_first.insert(Solid::Tetrahedron, first);
    ctx.tetra_second = Some(second);
    Ok(format!(
        "tetrahedron E(S), E(S^2) integer-exact in {elapsed:.2?}"
    ))
}

fn criterion_2(ctx: &mut Context) -> Outcome {
    let mut notes = Vec::new();
    for (solid, want) in [
        (Solid::Cube, &CUBE_FIRST[..]),
        (Solid::Octahedron, &OCTA_FIRST[..]),
    ] {
        let start = Instant::now();
        let report = first_moment(&solid.graph(), None).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        check_coeffs(solid.name(), &report.polynomial, want)?;
        let mut total = 0u64;
        for class in &report.per_class {
            let expected = if class.s == 0 {
                0
            } else {
                (1u64 << class.k_s) - 1
            };
            if class.subsets_visited != expected {
                return Err(format!(
                    "{solid} class {}: visited {} subsets, expected {expected}",
                    class.s, class.subsets_visited
                ));
            }
            total += expected;
        }
        if report.subsets_visited != total {
            return Err(format!(
                "{solid}: total {} != {total}",
                report.subsets_visited
            ));
        }
        if solid == Solid::Octahedron && report.per_class[2].subsets_visited != 268_435_455 {
            return Err("octahedron distance-2 class did not visit 268,435,455 subsets".into());
        }
        if elapsed >= Duration::from_secs(60) {
            return Err(format!("{solid} took {elapsed:.2?}, limit 60 s"));
        }
        notes.push(format!(
            "{solid} {} subsets in {elapsed:.2?}",
            report.subsets_visited
        ));
        ctx.ie_first.insert(solid, report);
    }
    Ok(notes.join("; "))
}

fn criterion_3(ctx: &mut Context) -> Outcome {
    let mut notes = Vec::new();
    for (solid, cutoff, want) in [
        (Solid::Dodecahedron, 5, &DODECA_CUTOFF_5[..]),
        (Solid::Icosahedron, 3, &ICOSA_CUTOFF_3[..]),
    ] {
        let report = first_moment(&solid.graph(), Some(cutoff)).map_err(|e| e.to_string())?;
        check_coeffs(solid.name(), &report.polynomial, want)?;
        if report.kind != MomentKind::LowerBound {
            return Err(format!(
                "{solid} cutoff {cutoff} not flagged as a lower bound"
            ));
        }
        notes.push(format!("{solid} cutoff {cutoff}"));
        ctx.ie_first.insert(solid, report);
    }
    Ok(format!("{} lower-bound vectors match", notes.join(", ")))
}

fn criterion_4(_: &mut Context) -> Outcome {
    let count = |g: &Graph, x, y| {
        enumerate_paths(g, x, y, None)
            .map(|f| f.len())
            .map_err(|e| e.to_string())
    };
    let tetra = Solid::Tetrahedron.graph();
    for x in 0..4 {
        for y in (0..4).filter(|&y| y != x) {
            let n = count(&tetra, x, y)?;
            if n != 5 {
                return Err(format!("tetrahedron {x}-{y}: {n} paths, expected 5"));
            }
        }
    }
    for (solid, want) in [
        (Solid::Cube, vec![15, 16, 18]),
        (Solid::Octahedron, vec![26, 28]),
    ] {
        let g = solid.graph();
        let classes = g.distance_classes(0).map_err(|e| e.to_string())?;
        let got = (1..=classes.radius())
            .map(|s| count(&g, 0, classes.representative(s)))
            .collect::<Result<Vec<_>, _>>()?;
        if got != want {
            return Err(format!("{solid}: path counts {got:?}, expected {want:?}"));
        }
    }
    let events = enumerate_pair_events(&tetra, 0, 1, 2).map_err(|e| e.to_string())?;
    if events.len() != 10 {
        return Err(format!(
            "tetrahedron pair events: {}, expected 10",
            events.len()
        ));
    }
    Ok("tetrahedron 5, cube 15/16/18, octahedron 26/28, 10 pair events".into())
}

fn criterion_5(ctx: &mut Context) -> Outcome {
    let mut notes = Vec::new();
    for solid in [Solid::Tetrahedron, Solid::Cube, Solid::Octahedron] {
        let ie = &ctx.ie_first[&solid].polynomial;
        let (first, second, elapsed) = ctx.exact.get(solid);
        if first != ie {
            return Err(format!(
                "{solid}: oracle E(S) {first} != inclusion-exclusion {ie}"
            ));
        }
        if solid == Solid::Tetrahedron {
            let ie2 = &ctx
                .tetra_second
                .as_ref()
                .ok_or("tetrahedron second moment missing")?
                .polynomial;
            if second != ie2 {
                return Err(format!(
                    "tetrahedron: oracle E(S^2) {second} != inclusion-exclusion {ie2}"
                ));
            }
        }
        if *elapsed >= Duration::from_secs(1) {
            return Err(format!("{solid} oracle took {elapsed:.2?}, limit 1 s"));
        }
        notes.push(format!("{solid} {elapsed:.2?}"));
    }
    Ok(format!(
        "oracle equals inclusion-exclusion ({})",
        notes.join(", ")
    ))
}

fn criterion_6(ctx: &mut Context) -> Outcome {
    const SLACK: f64 = 1e-9;
    let mut checked = 0;
    for solid in [Solid::Tetrahedron, Solid::Cube, Solid::Octahedron] {
        let g = solid.graph();
        let degree = g.validate_regular().map_err(|e| e.to_string())?;
        let (first, second, _) = ctx.exact.get(solid).clone();
        for p in grid(1, 19) {
            let input = BoundInputs::new(degree, g.n_vertices(), p).map_err(|e| e.to_string())?;
            let e1 = first.eval(p).map_err(|e| e.to_string())?;
            let e2 = second.eval(p).map_err(|e| e.to_string())?;
            let pairs = [
                ("branching E(S)", branching_first_moment_bound(&input), e1),
                (
                    "branching E(S^2)",
                    branching_second_moment_bound(&input),
                    e2,
                ),
                ("large-p E(S)", plarge_first_moment_bound(&input), e1),
                ("large-p E(S^2)", plarge_second_moment_bound(&input), e2),
            ];
            for (label, bound, exact) in pairs {
                if bound < exact - SLACK {
                    return Err(format!(
                        "{solid} p={p}: {label} bound {bound} < exact {exact}"
                    ));
                }
                if bound <= exact {
                    return Err(format!(
                        "{solid} p={p}: {label} bound {bound} not strictly above {exact}"
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} bound/exact comparisons strictly dominated"
    ))
}

fn criterion_7(ctx: &mut Context) -> Outcome {
    const SLACK: f64 = 1e-9;
    let mut notes = Vec::new();
    for solid in [Solid::Dodecahedron, Solid::Icosahedron] {
        let lower = ctx.ie_first[&solid].polynomial.clone();
        let n = solid.graph().n_vertices() as f64;
        let (exact, _, elapsed) = ctx.exact.get(solid);
        for p in grid(0, 20) {
            let lo = lower.eval(p).map_err(|e| e.to_string())?;
            let ex = exact.eval(p).map_err(|e| e.to_string())?;
            if lo > ex + SLACK {
                return Err(format!(
                    "{solid} p={p}: lower bound {lo} exceeds exact {ex}"
                ));
            }
        }
        for (p, want) in [(0.0, 1.0), (1.0, n)] {
            let (lo, ex) = (lower.eval(p).unwrap(), exact.eval(p).unwrap());
            if (lo - ex).abs() > SLACK || (ex - want).abs() > SLACK {
                return Err(format!(
                    "{solid} p={p}: lower bound {lo}, exact {ex}, expected {want}"
                ));
            }
        }
        notes.push(format!("{solid} oracle {elapsed:.1?}"));
    }
    Ok(format!(
        "2^30 oracle lower-bound check ({})",
        notes.join(", ")
    ))
}

/// Independent cluster size by union-find over the open edges.
fn union_find_cluster(g: &Graph, open: percolation_core::EdgeSet, source: usize) -> usize {
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut parent: Vec<usize> = (0..g.n_vertices()).collect();
    for e in open.iter() {
        let (u, v) = g.edge(e);
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        parent[ru] = rv;
    }
    let r = root(&mut parent, source);
    (0..g.n_vertices())
        .filter(|&v| root(&mut parent, v) == r)
        .count()
}

fn criterion_8(_: &mut Context) -> Outcome {
    const REALIZATIONS: u64 = 10_000;
    for solid in Solid::ALL {
        let g = solid.graph();
        for i in 0..REALIZATIONS {
            let mut rng = sample_rng(8, i);
            let p: f64 = rng.random();
            let open = random_realization(&g, p, &mut rng);
            let source = (i % g.n_vertices() as u64) as usize;
            let trace = birth_process(&g, open, source).map_err(|e| e.to_string())?;
            let births: usize = trace.births().iter().sum();
            let size = union_find_cluster(&g, open, source);
            if births != size {
                return Err(format!(
                    "{solid} realization {i}: sum of births {births} != cluster {size}"
                ));
            }
        }
    }
    Ok(format!("{REALIZATIONS} realizations per solid, all equal"))
}

fn criterion_9(ctx: &mut Context) -> Outcome {
    const SAMPLES: u64 = 100_000;
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for solid in Solid::ALL {
        let g = solid.graph();
        let (first, second, _) = ctx.exact.get(solid).clone();
        let start = Instant::now();
        for p in [0.2, 0.5, 0.8] {
            let est = sample_cluster_size(&g, &SimConfig::new(p, SAMPLES, 2024))
                .map_err(|e| e.to_string())?;
            for (label, mean, se, exact) in [
                ("E(S)", est.mean_s, est.se_s, first.eval(p).unwrap()),
                ("E(S^2)", est.mean_s2, est.se_s2, second.eval(p).unwrap()),
            ] {
                let z = (mean - exact).abs() / se;
                if z > 4.0 {
                    return Err(format!(
                        "{solid} p={p} {label}: mean {mean} vs exact {exact}, {z:.2} SE"
                    ));
                }
                worst = worst.max(z);
            }
        }
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_secs(10) {
            return Err(format!("{solid} took {elapsed:.2?}, limit 10 s"));
        }
        slowest = slowest.max(elapsed);
    }
    Ok(format!(
        "max deviation {worst:.2} SE, slowest solid {slowest:.2?}"
    ))
}

fn binomial_pmf(n: u32, k: u32, p: f64) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// `E((1 + X1 + X2 + X3)^2)` by summing over every generation-size history.
fn tree_second_moment(p: f64) -> f64 {
    let mut total = 0.0;
    for x1 in 0..=3 {
        let p1 = binomial_pmf(3, x1, p);
        for x2 in 0..=2 * x1 {
            let p2 = p1 * binomial_pmf(2 * x1, x2, p);
            for x3 in 0..=2 * x2 {
                let size = (1 + x1 + x2 + x3) as f64;
                total += p2 * binomial_pmf(2 * x2, x3, p) * size * size;
            }
        }
    }
    total
}

fn criterion_10(_: &mut Context) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 1..=9 {
        let p = i as f64 / 10.0;
        let closed =
            branching_second_moment_bound(&BoundInputs::new(3, 4, p).map_err(|e| e.to_string())?);
        let brute = tree_second_moment(p);
        let diff = (closed - brute).abs();
        if diff > 1e-9 {
            return Err(format!(
                "p={p}: closed form {closed} vs enumeration {brute}"
            ));
        }
        worst = worst.max(diff);
    }
    Ok(format!(
        "max |closed - enumeration| = {worst:.1e} over p = 0.1..0.9"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("tetrahedron exact moments", criterion_1),
        ("cube and octahedron exact first moments", criterion_2),
        (
            "dodecahedron and icosahedron cutoff lower bounds",
            criterion_3,
        ),
        ("path and pair-event counts", criterion_4),
        ("oracle equals inclusion-exclusion", criterion_5),
        ("upper bounds dominate exact moments", criterion_6),
        ("lower bounds below 2^30 oracle", criterion_7),
        ("birth process equals cluster", criterion_8),
        ("Monte Carlo consistency", criterion_9),
        ("branching bound vs tree enumeration", criterion_10),
    ];
    let mut ctx = Context::default();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut ctx);
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{elapsed:.1?}]",
                i + 1
            ),
            Err(reason) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name}: {reason} [{elapsed:.1?}]",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
