//! Reproduces the published coefficient vectors and cross-checks them
//! against the exhaustive oracle, printing one table row per check.

use std::fmt::Write as _;

use anyhow::{anyhow, Result};
use clap::Args;
use percolation_core::bounds::{
    branching_first_moment_bound, branching_second_moment_bound, plarge_first_moment_bound,
    plarge_second_moment_bound, BoundInputs,
};
use percolation_core::inclusion_exclusion::DEFAULT_SECOND_MOMENT_BUDGET;
use percolation_core::oracle::{exact_moments, exhaustive_tally, tally_to_moment_polynomial};
use percolation_core::{
    enumerate_pair_events, enumerate_paths, first_moment, second_moment, IntPolynomial, Solid,
};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Also run the 2^30-configuration oracle on the dodecahedron and icosahedron.
    #[arg(long)]
    pub long: bool,
}

const REFERENCE_FIRST: [(Solid, Option<usize>, &[i64]); 5] = [
    (Solid::Tetrahedron, None, &[1, 3, 6, 0, -21, 21, -6]),
    (
        Solid::Cube,
        None,
        &[1, 3, 6, 12, 9, 12, -81, -75, 69, 473, -777, 447, -91],
    ),
    (
        Solid::Octahedron,
        None,
        &[
            1, 4, 12, 20, -14, -196, 12, 1316, -2815, 2824, -1564, 464, -58,
        ],
    ),
    (
        Solid::Dodecahedron,
        Some(5),
        &[
            1, 3, 6, 12, 24, 30, -24, -30, -36, 3, -6, 42, -6, 18, -21, 14, 0, -6, -9, 0, 0, 6, 0,
            0, -1, 0, 0, 0, 0, 0, 0,
        ],
    ),
    (
        Solid::Icosahedron,
        Some(3),
        &[
            1, 5, 20, 60, -90, -75, 0, 190, -10, -80, -60, 10, -5, 120, -35, -88, 35, 40, -35, 10,
            -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
        ],
    ),
];

const TETRA_SECOND: [i64; 7] = [1, 9, 36, 30, -171, 153, -42];

type Check = (String, Result<String>);

fn same(got: &IntPolynomial, want: &[i64]) -> Result<String> {
    if got.coeffs() == want {
        Ok(format!("{got}"))
    } else {
        Err(anyhow!("got {got}, expected {want:?}"))
    }
}

fn reference_checks(checks: &mut Vec<Check>) {
    for (solid, cutoff, want) in REFERENCE_FIRST {
        let label = match cutoff {
            Some(c) => format!("{solid} E(S) lower bound, cutoff {c}"),
            None => format!("{solid} E(S)"),
        };
        let result = first_moment(&solid.graph(), cutoff)
            .map_err(Into::into)
            .and_then(|r| same(&r.polynomial, want));
        checks.push((label, result));
    }
    let result = second_moment(&Solid::Tetrahedron.graph(), DEFAULT_SECOND_MOMENT_BUDGET)
        .map_err(Into::into)
        .and_then(|r| same(&r.polynomial, &TETRA_SECOND));
    checks.push(("tetrahedron E(S^2)".into(), result));
}

fn path_checks(checks: &mut Vec<Check>) {
    for (solid, want) in [
        (Solid::Tetrahedron, vec![5]),
        (Solid::Cube, vec![15, 16, 18]),
        (Solid::Octahedron, vec![26, 28]),
    ] {
        let g = solid.graph();
        let result = (|| {
            let classes = g.distance_classes(0)?;
            let got = (1..=classes.radius())
                .map(|s| enumerate_paths(&g, 0, classes.representative(s), None).map(|f| f.len()))
                .collect::<Result<Vec<_>, _>>()?;
            if got == want {
                Ok(format!("{got:?}"))
            } else {
                Err(anyhow!("got {got:?}, expected {want:?}"))
            }
        })();
        checks.push((format!("{solid} path counts by distance"), result));
    }
    let result = enumerate_pair_events(&Solid::Tetrahedron.graph(), 0, 1, 2)
        .map_err(Into::into)
        .and_then(|f| match f.len() {
            10 => Ok("10".into()),
            n => Err(anyhow!("got {n}, expected 10")),
        });
    checks.push(("tetrahedron minimal pair events".into(), result));
}

fn oracle_checks(checks: &mut Vec<Check>) {
    for solid in [Solid::Tetrahedron, Solid::Cube, Solid::Octahedron] {
        let g = solid.graph();
        let result = (|| {
            let (first, second) = exact_moments(&g)?;
            let ie = first_moment(&g, None)?;
            if ie.polynomial != first {
                return Err(anyhow!(
                    "E(S): oracle {first} vs inclusion-exclusion {}",
                    ie.polynomial
                ));
            }
            if solid == Solid::Tetrahedron {
                let ie2 = second_moment(&g, DEFAULT_SECOND_MOMENT_BUDGET)?;
                if ie2.polynomial != second {
                    return Err(anyhow!(
                        "E(S^2): oracle {second} vs inclusion-exclusion {}",
                        ie2.polynomial
                    ));
                }
            }
            let degree = g.validate_regular()?;
            for i in 1..20 {
                let p = i as f64 / 20.0;
                let input = BoundInputs::new(degree, g.n_vertices(), p)?;
                let (e1, e2) = (first.eval(p)?, second.eval(p)?);
                let bounded = branching_first_moment_bound(&input) > e1
                    && plarge_first_moment_bound(&input) > e1
                    && branching_second_moment_bound(&input) > e2
                    && plarge_second_moment_bound(&input) > e2;
                if !bounded {
                    return Err(anyhow!("an upper bound fails at p = {p}"));
                }
            }
            Ok(format!("2^{} configurations", g.n_edges()))
        })();
        checks.push((
            format!("{solid} oracle = inclusion-exclusion, bounds hold"),
            result,
        ));
    }
}

fn long_checks(checks: &mut Vec<Check>) {
    for solid in [Solid::Dodecahedron, Solid::Icosahedron] {
        let g = solid.graph();
        let result = (|| {
            let exact = tally_to_moment_polynomial(&exhaustive_tally(&g, 0)?, 1)?;
            let lower = first_moment(&g, solid.default_cutoff())?.polynomial;
            for i in 0..=20 {
                let p = i as f64 / 20.0;
                let (lo, ex) = (lower.eval(p)?, exact.eval(p)?);
                if lo > ex + 1e-9 {
                    return Err(anyhow!("lower bound {lo} above exact {ex} at p = {p}"));
                }
            }
            Ok(format!("exact E(S) = {exact}"))
        })();
        checks.push((format!("{solid} lower bound <= 2^30 oracle"), result));
    }
}

/// Runs every check and returns the rendered table and the failure count.
pub fn table(args: &VerifyArgs) -> (String, usize) {
    let mut checks = Vec::new();
    reference_checks(&mut checks);
    path_checks(&mut checks);
    oracle_checks(&mut checks);
    if args.long {
        long_checks(&mut checks);
    }
    let width = checks.iter().map(|(name, _)| name.len()).max().unwrap_or(0);
    let mut text = String::new();
    let mut failed = 0;
    for (name, result) in &checks {
        let (status, detail) = match result {
            Ok(detail) => ("PASS", detail.clone()),
            Err(e) => {
                failed += 1;
                ("FAIL", format!("{e:#}"))
            }
        };
        let _ = writeln!(text, "{name:<width$}  {status}  {detail}");
    }
    let _ = writeln!(text, "{} checks, {failed} failed", checks.len());
    (text, failed)
}
