use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use percolation_core::oracle::{exhaustive_tally, tally_to_moment_polynomial, ClusterSizeTally};
use percolation_core::{Graph, IntPolynomial};
use serde::Serialize;

use crate::input::{emit, to_json, Format, GraphSource, GridArgs};
use crate::moments::Evaluation;
use crate::Refused;

/// Graphs with more edges than this need `--long`.
pub const LONG_EDGE_THRESHOLD: usize = 24;

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Report only this moment (default: both).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub moment: Option<u8>,
    /// Source vertex of the cluster.
    #[arg(long, default_value_t = 0)]
    pub from: usize,
    /// Allow graphs with more than 24 edges (2^30 configurations take minutes).
    #[arg(long)]
    pub long: bool,
    /// Also write the raw tally as CSV `j,s,count`.
    #[arg(long, value_name = "FILE")]
    pub tally_out: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct MomentOut {
    moment: u8,
    polynomial: IntPolynomial,
    evaluations: Vec<Evaluation>,
}

#[derive(Serialize)]
struct Output {
    solid: String,
    source: usize,
    configurations: u64,
    moments: Vec<MomentOut>,
}

/// Runs the oracle, refusing large graphs unless `long` is set.
pub fn gated_tally(graph: &Graph, source: usize, long: bool) -> Result<ClusterSizeTally> {
    if graph.n_edges() > LONG_EDGE_THRESHOLD && !long {
        return Err(Refused(format!(
            "exhaustive enumeration of 2^{} configurations refused without --long",
            graph.n_edges()
        ))
        .into());
    }
    Ok(exhaustive_tally(graph, source)?)
}

pub fn tally_csv(tally: &ClusterSizeTally) -> String {
    let mut text = String::from("j,s,count\n");
    for (j, s, count) in tally.nonzero() {
        let _ = writeln!(text, "{j},{s},{count}");
    }
    text
}

pub fn run(args: &OracleArgs) -> Result<()> {
    let input = args.source.load()?;
    let grid = args.grid.values("0:1:0.05")?;
    let started = Instant::now();
    let tally = gated_tally(&input.graph, args.from, args.long)?;
    eprintln!(
        "{}: 2^{} configurations in {:.3?}",
        input.name,
        input.graph.n_edges(),
        started.elapsed()
    );
    if let Some(path) = &args.tally_out {
        std::fs::write(path, tally_csv(&tally))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let orders: Vec<u8> = match args.moment {
        Some(m) => vec![m],
        None => vec![1, 2],
    };
    let moments = orders
        .into_iter()
        .map(|moment| {
            let polynomial = tally_to_moment_polynomial(&tally, moment.into())?;
            let evaluations = grid
                .iter()
                .map(|&p| {
                    Ok(Evaluation {
                        p,
                        value: polynomial.eval(p)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MomentOut {
                moment,
                polynomial,
                evaluations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match args.format {
        Format::Json => to_json(&Output {
            solid: input.name.clone(),
            source: args.from,
            configurations: tally.total(),
            moments,
        })?,
        Format::Csv => {
            let names: Vec<&str> = moments
                .iter()
                .map(|m| if m.moment == 1 { "e_s" } else { "e_s2" })
                .collect();
            let mut text = format!("p,{}\n", names.join(","));
            for (i, p) in grid.iter().enumerate() {
                let values: Vec<String> = moments
                    .iter()
                    .map(|m| m.evaluations[i].value.to_string())
                    .collect();
                writeln!(text, "{p},{}", values.join(","))?;
            }
            text
        }
    };
    emit(args.output.as_deref(), &text)
}
