use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use percolation_core::bounds::{bound_row, BoundRow};
use percolation_core::oracle::tally_to_moment_polynomial;
use serde::Serialize;

use crate::input::{emit, to_json, Format, GraphSource, GridArgs};
use crate::oracle::{gated_tally, LONG_EDGE_THRESHOLD};

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Fill the exact columns with the oracle even above 24 edges.
    #[arg(long)]
    pub long: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    #[serde(flatten)]
    bounds: BoundRow,
    exact_first: Option<f64>,
    exact_second: Option<f64>,
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn run(args: &BoundsArgs) -> Result<()> {
    let input = args.source.load()?;
    let graph = &input.graph;
    let degree = graph.validate_regular()?;
    let grid = args.grid.values("0:1:0.05")?;
    let exact = if graph.n_edges() <= LONG_EDGE_THRESHOLD || args.long {
        let tally = gated_tally(graph, 0, args.long)?;
        Some((
            tally_to_moment_polynomial(&tally, 1)?,
            tally_to_moment_polynomial(&tally, 2)?,
        ))
    } else {
        eprintln!(
            "{}: exact columns left empty (pass --long to run the oracle)",
            input.name
        );
        None
    };
    let rows = grid
        .iter()
        .map(|&p| {
            let (exact_first, exact_second) = match &exact {
                Some((first, second)) => (Some(first.eval(p)?), Some(second.eval(p)?)),
                None => (None, None),
            };
            Ok(Row {
                bounds: bound_row(degree, graph.n_vertices(), p)?,
                exact_first,
                exact_second,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match args.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut text = String::from(
                "p,e_s_branching,e_s2_branching,e_s_plarge,e_s2_plarge,e_s_exact,e_s2_exact,\
                 e_s_branching_raw,e_s2_branching_raw,e_s_plarge_raw,e_s2_plarge_raw\n",
            );
            for row in &rows {
                let b = &row.bounds;
                writeln!(
                    text,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    b.p,
                    b.branching_first.value,
                    b.branching_second.value,
                    b.plarge_first.value,
                    b.plarge_second.value,
                    cell(row.exact_first),
                    cell(row.exact_second),
                    b.branching_first.raw,
                    b.branching_second.raw,
                    b.plarge_first.raw,
                    b.plarge_second.raw,
                )?;
            }
            text
        }
    };
    emit(args.output.as_deref(), &text)
}
