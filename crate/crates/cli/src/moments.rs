use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::Args;
use percolation_core::inclusion_exclusion::DEFAULT_SECOND_MOMENT_BUDGET;
use percolation_core::{first_moment, second_moment, MomentReport};
use serde::Serialize;

use crate::input::{emit, to_json, Format, GraphSource, GridArgs};

#[derive(Args, Debug)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// 1 for E(S), 2 for E(S^2).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub moment: u8,
    /// Longest path kept; the result is then a lower bound. Defaults to 5 on
    /// the dodecahedron and 3 on the icosahedron, no cutoff elsewhere.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Largest number of inclusion-exclusion subsets a second moment may use.
    #[arg(long, default_value_t = DEFAULT_SECOND_MOMENT_BUDGET)]
    pub budget: u128,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
pub struct Evaluation {
    pub p: f64,
    pub value: f64,
}

#[derive(Serialize)]
struct Output<'a> {
    #[serde(flatten)]
    report: &'a MomentReport,
    evaluations: Vec<Evaluation>,
}

pub fn run(args: &MomentsArgs) -> Result<()> {
    let input = args.source.load()?;
    let grid = args.grid.values("0:1:0.05")?;
    let started = Instant::now();
    let report = match args.moment {
        1 => {
            let cutoff = args
                .cutoff
                .or_else(|| input.solid.and_then(|s| s.default_cutoff()));
            first_moment(&input.graph, cutoff)?
        }
        _ => {
            if args.cutoff.is_some() {
                bail!("--cutoff applies to the first moment only");
            }
            second_moment(&input.graph, args.budget)?
        }
    }
    .with_name(&input.name);
    eprintln!(
        "{}: moment {} in {:.3?}, {} subsets",
        input.name,
        args.moment,
        started.elapsed(),
        report.subsets_visited
    );
    let evaluations = grid
        .iter()
        .map(|&p| {
            Ok(Evaluation {
                p,
                value: report.eval(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match args.format {
        Format::Json => to_json(&Output {
            report: &report,
            evaluations,
        })?,
        Format::Csv => {
            let column = if args.moment == 1 { "e_s" } else { "e_s2" };
            let mut text = format!("p,{column}\n");
            for e in &evaluations {
                writeln!(text, "{},{}", e.p, e.value)?;
            }
            text
        }
    };
    emit(args.output.as_deref(), &text)
}
