use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use percolation_core::montecarlo::{sample_cluster_size, SimConfig, SourcePolicy};

use crate::input::{emit, to_json, Format, GraphSource, GridArgs};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Source vertex of the cluster.
    #[arg(long, default_value_t = 0, conflicts_with = "uniform_source")]
    pub from: usize,
    /// Draw a fresh uniformly random source for every sample.
    #[arg(long)]
    pub uniform_source: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let input = args.source.load()?;
    let grid = args.grid.values("0.05:0.95:0.05")?;
    let source = if args.uniform_source {
        SourcePolicy::Uniform
    } else {
        SourcePolicy::Fixed(args.from)
    };
    let estimates = grid
        .iter()
        .map(|&p| {
            let config = SimConfig {
                source,
                ..SimConfig::new(p, args.samples, args.seed)
            };
            Ok(sample_cluster_size(&input.graph, &config)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match args.format {
        Format::Json => to_json(&estimates)?,
        Format::Csv => {
            let mut text = String::from("p,samples,mean_S,se_S,mean_S2,se_S2,seed\n");
            for e in &estimates {
                writeln!(
                    text,
                    "{},{},{},{},{},{},{}",
                    e.p, e.samples, e.mean_s, e.se_s, e.mean_s2, e.se_s2, e.seed
                )?;
            }
            text
        }
    };
    emit(args.output.as_deref(), &text)
}
