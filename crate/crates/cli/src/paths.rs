use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use percolation_core::{enumerate_pair_events, enumerate_paths, PathFamily};
use serde::Serialize;

use crate::input::{emit, to_json, GraphSource};

#[derive(Args, Debug)]
pub struct PathsArgs {
    #[command(flatten)]
    pub source: GraphSource,
    /// Start vertex.
    #[arg(long, default_value_t = 0)]
    pub from: usize,
    /// End vertex.
    #[arg(long, conflicts_with = "from_distance")]
    pub to: Option<usize>,
    /// End at the lowest-numbered vertex at this distance from `--from`.
    #[arg(long)]
    pub from_distance: Option<usize>,
    /// List the minimal events joining `--from` to both `--to` and this vertex.
    #[arg(long, requires = "to")]
    pub and: Option<usize>,
    /// Longest path kept.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Emit JSON instead of the line-per-path dump.
    #[arg(long)]
    pub json: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct Output<'a> {
    x: usize,
    targets: &'a [usize],
    count: usize,
    cutoff: Option<usize>,
    truncated: bool,
    paths: Vec<Vec<usize>>,
}

/// Header line `x y count cutoff` (with `x y z count cutoff` for pair events),
/// then one comma-separated edge-id list per line.
fn dump(family: &PathFamily) -> String {
    let targets: Vec<String> = family.targets.iter().map(usize::to_string).collect();
    let cutoff = family.cutoff.map_or("none".to_string(), |c| c.to_string());
    let mut text = format!(
        "{} {} {} {}\n",
        family.source,
        targets.join(" "),
        family.len(),
        cutoff
    );
    for path in &family.paths {
        let _ = writeln!(text, "{path}");
    }
    text
}

pub fn run(args: &PathsArgs) -> Result<()> {
    let input = args.source.load()?;
    let graph = &input.graph;
    let x = args.from;
    graph.check_vertex(x)?;
    let y = match (args.to, args.from_distance) {
        (Some(y), _) => y,
        (None, Some(s)) => {
            let classes = graph.distance_classes(x)?;
            if s == 0 || s > classes.radius() {
                bail!(
                    "no vertex at distance {s} from {x} (radius {})",
                    classes.radius()
                );
            }
            classes.representative(s)
        }
        (None, None) => bail!("one of --to or --from-distance is required"),
    };
    let family = match args.and {
        Some(z) => {
            if args.cutoff.is_some() {
                bail!("--cutoff does not apply to pair events");
            }
            enumerate_pair_events(graph, x, y, z)?
        }
        None => enumerate_paths(graph, x, y, args.cutoff)?,
    };
    let text = if args.json {
        to_json(&Output {
            x,
            targets: &family.targets,
            count: family.len(),
            cutoff: family.cutoff,
            truncated: family.truncated,
            paths: family.paths.iter().map(|p| p.iter().collect()).collect(),
        })?
    } else {
        dump(&family)
    };
    emit(args.output.as_deref(), &text)
}
