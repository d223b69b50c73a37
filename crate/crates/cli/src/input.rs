//! Arguments shared by several subcommands: graph source, p-grid, output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use percolation_core::{Graph, Solid};

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// One of tetrahedron, cube, octahedron, dodecahedron, icosahedron.
    #[arg(long)]
    pub solid: Option<Solid>,
    /// Edge-list file: a line `N M`, then `M` lines `u v`.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
}

/// A loaded input graph with the name used in reports.
pub struct Input {
    pub name: String,
    pub solid: Option<Solid>,
    pub graph: Graph,
}

impl GraphSource {
    pub fn load(&self) -> Result<Input> {
        match (&self.solid, &self.graph) {
            (Some(solid), _) => Ok(Input {
                name: solid.name().to_string(),
                solid: Some(*solid),
                graph: solid.graph(),
            }),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let graph =
                    Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "graph".into());
                Ok(Input {
                    name,
                    solid: None,
                    graph,
                })
            }
            (None, None) => bail!("one of --solid or --graph is required"),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Comma-separated probabilities.
    #[arg(long = "p", value_delimiter = ',', conflicts_with = "grid")]
    pub p: Vec<f64>,
    /// Evenly spaced probabilities as `start:stop:step`, both ends included.
    #[arg(long)]
    pub grid: Option<String>,
}

impl GridArgs {
    /// The requested probabilities, or `default` when none were given.
    pub fn values(&self, default: &str) -> Result<Vec<f64>> {
        let values = if !self.p.is_empty() {
            self.p.clone()
        } else {
            parse_grid(self.grid.as_deref().unwrap_or(default))?
        };
        if let Some(bad) = values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            bail!("probability {bad} is outside [0, 1]");
        }
        Ok(values)
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        bail!("grid {text:?} is not of the form start:stop:step");
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("bad number {s:?} in grid {text:?}"))
    };
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if step.is_nan() || step <= 0.0 || stop < start {
        bail!("grid {text:?} needs step > 0 and stop >= start");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    // Rounding keeps printed grid points free of binary noise like 0.30000000000000004.
    Ok((0..=count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
