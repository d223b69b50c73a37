//! Monte Carlo estimates of the cluster-size moments, and the
//! generation-by-generation birth process that builds an open cluster.
//!
//! Randomness: sample `i` of a run with seed `s` draws from a ChaCha8 stream
//! keyed by `seed_from_u64(s)` with stream id `i`. Each sample first draws the
//! source (only under [`SourcePolicy::Uniform`]) and then one uniform `f64`
//! per edge in edge-id order; edge `e` is open iff its draw is below `p`.
//! Results therefore do not depend on thread count or scheduling.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::paths::EdgeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourcePolicy {
    Fixed(VertexId),
    /// A fresh uniformly random source per sample.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub p: f64,
    pub samples: u64,
    pub seed: u64,
    pub source: SourcePolicy,
}

impl SimConfig {
    pub fn new(p: f64, samples: u64, seed: u64) -> Self {
        SimConfig {
            p,
            samples,
            seed,
            source: SourcePolicy::Fixed(0),
        }
    }

    fn validate(&self, graph: &Graph) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::ProbabilityOutOfRange(self.p));
        }
        if self.samples == 0 {
            return Err(Error::InvalidInput("samples must be at least 1".into()));
        }
        if let SourcePolicy::Fixed(v) = self.source {
            graph.check_vertex(v)?;
        }
        Ok(())
    }
}

/// Sample moments of the cluster size with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimEstimate {
    pub p: f64,
    pub samples: u64,
    pub seed: u64,
    pub mean_s: f64,
    pub se_s: f64,
    pub mean_s2: f64,
    pub se_s2: f64,
}

/// The RNG stream of one sample.
pub fn sample_rng(seed: u64, sample: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng
}

/// Opens each edge independently with probability `p`.
pub fn random_realization<R: Rng>(graph: &Graph, p: f64, rng: &mut R) -> EdgeSet {
    (0..graph.n_edges())
        .filter(|_| rng.random::<f64>() < p)
        .fold(EdgeSet::EMPTY, EdgeSet::with)
}

/// Distance of every vertex from `source` along open edges, `None` outside
/// the open cluster.
pub fn open_distances(graph: &Graph, open: EdgeSet, source: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.n_vertices()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let next = dist[v].map(|d| d + 1);
        for &(w, e) in graph.neighbors(v) {
            if open.contains(e) && dist[w].is_none() {
                dist[w] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn open_cluster_size(graph: &Graph, open: EdgeSet, source: VertexId) -> usize {
    open_distances(graph, open, source)
        .iter()
        .filter(|d| d.is_some())
        .count()
}

#[derive(Default)]
struct Sums {
    s: u128,
    s2: u128,
    s4: u128,
}

/// Standard error of a mean from exact integer sums of `x` and `x^2`.
fn standard_error(n: u64, sum: u128, sum_sq: u128) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let n = n as u128;
    // n Σx² - (Σx)² is exact and nonnegative.
    let spread = n * sum_sq - sum * sum;
    let variance = spread as f64 / (n as f64 * (n - 1) as f64);
    (variance / n as f64).sqrt()
}

pub fn sample_cluster_size(graph: &Graph, config: &SimConfig) -> Result<SimEstimate> {
    config.validate(graph)?;
    let n_vertices = graph.n_vertices();
    let sums = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(config.seed, i);
            let source = match config.source {
                SourcePolicy::Fixed(v) => v,
                SourcePolicy::Uniform => rng.random_range(0..n_vertices),
            };
            let open = random_realization(graph, config.p, &mut rng);
            open_cluster_size(graph, open, source) as u128
        })
        .fold(Sums::default, |mut acc, s| {
            acc.s += s;
            acc.s2 += s * s;
            acc.s4 += s * s * s * s;
            acc
        })
        .reduce(Sums::default, |a, b| Sums {
            s: a.s + b.s,
            s2: a.s2 + b.s2,
            s4: a.s4 + b.s4,
        });
    let n = config.samples;
    Ok(SimEstimate {
        p: config.p,
        samples: n,
        seed: config.seed,
        mean_s: sums.s as f64 / n as f64,
        se_s: standard_error(n, sums.s, sums.s2),
        mean_s2: sums.s2 as f64 / n as f64,
        se_s2: standard_error(n, sums.s2, sums.s4),
    })
}

/// Generation-by-generation occupation of an open cluster.
///
/// `generations[n]` lists the vertices first occupied at time `n` (sorted),
/// for `n = 0..N`. Within a generation, particles reproduce in increasing
/// vertex order and try their neighbors in increasing vertex order, so
/// `parents` records which particle claimed each vertex first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenerationTrace {
    pub source: VertexId,
    pub generations: Vec<Vec<VertexId>>,
    pub parents: Vec<Option<VertexId>>,
}

impl GenerationTrace {
    /// `Y_n`, the number of particles born at time `n`.
    pub fn births(&self) -> Vec<usize> {
        self.generations.iter().map(Vec::len).collect()
    }

    /// `ξ_n`, every vertex occupied by time `n`, sorted.
    pub fn occupied(&self, n: usize) -> Vec<VertexId> {
        let mut all: Vec<VertexId> = self.generations[..=n.min(self.generations.len() - 1)]
            .iter()
            .flatten()
            .copied()
            .collect();
        all.sort_unstable();
        all
    }

    pub fn total_particles(&self) -> usize {
        self.generations.iter().map(Vec::len).sum()
    }
}

pub fn birth_process(graph: &Graph, open: EdgeSet, source: VertexId) -> Result<GenerationTrace> {
    graph.check_vertex(source)?;
    if open.span() > graph.n_edges() {
        return Err(Error::InvalidInput(format!(
            "edge set {{{open}}} uses edges beyond {}",
            graph.n_edges()
        )));
    }
    let n = graph.n_vertices();
    let mut occupied = vec![false; n];
    let mut parents = vec![None; n];
    occupied[source] = true;
    let mut generations = vec![vec![source]];
    for _ in 1..n {
        let mut born = Vec::new();
        for &z in generations.last().unwrap() {
            for &(y, e) in graph.neighbors(z) {
                if !occupied[y] && open.contains(e) {
                    occupied[y] = true;
                    parents[y] = Some(z);
                    born.push(y);
                }
            }
        }
        born.sort_unstable();
        generations.push(born);
    }
    Ok(GenerationTrace {
        source,
        generations,
        parents,
    })
}
