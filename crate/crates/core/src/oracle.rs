//! Exhaustive ground truth: every one of the `2^|E|` edge configurations is
//! visited and the cluster of a fixed source is measured.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::polynomial::IntPolynomial;

/// Largest graph the oracle will enumerate.
pub const MAX_ORACLE_EDGES: usize = 30;

/// `counts[j][s]`: configurations with `j` open edges whose source cluster has `s` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSizeTally {
    pub source: VertexId,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub counts: Vec<Vec<u64>>,
}

impl ClusterSizeTally {
    fn empty(source: VertexId, n_vertices: usize, n_edges: usize) -> Self {
        ClusterSizeTally {
            source,
            n_vertices,
            n_edges,
            counts: vec![vec![0; n_vertices + 1]; n_edges + 1],
        }
    }

    fn merge(mut self, other: ClusterSizeTally) -> Self {
        for (row, other_row) in self.counts.iter_mut().zip(other.counts) {
            for (dst, src) in row.iter_mut().zip(other_row) {
                *dst += src;
            }
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Nonzero cells as `(j, s, count)`, in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().enumerate().flat_map(|(j, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(move |(s, &c)| (j, s, c))
        })
    }
}

/// Open-neighbor masks, split by the low and high halves of the edge ids.
///
/// `low[c * n + v]` is the set of neighbors of `v` reached through the open
/// edges of the low-half configuration `c`; `high_masks` does the same for one
/// high-half configuration at a time.
struct SplitNeighbors {
    n: usize,
    low: Vec<u64>,
    /// `(edge id - low_bits, u, v)` for every high-half edge.
    high_edges: Vec<(usize, usize, usize)>,
}

impl SplitNeighbors {
    fn new(graph: &Graph, low_bits: usize) -> Self {
        let n = graph.n_vertices();
        let mut low = vec![0u64; (1usize << low_bits) * n];
        for c in 0..1usize << low_bits {
            let row = &mut low[c * n..(c + 1) * n];
            for (e, &(u, v)) in graph.edges()[..low_bits].iter().enumerate() {
                if c >> e & 1 == 1 {
                    row[u] |= 1 << v;
                    row[v] |= 1 << u;
                }
            }
        }
        let high_edges = graph.edges()[low_bits..]
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (i, u, v))
            .collect();
        SplitNeighbors { n, low, high_edges }
    }

    fn high_masks(&self, high: u64, out: &mut [u64]) {
        out.fill(0);
        for &(i, u, v) in &self.high_edges {
            if high >> i & 1 == 1 {
                out[u] |= 1 << v;
                out[v] |= 1 << u;
            }
        }
    }

    /// Size of the source cluster for low-half configuration `low`.
    fn cluster_size(&self, high_masks: &[u64], low: usize, source: usize) -> usize {
        let row = &self.low[low * self.n..(low + 1) * self.n];
        let mut seen = 1u64 << source;
        let mut frontier = seen;
        while frontier != 0 {
            let mut reached = 0;
            let mut rest = frontier;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                reached |= row[v] | high_masks[v];
            }
            frontier = reached & !seen;
            seen |= frontier;
        }
        seen.count_ones() as usize
    }
}

/// Enumerates all edge configurations.
pub fn exhaustive_tally(graph: &Graph, source: VertexId) -> Result<ClusterSizeTally> {
    let m = graph.n_edges();
    if m > MAX_ORACLE_EDGES {
        return Err(Error::TooManyEdges {
            edges: m,
            max: MAX_ORACLE_EDGES,
        });
    }
    graph.check_vertex(source)?;
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = graph.n_vertices();
    let low_bits = m / 2;
    let split = SplitNeighbors::new(graph, low_bits);
    let low_weights: Vec<u32> = (0..1u32 << low_bits).map(u32::count_ones).collect();
    let tally = (0u64..1 << (m - low_bits))
        .into_par_iter()
        .fold(
            || (ClusterSizeTally::empty(source, n, m), vec![0u64; n]),
            |(mut tally, mut masks), high| {
                split.high_masks(high, &mut masks);
                let high_weight = high.count_ones() as usize;
                for (low, &w) in low_weights.iter().enumerate() {
                    let size = split.cluster_size(&masks, low, source);
                    tally.counts[high_weight + w as usize][size] += 1;
                }
                (tally, masks)
            },
        )
        .map(|(tally, _)| tally)
        .reduce(
            || ClusterSizeTally::empty(source, n, m),
            ClusterSizeTally::merge,
        );
    Ok(tally)
}

/// `Σ_{j,s} s^order counts[j][s] p^j (1 - p)^(|E| - j)` as an exact polynomial.
pub fn tally_to_moment_polynomial(tally: &ClusterSizeTally, order: u32) -> Result<IntPolynomial> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidInput(format!(
            "moment order {order} (expected 1 or 2)"
        )));
    }
    let m = tally.n_edges;
    let mut poly = IntPolynomial::zero(m);
    for (j, row) in tally.counts.iter().enumerate() {
        let mut weight: i64 = 0;
        for (s, &count) in row.iter().enumerate() {
            let s_pow = (s as i64).checked_pow(order).ok_or(Error::Overflow)?;
            let count = i64::try_from(count).map_err(|_| Error::Overflow)?;
            let term = s_pow.checked_mul(count).ok_or(Error::Overflow)?;
            weight = weight.checked_add(term).ok_or(Error::Overflow)?;
        }
        if weight != 0 {
            poly.add_scaled(&IntPolynomial::bernoulli_weight(j, m, m)?, weight)?;
        }
    }
    Ok(poly)
}

/// Exact `E(S)` and `E(S^2)` from source vertex 0.
pub fn exact_moments(graph: &Graph) -> Result<(IntPolynomial, IntPolynomial)> {
    let tally = exhaustive_tally(graph, 0)?;
    Ok((
        tally_to_moment_polynomial(&tally, 1)?,
        tally_to_moment_polynomial(&tally, 2)?,
    ))
}
