//! Self-avoiding path enumeration and the pair-of-paths event families.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// A set of edge ids of one graph, packed into a single word.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn from_edges<I: IntoIterator<Item = EdgeId>>(edges: I) -> Self {
        edges.into_iter().fold(EdgeSet::EMPTY, |set, e| set.with(e))
    }

    /// All edges of a graph with `n_edges` edges.
    pub fn full(n_edges: usize) -> Self {
        if n_edges >= 64 {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << n_edges) - 1)
        }
    }

    #[must_use]
    pub fn with(self, e: EdgeId) -> Self {
        EdgeSet(self.0 | 1u64 << e)
    }

    pub fn contains(self, e: EdgeId) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[must_use]
    pub fn union(self, other: EdgeSet) -> Self {
        EdgeSet(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Highest edge id plus one, 0 for the empty set.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = EdgeId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

impl fmt::Display for EdgeSet {
    /// Comma-separated edge ids in increasing order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A family of edge sets whose union event is a connection event from
/// `source` to every vertex in `targets`.
///
/// Single-target families hold self-avoiding paths in lexicographic order of
/// their vertex sequences. Two-target families hold minimal unions of one
/// path to each target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    pub source: VertexId,
    pub targets: Vec<VertexId>,
    pub paths: Vec<EdgeSet>,
    /// Edge count of each member.
    pub lengths: Vec<usize>,
    pub cutoff: Option<usize>,
    /// Whether the cutoff excluded at least one self-avoiding path.
    pub truncated: bool,
}

impl PathFamily {
    /// Builds a family from explicit members (used for hand-made families).
    pub fn from_sets(source: VertexId, targets: Vec<VertexId>, paths: Vec<EdgeSet>) -> Self {
        let lengths = paths.iter().map(|p| p.len()).collect();
        PathFamily {
            source,
            targets,
            paths,
            lengths,
            cutoff: None,
            truncated: false,
        }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Vertex bitmask; connected graphs with at most 64 edges have at most 65 vertices.
type VertexMask = u128;

struct PathSearch<'g> {
    graph: &'g Graph,
    target: VertexId,
    cutoff: usize,
    paths: Vec<EdgeSet>,
    lengths: Vec<usize>,
    truncated: bool,
}

impl PathSearch<'_> {
    fn extend(&mut self, at: VertexId, visited: VertexMask, edges: EdgeSet, depth: usize) {
        if at == self.target {
            self.paths.push(edges);
            self.lengths.push(depth);
            return;
        }
        if depth == self.cutoff {
            if !self.truncated && self.reachable_avoiding(at, visited) {
                self.truncated = true;
            }
            return;
        }
        for &(next, e) in self.graph.neighbors(at) {
            if visited >> next & 1 == 0 {
                self.extend(next, visited | 1 << next, edges.with(e), depth + 1);
            }
        }
    }

    /// Whether the target can be reached from `at` without revisiting `visited`.
    fn reachable_avoiding(&self, at: VertexId, visited: VertexMask) -> bool {
        let mut seen = visited;
        let mut stack = vec![at];
        while let Some(v) = stack.pop() {
            for &(w, _) in self.graph.neighbors(v) {
                if w == self.target {
                    return true;
                }
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        false
    }
}

/// All self-avoiding paths from `x` to `y` with at most `cutoff` edges.
pub fn enumerate_paths(
    graph: &Graph,
    x: VertexId,
    y: VertexId,
    cutoff: Option<usize>,
) -> Result<PathFamily> {
    graph.check_vertex(x)?;
    graph.check_vertex(y)?;
    if x == y {
        return Err(Error::NotDistinct);
    }
    let mut search = PathSearch {
        graph,
        target: y,
        cutoff: cutoff.unwrap_or(usize::MAX),
        paths: Vec::new(),
        lengths: Vec::new(),
        truncated: false,
    };
    search.extend(x, 1 << x, EdgeSet::EMPTY, 0);
    Ok(PathFamily {
        source: x,
        targets: vec![y],
        paths: search.paths,
        lengths: search.lengths,
        cutoff,
        truncated: search.truncated,
    })
}

/// Drops duplicates and every set that strictly contains another member.
/// The result is sorted by (size, bits).
pub fn minimalize(sets: &[EdgeSet]) -> Vec<EdgeSet> {
    let mut sorted: Vec<EdgeSet> = sets.to_vec();
    sorted.sort_unstable_by_key(|s| (s.len(), s.0));
    sorted.dedup();
    let mut kept: Vec<EdgeSet> = Vec::new();
    for set in sorted {
        if !kept.iter().any(|k| k.is_subset_of(set)) {
            kept.push(set);
        }
    }
    kept
}

/// Minimal unions `π_a ∪ π_b` of a self-avoiding path `x → y` and one `x → z`.
///
/// The union event of the family is `{x ↔ y and x ↔ z}`.
pub fn enumerate_pair_events(
    graph: &Graph,
    x: VertexId,
    y: VertexId,
    z: VertexId,
) -> Result<PathFamily> {
    for v in [x, y, z] {
        graph.check_vertex(v)?;
    }
    if x == y || x == z || y == z {
        return Err(Error::NotDistinct);
    }
    let to_y = enumerate_paths(graph, x, y, None)?;
    let to_z = enumerate_paths(graph, x, z, None)?;
    let unions: Vec<EdgeSet> = to_y
        .paths
        .iter()
        .flat_map(|&a| to_z.paths.iter().map(move |&b| a.union(b)))
        .collect();
    Ok(PathFamily::from_sets(x, vec![y, z], minimalize(&unions)))
}

/// Walks `set` as a path from `from` to `to`, returning its vertex sequence,
/// or `None` if the set is not a simple path with those endpoints.
pub fn decode_path(
    graph: &Graph,
    set: EdgeSet,
    from: VertexId,
    to: VertexId,
) -> Option<Vec<VertexId>> {
    if set.span() > graph.n_edges() {
        return None;
    }
    let mut sequence = vec![from];
    let mut remaining = set;
    let mut at = from;
    while !remaining.is_empty() {
        let mut step = graph
            .neighbors(at)
            .iter()
            .filter(|&&(_, e)| remaining.contains(e));
        let &(next, e) = step.next()?;
        if step.next().is_some() || sequence.contains(&next) {
            return None;
        }
        remaining = EdgeSet(remaining.0 & !(1u64 << e));
        sequence.push(next);
        at = next;
    }
    (at == to).then_some(sequence)
}
