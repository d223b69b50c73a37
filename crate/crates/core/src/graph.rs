//! Finite simple undirected graphs and the canonical Platonic solids.
//!
//! Every solid ships as a static edge table. Edge ids are the positions in
//! that table, which is sorted lexicographically by `(lower, upper)` vertex
//! id, so edge-id based outputs (path dumps, bitmasks) are stable between
//! runs and releases.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest edge count supported; an edge set is one `u64`.
pub const MAX_EDGES: usize = 64;

pub type VertexId = usize;
pub type EdgeId = usize;

/// K4, vertices 0..4.
const TETRAHEDRON: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// 3-cube, vertex ids are the corner bit patterns; edges join ids differing in one bit.
const CUBE: [(usize, usize); 12] = [
    (0, 1),
    (0, 2),
    (0, 4),
    (1, 3),
    (1, 5),
    (2, 3),
    (2, 6),
    (3, 7),
    (4, 5),
    (4, 6),
    (5, 7),
    (6, 7),
];

/// K6 minus the matching {0,1}, {2,3}, {4,5}; the antipode of `v` is `v ^ 1`.
const OCTAHEDRON: [(usize, usize); 12] = [
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
];

/// Generalized Petersen graph GP(10, 2): outer cycle 0..10, spokes `i -- 10 + i`,
/// inner star `10 + i -- 10 + (i + 2) % 10`.
const DODECAHEDRON: [(usize, usize); 30] = [
    (0, 1),
    (0, 9),
    (0, 10),
    (1, 2),
    (1, 11),
    (2, 3),
    (2, 12),
    (3, 4),
    (3, 13),
    (4, 5),
    (4, 14),
    (5, 6),
    (5, 15),
    (6, 7),
    (6, 16),
    (7, 8),
    (7, 17),
    (8, 9),
    (8, 18),
    (9, 19),
    (10, 12),
    (10, 18),
    (11, 13),
    (11, 19),
    (12, 14),
    (13, 15),
    (14, 16),
    (15, 17),
    (16, 18),
    (17, 19),
];

/// Pole 0, upper pentagon 1..6, lower pentagon 6..11, pole 11. Upper vertex
/// `1 + k` touches lower vertices `6 + k` and `6 + (k + 1) % 5`.
const ICOSAHEDRON: [(usize, usize); 30] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (1, 2),
    (1, 5),
    (1, 6),
    (1, 7),
    (2, 3),
    (2, 7),
    (2, 8),
    (3, 4),
    (3, 8),
    (3, 9),
    (4, 5),
    (4, 9),
    (4, 10),
    (5, 6),
    (5, 10),
    (6, 7),
    (6, 10),
    (6, 11),
    (7, 8),
    (7, 11),
    (8, 9),
    (8, 11),
    (9, 10),
    (9, 11),
    (10, 11),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Solid {
    pub const ALL: [Solid; 5] = [
        Solid::Tetrahedron,
        Solid::Cube,
        Solid::Octahedron,
        Solid::Dodecahedron,
        Solid::Icosahedron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Solid::Tetrahedron => "tetrahedron",
            Solid::Cube => "cube",
            Solid::Octahedron => "octahedron",
            Solid::Dodecahedron => "dodecahedron",
            Solid::Icosahedron => "icosahedron",
        }
    }

    fn vertex_count(self) -> usize {
        match self {
            Solid::Tetrahedron => 4,
            Solid::Cube => 8,
            Solid::Octahedron => 6,
            Solid::Dodecahedron => 20,
            Solid::Icosahedron => 12,
        }
    }

    fn edge_table(self) -> &'static [(usize, usize)] {
        match self {
            Solid::Tetrahedron => &TETRAHEDRON,
            Solid::Cube => &CUBE,
            Solid::Octahedron => &OCTAHEDRON,
            Solid::Dodecahedron => &DODECAHEDRON,
            Solid::Icosahedron => &ICOSAHEDRON,
        }
    }

    /// Path-length cutoff used for the lower-bound first moment on the 30-edge
    /// solids; `None` where the full path enumeration is tractable.
    pub fn default_cutoff(self) -> Option<usize> {
        match self {
            Solid::Dodecahedron => Some(5),
            Solid::Icosahedron => Some(3),
            _ => None,
        }
    }

    pub fn graph(self) -> Graph {
        Graph::from_edges(self.vertex_count(), self.edge_table())
            .expect("static solid tables are valid")
    }
}

impl FromStr for Solid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Solid::ALL
            .into_iter()
            .find(|solid| solid.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownSolid(s.to_string()))
    }
}

impl fmt::Display for Solid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Builds the canonical labeled graph of a Platonic solid by name.
pub fn make_solid(name: &str) -> Result<Graph> {
    Ok(name.parse::<Solid>()?.graph())
}

/// A labeled simple undirected graph with at most [`MAX_EDGES`] edges.
///
/// Adjacency lists are sorted by neighbor id and carry the id of the joining
/// edge. Edge endpoints are stored lower id first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    edges: Vec<(VertexId, VertexId)>,
}

impl Graph {
    /// Edge ids follow the order of `edges`. Endpoint order within a pair is
    /// irrelevant; self-loops and repeated pairs are rejected.
    pub fn from_edges(n_vertices: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        if edges.len() > MAX_EDGES {
            return Err(Error::InvalidGraph(format!(
                "{} edges exceed the limit of {MAX_EDGES}",
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n_vertices];
        let mut normalized = Vec::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            let (u, v) = (a.min(b), a.max(b));
            if v >= n_vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n_vertices,
                });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if adjacency[u].iter().any(|&(w, _)| w == v) {
                return Err(Error::InvalidGraph(format!("duplicate edge {u} {v}")));
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
            normalized.push((u, v));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            edges: normalized,
        })
    }

    /// Parses the line-oriented text format: a header `N M` followed by `M`
    /// lines `u v` with `0 <= u < v < N`. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing `N M` header".into(),
        })?;
        let [n, m] = parse_pair(line, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, text) in lines {
            let [u, v] = parse_pair(line, text)?;
            if u >= v || v >= n {
                return Err(Error::Parse {
                    line,
                    message: format!("edge `{u} {v}` must satisfy 0 <= u < v < {n}"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of edge `e`, lower id first.
    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// `(neighbor, edge id)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn vertex_degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n_vertices() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n_vertices: self.n_vertices(),
            })
        }
    }

    /// Returns the common degree, or the first vertex whose degree differs
    /// from that of vertex 0.
    pub fn validate_regular(&self) -> Result<usize> {
        let Some(first) = self.adjacency.first() else {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        };
        let expected = first.len();
        match self
            .adjacency
            .iter()
            .position(|list| list.len() != expected)
        {
            None => Ok(expected),
            Some(vertex) => {
                // Blame the minority side so a path graph reports its middle vertex.
                let found = self.adjacency[vertex].len();
                let same_as_first = self
                    .adjacency
                    .iter()
                    .filter(|l| l.len() == expected)
                    .count();
                let same_as_found = self.adjacency.iter().filter(|l| l.len() == found).count();
                if same_as_found > same_as_first {
                    Err(Error::Irregular {
                        vertex: 0,
                        found: expected,
                        expected: found,
                    })
                } else {
                    Err(Error::Irregular {
                        vertex,
                        found,
                        expected,
                    })
                }
            }
        }
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices() > 0
            && self.bfs_layers(0).iter().map(Vec::len).sum::<usize>() == self.n_vertices()
    }

    fn bfs_layers(&self, source: VertexId) -> Vec<Vec<VertexId>> {
        let mut dist = vec![usize::MAX; self.n_vertices()];
        let mut layers: Vec<Vec<VertexId>> = vec![vec![source]];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    if layers.len() <= dist[w] {
                        layers.push(Vec::new());
                    }
                    layers[dist[w]].push(w);
                    queue.push_back(w);
                }
            }
        }
        for layer in &mut layers {
            layer.sort_unstable();
        }
        layers
    }

    /// Partitions the vertices by graph distance from `source`.
    pub fn distance_classes(&self, source: VertexId) -> Result<DistanceClasses> {
        self.check_vertex(source)?;
        let classes = self.bfs_layers(source);
        if classes.iter().map(Vec::len).sum::<usize>() != self.n_vertices() {
            return Err(Error::Disconnected);
        }
        Ok(DistanceClasses { source, classes })
    }

    /// Graph distance between two vertices, `None` when unreachable.
    pub fn distance(&self, from: VertexId, to: VertexId) -> Option<usize> {
        self.bfs_layers(from)
            .iter()
            .position(|layer| layer.binary_search(&to).is_ok())
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two integers, found `{text}`"),
        });
    }
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse {
            line,
            message: format!("`{s}` is not a non-negative integer"),
        })
    };
    Ok([parse(fields[0])?, parse(fields[1])?])
}

/// Vertices grouped by distance from a source: `classes[s]` holds the
/// vertices at distance `s`, each class sorted by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceClasses {
    pub source: VertexId,
    pub classes: Vec<Vec<VertexId>>,
}

impl DistanceClasses {
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Eccentricity of the source.
    pub fn radius(&self) -> usize {
        self.classes.len() - 1
    }

    /// Lowest-id vertex of class `s`.
    pub fn representative(&self, s: usize) -> VertexId {
        self.classes[s][0]
    }
}
