//! Inclusion-exclusion over path families.
//!
//! For a family `π_1, ..., π_K` of edge sets, the probability that at least
//! one member is fully open is
//!
//! ```text
//! sum over nonempty B ⊆ [K] of (-1)^(|B|+1) p^|∪_{i∈B} π_i|
//! ```
//!
//! so the coefficient of `p^j` is the signed number of subfamilies whose
//! union has exactly `j` edges. The subset lattice is walked depth first,
//! carrying the running union, which makes every node O(1).

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::paths::{enumerate_pair_events, enumerate_paths, EdgeSet, PathFamily};
use crate::polynomial::IntPolynomial;

/// Largest family accepted; the walk visits `2^K - 1` subsets.
pub const MAX_FAMILY_SIZE: usize = 40;

/// Default cap on the total subset count of a second-moment computation.
pub const DEFAULT_SECOND_MOMENT_BUDGET: u128 = 1 << 32;

/// Families at most this large are walked on the calling thread.
const SEQUENTIAL_LIMIT: usize = 16;

/// Number of leading family members whose inclusion pattern defines one
/// parallel task.
const SPLIT_DEPTH: usize = 10;

/// Signed subset counts `a_j` indexed by union size, plus the number of
/// subsets visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientAccumulator {
    pub a: Vec<i64>,
    pub subsets_visited: u64,
}

impl CoefficientAccumulator {
    pub fn new(n_edges: usize) -> Self {
        CoefficientAccumulator {
            a: vec![0; n_edges + 1],
            subsets_visited: 0,
        }
    }

    fn record(&mut self, union: u64, sign: i64) {
        self.a[union.count_ones() as usize] += sign;
        self.subsets_visited += 1;
    }

    /// Visits every nonempty extension of the current subfamily by members of
    /// `rest`. `sign` is the sign of the subfamilies one member larger.
    fn walk(&mut self, rest: &[EdgeSet], union: u64, sign: i64) {
        for (i, set) in rest.iter().enumerate() {
            let extended = union | set.0;
            self.record(extended, sign);
            self.walk(&rest[i + 1..], extended, -sign);
        }
    }

    fn merge(mut self, other: CoefficientAccumulator) -> Self {
        for (dst, src) in self.a.iter_mut().zip(other.a) {
            *dst += src;
        }
        self.subsets_visited += other.subsets_visited;
        self
    }

    /// Accumulates over every nonempty subfamily of `sets`.
    pub fn run(sets: &[EdgeSet], n_edges: usize) -> Self {
        if sets.len() <= SEQUENTIAL_LIMIT {
            let mut acc = Self::new(n_edges);
            acc.walk(sets, 0, 1);
            return acc;
        }
        let (head, tail) = sets.split_at(SPLIT_DEPTH);
        (0u32..1 << SPLIT_DEPTH)
            .into_par_iter()
            .fold(
                || Self::new(n_edges),
                |mut acc, mask| {
                    let mut union = 0u64;
                    for (i, set) in head.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            union |= set.0;
                        }
                    }
                    let chosen = mask.count_ones();
                    // Sign of a subfamily with `chosen + 1` members.
                    let next_sign = if chosen % 2 == 0 { 1 } else { -1 };
                    if chosen > 0 {
                        acc.record(union, -next_sign);
                    }
                    acc.walk(tail, union, next_sign);
                    acc
                },
            )
            .reduce(|| Self::new(n_edges), Self::merge)
    }

    pub fn into_polynomial(self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.a)
    }
}

/// Inclusion-exclusion outcome for one family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionPolynomial {
    pub polynomial: IntPolynomial,
    pub subsets_visited: u64,
}

/// Probability, as a polynomial in `p`, that some member of `sets` is fully open.
pub fn union_polynomial(sets: &[EdgeSet], n_edges: usize) -> Result<ConnectionPolynomial> {
    if sets.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if sets.len() > MAX_FAMILY_SIZE {
        return Err(Error::FamilyTooLarge {
            size: sets.len(),
            max: MAX_FAMILY_SIZE,
        });
    }
    if let Some(bad) = sets.iter().find(|s| s.span() > n_edges) {
        return Err(Error::InvalidInput(format!(
            "edge set {{{bad}}} uses edges beyond {n_edges}"
        )));
    }
    let acc = CoefficientAccumulator::run(sets, n_edges);
    Ok(ConnectionPolynomial {
        subsets_visited: acc.subsets_visited,
        polynomial: acc.into_polynomial(),
    })
}

/// Connection polynomial of a path or pair-event family. For a cutoff-truncated
/// family this is a lower bound on the true connection probability.
pub fn connection_polynomial(family: &PathFamily, n_edges: usize) -> Result<IntPolynomial> {
    Ok(union_polynomial(&family.paths, n_edges)?.polynomial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    Exact,
    LowerBound,
}

/// Connection polynomial of one distance class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTerm {
    pub s: usize,
    #[serde(rename = "N_s")]
    pub n_s: usize,
    #[serde(rename = "K_s")]
    pub k_s: usize,
    #[serde(serialize_with = "coeffs_only")]
    pub coeffs: IntPolynomial,
    #[serde(skip)]
    pub representative: VertexId,
    #[serde(skip)]
    pub subsets_visited: u64,
}

/// Aggregate of the distinct-triple terms of a second moment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairTerm {
    pub triples: usize,
    pub events: usize,
    #[serde(serialize_with = "coeffs_only")]
    pub coeffs: IntPolynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub solid: String,
    pub moment: u8,
    pub kind: MomentKind,
    #[serde(rename = "coeffs", serialize_with = "coeffs_only")]
    pub polynomial: IntPolynomial,
    pub per_class: Vec<ClassTerm>,
    pub subsets_visited: u64,
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_term: Option<PairTerm>,
    /// Subsets walked by the homogeneity cross-check, not part of the result.
    #[serde(skip)]
    pub check_subsets_visited: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn coeffs_only<S: Serializer>(poly: &IntPolynomial, serializer: S) -> Result<S::Ok, S::Error> {
    poly.coeffs().serialize(serializer)
}

impl MomentReport {
    pub fn eval(&self, p: f64) -> Result<f64> {
        self.polynomial.eval(p)
    }

    /// Renames the report (reports start out labelled `graph`).
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.solid = name.into();
        self
    }
}

/// Settings for [`first_moment_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstMomentOptions {
    pub source: VertexId,
    pub cutoff: Option<usize>,
    /// Recompute every class from a second source and require equal polynomials.
    pub check_homogeneity: bool,
}

impl Default for FirstMomentOptions {
    fn default() -> Self {
        FirstMomentOptions {
            source: 0,
            cutoff: None,
            check_homogeneity: true,
        }
    }
}

/// `E(S) = Σ_s N_s P(x ↔ y_s)` from source vertex 0, with the homogeneity check on.
pub fn first_moment(graph: &Graph, cutoff: Option<usize>) -> Result<MomentReport> {
    first_moment_with(
        graph,
        FirstMomentOptions {
            cutoff,
            ..FirstMomentOptions::default()
        },
    )
}

fn class_terms(
    graph: &Graph,
    source: VertexId,
    cutoff: Option<usize>,
) -> Result<(Vec<ClassTerm>, bool)> {
    let classes = graph.distance_classes(source)?;
    let n_edges = graph.n_edges();
    let mut truncated = false;
    let mut terms = vec![ClassTerm {
        s: 0,
        n_s: 1,
        k_s: 0,
        coeffs: IntPolynomial::constant(n_edges, 1),
        representative: source,
        subsets_visited: 0,
    }];
    for s in 1..=classes.radius() {
        let y = classes.representative(s);
        let family = enumerate_paths(graph, source, y, cutoff)?;
        truncated |= family.truncated;
        // A cutoff below the distance leaves no path: the lower bound is 0.
        let result = if family.is_empty() {
            ConnectionPolynomial {
                polynomial: IntPolynomial::zero(n_edges),
                subsets_visited: 0,
            }
        } else {
            union_polynomial(&family.paths, n_edges)?
        };
        terms.push(ClassTerm {
            s,
            n_s: classes.classes[s].len(),
            k_s: family.len(),
            coeffs: result.polynomial,
            representative: y,
            subsets_visited: result.subsets_visited,
        });
    }
    Ok((terms, truncated))
}

pub fn first_moment_with(graph: &Graph, options: FirstMomentOptions) -> Result<MomentReport> {
    let started = Instant::now();
    let source = options.source;
    graph.check_vertex(source)?;
    let sizes = graph.distance_classes(source)?.sizes();
    let mut check_subsets_visited = 0;
    if options.check_homogeneity {
        for other in 0..graph.n_vertices() {
            let other_sizes = graph.distance_classes(other)?.sizes();
            if other_sizes != sizes {
                return Err(Error::NotHomogeneous(format!(
                    "class sizes {sizes:?} from vertex {source} but {other_sizes:?} from vertex {other}"
                )));
            }
        }
    }
    let (per_class, truncated) = class_terms(graph, source, options.cutoff)?;
    if options.check_homogeneity && graph.n_vertices() > 1 {
        let alternate = if source == graph.n_vertices() - 1 {
            0
        } else {
            graph.n_vertices() - 1
        };
        let (check, _) = class_terms(graph, alternate, options.cutoff)?;
        for (ours, theirs) in per_class.iter().zip(&check) {
            if ours.coeffs != theirs.coeffs {
                return Err(Error::NotHomogeneous(format!(
                    "P({source} <-> {}) differs from P({alternate} <-> {}) at distance {}",
                    ours.representative, theirs.representative, ours.s
                )));
            }
        }
        check_subsets_visited = check.iter().map(|t| t.subsets_visited).sum();
    }
    let mut polynomial = IntPolynomial::zero(graph.n_edges());
    for term in &per_class {
        polynomial.add_scaled(&term.coeffs, term.n_s as i64)?;
    }
    Ok(MomentReport {
        solid: "graph".into(),
        moment: 1,
        kind: if truncated {
            MomentKind::LowerBound
        } else {
            MomentKind::Exact
        },
        polynomial,
        subsets_visited: per_class.iter().map(|t| t.subsets_visited).sum(),
        per_class,
        cutoff: options.cutoff,
        pair_term: None,
        check_subsets_visited,
        wall_time: started.elapsed(),
    })
}

/// `E(S^2) = Σ_{y,z} P(x ↔ y, x ↔ z)` from source vertex 0, grouped as
/// `1 + 3 Σ_{y≠x} P(x ↔ y) + Σ_{y≠z, both ≠ x} P(x ↔ y, x ↔ z)`.
///
/// Every ordered triple gets its own pair-event family. Refused with
/// [`Error::BudgetExceeded`] when the total subset count would exceed `budget`.
pub fn second_moment(graph: &Graph, budget: u128) -> Result<MomentReport> {
    let started = Instant::now();
    let source = 0;
    let n_edges = graph.n_edges();
    let classes = graph.distance_classes(source)?;
    let others: Vec<VertexId> = (0..graph.n_vertices()).filter(|&v| v != source).collect();

    let families: Vec<PathFamily> = others
        .iter()
        .map(|&y| enumerate_paths(graph, source, y, None))
        .collect::<Result<_>>()?;
    let path_count = |y: VertexId| families[others.iter().position(|&v| v == y).unwrap()].len();

    let triples: Vec<(VertexId, VertexId)> = others
        .iter()
        .flat_map(|&y| {
            others
                .iter()
                .filter(move |&&z| z != y)
                .map(move |&z| (y, z))
        })
        .collect();

    // A minimal pair family has at least as many members as either path
    // family: each x-y path extends to a distinct Steiner tree.
    let single_work: u128 = families.iter().map(|f| subset_work(f.len())).sum();
    let lower_work = triples.iter().fold(single_work, |acc, &(y, z)| {
        acc.saturating_add(subset_work(path_count(y).max(path_count(z))))
    });
    if lower_work > budget {
        return Err(Error::BudgetExceeded {
            work: lower_work,
            budget,
        });
    }
    let pair_families: Vec<PathFamily> = triples
        .iter()
        .map(|&(y, z)| enumerate_pair_events(graph, source, y, z))
        .collect::<Result<_>>()?;
    let work = pair_families.iter().fold(single_work, |acc, f| {
        acc.saturating_add(subset_work(f.len()))
    });
    if work > budget {
        return Err(Error::BudgetExceeded { work, budget });
    }

    let mut subsets_visited = 0;
    let mut single_sum = IntPolynomial::zero(n_edges);
    let mut single_by_vertex = Vec::with_capacity(families.len());
    for family in &families {
        let result = union_polynomial(&family.paths, n_edges)?;
        subsets_visited += result.subsets_visited;
        single_sum.add_scaled(&result.polynomial, 1)?;
        single_by_vertex.push(result);
    }
    let mut pair_sum = IntPolynomial::zero(n_edges);
    for family in &pair_families {
        let result = union_polynomial(&family.paths, n_edges)?;
        subsets_visited += result.subsets_visited;
        pair_sum.add_scaled(&result.polynomial, 1)?;
    }

    let mut polynomial = IntPolynomial::constant(n_edges, 1);
    polynomial.add_scaled(&single_sum, 3)?;
    polynomial.add_scaled(&pair_sum, 1)?;

    let mut per_class = vec![ClassTerm {
        s: 0,
        n_s: 1,
        k_s: 0,
        coeffs: IntPolynomial::constant(n_edges, 1),
        representative: source,
        subsets_visited: 0,
    }];
    for s in 1..=classes.radius() {
        let y = classes.representative(s);
        let index = others.iter().position(|&v| v == y).unwrap();
        per_class.push(ClassTerm {
            s,
            n_s: classes.classes[s].len(),
            k_s: families[index].len(),
            coeffs: single_by_vertex[index].polynomial.clone(),
            representative: y,
            subsets_visited: single_by_vertex[index].subsets_visited,
        });
    }

    Ok(MomentReport {
        solid: "graph".into(),
        moment: 2,
        kind: MomentKind::Exact,
        polynomial,
        per_class,
        subsets_visited,
        cutoff: None,
        pair_term: Some(PairTerm {
            triples: triples.len(),
            events: pair_families.iter().map(PathFamily::len).sum(),
            coeffs: pair_sum,
        }),
        check_subsets_visited: 0,
        wall_time: started.elapsed(),
    })
}

fn subset_work(k: usize) -> u128 {
    if k >= 127 {
        u128::MAX
    } else {
        (1u128 << k) - 1
    }
}
