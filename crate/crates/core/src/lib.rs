//! Exact cluster-size moments for bond percolation on small regular graphs.
//!
//! * [`graph`]: graphs, the five Platonic solids, distance classes.
//! * [`polynomial`]: exact integer polynomials in `p`.
//! * [`paths`]: self-avoiding paths and pair-of-paths event families.
//! * [`inclusion_exclusion`]: connection polynomials and moment assembly.
//! * [`bounds`]: branching-process and large-`p` upper bounds.
//! * [`oracle`]: exhaustive enumeration of all edge configurations.
//! * [`montecarlo`]: sampling and the birth-process cluster construction.

pub mod bounds;
pub mod error;
pub mod graph;
pub mod inclusion_exclusion;
pub mod montecarlo;
pub mod oracle;
pub mod paths;
pub mod polynomial;

pub use error::{Error, Result};
pub use graph::{make_solid, DistanceClasses, Graph, Solid};
pub use inclusion_exclusion::{
    connection_polynomial, first_moment, first_moment_with, second_moment, FirstMomentOptions,
    MomentKind, MomentReport,
};
pub use paths::{enumerate_pair_events, enumerate_paths, EdgeSet, PathFamily};
pub use polynomial::IntPolynomial;
