//! Exact toughness, forbidden induced patterns, star matchings and constructive
//! hamiltonian-cycle assembly for small and structured graphs.

pub mod canon;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod invariants;
pub mod io;
pub mod oracle;
pub mod paths;
pub mod patterns;
pub mod pipeline;
pub mod rational;
pub mod star_matching;

pub use graph::{Cycle, Graph, GraphError, Path, RouteError, VertexSet};
pub use rational::{Rational, INFINITY};
