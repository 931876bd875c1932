//! Exact minimum-cost matching on randomly weighted graphs, together with
//! a reproducible Monte Carlo harness for the mean-field limit laws of the
//! random assignment problem.
//!
//! The library has three layers:
//!
//! * instance generation: Erdos-Renyi style random graphs (`graph`) with
//!   exponential edge costs drawn from counter-based random streams (`rng`);
//! * exact solvers: incremental bipartite assignment by successive shortest
//!   augmenting paths (`bipartite`) and non-bipartite perfect matching by a
//!   primal-dual blossom algorithm (`general`), both with dual certificates;
//! * measurement: closed-form reference values (`theory`), structural probes
//!   of alternating paths (`diagnostics`), and declarative experiments
//!   (`montecarlo`).

pub mod bipartite;
pub mod blossom;
pub mod diagnostics;
pub mod error;
pub mod general;
pub mod graph;
pub mod io;
pub mod montecarlo;
pub mod rng;
pub mod theory;

pub use error::Error;
pub use graph::{BipartiteWeightedGraph, GeneratedGraph, Model, ModelSpec, WeightedEdge, WeightedGraph};
pub use rng::RngStream;
