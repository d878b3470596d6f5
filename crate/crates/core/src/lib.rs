//! Virtual backbones for asymmetric wireless ad-hoc networks.
//!
//! A backbone here is a strongly connected dominating-absorbent set (SCDAS)
//! of a directed disk graph: every node outside the set has an in-neighbor and
//! an out-neighbor inside it, and the set induces a strongly connected graph.

pub mod approx;
pub mod baselines;
pub mod experiment;
pub mod graph;
pub mod instance;
pub mod io;
pub mod ldhd;
pub mod mis;
pub mod sim;
pub mod solution;

pub use graph::{
    Digraph, DiskGraph, DiskNode, GraphError, Instance, NodeId, UndirectedGraph, Verdict,
};
pub use solution::{Algorithm, Solution, WitnessPath};
