//! Constrained shortest paths through Lagrangian aggregation over exact and
//! hierarchical shortest-path engines.

pub mod bench;
pub mod contract;
pub mod dijkstra;
pub mod dimacs;
pub mod engine;
pub mod exact;
pub mod graph;
pub mod hs;
pub mod larac;
pub mod rng;
pub mod traverse;
pub mod udg;
pub mod weight;

pub use engine::EngineConfig;
pub use graph::{Graph, GraphBuilder, InstanceSpec, Path};
pub use larac::{solve, LaracResult, SearchRule, Status};
pub use weight::{Rational, WeightView};
