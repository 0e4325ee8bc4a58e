//! Dynamic community detection on temporal (time-labeled) nodes of
//! diachronic link data.
//!
//! Raw links `((v_i, t_i), (v_j, t_j))` are read into a [`TemporalGraph`]
//! whose vertices are `(node, timestep)` pairs. Static modularity clustering
//! on that graph yields temporal communities, which are then characterized by
//! node activity, self-citation ratio, and heterogeneity, and per-node
//! lifetime, multiplicity, and toggle statistics.

pub mod detection;
pub mod error;
pub mod generator;
pub mod io;
pub mod metrics;
pub mod repair;
pub mod temporal_graph;

pub use detection::{Cover, ModularityView};
pub use error::{Error, Result};
pub use generator::{GeneratorConfig, PlantedAssignment};
pub use metrics::{CommunityReport, NodeReport};
pub use repair::{MergeStep, MergeTrace};
pub use temporal_graph::{
    PhysicalGraph, PhysicalNodeId, RawLink, TemporalGraph, TemporalLink, TemporalNode, Timestep,
    ValidationMode,
};
