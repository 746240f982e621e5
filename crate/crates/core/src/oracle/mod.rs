//! Ground truth: enumeration of avoiders, explicit avoider graphs and walk
//! counts.

mod cache;
mod enumerate;
mod graph;
mod walks;

pub(crate) use cache::write_atomic;
pub use cache::{read_graph, write_graph};
pub use enumerate::{
    avoiders_by_length, count_avoiders, default_length_cap, enumerate_avoiders,
    enumerate_avoiders_capped,
};
pub use graph::{
    build_avoider_graph, build_avoider_graph_capped, class_statistics, default_hub,
    prune_for_spectral, AvoiderGraph, EdgeRule, PruneReport, DEFAULT_VERTEX_CAP,
};
pub(crate) use graph::{edge_target as edge_target_of, keep_component as graph_keep_component};
pub use walks::{count_walks, count_walks_from, WalkTable};
