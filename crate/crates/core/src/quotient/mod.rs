//! Quotients of avoider graphs by a vertex statistic, explicit and implicit.

mod build;
mod cache;
mod edges;
mod graph;
mod implicit;
mod key;
mod walks;

pub use build::{
    build_chain, build_quotient_a, build_quotient_a_from_counts, build_quotient_b,
    build_quotient_b_with_dropped, build_quotient_c, build_quotient_c_capped, Boundary,
    EXPLICIT_SHORT_CUTOFF_CAP, FULL_GRAPH_CUTOFF_CAP,
};
pub use cache::{read_quotient, write_quotient};
pub use edges::{edge_count_e, EdgeCounts};
pub use graph::{aggregate_graph, aggregate_streaming, rows_f64, Aggregation, QuotientGraph};
pub use implicit::{RunOperator, ShortOperator, IMPLICIT_CUTOFF_CAP};
pub use key::{ClassKey, Keyer, QuotientKind};
pub use walks::{
    conjecture_report, walk_csv, weighted_walks_exact, weighted_walks_f64, ConjectureRow,
    EXACT_WALK_CAP,
};
