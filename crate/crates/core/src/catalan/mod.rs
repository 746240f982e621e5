//! Class sizes and the tree bijection for 132-avoiders.

mod descents;
mod tree;
mod triangle;

pub use descents::class_size_c;
pub use tree::{
    g_by_position, multiset_g, perm_to_tree, reconstruct_from_multiset, reconstruct_tree,
    tree_to_perm, BinaryTree, Node, RemovalMultiset,
};
pub use triangle::{
    binomial, catalan, catalan_triangle, class_size_a, class_size_a_by_recurrence, class_size_b,
    TriangleTable,
};
