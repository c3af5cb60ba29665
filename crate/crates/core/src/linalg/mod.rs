//! Exact linear algebra on systems of permutation relations.

mod matrix;
mod system;

pub use matrix::{rank, ExactMatrix};
pub use system::{
    assemble_permutation_system, product_name, reduce_system, reduce_to_basis, three_point_relations, word_name, BasisReport,
    Expression, Part, PermutationSystem, Product, Relation, Word,
};
