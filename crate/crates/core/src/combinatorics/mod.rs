//! Graphs, permutations and partitions with the operations of their
//! observable algebras: products, junctions, amalgamated shuffles, joins,
//! and symmetric-group characters.

mod characters;
mod graph;
mod partition;
mod permutation;

pub use characters::{mn_character, p_k, p_rho, sigma_rho, z_rho};
pub use graph::{AdjacencyBits, Graph};
pub use partition::{partitions_of, Partition};
pub use permutation::{
    ab_shuffle, amalgam_cardinality, amalgamated_multiset2, amalgamated_multiset3,
    amalgamated_shuffle2, amalgamated_shuffle3, conf, graphical_shuffle, occ, pattern_counts,
    Permutation,
};

use serde::{Deserialize, Serialize};

/// Index pattern of a three-way junction, all indices 1-based.
///
/// `Point(a, b, c)` glues vertex/point/part `a` of the first argument, `b` of
/// the second and `c` of the third into one. `Pair(a, b, c, d)` glues `a` of
/// the first with `b` of the second, and `c` of the second with `d` of the
/// third (`b ≠ c`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Junction3 {
    Point(usize, usize, usize),
    Pair(usize, usize, usize, usize),
}
