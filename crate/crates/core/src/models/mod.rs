//! Parameter spaces, samplers and embeddings for graphs, permutations and
//! partitions.

mod graphon;
mod permuton;
mod rng;
mod spec;
mod thoma;

pub use graphon::{embed_graph, grid_eval, sample_adjacency, sample_graph, GraphonSpec, GridInterpolation};
pub use permuton::{
    embed_permutation, permutation_grid, sample_permutation, sample_permutation_with, sample_points, PermutonSpec,
    PointSampler,
};
pub use rng::RngSeed;
pub use spec::{Family, ModelSpec, Sample};
pub use thoma::{
    embed_partition, exact_central_measure, sample_partition, sample_partition_with, ThomaParameter,
    CENTRAL_MEASURE_CAP,
};
