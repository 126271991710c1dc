use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{sample_adjacency, sample_partition_with, sample_permutation_with, GraphonSpec, PermutonSpec, ThomaParameter};
use crate::combinatorics::{AdjacencyBits, Partition, Permutation};
use crate::Result;

/// A sampled object of one of the families.
#[derive(Clone, Debug)]
pub enum Sample {
    Graph(AdjacencyBits),
    Permutation(Permutation),
    Partition(Partition),
}

/// The three model families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Graph,
    Permutation,
    Partition,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Graph => "graph",
            Family::Permutation => "permutation",
            Family::Partition => "partition",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parameter in one of the three spaces, serialized with a `family` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelSpec {
    Graphon(GraphonSpec),
    Permuton(PermutonSpec),
    Thoma(ThomaParameter),
}

impl ModelSpec {
    pub fn family(&self) -> Family {
        match self {
            ModelSpec::Graphon(_) => Family::Graph,
            ModelSpec::Permuton(_) => Family::Permutation,
            ModelSpec::Thoma(_) => Family::Partition,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Graphon(g) => g.validate(),
            ModelSpec::Permuton(p) => p.validate(),
            ModelSpec::Thoma(w) => w.validate(),
        }
    }

    /// M_n(m): G_n(γ), σ_n(π) or λ_n(ω).
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        Ok(match self {
            ModelSpec::Graphon(g) => Sample::Graph(sample_adjacency(g, n, rng)),
            ModelSpec::Permuton(p) => Sample::Permutation(sample_permutation_with(p, n, rng)),
            ModelSpec::Thoma(w) => Sample::Partition(sample_partition_with(w, n, rng)?),
        })
    }
}
