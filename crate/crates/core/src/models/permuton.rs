use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RngSeed;
use crate::combinatorics::{conf, Permutation};
use crate::error::invalid;
use crate::rational::{serde_q_mat, to_f64, Q};
use crate::Result;

/// Catalog of permutons: probability measures on [0,1]² with uniform marginals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum PermutonSpec {
    /// Lebesgue measure on the square.
    Uniform,
    /// π(σ): mass 1/n spread uniformly on each cell (i, σ(i)).
    FromPermutation { sigma: Permutation },
    /// Cell masses of an m×m grid, every row and column summing to 1/m.
    #[serde(alias = "grid_density")]
    Grid {
        #[serde(with = "serde_q_mat")]
        values: Vec<Vec<Q>>,
    },
    /// Inscribed disc with density proportional to 1/√(1−4r²).
    Disc,
}

impl PermutonSpec {
    pub fn grid(values: Vec<Vec<Q>>) -> Result<Self> {
        let p = PermutonSpec::Grid { values };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PermutonSpec::Uniform | PermutonSpec::Disc => Ok(()),
            PermutonSpec::FromPermutation { sigma } => {
                if sigma.is_empty() {
                    invalid("permuton of the empty permutation")
                } else {
                    Ok(())
                }
            }
            PermutonSpec::Grid { values } => {
                let m = values.len();
                if m == 0 || values.iter().any(|r| r.len() != m) {
                    return invalid("grid permuton needs an m×m matrix");
                }
                if values.iter().flatten().any(|v| *v < Q::zero()) {
                    return invalid("grid permuton masses must be nonnegative");
                }
                let target = Q::new(1.into(), m.into());
                for i in 0..m {
                    let row = values[i].iter().fold(Q::zero(), |a, v| a + v);
                    let col = values.iter().fold(Q::zero(), |a, r| a + &r[i]);
                    if row != target || col != target {
                        return invalid(format!("grid permuton row/column {} does not sum to 1/{m}", i + 1));
                    }
                }
                Ok(())
            }
        }
    }

    /// Point sampler that can be reused for many draws.
    pub fn sampler(&self) -> PointSampler<'_> {
        match self {
            PermutonSpec::Grid { values } => {
                let m = values.len();
                let mut acc = 0.0;
                let cum = values
                    .iter()
                    .flatten()
                    .map(|v| {
                        acc += to_f64(v);
                        acc
                    })
                    .collect();
                PointSampler::Grid { m, cum }
            }
            other => PointSampler::Direct(other),
        }
    }
}

pub enum PointSampler<'a> {
    Direct(&'a PermutonSpec),
    Grid { m: usize, cum: Vec<f64> },
}

impl PointSampler<'_> {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            PointSampler::Direct(PermutonSpec::Uniform) => (rng.random(), rng.random()),
            PointSampler::Direct(PermutonSpec::FromPermutation { sigma }) => {
                let n = sigma.len();
                let i = rng.random_range(0..n);
                let j = sigma.values()[i] - 1;
                let nf = n as f64;
                ((i as f64 + rng.random::<f64>()) / nf, (j as f64 + rng.random::<f64>()) / nf)
            }
            PointSampler::Direct(PermutonSpec::Disc) => {
                // Orthogonal projection of the uniform measure on a sphere.
                let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
                let phi = std::f64::consts::TAU * rng.random::<f64>();
                let r = (1.0 - z * z).max(0.0).sqrt();
                ((1.0 + r * phi.cos()) / 2.0, (1.0 + r * phi.sin()) / 2.0)
            }
            PointSampler::Direct(PermutonSpec::Grid { .. }) => unreachable!(),
            PointSampler::Grid { m, cum } => {
                let u = rng.random::<f64>() * cum[cum.len() - 1];
                let c = cum.partition_point(|&x| x <= u).min(cum.len() - 1);
                let (i, j) = (c / m, c % m);
                let mf = *m as f64;
                ((i as f64 + rng.random::<f64>()) / mf, (j as f64 + rng.random::<f64>()) / mf)
            }
        }
    }
}

pub fn sample_points<R: Rng + ?Sized>(spec: &PermutonSpec, n: usize, rng: &mut R) -> Vec<(f64, f64)> {
    let s = spec.sampler();
    (0..n).map(|_| s.draw(rng)).collect()
}

/// σ_n(π) = conf of n i.i.d. points; a draw with tied coordinates (probability
/// zero in exact arithmetic) is redrawn.
pub fn sample_permutation_with<R: Rng + ?Sized>(spec: &PermutonSpec, n: usize, rng: &mut R) -> Permutation {
    loop {
        let pts = sample_points(spec, n, rng);
        if let Ok(p) = conf(&pts) {
            return p;
        }
    }
}

pub fn sample_permutation(spec: &PermutonSpec, n: usize, seed: RngSeed) -> Permutation {
    sample_permutation_with(spec, n, &mut seed.rng())
}

pub fn embed_permutation(sigma: &Permutation) -> Result<PermutonSpec> {
    let p = PermutonSpec::FromPermutation { sigma: sigma.clone() };
    p.validate()?;
    Ok(p)
}

/// Cell masses of π(σ) as an n×n grid (1/n on each marked cell).
pub fn permutation_grid(sigma: &Permutation) -> Vec<Vec<Q>> {
    let n = sigma.len();
    let mut g = vec![vec![Q::zero(); n]; n];
    for (i, &v) in sigma.values().iter().enumerate() {
        g[i][v - 1] = Q::one() / Q::from_integer(n.into());
    }
    g
}
