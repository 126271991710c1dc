use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RngSeed;
use crate::combinatorics::{AdjacencyBits, Graph};
use crate::error::invalid;
use crate::rational::{serde_q, serde_q_mat, serde_q_vec, to_f64, Q};
use crate::Result;

/// Catalog of graph functions g: [0,1]² → [0,1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum GraphonSpec {
    /// g ≡ p (Erdős–Rényi).
    Constant {
        #[serde(with = "serde_q")]
        p: Q,
    },
    /// Blocks of the given masses with constant values.
    #[serde(alias = "step_function")]
    Step {
        #[serde(with = "serde_q_vec")]
        masses: Vec<Q>,
        #[serde(with = "serde_q_mat")]
        values: Vec<Vec<Q>>,
    },
    /// g(x,y) = xy.
    Product,
    /// g(x,y) = (x+y)/2.
    Mean,
    /// Symmetric m×m samples, either as cell values or as bilinear nodes on
    /// the grid i/(m−1).
    Grid {
        values: Vec<Vec<f64>>,
        #[serde(default)]
        interpolation: GridInterpolation,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridInterpolation {
    #[default]
    Bilinear,
    PiecewiseConstant,
}

fn unit(x: &Q) -> bool {
    *x >= Q::zero() && *x <= Q::one()
}

impl GraphonSpec {
    pub fn constant(p: Q) -> Result<Self> {
        let g = GraphonSpec::Constant { p };
        g.validate()?;
        Ok(g)
    }

    pub fn step(masses: Vec<Q>, values: Vec<Vec<Q>>) -> Result<Self> {
        let g = GraphonSpec::Step { masses, values };
        g.validate()?;
        Ok(g)
    }

    pub fn grid(values: Vec<Vec<f64>>, interpolation: GridInterpolation) -> Result<Self> {
        let g = GraphonSpec::Grid {
            values,
            interpolation,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GraphonSpec::Constant { p } => {
                if !unit(p) {
                    return invalid("constant graphon value outside [0,1]");
                }
            }
            GraphonSpec::Step { masses, values } => {
                let q = masses.len();
                if q == 0 {
                    return invalid("step graphon needs at least one block");
                }
                if masses.iter().any(|m| *m <= Q::zero()) {
                    return invalid("block masses must be positive");
                }
                if masses.iter().fold(Q::zero(), |a, m| a + m) != Q::one() {
                    return invalid("block masses must sum to 1");
                }
                if values.len() != q || values.iter().any(|r| r.len() != q) {
                    return invalid("step values must be a q×q matrix");
                }
                for i in 0..q {
                    for j in 0..q {
                        if !unit(&values[i][j]) {
                            return invalid("step values outside [0,1]");
                        }
                        if values[i][j] != values[j][i] {
                            return invalid("step values must be symmetric");
                        }
                    }
                }
            }
            GraphonSpec::Product | GraphonSpec::Mean => {}
            GraphonSpec::Grid {
                values,
                interpolation,
            } => {
                let m = values.len();
                let min = match interpolation {
                    GridInterpolation::Bilinear => 2,
                    GridInterpolation::PiecewiseConstant => 1,
                };
                if m < min || values.iter().any(|r| r.len() != m) {
                    return invalid(format!("grid graphon needs an m×m matrix with m ≥ {min}"));
                }
                for i in 0..m {
                    for j in 0..m {
                        let v = values[i][j];
                        if !(0.0..=1.0).contains(&v) {
                            return invalid("grid values outside [0,1]");
                        }
                        if v != values[j][i] {
                            return invalid("grid values must be symmetric");
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Point evaluation g(x, y) in floating point.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            GraphonSpec::Constant { p } => to_f64(p),
            GraphonSpec::Step { masses, values } => {
                let (i, j) = (block_of(masses, x), block_of(masses, y));
                to_f64(&values[i][j])
            }
            GraphonSpec::Product => x * y,
            GraphonSpec::Mean => (x + y) / 2.0,
            GraphonSpec::Grid {
                values,
                interpolation,
            } => grid_eval(values, *interpolation, x, y),
        }
    }
}

fn block_of(masses: &[Q], x: f64) -> usize {
    let mut acc = 0.0;
    for (i, m) in masses.iter().enumerate() {
        acc += to_f64(m);
        if x < acc {
            return i;
        }
    }
    masses.len() - 1
}

pub fn grid_eval(values: &[Vec<f64>], interp: GridInterpolation, x: f64, y: f64) -> f64 {
    let m = values.len();
    match interp {
        GridInterpolation::PiecewiseConstant => {
            let i = ((x * m as f64) as usize).min(m - 1);
            let j = ((y * m as f64) as usize).min(m - 1);
            values[i][j]
        }
        GridInterpolation::Bilinear => {
            let s = (m - 1) as f64;
            let (fx, fy) = (x * s, y * s);
            let i = (fx as usize).min(m - 2);
            let j = (fy as usize).min(m - 2);
            let (u, v) = (fx - i as f64, fy - j as f64);
            values[i][j] * (1.0 - u) * (1.0 - v)
                + values[i + 1][j] * u * (1.0 - v)
                + values[i][j + 1] * (1.0 - u) * v
                + values[i + 1][j + 1] * u * v
        }
    }
}

/// Floating-point view of a spec, prepared once per batch of samples.
enum Prepared<'a> {
    Constant(f64),
    Step { cum: Vec<f64>, values: Vec<Vec<f64>> },
    Other(&'a GraphonSpec),
}

impl<'a> Prepared<'a> {
    fn new(spec: &'a GraphonSpec) -> Self {
        match spec {
            GraphonSpec::Constant { p } => Prepared::Constant(to_f64(p)),
            GraphonSpec::Step { masses, values } => {
                let mut acc = Q::zero();
                let cum = masses
                    .iter()
                    .map(|m| {
                        acc += m;
                        to_f64(&acc)
                    })
                    .collect();
                let values = values.iter().map(|r| r.iter().map(to_f64).collect()).collect();
                Prepared::Step { cum, values }
            }
            other => Prepared::Other(other),
        }
    }
}

/// G_n(γ): n uniform types X_i, then independent edges with P = g(X_i, X_j).
pub fn sample_adjacency<R: Rng + ?Sized>(spec: &GraphonSpec, n: usize, rng: &mut R) -> AdjacencyBits {
    let mut bits = AdjacencyBits::new(n);
    let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let prep = Prepared::new(spec);
    match &prep {
        Prepared::Constant(p) => {
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < *p {
                        bits.set_edge(i, j);
                    }
                }
            }
        }
        Prepared::Step { cum, values } => {
            let t: Vec<usize> = x
                .iter()
                .map(|&u| cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1))
                .collect();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < values[t[i]][t[j]] {
                        bits.set_edge(i, j);
                    }
                }
            }
        }
        Prepared::Other(g) => {
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < g.eval(x[i], x[j]) {
                        bits.set_edge(i, j);
                    }
                }
            }
        }
    }
    bits
}

pub fn sample_graph(spec: &GraphonSpec, n: usize, seed: RngSeed) -> Graph {
    sample_adjacency(spec, n, &mut seed.rng()).to_graph()
}

/// Step function with |G| equal blocks and 0/1 values from the adjacency.
pub fn embed_graph(g: &Graph) -> Result<GraphonSpec> {
    let q = g.order();
    if q == 0 {
        return invalid("cannot embed the graph with no vertices");
    }
    let mass = Q::new(1.into(), q.into());
    let mut values = vec![vec![Q::zero(); q]; q];
    for (a, b) in g.edges() {
        values[a - 1][b - 1] = Q::one();
        values[b - 1][a - 1] = Q::one();
    }
    GraphonSpec::step(vec![mass; q], values)
}
