use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::Graph;
use crate::error::Error;
use crate::models::{grid_eval, GraphonSpec, GridInterpolation};
use crate::rational::{pow_q, to_f64, Q};
use crate::Result;

/// Largest connected component integrated numerically.
pub const QUADRATURE_CAP: usize = 7;
/// Node budget of one tensorized rule.
pub const QUADRATURE_BUDGET: usize = 1 << 25;
/// Default per-axis Gauss–Legendre order.
pub const QUADRATURE_ORDER: usize = 32;
/// Disagreement between order p and p/2 above which a result is rejected.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Largest number of block assignments summed exactly for step functions.
pub const BLOCK_SUM_CAP: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    ClosedForm,
    BlockSum,
    Quadrature,
}

/// Value of t(F, γ) with provenance of the computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphonDensity {
    pub value: f64,
    #[serde(with = "crate::rational::serde_q_opt")]
    pub exact: Option<Q>,
    pub method: DensityMethod,
    /// Per-axis quadrature order, when quadrature was used.
    pub order: Option<usize>,
}

impl GraphonDensity {
    fn exact(x: Q, method: DensityMethod) -> Self {
        GraphonDensity {
            value: to_f64(&x),
            exact: Some(x),
            method,
            order: None,
        }
    }

    fn times(self, other: GraphonDensity) -> Self {
        let exact = match (self.exact, other.exact) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        GraphonDensity {
            value: exact.as_ref().map(to_f64).unwrap_or(self.value * other.value),
            exact,
            method: self.method.max(other.method),
            order: self.order.max(other.order),
        }
    }
}

/// t(F, g) = ∫ ∏_{ij ∈ E_F} g(x_i, x_j) dx.
pub fn graphon_density(f: &Graph, spec: &GraphonSpec) -> Result<GraphonDensity> {
    spec.validate()?;
    match spec {
        GraphonSpec::Constant { p } => Ok(GraphonDensity::exact(
            pow_q(p, f.edge_count() as i32),
            DensityMethod::ClosedForm,
        )),
        GraphonSpec::Product => {
            // each vertex contributes ∫ x^deg dx
            let x = f
                .degrees()
                .iter()
                .fold(Q::one(), |acc, &d| acc / Q::from_integer(BigInt::from(d + 1)));
            Ok(GraphonDensity::exact(x, DensityMethod::ClosedForm))
        }
        _ => {
            let mut out = GraphonDensity::exact(Q::one(), DensityMethod::ClosedForm);
            for comp in f.components() {
                let c = f.induced(&comp);
                if c.order() == 1 {
                    continue;
                }
                let d = match spec {
                    GraphonSpec::Step { masses, values } => step_sum(&c, masses, values)?,
                    GraphonSpec::Grid {
                        values,
                        interpolation: GridInterpolation::PiecewiseConstant,
                    } => float_step_sum(&c, values)?,
                    _ => quadrature(&c, spec)?,
                };
                out = out.times(d);
            }
            Ok(out)
        }
    }
}

fn check_blocks(q: usize, k: usize) -> Result<()> {
    let total = (q as f64).powi(k as i32);
    if total > BLOCK_SUM_CAP as f64 {
        return Err(Error::SizeCap {
            what: "block assignments",
            value: total.min(usize::MAX as f64) as usize,
            cap: BLOCK_SUM_CAP,
        });
    }
    Ok(())
}

/// Σ over block assignments, in integers over a common denominator.
fn step_sum(c: &Graph, masses: &[Q], values: &[Vec<Q>]) -> Result<GraphonDensity> {
    let (q, k) = (masses.len(), c.order());
    check_blocks(q, k)?;
    let dm = masses.iter().fold(BigInt::one(), |a, m| a.lcm(m.denom()));
    let dv = values.iter().flatten().fold(BigInt::one(), |a, v| a.lcm(v.denom()));
    let mi: Vec<BigInt> = masses.iter().map(|m| m.numer() * (&dm / m.denom())).collect();
    let vi: Vec<Vec<BigInt>> = values
        .iter()
        .map(|r| r.iter().map(|v| v.numer() * (&dv / v.denom())).collect())
        .collect();
    let back: Vec<Vec<usize>> = (0..k)
        .map(|v| (0..v).filter(|&w| c.has_edge(v + 1, w + 1)).collect())
        .collect();
    let mut assign = vec![0usize; k];
    fn rec(d: usize, acc: &BigInt, back: &[Vec<usize>], mi: &[BigInt], vi: &[Vec<BigInt>], assign: &mut [usize]) -> BigInt {
        if d == back.len() {
            return acc.clone();
        }
        let mut total = BigInt::zero();
        for b in 0..mi.len() {
            let mut w = acc * &mi[b];
            for &u in &back[d] {
                w *= &vi[assign[u]][b];
                if w.is_zero() {
                    break;
                }
            }
            if w.is_zero() {
                continue;
            }
            assign[d] = b;
            total += rec(d + 1, &w, back, mi, vi, assign);
        }
        total
    }
    let num = rec(0, &BigInt::one(), &back, &mi, &vi, &mut assign);
    let den = dm.pow(k as u32) * dv.pow(c.edge_count() as u32);
    Ok(GraphonDensity::exact(Q::new(num, den), DensityMethod::BlockSum))
}

fn float_step_sum(c: &Graph, values: &[Vec<f64>]) -> Result<GraphonDensity> {
    let (m, k) = (values.len(), c.order());
    check_blocks(m, k)?;
    let w = vec![1.0 / m as f64; m];
    Ok(GraphonDensity {
        value: tensor_sum(c, &w, values),
        exact: None,
        method: DensityMethod::BlockSum,
        order: None,
    })
}

/// Σ over node tuples of ∏ weights ∏_{edges} kernel.
fn tensor_sum(c: &Graph, w: &[f64], kernel: &[Vec<f64>]) -> f64 {
    let k = c.order();
    let back: Vec<Vec<usize>> = (0..k)
        .map(|v| (0..v).filter(|&u| c.has_edge(v + 1, u + 1)).collect())
        .collect();
    let mut assign = vec![0usize; k];
    fn rec(d: usize, back: &[Vec<usize>], w: &[f64], kernel: &[Vec<f64>], assign: &mut [usize]) -> f64 {
        if d == back.len() {
            return 1.0;
        }
        let mut total = 0.0;
        for b in 0..w.len() {
            let mut x = w[b];
            for &u in &back[d] {
                x *= kernel[assign[u]][b];
            }
            if x == 0.0 {
                continue;
            }
            assign[d] = b;
            total += x * rec(d + 1, back, w, kernel, assign);
        }
        total
    }
    rec(0, &back, w, kernel, &mut assign)
}

/// Composite Gauss–Legendre nodes on [0,1]: `cells` equal pieces, `p` nodes each.
fn composite_rule(cells: usize, p: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(NonZeroUsize::new(p).expect("positive order"));
    let h = 1.0 / cells as f64;
    let mut nodes = Vec::with_capacity(cells * p);
    let mut weights = Vec::with_capacity(cells * p);
    for c in 0..cells {
        let a = c as f64 * h;
        for &(x, wt) in rule.as_node_weight_pairs() {
            nodes.push(a + h * (x + 1.0) / 2.0);
            weights.push(wt * h / 2.0);
        }
    }
    (nodes, weights)
}

fn quadrature(c: &Graph, spec: &GraphonSpec) -> Result<GraphonDensity> {
    let k = c.order();
    if k > QUADRATURE_CAP {
        return Err(Error::SizeCap {
            what: "quadrature dimension",
            value: k,
            cap: QUADRATURE_CAP,
        });
    }
    // bilinear grids are polynomial on each cell, so the rule follows the cells
    let cells = match spec {
        GraphonSpec::Grid { values, .. } => values.len() - 1,
        _ => 1,
    };
    let axis_budget = (QUADRATURE_BUDGET as f64).powf(1.0 / k as f64).floor() as usize;
    let p = QUADRATURE_ORDER.min(axis_budget / cells);
    if p < 2 {
        return Err(Error::SizeCap {
            what: "grid cells for quadrature",
            value: cells,
            cap: axis_budget / 2,
        });
    }
    let run = |p: usize| {
        let (nodes, weights) = composite_rule(cells, p);
        let kernel: Vec<Vec<f64>> = nodes
            .iter()
            .map(|&x| nodes.iter().map(|&y| eval(spec, x, y)).collect())
            .collect();
        tensor_sum(c, &weights, &kernel)
    };
    let hi = run(p);
    let lo = run(p / 2);
    if (hi - lo).abs() > QUADRATURE_TOL {
        return Err(Error::Invalid(format!(
            "quadrature did not converge: orders {p} and {} differ by {:.3e}",
            p / 2,
            (hi - lo).abs()
        )));
    }
    Ok(GraphonDensity {
        value: hi,
        exact: None,
        method: DensityMethod::Quadrature,
        order: Some(p),
    })
}

fn eval(spec: &GraphonSpec, x: f64, y: f64) -> f64 {
    match spec {
        GraphonSpec::Grid {
            values,
            interpolation,
        } => grid_eval(values, *interpolation, x, y),
        other => other.eval(x, y),
    }
}
