use serde::{Deserialize, Serialize};

use crate::combinatorics::{occ, p_rho, Graph, Partition, Permutation};
use crate::error::Error;
use crate::models::{Family, ModelSpec, Sample};
use crate::observables::{evaluate, evaluate_exact, hom_count, EvalOptions, Observable};
use crate::rational::{binomial_u128, to_f64};
use crate::Result;

use super::formal::{kappa2_graphs, kappa2_parts, kappa2_perms, kappa3_graphs, kappa3_parts, kappa3_perms};

/// Dependency-graph parameters (D_n, N_n, A) of a sum of bounded summands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulantRegime {
    pub n: usize,
    pub k: usize,
    pub d_n: f64,
    pub n_n: f64,
    pub a: f64,
}

impl CumulantRegime {
    /// D = k² n^{k−1}, N = n^k: sums over all maps [k] → [n].
    pub fn maps(n: usize, k: usize) -> Self {
        let nf = n as f64;
        CumulantRegime {
            n,
            k,
            d_n: (k * k) as f64 * nf.powi(k as i32 - 1),
            n_n: nf.powi(k as i32),
            a: 1.0,
        }
    }

    /// D = k·C(n−1, k−1), N = C(n, k): sums over k-subsets of positions.
    pub fn subsets(n: usize, k: usize) -> Self {
        CumulantRegime {
            n,
            k,
            d_n: k as f64 * binomial_u128(n - 1, k - 1) as f64,
            n_n: binomial_u128(n, k) as f64,
            a: 1.0,
        }
    }

    /// N (2D)^{r−1} r^{r−2} A^r.
    pub fn mc1_bound(&self, r: usize) -> f64 {
        let r = r as i32;
        self.n_n * (2.0 * self.d_n).powi(r - 1) * (r as f64).powi(r - 2) * self.a.powi(r)
    }

    /// σ_n² = κ₂/(N D).
    pub fn scale2(&self, kappa2: f64) -> f64 {
        kappa2 / (self.n_n * self.d_n)
    }

    /// L_n = κ₃/(N D²).
    pub fn scale3(&self, kappa3: f64) -> f64 {
        kappa3 / (self.n_n * self.d_n * self.d_n)
    }
}

/// A basis object whose count statistic S_n is studied: hom(F, G_n),
/// occ(τ, σ_n) or p_ρ(λ_n).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "object", rename_all = "snake_case")]
pub enum BasisObject {
    Graph(Graph),
    Permutation(Permutation),
    Partition(Partition),
}

impl BasisObject {
    pub fn family(&self) -> Family {
        match self {
            BasisObject::Graph(_) => Family::Graph,
            BasisObject::Permutation(_) => Family::Permutation,
            BasisObject::Partition(_) => Family::Partition,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            BasisObject::Graph(g) => g.order(),
            BasisObject::Permutation(p) => p.len(),
            BasisObject::Partition(p) => p.size(),
        }
    }

    pub fn regime(&self, n: usize) -> CumulantRegime {
        match self {
            BasisObject::Permutation(_) => CumulantRegime::subsets(n, self.degree()),
            _ => CumulantRegime::maps(n, self.degree()),
        }
    }

    /// S_n divided by this is the density t(·, M_n).
    pub fn density_scale(&self, n: usize) -> f64 {
        match self {
            BasisObject::Permutation(p) => binomial_u128(n, p.len()) as f64,
            _ => (n as f64).powi(self.degree() as i32),
        }
    }

    pub fn observable(&self) -> Observable {
        match self {
            BasisObject::Graph(g) => g.clone().into(),
            BasisObject::Permutation(p) => p.clone().into(),
            BasisObject::Partition(p) => p.clone().into(),
        }
    }

    pub fn check_model(&self, model: &ModelSpec) -> Result<()> {
        if self.family() != model.family() {
            return Err(Error::FamilyMismatch {
                observable: self.family().as_str(),
                model: model.family().as_str(),
            });
        }
        Ok(())
    }

    /// S on a sampled object.
    pub fn statistic(&self, sample: &Sample) -> Result<f64> {
        match (self, sample) {
            (BasisObject::Graph(f), Sample::Graph(g)) => Ok(hom_count(f, g)? as f64),
            (BasisObject::Permutation(t), Sample::Permutation(s)) => Ok(occ(t, s)? as f64),
            (BasisObject::Partition(r), Sample::Partition(l)) => Ok(to_f64(&p_rho(r, l))),
            _ => Err(Error::FamilyMismatch {
                observable: self.family().as_str(),
                model: "sample",
            }),
        }
    }

    pub fn kappa2(&self) -> Result<Observable> {
        Ok(match self {
            BasisObject::Graph(g) => Observable::Graph(kappa2_graphs(g, g)?),
            BasisObject::Permutation(p) => Observable::Permutation(kappa2_perms(p, p)?),
            BasisObject::Partition(p) => Observable::Partition(kappa2_parts(p, p)?),
        })
    }

    pub fn kappa3(&self) -> Result<Observable> {
        Ok(match self {
            BasisObject::Graph(g) => Observable::Graph(kappa3_graphs(g, g, g)?),
            BasisObject::Permutation(p) => Observable::Permutation(kappa3_perms(p, p, p)?),
            BasisObject::Partition(p) => Observable::Partition(kappa3_parts(p, p, p)?),
        })
    }
}

/// Formal limits σ² = Ψ(κ₂(f,f))(m) and L = Ψ(κ₃(f,f,f))(m), when computable
/// without sampling.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub sigma2: Option<f64>,
    pub l: Option<f64>,
}

fn limit_of(obs: Result<Observable>, model: &ModelSpec) -> Option<f64> {
    let obs = obs.ok()?;
    match model.family() {
        // graphon values are deterministic (closed form or quadrature)
        Family::Graph => evaluate(&obs, model, EvalOptions::default()).ok().map(|e| e.value),
        _ => evaluate_exact(&obs, model).ok().map(|q| to_f64(&q)),
    }
}

pub fn formal_limits(obj: &BasisObject, model: &ModelSpec) -> Limits {
    Limits {
        sigma2: limit_of(obj.kappa2(), model),
        l: limit_of(obj.kappa3(), model),
    }
}
