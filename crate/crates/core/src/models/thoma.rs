use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RngSeed;
use crate::combinatorics::{mn_character, partitions_of, z_rho, Partition};
use crate::error::{invalid, Error};
use crate::rational::{pow_q, serde_q_vec, to_f64, Q};
use crate::Result;

/// Largest n accepted by [`exact_central_measure`].
pub const CENTRAL_MEASURE_CAP: usize = 10;

/// Point ω = (α, β) of the Thoma simplex with finitely many nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThomaParameter {
    #[serde(with = "serde_q_vec", default)]
    pub alpha: Vec<Q>,
    #[serde(with = "serde_q_vec", default)]
    pub beta: Vec<Q>,
}

fn check_list(name: &str, xs: &[Q]) -> Result<()> {
    if xs.iter().any(|x| *x < Q::zero()) {
        return invalid(format!("{name} entries must be nonnegative"));
    }
    if xs.windows(2).any(|w| w[0] < w[1]) {
        return invalid(format!("{name} must be weakly decreasing"));
    }
    Ok(())
}

impl ThomaParameter {
    pub fn new(alpha: Vec<Q>, beta: Vec<Q>) -> Result<Self> {
        let w = ThomaParameter { alpha, beta };
        w.validate()?;
        Ok(w)
    }

    /// ω₀ = (0, 0), γ = 1.
    pub fn plancherel() -> Self {
        ThomaParameter {
            alpha: vec![],
            beta: vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_list("alpha", &self.alpha)?;
        check_list("beta", &self.beta)?;
        if self.gamma() < Q::zero() {
            return invalid("alpha and beta sum to more than 1");
        }
        Ok(())
    }

    /// γ = 1 − Σα − Σβ.
    pub fn gamma(&self) -> Q {
        self.alpha
            .iter()
            .chain(&self.beta)
            .fold(Q::one(), |acc, x| acc - x)
    }

    /// t(k, ω) = Σ α_i^k + (−1)^{k−1} Σ β_i^k for k ≥ 2, and 1 for k = 1.
    pub fn moment(&self, k: usize) -> Q {
        if k <= 1 {
            return Q::one();
        }
        let e = k as i32;
        let sa = self.alpha.iter().fold(Q::zero(), |s, x| s + pow_q(x, e));
        let sb = self.beta.iter().fold(Q::zero(), |s, x| s + pow_q(x, e));
        if k % 2 == 1 {
            sa + sb
        } else {
            sa - sb
        }
    }

    /// t(ρ, ω) = ∏ t(ρ_i, ω).
    pub fn moment_rho(&self, rho: &Partition) -> Q {
        rho.parts()
            .iter()
            .fold(Q::one(), |acc, &k| acc * self.moment(k))
    }
}

/// Letters ordered as: ordinary (class 0) < primed (class 1) < continuous (class 2).
type Letter = (u8, u64);

fn insert(rows: &mut Vec<Vec<Letter>>, mut x: Letter) {
    for row in rows.iter_mut() {
        // Primed letters bump the first entry ≥ x, the others the first entry > x.
        let pos = if x.0 == 1 {
            row.partition_point(|e| *e < x)
        } else {
            row.partition_point(|e| *e <= x)
        };
        if pos == row.len() {
            row.push(x);
            return;
        }
        std::mem::swap(&mut row[pos], &mut x);
    }
    rows.push(vec![x]);
}

/// λ_n(ω): shape of the super-RSK insertion tableau of n i.i.d. letters.
pub fn sample_partition_with<R: Rng + ?Sized>(omega: &ThomaParameter, n: usize, rng: &mut R) -> Result<Partition> {
    let mut cum = Vec::with_capacity(omega.alpha.len() + omega.beta.len());
    let mut acc = 0.0;
    for (class, list) in [(0u8, &omega.alpha), (1u8, &omega.beta)] {
        for (i, x) in list.iter().enumerate() {
            acc += to_f64(x);
            cum.push((acc, (class, i as u64)));
        }
    }
    let mut rows: Vec<Vec<Letter>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..n {
        let u: f64 = rng.random();
        let letter = match cum.iter().find(|(c, _)| u < *c) {
            Some((_, l)) => *l,
            None => {
                let v: u64 = rng.random();
                if !seen.insert(v) {
                    return Err(Error::Invalid("collision between continuous letters".into()));
                }
                (2, v)
            }
        };
        insert(&mut rows, letter);
    }
    Partition::new(rows.iter().map(Vec::len).collect())
}

pub fn sample_partition(omega: &ThomaParameter, n: usize, seed: RngSeed) -> Result<Partition> {
    sample_partition_with(omega, n, &mut seed.rng())
}

/// P_{n,ω}[λ] = dim λ · s_λ(ω), with s_λ = Σ_ρ χ^λ_ρ p_ρ / z_ρ.
pub fn exact_central_measure(omega: &ThomaParameter, n: usize) -> Result<BTreeMap<Partition, Q>> {
    if n > CENTRAL_MEASURE_CAP {
        return Err(Error::SizeCap {
            what: "central measure size",
            value: n,
            cap: CENTRAL_MEASURE_CAP,
        });
    }
    omega.validate()?;
    let shapes = partitions_of(n);
    let weights: Vec<(Partition, Q)> = shapes
        .iter()
        .map(|rho| {
            let w = omega.moment_rho(rho) / Q::from_integer(z_rho(rho));
            (rho.clone(), w)
        })
        .collect();
    let mut out = BTreeMap::new();
    for lambda in shapes {
        let dim = Q::from_integer(lambda.hook_dimension()?);
        let mut s = Q::zero();
        for (rho, w) in &weights {
            if w.is_zero() {
                continue;
            }
            let chi = mn_character(&lambda, rho)?;
            s += w * Q::from_integer(BigInt::from(chi));
        }
        out.insert(lambda, dim * s);
    }
    Ok(out)
}

/// Ω(λ) = (a_i/n, b_i/n) from the Frobenius coordinates.
pub fn embed_partition(lambda: &Partition) -> Result<ThomaParameter> {
    if lambda.is_empty() {
        return invalid("cannot embed the empty partition");
    }
    let n = Q::from_integer(lambda.size().into());
    let (a, b) = lambda.frobenius_coords();
    ThomaParameter::new(a.into_iter().map(|x| x / &n).collect(), b.into_iter().map(|x| x / &n).collect())
}
