use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Partition;
use crate::rational::{factorial, falling, pow_q, Q};
use crate::{Error, Result};

pub const CHARACTER_CAP: usize = 14;

/// z_ρ = ∏ i^{m_i} m_i!, the centralizer order of cycle type ρ.
pub fn z_rho(rho: &Partition) -> BigInt {
    let mut z = BigInt::one();
    let mut i = 0;
    let parts = rho.parts();
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        let m = j - i;
        z *= BigInt::from(parts[i]).pow(m as u32) * factorial(m);
        i = j;
    }
    z
}

/// Irreducible character χ^λ at cycle type ρ, by Murnaghan–Nakayama on
/// beta-sets (rim hooks of length r ↔ moving a bead from β to β−r).
pub fn mn_character(lambda: &Partition, rho: &Partition) -> Result<i64> {
    if lambda.size() != rho.size() {
        return Err(Error::SizeMismatch {
            left: lambda.size(),
            right: rho.size(),
        });
    }
    if lambda.size() > CHARACTER_CAP {
        return Err(Error::SizeCap {
            what: "character size",
            value: lambda.size(),
            cap: CHARACTER_CAP,
        });
    }
    let l = lambda.len();
    let beta: Vec<usize> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p + l - 1 - i)
        .collect();
    let mut memo = HashMap::new();
    Ok(mn_rec(beta_mask(&beta), rho.parts(), &mut memo))
}

fn beta_mask(beta: &[usize]) -> u64 {
    beta.iter().fold(0u64, |m, &b| m | 1 << b)
}

fn mn_rec(beads: u64, rho: &[usize], memo: &mut HashMap<(u64, usize), i64>) -> i64 {
    let Some((&r, rest)) = rho.split_first() else {
        return 1;
    };
    if let Some(&v) = memo.get(&(beads, rho.len())) {
        return v;
    }
    let mut total = 0i64;
    let mut m = beads;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        if b < r || beads >> (b - r) & 1 == 1 {
            continue;
        }
        // beads strictly between b−r and b give the leg length
        let between = (beads >> (b - r + 1)) & ((1u64 << (r - 1)) - 1);
        let sign = if between.count_ones() % 2 == 0 { 1 } else { -1 };
        let next = (beads & !(1 << b)) | 1 << (b - r);
        total += sign * mn_rec(next, rest, memo);
    }
    memo.insert((beads, rho.len()), total);
    total
}

/// Frobenius power sum p_k(λ) = Σ a_i^k + (−1)^{k−1} Σ b_i^k; p_1(λ) = |λ|.
pub fn p_k(k: usize, lambda: &Partition) -> Q {
    let (a, b) = lambda.frobenius_coords();
    let e = k as i32;
    let sa = a.iter().fold(Q::zero(), |s, x| s + pow_q(x, e));
    let sb = b.iter().fold(Q::zero(), |s, x| s + pow_q(x, e));
    if k % 2 == 1 {
        sa + sb
    } else {
        sa - sb
    }
}

/// p_ρ(λ) = ∏ p_{ρ_i}(λ).
pub fn p_rho(rho: &Partition, lambda: &Partition) -> Q {
    rho.parts()
        .iter()
        .fold(Q::one(), |acc, &k| acc * p_k(k, lambda))
}

/// Σ_ρ(λ) = n↓k · χ^λ(ρ ∪ 1^{n−k}) / dim λ, and 0 when n < k.
pub fn sigma_rho(rho: &Partition, lambda: &Partition) -> Result<Q> {
    let (k, n) = (rho.size(), lambda.size());
    if n < k {
        return Ok(Q::zero());
    }
    if k == 0 {
        return Ok(Q::one());
    }
    let full = rho.union(&Partition::ones(n - k));
    let chi = mn_character(lambda, &full)?;
    let dim = lambda.hook_dimension()?;
    Ok(Q::new(falling(n, k) * BigInt::from(chi), dim))
}
