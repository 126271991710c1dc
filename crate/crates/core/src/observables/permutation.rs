use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{conf, occ, Permutation};
use crate::error::{invalid, Error};
use crate::models::{PermutonSpec, RngSeed};
use crate::parallel::{map_replicates, Execution};
use crate::rational::{binomial, factorial, Q};
use crate::Result;

/// Largest pattern accepted by [`f_tau`].
pub const F_TAU_CAP: usize = 5;
/// Largest pattern accepted by [`permuton_density_of_perm`].
pub const PERMUTON_PERM_CAP: usize = 4;
/// Monte-Carlo draws handled by one seed stream.
const CHUNK: usize = 4096;

/// t(τ, σ) = occ(τ, σ) / C(n, k).
pub fn pattern_density(tau: &Permutation, sigma: &Permutation) -> Result<Q> {
    let c = occ(tau, sigma)?;
    Ok(Q::new(BigInt::from(c), binomial(sigma.len(), tau.len())))
}

/// Limit probability that ε-perturbations of the points form τ. Identical
/// points are resolved by independent uniform x- and y-orderings; distinct
/// points must not share a coordinate.
pub fn f_tau<T: PartialOrd + Copy>(tau: &Permutation, points: &[(T, T)]) -> Result<Q> {
    let k = tau.len();
    if k > F_TAU_CAP {
        return Err(Error::SizeCap {
            what: "F_tau pattern size",
            value: k,
            cap: F_TAU_CAP,
        });
    }
    if points.len() != k {
        return Err(Error::SizeMismatch {
            left: k,
            right: points.len(),
        });
    }
    let same = |a: &(T, T), b: &(T, T)| a.0 == b.0 && a.1 == b.1;
    for (i, j) in (0..k).tuple_combinations() {
        let (a, b) = (&points[i], &points[j]);
        if !same(a, b) && (a.0 == b.0 || a.1 == b.1) {
            return invalid("distinct points share a coordinate");
        }
    }
    // rank of each point among distinct locations, per axis
    let rank = |key: &dyn Fn(&(T, T)) -> T| -> Vec<usize> {
        (0..k)
            .map(|i| (0..k).filter(|&j| key(&points[j]) < key(&points[i])).count())
            .collect()
    };
    let base_x = rank(&|p| p.0);
    let base_y = rank(&|p| p.1);
    // every way to break ties within a group: the orderings of the group members
    let orders = |base: &[usize]| -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for r in base.iter().copied().unique().sorted() {
            groups.push((0..k).filter(|&i| base[i] == r).collect());
        }
        groups
            .iter()
            .map(|g| g.iter().copied().permutations(g.len()).collect::<Vec<_>>())
            .multi_cartesian_product()
            .map(|choice| {
                let mut pos = vec![0usize; k];
                for (r, i) in choice.into_iter().flatten().enumerate() {
                    pos[i] = r;
                }
                pos
            })
            .collect()
    };
    let xs = orders(&base_x);
    let ys = orders(&base_y);
    let mut favorable = 0u64;
    for x in &xs {
        for y in &ys {
            let pts: Vec<(usize, usize)> = (0..k).map(|i| (x[i], y[i])).collect();
            if conf(&pts)? == *tau {
                favorable += 1;
            }
        }
    }
    Ok(Q::new(BigInt::from(favorable), BigInt::from(xs.len() * ys.len())))
}

/// Compositions of k into b positive parts.
fn compositions(k: usize, b: usize) -> Vec<Vec<usize>> {
    if b == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    (1..k)
        .combinations(b - 1)
        .map(|cuts| {
            let mut parts = Vec::with_capacity(b);
            let mut prev = 0;
            for c in cuts.into_iter().chain([k]) {
                parts.push(c - prev);
                prev = c;
            }
            parts
        })
        .collect()
}

/// t(τ, π(σ)) exactly: (1/n^k) Σ over index tuples of F_τ, grouped by the
/// pattern β of the distinct indices and their multiplicities.
pub fn permuton_density_of_perm(tau: &Permutation, sigma: &Permutation) -> Result<Q> {
    let (k, n) = (tau.len(), sigma.len());
    if k > PERMUTON_PERM_CAP {
        return Err(Error::SizeCap {
            what: "pattern size for t(τ, π(σ))",
            value: k,
            cap: PERMUTON_PERM_CAP,
        });
    }
    if n == 0 {
        return invalid("permuton of the empty permutation");
    }
    let kf = factorial(k);
    let mut total = Q::zero();
    for b in 1..=k.min(n) {
        for beta in (1..=b).permutations(b) {
            let beta = Permutation::new(beta)?;
            let mut weight = Q::zero();
            for m in compositions(k, b) {
                let pts: Vec<(usize, usize)> = beta
                    .diagram()
                    .into_iter()
                    .zip(&m)
                    .flat_map(|(p, &c)| std::iter::repeat_n(p, c))
                    .collect();
                let f = f_tau(tau, &pts)?;
                if f.is_zero() {
                    continue;
                }
                let mult = m.iter().fold(kf.clone(), |a, &c| a / factorial(c));
                weight += f * Q::from_integer(mult);
            }
            if !weight.is_zero() {
                total += weight * Q::from_integer(BigInt::from(occ(&beta, sigma)?));
            }
        }
    }
    Ok(total / Q::from_integer(BigInt::from(n).pow(k as u32)))
}

/// Monte-Carlo estimate with its binomial standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    #[serde(with = "crate::rational::serde_q_opt")]
    pub exact: Option<Q>,
    pub samples: usize,
}

impl Estimate {
    pub fn exact(x: Q) -> Self {
        Estimate {
            value: crate::rational::to_f64(&x),
            stderr: 0.0,
            exact: Some(x),
            samples: 0,
        }
    }
}

/// t(τ, π) exactly where a formula exists: 1/k! for the uniform permuton and
/// the tuple sum for π(σ).
pub fn permuton_density_exact(tau: &Permutation, spec: &PermutonSpec) -> Result<Option<Q>> {
    match spec {
        PermutonSpec::Uniform => Ok(Some(Q::new(1.into(), factorial(tau.len())))),
        PermutonSpec::FromPermutation { sigma } if tau.len() <= PERMUTON_PERM_CAP => {
            permuton_density_of_perm(tau, sigma).map(Some)
        }
        _ if tau.len() <= 1 => Ok(Some(Q::from_integer(1.into()))),
        _ => Ok(None),
    }
}

/// t(τ, π) = P[conf of k i.i.d. π-points = τ], estimated from `budget` draws.
/// The uniform permuton and size ≤ 1 patterns are answered exactly.
pub fn permuton_density(tau: &Permutation, spec: &PermutonSpec, budget: usize, seed: RngSeed, exec: Execution) -> Result<Estimate> {
    spec.validate()?;
    if matches!(spec, PermutonSpec::Uniform) || tau.len() <= 1 {
        return Ok(Estimate::exact(permuton_density_exact(tau, spec)?.expect("closed form")));
    }
    if budget == 0 {
        return Err(Error::TooFewSamples { got: 0, need: 1 });
    }
    let k = tau.len();
    let chunks = budget.div_ceil(CHUNK);
    let hits: u64 = map_replicates(chunks, seed, exec, |c, s| {
        let mut rng = s.rng();
        let sampler = spec.sampler();
        let draws = CHUNK.min(budget - c * CHUNK);
        let mut hit = 0u64;
        let mut pts = Vec::with_capacity(k);
        for _ in 0..draws {
            pts.clear();
            pts.extend((0..k).map(|_| sampler.draw(&mut rng)));
            // ties have probability zero; a tied draw counts as a miss
            if conf(&pts).map(|p| p == *tau).unwrap_or(false) {
                hit += 1;
            }
        }
        hit
    })
    .into_iter()
    .sum();
    let p = hits as f64 / budget as f64;
    Ok(Estimate {
        value: p,
        stderr: (p * (1.0 - p) / budget as f64).sqrt(),
        exact: None,
        samples: budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn densities() {
        assert_eq!(pattern_density(&p("213"), &p("245361")).unwrap(), q(1, 10));
        assert_eq!(pattern_density(&p("2413"), &p("2413")).unwrap(), q(1, 1));
        assert_eq!(pattern_density(&p("12"), &Permutation::identity(9)).unwrap(), q(1, 1));
    }

    #[test]
    fn f_tau_repeats() {
        let same = [(0.5, 0.5), (0.5, 0.5)];
        assert_eq!(f_tau(&p("12"), &same).unwrap(), q(1, 2));
        for tau in ["123", "132", "213", "231", "312", "321"] {
            assert_eq!(f_tau(&p(tau), &[(1, 1); 3]).unwrap(), q(1, 6));
        }
        assert_eq!(f_tau(&p("21"), &[(0.1, 0.9), (0.4, 0.2)]).unwrap(), q(1, 1));
        assert!(f_tau(&p("12"), &[(0.1, 0.2), (0.1, 0.3)]).is_err());
    }

    #[test]
    fn single_point_pattern() {
        assert_eq!(permuton_density_of_perm(&p("1"), &p("35142")).unwrap(), q(1, 1));
    }

    #[test]
    fn identity_permuton_is_diagonal() {
        // π(12) puts mass 1/2 on each diagonal cell: t(12) = 1/2 + 1/2·1/2 = 3/4
        assert_eq!(permuton_density_of_perm(&p("12"), &p("12")).unwrap(), q(3, 4));
        assert_eq!(permuton_density_of_perm(&p("21"), &p("12")).unwrap(), q(1, 4));
    }

    #[test]
    fn exact_matches_monte_carlo() {
        let sigma = p("2413");
        let spec = PermutonSpec::FromPermutation { sigma: sigma.clone() };
        for tau in ["231", "12", "2143"] {
            let tau = p(tau);
            let exact = crate::rational::to_f64(&permuton_density_of_perm(&tau, &sigma).unwrap());
            let est = permuton_density(&tau, &spec, 200_000, RngSeed::new(8), Execution::Parallel).unwrap();
            assert!((est.value - exact).abs() < 4.0 * est.stderr, "{tau}: {} vs {exact}", est.value);
        }
        let u = permuton_density(&p("231"), &PermutonSpec::Uniform, 0, RngSeed::new(1), Execution::Sequential).unwrap();
        assert_eq!(u.exact.unwrap(), q(1, 6));
    }
}
