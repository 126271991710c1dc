use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{occ, p_rho, AdjacencyBits, Permutation};
use crate::error::Error;
use crate::models::{exact_central_measure, GraphonSpec, ModelSpec, PermutonSpec, CENTRAL_MEASURE_CAP};
use crate::observables::hom_count;
use crate::rational::{binomial, factorial, pow_q, qi, to_f64, Q};
use crate::Result;

use super::mc::CumulantReport;
use super::regime::{formal_limits, BasisObject};

/// Largest graph size enumerated exactly.
pub const EXACT_GRAPH_CAP: usize = 4;
/// Largest permutation size enumerated exactly.
pub const EXACT_PERM_CAP: usize = 7;
/// Highest cumulant order computed exactly.
pub const MAX_ORDER: usize = 6;

fn cap(what: &'static str, value: usize, cap: usize) -> Error {
    Error::SizeCap { what, value, cap }
}

/// Law of S_n as value → probability.
pub fn exact_distribution(model: &ModelSpec, obj: &BasisObject, n: usize) -> Result<BTreeMap<Q, Q>> {
    obj.check_model(model)?;
    model.validate()?;
    let mut law: BTreeMap<Q, Q> = BTreeMap::new();
    let mut add = |s: Q, p: Q| {
        if !p.is_zero() {
            *law.entry(s).or_insert_with(Q::zero) += p;
        }
    };
    match (model, obj) {
        (ModelSpec::Graphon(g), BasisObject::Graph(f)) => {
            if n > EXACT_GRAPH_CAP {
                return Err(cap("graph size for exact cumulants", n, EXACT_GRAPH_CAP));
            }
            let (masses, values) = match g {
                GraphonSpec::Constant { p } => (vec![Q::one()], vec![vec![p.clone()]]),
                GraphonSpec::Step { masses, values } => (masses.clone(), values.clone()),
                _ => {
                    return Err(Error::Unsupported(
                        "exact cumulants need a constant or step graphon".into(),
                    ))
                }
            };
            let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
            for types in (0..n).map(|_| 0..masses.len()).multi_cartesian_product() {
                let pt = types.iter().fold(Q::one(), |a, &t| a * &masses[t]);
                if pt.is_zero() {
                    continue;
                }
                for mask in 0u32..1 << pairs.len() {
                    let mut p = pt.clone();
                    let mut host = AdjacencyBits::new(n);
                    for (e, &(i, j)) in pairs.iter().enumerate() {
                        let v = &values[types[i]][types[j]];
                        if mask >> e & 1 == 1 {
                            p *= v;
                            host.set_edge(i, j);
                        } else {
                            p *= Q::one() - v;
                        }
                    }
                    if !p.is_zero() {
                        add(Q::from_integer(BigInt::from(hom_count(f, &host)?)), p);
                    }
                }
            }
        }
        (ModelSpec::Permuton(PermutonSpec::Uniform), BasisObject::Permutation(tau)) => {
            if n > EXACT_PERM_CAP {
                return Err(cap("permutation size for exact cumulants", n, EXACT_PERM_CAP));
            }
            let w = Q::new(BigInt::one(), factorial(n));
            for v in (1..=n).permutations(n) {
                let sigma = Permutation::new(v)?;
                add(qi(occ(tau, &sigma)?), w.clone());
            }
        }
        (ModelSpec::Permuton(_), _) => {
            return Err(Error::Unsupported(
                "exact cumulants need the uniform permuton".into(),
            ))
        }
        (ModelSpec::Thoma(w), BasisObject::Partition(rho)) => {
            if n > CENTRAL_MEASURE_CAP {
                return Err(cap("partition size for exact cumulants", n, CENTRAL_MEASURE_CAP));
            }
            for (lambda, p) in exact_central_measure(w, n)? {
                add(p_rho(rho, &lambda), p);
            }
        }
        _ => unreachable!("family checked above"),
    }
    Ok(law)
}

/// Cumulants κ₁..κ_R from raw moments, κ_r = m_r − Σ_{j<r} C(r−1, j−1) κ_j m_{r−j}.
pub fn cumulants_from_moments(m: &[Q]) -> Vec<Q> {
    let mut k: Vec<Q> = Vec::with_capacity(m.len());
    for r in 1..=m.len() {
        let mut x = m[r - 1].clone();
        for j in 1..r {
            x -= Q::from_integer(binomial(r - 1, j - 1)) * &k[j - 1] * &m[r - j - 1];
        }
        k.push(x);
    }
    k
}

/// Exact κ^(1..R)(S_n) by enumeration of the law of S_n.
pub fn exact_cumulants(model: &ModelSpec, obj: &BasisObject, n: usize, order: usize) -> Result<CumulantReport> {
    if order > MAX_ORDER {
        return Err(cap("cumulant order", order, MAX_ORDER));
    }
    if order < 2 {
        return Err(Error::Invalid("cumulant order must be at least 2".into()));
    }
    let start = Instant::now();
    let law = exact_distribution(model, obj, n)?;
    let moments: Vec<Q> = (1..=order)
        .map(|r| law.iter().fold(Q::zero(), |a, (s, p)| a + p * pow_q(s, r as i32)))
        .collect();
    let exact = cumulants_from_moments(&moments);
    let kappa = exact.iter().map(to_f64).collect();
    let mut report = CumulantReport::new(obj.clone(), kappa, obj.regime(n), formal_limits(obj, model));
    report.exact = exact;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// One order of the MC1 comparison |κ^(r)| ≤ N (2D)^{r−1} r^{r−2} A^r.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mc1Row {
    pub r: usize,
    pub kappa_abs: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

pub fn mc1_check(report: &CumulantReport) -> Vec<Mc1Row> {
    report
        .kappa
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let r = i + 1;
            let bound = report.regime.mc1_bound(r);
            // exact values decide ties that floating point would blur
            let kappa_abs = report.exact.get(i).map(|q| to_f64(&num_traits::Signed::abs(q))).unwrap_or(k.abs());
            Mc1Row {
                r,
                kappa_abs,
                bound,
                margin: bound - kappa_abs,
                pass: kappa_abs <= bound,
            }
        })
        .collect()
}
