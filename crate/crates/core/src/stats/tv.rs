use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvResult {
    pub tv: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// ½ Σ |p̂ − p| over the union of supports; passes when ≤ `threshold`.
pub fn tv_test<K: Ord>(empirical: &BTreeMap<K, usize>, exact: &BTreeMap<K, f64>, threshold: f64) -> TvResult {
    let total: usize = empirical.values().sum();
    let keys: BTreeSet<&K> = empirical.keys().chain(exact.keys()).collect();
    let tv = keys
        .into_iter()
        .map(|k| {
            let p_hat = if total == 0 {
                0.0
            } else {
                *empirical.get(k).unwrap_or(&0) as f64 / total as f64
            };
            (p_hat - exact.get(k).copied().unwrap_or(0.0)).abs()
        })
        .sum::<f64>()
        / 2.0;
    TvResult {
        tv,
        threshold,
        pass: tv <= threshold,
    }
}
