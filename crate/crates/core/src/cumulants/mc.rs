use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::models::{ModelSpec, RngSeed};
use crate::parallel::{map_replicates, try_map_replicates, Execution};
use crate::rational::{serde_q_vec, to_f64, Q};
use crate::Result;

use super::formal::cross_covariance_graphs;
use super::kstat::k_statistics;
use super::regime::{formal_limits, BasisObject, CumulantRegime, Limits};

/// Fewest replicates accepted by the Monte-Carlo estimators.
pub const MIN_REPS: usize = 1000;
/// Bootstrap resamples for standard errors.
pub const BOOTSTRAP: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulantReport {
    pub object: BasisObject,
    /// κ^(1), κ^(2), … of S_n.
    pub kappa: Vec<f64>,
    /// Exact values, in exact mode.
    #[serde(with = "serde_q_vec", default, skip_serializing_if = "Vec::is_empty")]
    pub exact: Vec<Q>,
    /// Bootstrap standard errors, in Monte-Carlo mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
    pub regime: CumulantRegime,
    pub sigma2_n: f64,
    pub l_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2_n_stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_n_stderr: Option<f64>,
    pub limits: Limits,
    pub reps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<RngSeed>,
    pub seconds: f64,
}

impl CumulantReport {
    pub(crate) fn new(object: BasisObject, kappa: Vec<f64>, regime: CumulantRegime, limits: Limits) -> Self {
        CumulantReport {
            sigma2_n: regime.scale2(kappa[1]),
            l_n: kappa.get(2).map(|&k| regime.scale3(k)),
            object,
            kappa,
            exact: Vec::new(),
            stderr: None,
            regime,
            sigma2_n_stderr: None,
            l_n_stderr: None,
            limits,
            reps: 0,
            seed: None,
            seconds: 0.0,
        }
    }
}

fn bootstrap_seed(seed: RngSeed) -> RngSeed {
    RngSeed::with_stream(seed.seed ^ 0xB007_5742_u64, seed.stream)
}

/// Resampling standard deviation of `stat` over `B` bootstrap resamples.
pub fn bootstrap<const M: usize>(
    values: &[f64],
    seed: RngSeed,
    exec: Execution,
    stat: impl Fn(&[f64]) -> [f64; M] + Sync + Send,
) -> [f64; M] {
    let n = values.len();
    let draws = map_replicates(BOOTSTRAP, seed, exec, |_, s| {
        let mut rng = s.rng();
        let resample: Vec<f64> = (0..n).map(|_| values[rng.random_range(0..n)]).collect();
        stat(&resample)
    });
    let mut out = [0.0; M];
    for (j, o) in out.iter_mut().enumerate() {
        let col: Vec<f64> = draws.iter().map(|d| d[j]).collect();
        *o = k_statistics(&col)[1].max(0.0).sqrt();
    }
    out
}

/// Replicate values of S_n.
pub fn sample_statistic(model: &ModelSpec, obj: &BasisObject, n: usize, reps: usize, seed: RngSeed, exec: Execution) -> Result<Vec<f64>> {
    obj.check_model(model)?;
    model.validate()?;
    try_map_replicates(reps, seed, exec, |_, s| {
        let sample = model.sample_with(n, &mut s.rng())?;
        obj.statistic(&sample)
    })
}

/// k-statistics of S_n over `reps` replicates, with bootstrap errors and the
/// formal limits.
pub fn mc_cumulants(model: &ModelSpec, obj: &BasisObject, n: usize, reps: usize, seed: RngSeed, exec: Execution) -> Result<CumulantReport> {
    if reps < MIN_REPS {
        return Err(Error::TooFewSamples { got: reps, need: MIN_REPS });
    }
    let start = Instant::now();
    let values = sample_statistic(model, obj, n, reps, seed, exec)?;
    let regime = obj.regime(n);
    let kappa = k_statistics(&values);
    let se = bootstrap(&values, bootstrap_seed(seed), exec, k_statistics);
    let mut report = CumulantReport::new(obj.clone(), kappa.to_vec(), regime, formal_limits(obj, model));
    report.stderr = Some(se.to_vec());
    report.sigma2_n_stderr = Some(regime.scale2(se[1]));
    report.l_n_stderr = Some(regime.scale3(se[2]));
    report.reps = reps;
    report.seed = Some(seed);
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Joint second cumulant κ(S(x), S(y)) from the polarization identity
/// (k₂(X+Y) − k₂(X−Y))/4 on shared samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointCumulant {
    pub value: f64,
    pub stderr: f64,
    /// n^{|x|+|y|−1}.
    pub scale: f64,
    pub scaled: f64,
    pub scaled_stderr: f64,
    /// Σ_{a,b} Ψ((x⋈y)(a,b) − x×y)(m), for graphs.
    pub limit: Option<f64>,
    pub reps: usize,
}

pub fn mc_joint_cumulant2(
    model: &ModelSpec,
    x: &BasisObject,
    y: &BasisObject,
    n: usize,
    reps: usize,
    seed: RngSeed,
    exec: Execution,
) -> Result<JointCumulant> {
    if reps < MIN_REPS {
        return Err(Error::TooFewSamples { got: reps, need: MIN_REPS });
    }
    x.check_model(model)?;
    y.check_model(model)?;
    model.validate()?;
    let pairs: Vec<(f64, f64)> = try_map_replicates(reps, seed, exec, |_, s| {
        let sample = model.sample_with(n, &mut s.rng())?;
        Ok::<_, Error>((x.statistic(&sample)?, y.statistic(&sample)?))
    })?;
    let polar = |pairs: &[(f64, f64)]| -> f64 {
        let plus: Vec<f64> = pairs.iter().map(|(a, b)| a + b).collect();
        let minus: Vec<f64> = pairs.iter().map(|(a, b)| a - b).collect();
        (k_statistics(&plus)[1] - k_statistics(&minus)[1]) / 4.0
    };
    let value = polar(&pairs);
    // bootstrap over replicate indices
    let idx: Vec<f64> = (0..reps).map(|i| i as f64).collect();
    let [se] = bootstrap(&idx, bootstrap_seed(seed), exec, |res| {
        let sub: Vec<(f64, f64)> = res.iter().map(|&i| pairs[i as usize]).collect();
        [polar(&sub)]
    });
    let scale = (n as f64).powi((x.degree() + y.degree()) as i32 - 1);
    let limit = match (x, y, model) {
        (BasisObject::Graph(f), BasisObject::Graph(g), ModelSpec::Graphon(_)) => cross_covariance_graphs(f, g)
            .ok()
            .and_then(|s| crate::observables::evaluate_exact(&crate::observables::Observable::Graph(s), model).ok())
            .map(|q| to_f64(&q)),
        _ => None,
    };
    Ok(JointCumulant {
        value,
        stderr: se,
        scale,
        scaled: value / scale,
        scaled_stderr: se / scale,
        limit,
        reps,
    })
}
