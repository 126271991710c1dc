use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::cumulants::{bootstrap, k_statistics, sample_statistic, BasisObject, CumulantRegime};
use crate::error::Error;
use crate::models::{Family, ModelSpec, RngSeed};
use crate::observables::{
    expected_hom_density, graphon_density, permuton_density, permuton_density_exact, t_rho, Estimate,
};
use crate::parallel::Execution;
use crate::Result;

use super::standardize::{normal_cdf, StandardizedStatistic};

/// Confidence level of the tail-probability intervals.
pub const CI_LEVEL: f64 = 0.99;
/// Fewest replicates accepted by [`concentration_check`].
pub const MIN_CONCENTRATION_REPS: usize = 10_000;
/// Monte-Carlo budget for permuton limit densities without a closed form.
const LIMIT_BUDGET: usize = 1_000_000;

/// Two-sided Clopper–Pearson interval for `k` successes in `n` trials.
pub fn clopper_pearson(k: usize, n: usize, level: f64) -> (f64, f64) {
    let alpha = 1.0 - level;
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        Beta::new(kf, nf - kf + 1.0).expect("positive shapes").inverse_cdf(alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        Beta::new(kf + 1.0, nf - kf).expect("positive shapes").inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub x: f64,
    pub exceed: usize,
    pub prob: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcentrationCenter {
    /// E[t(F, G_n)].
    Expectation,
    /// The parameter's own density t(f, m).
    Limit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub kind: String,
    pub n: usize,
    pub reps: usize,
    pub level: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_kind: Option<ConcentrationCenter>,
    /// l = (k/6) L / σ³, for tail reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    pub rows: Vec<TailRow>,
    pub pass: bool,
}

/// 2 exp(−n x²/(9k²)) for graphs and permutations, 4 exp(·) for partitions.
pub fn concentration_bound(family: Family, n: usize, k: usize, x: f64) -> f64 {
    let c = if family == Family::Partition { 4.0 } else { 2.0 };
    c * (-(n as f64) * x * x / (9.0 * (k * k) as f64)).exp()
}

/// Densities t(f, M_n) over replicates.
pub fn sample_densities(model: &ModelSpec, obj: &BasisObject, n: usize, reps: usize, seed: RngSeed, exec: Execution) -> Result<Vec<f64>> {
    let scale = obj.density_scale(n);
    Ok(sample_statistic(model, obj, n, reps, seed, exec)?
        .into_iter()
        .map(|s| s / scale)
        .collect())
}

/// t(f, m) for a basis object, exact where possible.
pub fn limit_density(obj: &BasisObject, model: &ModelSpec, seed: RngSeed, exec: Execution) -> Result<Estimate> {
    obj.check_model(model)?;
    match (obj, model) {
        (BasisObject::Graph(f), ModelSpec::Graphon(g)) => {
            let d = graphon_density(f, g)?;
            Ok(match d.exact {
                Some(x) => Estimate::exact(x),
                None => Estimate {
                    value: d.value,
                    stderr: 0.0,
                    exact: None,
                    samples: 0,
                },
            })
        }
        (BasisObject::Permutation(t), ModelSpec::Permuton(p)) => match permuton_density_exact(t, p)? {
            Some(x) => Ok(Estimate::exact(x)),
            None => permuton_density(t, p, LIMIT_BUDGET, seed, exec),
        },
        (BasisObject::Partition(r), ModelSpec::Thoma(w)) => Ok(Estimate::exact(t_rho(r, w))),
        _ => unreachable!("family checked above"),
    }
}

/// Empirical P[|t(f, M_n) − c| ≥ x] against the concentration bound, where c
/// is E[t] for graphs and t(f, m) otherwise.
pub fn concentration_check(
    model: &ModelSpec,
    obj: &BasisObject,
    n: usize,
    reps: usize,
    xs: &[f64],
    seed: RngSeed,
    exec: Execution,
) -> Result<TailReport> {
    if reps < MIN_CONCENTRATION_REPS {
        return Err(Error::TooFewSamples { got: reps, need: MIN_CONCENTRATION_REPS });
    }
    let (center, center_kind) = match (obj, model) {
        (BasisObject::Graph(f), ModelSpec::Graphon(g)) => (expected_hom_density(f, g, n)?.0, ConcentrationCenter::Expectation),
        _ => (limit_density(obj, model, seed.child(u64::MAX), exec)?.value, ConcentrationCenter::Limit),
    };
    let t = sample_densities(model, obj, n, reps, seed, exec)?;
    let k = obj.degree();
    let rows: Vec<TailRow> = xs
        .iter()
        .map(|&x| {
            let exceed = t.iter().filter(|&&v| (v - center).abs() >= x).count();
            let (lo, hi) = clopper_pearson(exceed, reps, CI_LEVEL);
            let bound = concentration_bound(obj.family(), n, k, x);
            TailRow {
                x,
                exceed,
                prob: exceed as f64 / reps as f64,
                ci_low: lo,
                ci_high: hi,
                bound: Some(bound),
                gaussian: None,
                corrected: None,
                pass: bound >= 1.0 || hi <= bound,
            }
        })
        .collect();
    Ok(TailReport {
        kind: "concentration".into(),
        n,
        reps,
        level: CI_LEVEL,
        center: Some(center),
        center_kind: Some(center_kind),
        l: None,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

/// P[Y ≥ y] for y ∈ [1, 3] next to the Gaussian tail and its cubic
/// correction exp(L/(6σ³) √(D/N) y³). Report only: every row passes.
pub fn tail_report(samples: &StandardizedStatistic, sigma2: f64, big_l: f64, regime: &CumulantRegime) -> Result<TailReport> {
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Singular(format!("σ² = {sigma2}")));
    }
    let sigma3 = sigma2.powf(1.5);
    let ratio = (regime.d_n / regime.n_n).sqrt();
    let reps = samples.len();
    let rows = (0..=8)
        .map(|i| {
            let y = 1.0 + 0.25 * i as f64;
            let exceed = samples.values.iter().filter(|&&v| v >= y).count();
            let (lo, hi) = clopper_pearson(exceed, reps, CI_LEVEL);
            let gaussian = normal_cdf(-y);
            TailRow {
                x: y,
                exceed,
                prob: exceed as f64 / reps as f64,
                ci_low: lo,
                ci_high: hi,
                bound: None,
                gaussian: Some(gaussian),
                corrected: Some(gaussian * (big_l / (6.0 * sigma3) * ratio * y.powi(3)).exp()),
                pass: true,
            }
        })
        .collect();
    Ok(TailReport {
        kind: "tail".into(),
        n: samples.provenance.n,
        reps,
        level: CI_LEVEL,
        center: None,
        center_kind: None,
        l: Some(regime.k as f64 / 6.0 * big_l / sigma3),
        rows,
        pass: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewnessCheck {
    pub skewness: f64,
    pub stderr: f64,
    pub expected_sign: f64,
    /// |skewness| > 3 stderr.
    pub resolved: bool,
    pub pass: bool,
}

/// Sign of the sample skewness against sign(L), when resolvable at 3σ.
pub fn skewness_check(values: &[f64], big_l: f64, seed: RngSeed, exec: Execution) -> SkewnessCheck {
    let skew = |xs: &[f64]| {
        let k = k_statistics(xs);
        [k[2] / k[1].powf(1.5)]
    };
    let [s] = skew(values);
    let [se] = bootstrap(values, seed, exec, skew);
    let resolved = s.abs() > 3.0 * se;
    SkewnessCheck {
        skewness: s,
        stderr: se,
        expected_sign: big_l.signum(),
        resolved,
        pass: !resolved || s.signum() == big_l.signum(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub n: usize,
    pub reps: usize,
    pub mean: f64,
    pub stderr: f64,
    pub target: f64,
    pub gap: f64,
    pub bound: f64,
    pub pass: bool,
}

/// |E[t(f, M_n)] − t(f, m)| against 2k²/n (partitions), C(k,2)/n (graphs) or
/// 0 (permutations, where the estimator is unbiased), within 3 stderr.
pub fn bias_check(model: &ModelSpec, obj: &BasisObject, n: usize, reps: usize, seed: RngSeed, exec: Execution) -> Result<BiasReport> {
    if reps < 2 {
        return Err(Error::TooFewSamples { got: reps, need: 2 });
    }
    let target = limit_density(obj, model, seed.child(u64::MAX), exec)?;
    let t = sample_densities(model, obj, n, reps, seed, exec)?;
    let k = k_statistics(&t);
    let stderr = (k[1] / reps as f64).sqrt().hypot(target.stderr);
    let deg = obj.degree() as f64;
    let bound = match obj.family() {
        Family::Partition => 2.0 * deg * deg / n as f64,
        Family::Graph => deg * (deg - 1.0) / 2.0 / n as f64,
        Family::Permutation => 0.0,
    };
    let gap = (k[0] - target.value).abs();
    Ok(BiasReport {
        n,
        reps,
        mean: k[0],
        stderr,
        target: target.value,
        gap,
        bound,
        pass: gap <= bound + 3.0 * stderr,
    })
}
