use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use itertools::Itertools;
use modgauss::combinatorics::Permutation;
use modgauss::cumulants::{
    exact_cumulants, formal_limits, k_statistics, mc1_check, mc_cumulants, sample_statistic, BasisObject,
};
use modgauss::models::{exact_central_measure, ModelSpec, PermutonSpec, RngSeed, Sample};
use modgauss::observables::{evaluate, evaluate_on, EvalOptions};
use modgauss::parallel::{try_map_replicates, with_threads, Execution};
use modgauss::rational::{format_q, to_f64};
use modgauss::stats::{
    bias_check, concentration_check, kolmogorov_bound, kolmogorov_distance, sample_densities, skewness_check,
    tail_report, tv_test, Provenance, StandardizedStatistic,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Pipeline};
use crate::output::Table;
use crate::CliError;

/// Largest n for which oracle-tv enumerates S_n.
const UNIFORM_TV_CAP: usize = 8;

/// A pass/fail predicate; the run exits 0 iff every gate passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Gate {
    fn at_most(name: String, value: f64, limit: f64) -> Self {
        Gate {
            name,
            value,
            limit,
            pass: value <= limit,
        }
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub pass: bool,
    pub gates: Vec<Gate>,
    pub report: Value,
    pub out: PathBuf,
}

#[derive(Default)]
struct Outcome {
    results: Vec<Value>,
    gates: Vec<Gate>,
    samples: Table,
    tails: Table,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn num(x: f64) -> String {
    x.to_string()
}

/// Validates `cfg`, runs its pipeline on `threads` workers (all cores when
/// `None`) and writes the report files into `cfg.out`.
pub fn run(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<RunSummary, CliError> {
    cfg.validate()?;
    let started = unix_now();
    let outcome = match threads {
        Some(t) => with_threads(t, || run_pipeline(cfg))?,
        None => run_pipeline(cfg)?,
    };
    let finished = unix_now();
    let pass = outcome.gates.iter().all(|g| g.pass);
    let hash = cfg.hash();
    let report = json!({
        "header": {
            "tool": "modgauss-cli",
            "version": env!("CARGO_PKG_VERSION"),
            "library_version": modgauss::VERSION,
            "config_sha256": hash,
            "seed": cfg.seed,
            "threads": threads,
            "started_unix": started,
            "finished_unix": finished,
        },
        "config": cfg,
        "pipeline": cfg.pipeline,
        "pass": pass,
        "gates": outcome.gates,
        "results": outcome.results,
    });
    std::fs::create_dir_all(&cfg.out)?;
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(cfg.out.join("report.json"), text + "\n")?;
    let header = format!(
        "modgauss-cli {} pipeline={} config_sha256={hash} seed={} generated_unix={finished}",
        env!("CARGO_PKG_VERSION"),
        cfg.pipeline,
        cfg.seed
    );
    if !outcome.samples.is_empty() {
        outcome.samples.write(&cfg.out.join("samples.csv"), &header)?;
    }
    if !outcome.tails.is_empty() {
        outcome.tails.write(&cfg.out.join("tails.csv"), &header)?;
    }
    Ok(RunSummary {
        pass,
        gates: outcome.gates,
        report,
        out: cfg.out.clone(),
    })
}

fn run_pipeline(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let seed = RngSeed::new(cfg.seed);
    match cfg.pipeline {
        Pipeline::Density => density(cfg, seed),
        Pipeline::OracleTv => oracle_tv(cfg, seed),
        p => {
            let obj = cfg.basis().expect("validated");
            match p {
                Pipeline::Cumulants => cumulants(cfg, obj, seed),
                Pipeline::Clt => clt(cfg, obj, seed),
                Pipeline::Concentration => concentration(cfg, obj, seed),
                Pipeline::Tails => tails(cfg, obj, seed),
                Pipeline::Mc1 => mc1(cfg, obj),
                Pipeline::Density | Pipeline::OracleTv => unreachable!(),
            }
        }
    }
}

fn exec() -> Execution {
    Execution::Parallel
}

fn provenance(cfg: &ExperimentConfig, obj: &BasisObject, n: usize, seed: RngSeed) -> Provenance {
    Provenance {
        model: Some(cfg.model.clone()),
        object: Some(obj.clone()),
        n,
        reps: cfg.reps,
        seed: Some(seed),
    }
}

fn density(cfg: &ExperimentConfig, seed: RngSeed) -> Result<Outcome, CliError> {
    let obs = cfg.observable().expect("validated");
    let mut out = Outcome {
        samples: Table::new(&["n", "replicate", "density"]),
        ..Outcome::default()
    };
    let opts = EvalOptions {
        seed: seed.child(u64::MAX),
        exec: exec(),
        ..EvalOptions::default()
    };
    let limit = evaluate(&obs, &cfg.model, opts)?;
    out.results.push(json!({
        "kind": "limit",
        "value": limit.value,
        "exact": limit.exact.as_ref().map(format_q),
        "stderr": limit.stderr,
        "samples": limit.samples,
    }));
    if cfg.reps == 0 {
        return Ok(out);
    }
    for &n in &cfg.n {
        let s = seed.child(n as u64);
        let t: Vec<f64> = match cfg.basis() {
            Some(obj) => sample_densities(&cfg.model, obj, n, cfg.reps, s, exec())?,
            None => try_map_replicates(cfg.reps, s, exec(), |_, r| {
                let sample = cfg.model.sample_with(n, &mut r.rng())?;
                evaluate_on(&obs, &sample).map(|q| to_f64(&q))
            })?,
        };
        for (i, v) in t.iter().enumerate() {
            out.samples.push(vec![n.to_string(), i.to_string(), num(*v)]);
        }
        let k = k_statistics(&t);
        out.results.push(json!({
            "kind": "empirical",
            "n": n,
            "reps": cfg.reps,
            "mean": k[0],
            "stderr": (k[1] / cfg.reps as f64).sqrt(),
        }));
        if let (Some(obj), true) = (cfg.basis(), cfg.reps >= 2) {
            let b = bias_check(&cfg.model, obj, n, cfg.reps, s, exec())?;
            out.gates.push(Gate {
                name: format!("bias n={n}: |E t - t_lim| <= bound + 3 stderr"),
                value: b.gap,
                limit: b.bound + 3.0 * b.stderr,
                pass: b.pass,
            });
            out.results.push(json!({ "kind": "bias", "report": b }));
        }
    }
    Ok(out)
}

fn cumulants(cfg: &ExperimentConfig, obj: &BasisObject, seed: RngSeed) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for &n in &cfg.n {
        let report = mc_cumulants(&cfg.model, obj, n, cfg.reps, seed.child(n as u64), exec())?;
        for row in mc1_check(&report) {
            out.gates.push(Gate {
                name: format!("mc1 n={n} r={} (Monte Carlo)", row.r),
                value: row.kappa_abs,
                limit: row.bound,
                pass: row.pass,
            });
        }
        out.results.push(serde_json::to_value(&report).expect("report serializes"));
    }
    Ok(out)
}

fn clt(cfg: &ExperimentConfig, obj: &BasisObject, seed: RngSeed) -> Result<Outcome, CliError> {
    let mut out = Outcome {
        samples: Table::new(&["n", "replicate", "statistic", "standardized"]),
        ..Outcome::default()
    };
    for &n in &cfg.n {
        let s = seed.child(n as u64);
        let raw = sample_statistic(&cfg.model, obj, n, cfg.reps, s, exec())?;
        let y = StandardizedStatistic::y_mode(&raw, provenance(cfg, obj, n, s))?;
        let d = kolmogorov_distance(&y.values)?;
        let regime = obj.regime(n);
        let sigma_n = regime.scale2(y.scale * y.scale).sqrt();
        let bound = kolmogorov_bound(&regime, sigma_n)?;
        for (i, (r, v)) in raw.iter().zip(&y.values).enumerate() {
            out.samples.push(vec![n.to_string(), i.to_string(), num(*r), num(*v)]);
        }
        out.gates.push(Gate::at_most(format!("d_kol n={n} <= threshold"), d, cfg.thresholds.kolmogorov));
        out.gates.push(Gate::at_most(format!("d_kol n={n} <= kolmogorov bound"), d, bound));
        out.results.push(json!({
            "n": n,
            "reps": cfg.reps,
            "mode": y.mode,
            "center": y.center,
            "scale": y.scale,
            "d_kol": d,
            "sigma_n": sigma_n,
            "kolmogorov_bound": bound,
            "regime": regime,
        }));
    }
    Ok(out)
}

fn default_x_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 * 0.05).collect()
}

fn concentration(cfg: &ExperimentConfig, obj: &BasisObject, seed: RngSeed) -> Result<Outcome, CliError> {
    let xs = cfg.x_grid.clone().unwrap_or_else(default_x_grid);
    let mut out = Outcome {
        tails: Table::new(&["n", "x", "exceed", "prob", "ci_low", "ci_high", "bound", "pass"]),
        ..Outcome::default()
    };
    for &n in &cfg.n {
        let report = concentration_check(&cfg.model, obj, n, cfg.reps, &xs, seed.child(n as u64), exec())?;
        for r in &report.rows {
            let bound = r.bound.unwrap_or(f64::NAN);
            out.tails.push(vec![
                n.to_string(),
                num(r.x),
                r.exceed.to_string(),
                num(r.prob),
                num(r.ci_low),
                num(r.ci_high),
                num(bound),
                r.pass.to_string(),
            ]);
            out.gates.push(Gate {
                name: format!("concentration n={n} x={}: upper CI <= bound", r.x),
                value: r.ci_high,
                limit: bound,
                pass: r.pass,
            });
        }
        out.results.push(serde_json::to_value(&report).expect("report serializes"));
    }
    Ok(out)
}

fn tails(cfg: &ExperimentConfig, obj: &BasisObject, seed: RngSeed) -> Result<Outcome, CliError> {
    let limits = formal_limits(obj, &cfg.model);
    let (sigma2, big_l) = match (limits.sigma2, limits.l) {
        (Some(s), Some(l)) => (s, l),
        _ => {
            return Err(CliError::Config(
                "tails needs closed-form limits σ² and L for this model".into(),
            ))
        }
    };
    let mut out = Outcome {
        samples: Table::new(&["n", "replicate", "statistic", "standardized"]),
        tails: Table::new(&["n", "y", "exceed", "prob", "ci_low", "ci_high", "gaussian", "corrected"]),
        ..Outcome::default()
    };
    for &n in &cfg.n {
        let s = seed.child(n as u64);
        let raw = sample_statistic(&cfg.model, obj, n, cfg.reps, s, exec())?;
        let y = StandardizedStatistic::y_mode(&raw, provenance(cfg, obj, n, s))?;
        let regime = obj.regime(n);
        let report = tail_report(&y, sigma2, big_l, &regime)?;
        let skew = skewness_check(&raw, big_l, s.child(u64::MAX), exec());
        for (i, (r, v)) in raw.iter().zip(&y.values).enumerate() {
            out.samples.push(vec![n.to_string(), i.to_string(), num(*r), num(*v)]);
        }
        for r in &report.rows {
            out.tails.push(vec![
                n.to_string(),
                num(r.x),
                r.exceed.to_string(),
                num(r.prob),
                num(r.ci_low),
                num(r.ci_high),
                num(r.gaussian.unwrap_or(f64::NAN)),
                num(r.corrected.unwrap_or(f64::NAN)),
            ]);
        }
        out.gates.push(Gate {
            name: format!("skewness sign n={n} agrees with sign(L) when resolved"),
            value: skew.skewness,
            limit: skew.expected_sign,
            pass: skew.pass,
        });
        out.results.push(json!({
            "n": n,
            "sigma2": sigma2,
            "L": big_l,
            "tails": report,
            "skewness": skew,
        }));
    }
    Ok(out)
}

fn oracle_tv(cfg: &ExperimentConfig, seed: RngSeed) -> Result<Outcome, CliError> {
    let mut out = Outcome {
        samples: Table::new(&["n", "outcome", "count", "empirical", "exact"]),
        ..Outcome::default()
    };
    for &n in &cfg.n {
        let exact: BTreeMap<String, f64> = match &cfg.model {
            ModelSpec::Thoma(w) => exact_central_measure(w, n)?
                .into_iter()
                .map(|(l, p)| (l.to_string(), to_f64(&p)))
                .collect(),
            ModelSpec::Permuton(PermutonSpec::Uniform) => {
                if n > UNIFORM_TV_CAP {
                    return Err(modgauss::Error::SizeCap { what: "n", value: n, cap: UNIFORM_TV_CAP }.into());
                }
                let p = 1.0 / (1..=n).product::<usize>() as f64;
                (1..=n)
                    .permutations(n)
                    .map(|v| Ok((Permutation::new(v)?.to_string(), p)))
                    .collect::<Result<_, modgauss::Error>>()?
            }
            _ => {
                return Err(CliError::Config(
                    "oracle-tv needs a thoma model or the uniform permuton".into(),
                ))
            }
        };
        let draws = try_map_replicates(cfg.reps, seed.child(n as u64), exec(), |_, r| {
            cfg.model.sample_with(n, &mut r.rng()).map(|s| match s {
                Sample::Partition(l) => l.to_string(),
                Sample::Permutation(p) => p.to_string(),
                Sample::Graph(_) => unreachable!("model family checked above"),
            })
        })?;
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for d in draws {
            *counts.entry(d).or_default() += 1;
        }
        let tv = tv_test(&counts, &exact, cfg.thresholds.tv);
        for key in exact.keys().chain(counts.keys()).sorted().dedup() {
            let c = counts.get(key).copied().unwrap_or(0);
            out.samples.push(vec![
                n.to_string(),
                key.clone(),
                c.to_string(),
                num(c as f64 / cfg.reps as f64),
                num(exact.get(key).copied().unwrap_or(0.0)),
            ]);
        }
        out.gates.push(Gate::at_most(format!("tv n={n} <= threshold"), tv.tv, tv.threshold));
        out.results.push(json!({ "n": n, "reps": cfg.reps, "support": exact.len(), "tv": tv }));
    }
    Ok(out)
}

fn mc1(cfg: &ExperimentConfig, obj: &BasisObject) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    for &n in &cfg.n {
        let report = exact_cumulants(&cfg.model, obj, n, cfg.order)?;
        let rows = mc1_check(&report);
        for row in &rows {
            out.gates.push(Gate {
                name: format!("mc1 n={n} r={}", row.r),
                value: row.kappa_abs,
                limit: row.bound,
                pass: row.pass,
            });
        }
        out.results.push(json!({ "n": n, "cumulants": report, "mc1": rows }));
    }
    Ok(out)
}
