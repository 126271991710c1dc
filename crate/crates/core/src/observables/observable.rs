use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{Graph, Partition, Permutation};
use crate::error::Error;
use crate::formal::FormalSum;
use crate::models::{Family, ModelSpec, RngSeed, Sample};
use crate::parallel::Execution;
use crate::rational::{to_f64, Q};
use crate::Result;

use super::graph::hom_density_bits;
use super::graphon::graphon_density;
use super::partition::{partition_density, t_rho};
use super::permutation::{pattern_density, permuton_density, permuton_density_exact, Estimate};

/// An element of one of the three observable algebras.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "element", rename_all = "snake_case")]
pub enum Observable {
    Graph(FormalSum<Graph>),
    Permutation(FormalSum<Permutation>),
    Partition(FormalSum<Partition>),
}

impl From<Graph> for Observable {
    fn from(g: Graph) -> Self {
        Observable::Graph(FormalSum::single(g))
    }
}

impl From<Permutation> for Observable {
    fn from(p: Permutation) -> Self {
        Observable::Permutation(FormalSum::single(p))
    }
}

impl From<Partition> for Observable {
    fn from(p: Partition) -> Self {
        Observable::Partition(FormalSum::single(p))
    }
}

impl Observable {
    pub fn family(&self) -> Family {
        match self {
            Observable::Graph(_) => Family::Graph,
            Observable::Permutation(_) => Family::Permutation,
            Observable::Partition(_) => Family::Partition,
        }
    }

    /// Largest size of a basis object in the expansion.
    pub fn degree(&self) -> usize {
        match self {
            Observable::Graph(s) => s.max_degree(),
            Observable::Permutation(s) => s.max_degree(),
            Observable::Partition(s) => s.max_degree(),
        }
    }

    fn mismatch(&self, model: Family) -> Error {
        Error::FamilyMismatch {
            observable: self.family().as_str(),
            model: model.as_str(),
        }
    }
}

/// Sampling budget for the Monte-Carlo part of [`evaluate`].
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub budget: usize,
    pub seed: RngSeed,
    pub exec: Execution,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            budget: 100_000,
            seed: RngSeed::new(0),
            exec: Execution::Parallel,
        }
    }
}

/// Ψ(f)(m), exactly. Fails with `Unsupported` when some term has no exact
/// evaluator for this parameter.
pub fn evaluate_exact(obs: &Observable, model: &ModelSpec) -> Result<Q> {
    model.validate()?;
    let unsupported = |what: String| Error::Unsupported(format!("no exact value for {what}"));
    match (obs, model) {
        (Observable::Graph(s), ModelSpec::Graphon(g)) => s.evaluate(|f| {
            graphon_density(f, g)?
                .exact
                .ok_or_else(|| unsupported(format!("t({f}, ·) on this graphon")))
        }),
        (Observable::Permutation(s), ModelSpec::Permuton(p)) => s.evaluate(|tau| {
            permuton_density_exact(tau, p)?.ok_or_else(|| unsupported(format!("t({tau}, ·) on this permuton")))
        }),
        (Observable::Partition(s), ModelSpec::Thoma(w)) => s.evaluate(|rho| Ok::<_, Error>(t_rho(rho, w))),
        _ => Err(obs.mismatch(model.family())),
    }
}

/// Ψ(f)(m) as an estimate: exact terms contribute no error, Monte-Carlo terms
/// (permutons without a closed form) use independent seed streams.
pub fn evaluate(obs: &Observable, model: &ModelSpec, opts: EvalOptions) -> Result<Estimate> {
    model.validate()?;
    match (obs, model) {
        (Observable::Graph(s), ModelSpec::Graphon(g)) => {
            let mut value = 0.0;
            let mut exact = Some(Q::zero());
            for (f, c) in s.iter() {
                let d = graphon_density(f, g)?;
                value += to_f64(c) * d.value;
                exact = match (exact, d.exact) {
                    (Some(a), Some(x)) => Some(a + c * x),
                    _ => None,
                };
            }
            Ok(finish(value, 0.0, exact, 0))
        }
        (Observable::Permutation(s), ModelSpec::Permuton(p)) => {
            let (mut value, mut var, mut samples) = (0.0, 0.0, 0);
            let mut exact = Some(Q::zero());
            for (i, (tau, c)) in s.iter().enumerate() {
                let cf = to_f64(c);
                let e = match permuton_density_exact(tau, p)? {
                    Some(x) => Estimate::exact(x),
                    None => permuton_density(tau, p, opts.budget, opts.seed.child(i as u64), opts.exec)?,
                };
                value += cf * e.value;
                var += cf * cf * e.stderr * e.stderr;
                samples += e.samples;
                exact = match (exact, e.exact) {
                    (Some(a), Some(x)) => Some(a + c * x),
                    _ => None,
                };
            }
            Ok(finish(value, var.sqrt(), exact, samples))
        }
        (Observable::Partition(_), ModelSpec::Thoma(_)) => Ok(Estimate::exact(evaluate_exact(obs, model)?)),
        _ => Err(obs.mismatch(model.family())),
    }
}

fn finish(value: f64, stderr: f64, exact: Option<Q>, samples: usize) -> Estimate {
    match exact {
        Some(x) => Estimate::exact(x),
        None => Estimate {
            value,
            stderr,
            exact: None,
            samples,
        },
    }
}

/// f evaluated on a finite object: t(F, G), t(τ, σ) or t(ρ, Ω(λ)).
pub fn evaluate_on(obs: &Observable, sample: &Sample) -> Result<Q> {
    match (obs, sample) {
        (Observable::Graph(s), Sample::Graph(g)) => s.evaluate(|f| hom_density_bits(f, g)),
        (Observable::Permutation(s), Sample::Permutation(sigma)) => s.evaluate(|tau| pattern_density(tau, sigma)),
        (Observable::Partition(s), Sample::Partition(lambda)) => s.evaluate(|rho| partition_density(rho, lambda)),
        (o, Sample::Graph(_)) => Err(o.mismatch(Family::Graph)),
        (o, Sample::Permutation(_)) => Err(o.mismatch(Family::Permutation)),
        (o, Sample::Partition(_)) => Err(o.mismatch(Family::Partition)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{GraphonSpec, PermutonSpec, ThomaParameter};
    use crate::rational::q;
    use crate::Basis;

    #[test]
    fn product_rule_on_uniform() {
        let a: Permutation = "12".parse().unwrap();
        let b: Permutation = "21".parse().unwrap();
        let obs = Observable::Permutation(a.product(&b));
        let v = evaluate_exact(&obs, &ModelSpec::Permuton(PermutonSpec::Uniform)).unwrap();
        assert_eq!(v, q(1, 4));
    }

    #[test]
    fn family_mismatch() {
        let obs: Observable = Graph::complete(2).into();
        let err = evaluate_exact(&obs, &ModelSpec::Thoma(ThomaParameter::plancherel()));
        assert!(matches!(err, Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn disjoint_union_is_product() {
        let g = GraphonSpec::step(
            vec![q(1, 3), q(2, 3)],
            vec![vec![q(1, 2), q(1, 5)], vec![q(1, 5), q(7, 8)]],
        )
        .unwrap();
        let m = ModelSpec::Graphon(g);
        let f = Graph::path(3);
        let single = evaluate_exact(&f.clone().into(), &m).unwrap();
        let double = evaluate_exact(&f.disjoint_union(&f).into(), &m).unwrap();
        assert_eq!(double, &single * &single);
    }

    #[test]
    fn json_form() {
        let obs: Observable = serde_json::from_str(r#"{"family":"graph","element":{"k=3; 1-2,1-3,2-3":"1"}}"#).unwrap();
        assert_eq!(obs, Graph::complete(3).into());
    }
}
