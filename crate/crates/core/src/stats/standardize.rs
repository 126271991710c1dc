use serde::{Deserialize, Serialize};

use crate::cumulants::{k_statistics, BasisObject, CumulantRegime};
use crate::error::Error;
use crate::models::{ModelSpec, RngSeed};
use crate::Result;

/// Fewest samples accepted by [`kolmogorov_distance`].
pub const MIN_KOLMOGOROV_SAMPLES: usize = 1000;

/// Standard normal CDF through the complementary error function, which is
/// only evaluated at nonnegative arguments where it is most accurate.
pub fn normal_cdf(x: f64) -> f64 {
    let tail = 0.5 * libm::erfc(x.abs() / std::f64::consts::SQRT_2);
    if x < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// (S − E S) / (N^{1/3} D^{2/3}).
    X,
    /// (S − E S) / √var(S).
    Y,
    /// Explicit centre and scale.
    Custom,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: Option<ModelSpec>,
    pub object: Option<BasisObject>,
    pub n: usize,
    pub reps: usize,
    pub seed: Option<RngSeed>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardizedStatistic {
    pub mode: Mode,
    pub values: Vec<f64>,
    pub center: f64,
    pub scale: f64,
    pub provenance: Provenance,
}

impl StandardizedStatistic {
    /// Y-mode with the empirical mean and standard deviation of `raw`.
    pub fn y_mode(raw: &[f64], provenance: Provenance) -> Result<Self> {
        if raw.len() < 3 {
            return Err(Error::TooFewSamples { got: raw.len(), need: 3 });
        }
        let k = k_statistics(raw);
        if k[1] <= 0.0 {
            return Err(Error::Singular("sample variance is zero".into()));
        }
        Ok(Self::custom(raw, k[0], k[1].sqrt(), provenance).with_mode(Mode::Y))
    }

    /// X-mode; the centre is `mean` when known exactly, else the sample mean.
    pub fn x_mode(raw: &[f64], regime: &CumulantRegime, mean: Option<f64>, provenance: Provenance) -> Self {
        let center = mean.unwrap_or_else(|| raw.iter().sum::<f64>() / raw.len() as f64);
        let scale = regime.n_n.cbrt() * regime.d_n.powf(2.0 / 3.0);
        Self::custom(raw, center, scale, provenance).with_mode(Mode::X)
    }

    pub fn custom(raw: &[f64], center: f64, scale: f64, provenance: Provenance) -> Self {
        StandardizedStatistic {
            mode: Mode::Custom,
            values: raw.iter().map(|x| (x - center) / scale).collect(),
            center,
            scale,
            provenance,
        }
    }

    fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// sup_t |F̂(t) − Φ(t)|, checked on both sides of every jump of F̂.
pub fn kolmogorov_distance(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < MIN_KOLMOGOROV_SAMPLES {
        return Err(Error::TooFewSamples { got: n, need: MIN_KOLMOGOROV_SAMPLES });
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && v[j] == v[i] {
            j += 1;
        }
        let phi = normal_cdf(v[i]);
        d = d.max((i as f64 / nf - phi).abs()).max((j as f64 / nf - phi).abs());
        i = j;
    }
    Ok(d)
}

/// 76.36 A³/σ_n³ · √(D_n/N_n).
pub fn kolmogorov_bound(regime: &CumulantRegime, sigma_n: f64) -> Result<f64> {
    if sigma_n.is_nan() || sigma_n <= 0.0 {
        return Err(Error::Singular(format!("σ_n = {sigma_n}: the variance scaling degenerates")));
    }
    Ok(76.36 * regime.a.powi(3) / sigma_n.powi(3) * (regime.d_n / regime.n_n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Permutation;
    use rand::{Rng, SeedableRng};
    use rand_distr::StandardNormal;

    #[test]
    fn phi_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(1.96) - 0.975_002_104_851_779_5).abs() < 1e-15);
        assert!((normal_cdf(-5.0) / 2.866_515_718_791_933e-7 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constant_sample() {
        assert_eq!(kolmogorov_distance(&vec![0.0; 2000]).unwrap(), 0.5);
        let c = 1.0;
        let d = kolmogorov_distance(&vec![c; 2000]).unwrap();
        assert!((d - normal_cdf(c).max(1.0 - normal_cdf(c))).abs() < 1e-15);
        assert!(kolmogorov_distance(&[0.0; 10]).is_err());
    }

    #[test]
    fn normal_sample_is_close() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..200_000).map(|_| rng.sample(StandardNormal)).collect();
        let d = kolmogorov_distance(&xs).unwrap();
        assert!(d < 1.36 / (200_000f64).sqrt(), "{d}");
        // affine invariance of the Y-mode
        let shifted: Vec<f64> = xs.iter().map(|x| 3.0 * x + 7.0).collect();
        let y = StandardizedStatistic::y_mode(&shifted, Provenance::default()).unwrap();
        let y0 = StandardizedStatistic::y_mode(&xs, Provenance::default()).unwrap();
        let (a, b) = (kolmogorov_distance(&y.values).unwrap(), kolmogorov_distance(&y0.values).unwrap());
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn inversion_constant() {
        let obj = BasisObject::Permutation(Permutation::new(vec![2, 1]).unwrap());
        for n in [100usize, 10_000] {
            let b = kolmogorov_bound(&obj.regime(n), 1.0 / 6.0).unwrap() * (n as f64).sqrt();
            assert!((b / 33000.0 - 1.0).abs() < 0.05, "{b}");
        }
        let plain = CumulantRegime { n: 100, k: 1, d_n: 1.0, n_n: 100.0, a: 1.0 };
        assert!((kolmogorov_bound(&plain, 1.0).unwrap() - 7.636).abs() < 1e-12);
        assert!(kolmogorov_bound(&plain, 0.0).is_err());
    }
}
