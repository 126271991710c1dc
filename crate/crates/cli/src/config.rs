use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use modgauss::cumulants::{BasisObject, MIN_REPS};
use modgauss::models::ModelSpec;
use modgauss::observables::Observable;
use modgauss::stats::{MIN_CONCENTRATION_REPS, MIN_KOLMOGOROV_SAMPLES};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Density,
    Cumulants,
    Clt,
    Concentration,
    Tails,
    OracleTv,
    Mc1,
}

impl Pipeline {
    pub const ALL: [Pipeline; 7] = [
        Pipeline::Density,
        Pipeline::Cumulants,
        Pipeline::Clt,
        Pipeline::Concentration,
        Pipeline::Tails,
        Pipeline::OracleTv,
        Pipeline::Mc1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Density => "density",
            Pipeline::Cumulants => "cumulants",
            Pipeline::Clt => "clt",
            Pipeline::Concentration => "concentration",
            Pipeline::Tails => "tails",
            Pipeline::OracleTv => "oracle-tv",
            Pipeline::Mc1 => "mc1",
        }
    }

    /// Fewest replicates the pipeline accepts.
    pub fn min_reps(self) -> usize {
        match self {
            Pipeline::Density | Pipeline::Mc1 => 0,
            Pipeline::OracleTv => 1,
            Pipeline::Cumulants | Pipeline::Tails => MIN_REPS,
            Pipeline::Clt => MIN_KOLMOGOROV_SAMPLES,
            Pipeline::Concentration => MIN_CONCENTRATION_REPS,
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pipeline {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| CliError::Config(format!("unknown pipeline {s:?}")))
    }
}

/// A basis object, an inline formal sum, or a JSON file holding a formal sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableConfig {
    Basis(BasisObject),
    Formal(Observable),
    File { file: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "default_kolmogorov")]
    pub kolmogorov: f64,
    #[serde(default = "default_tv")]
    pub tv: f64,
}

fn default_kolmogorov() -> f64 {
    0.06
}

fn default_tv() -> f64 {
    0.02
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            kolmogorov: default_kolmogorov(),
            tv: default_tv(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableConfig>,
    /// Sizes n to run at.
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub reps: usize,
    #[serde(default)]
    pub seed: u64,
    pub pipeline: Pipeline,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub thresholds: Thresholds,
    /// Deviations x for the concentration pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_grid: Option<Vec<f64>>,
    /// Highest cumulant order for the mc1 pipeline.
    #[serde(default = "default_order")]
    pub order: usize,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn default_order() -> usize {
    4
}

impl ExperimentConfig {
    /// Reads JSON, or TOML when the extension is `.toml`. A file observable is
    /// read relative to the config's directory and inlined.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml(&text)?
        } else {
            Self::from_json(&text)?
        };
        if let Some(ObservableConfig::File { file }) = &cfg.observable {
            let file = path.parent().unwrap_or(Path::new(".")).join(file);
            let text = std::fs::read_to_string(&file).map_err(|e| CliError::Config(format!("{}: {e}", file.display())))?;
            let obs: Observable = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", file.display())))?;
            cfg.observable = Some(ObservableConfig::Formal(obs));
        }
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.model.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let family = self.model.family();
        match &self.observable {
            Some(ObservableConfig::Basis(b)) if b.family() != family => {
                return bad(format!("observable family {} does not match model family {family}", b.family()))
            }
            Some(ObservableConfig::Formal(o)) if o.family() != family => {
                return bad(format!("observable family {} does not match model family {family}", o.family()))
            }
            Some(ObservableConfig::File { file }) => return bad(format!("observable file {} was not loaded", file.display())),
            _ => {}
        }
        match self.pipeline {
            Pipeline::Density => {
                if self.observable.is_none() {
                    return bad("pipeline density needs an observable".into());
                }
            }
            Pipeline::OracleTv => {}
            p => {
                if self.basis().is_none() {
                    return bad(format!("pipeline {p} needs a basis object as observable"));
                }
            }
        }
        if self.pipeline != Pipeline::Density && self.n.is_empty() {
            return bad(format!("pipeline {} needs a nonempty n grid", self.pipeline));
        }
        if self.n.contains(&0) {
            return bad("n must be positive".into());
        }
        if self.reps < self.pipeline.min_reps() {
            return bad(format!(
                "pipeline {} needs reps >= {}, got {}",
                self.pipeline,
                self.pipeline.min_reps(),
                self.reps
            ));
        }
        if !(self.thresholds.kolmogorov > 0.0 && self.thresholds.tv > 0.0) {
            return bad("thresholds must be positive".into());
        }
        if let Some(xs) = &self.x_grid {
            if xs.is_empty() || xs.iter().any(|x| !(*x > 0.0)) {
                return bad("x_grid must be a nonempty list of positive numbers".into());
            }
        }
        if self.pipeline == Pipeline::Mc1 && !(2..=modgauss::cumulants::MAX_ORDER).contains(&self.order) {
            return bad(format!("order must lie in 2..={}", modgauss::cumulants::MAX_ORDER));
        }
        Ok(())
    }

    pub fn basis(&self) -> Option<&BasisObject> {
        match &self.observable {
            Some(ObservableConfig::Basis(b)) => Some(b),
            _ => None,
        }
    }

    pub fn observable(&self) -> Option<Observable> {
        match &self.observable {
            Some(ObservableConfig::Basis(b)) => Some(b.observable()),
            Some(ObservableConfig::Formal(o)) => Some(o.clone()),
            _ => None,
        }
    }

    /// SHA-256 of the compact JSON form, output directory excluded.
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            m.remove("out");
        }
        let digest = Sha256::digest(v.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_names_round_trip() {
        for p in Pipeline::ALL {
            assert_eq!(p.as_str().parse::<Pipeline>().unwrap(), p);
            assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{p}\""));
        }
        assert!("bogus".parse::<Pipeline>().is_err());
    }

    #[test]
    fn hash_ignores_output_directory() {
        let text = r#"{"model": {"family": "permuton", "variant": "uniform"}, "pipeline": "mc1", "n": [5],
                       "observable": {"family": "permutation", "object": "21"}}"#;
        let a = ExperimentConfig::from_json(text).unwrap();
        let mut b = a.clone();
        b.out = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"model": {"family": "permuton", "variant": "uniform"}, "pipeline": "mc1", "nn": [5]}"#;
        assert!(ExperimentConfig::from_json(text).is_err());
    }
}
