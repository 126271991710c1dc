//! Standardization, Kolmogorov distance and its bound, concentration and tail
//! reports, and total-variation tests.

mod standardize;
mod tails;
mod tv;

pub use standardize::{kolmogorov_bound, kolmogorov_distance, normal_cdf, Mode, Provenance, StandardizedStatistic, MIN_KOLMOGOROV_SAMPLES};
pub use tails::{
    bias_check, clopper_pearson, concentration_bound, concentration_check, limit_density, sample_densities, skewness_check,
    tail_report, BiasReport, ConcentrationCenter, SkewnessCheck, TailReport, TailRow, CI_LEVEL, MIN_CONCENTRATION_REPS,
};
pub use tv::{tv_test, TvResult};
