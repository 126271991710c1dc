//! Limiting cumulants as formal sums, Monte-Carlo and exact cumulants of the
//! count statistics, and the MC1 bound.

mod exact;
mod formal;
mod kstat;
mod mc;
mod regime;

pub use exact::{cumulants_from_moments, exact_cumulants, exact_distribution, mc1_check, Mc1Row, EXACT_GRAPH_CAP, EXACT_PERM_CAP, MAX_ORDER};
pub use formal::{
    cross_covariance_graphs, kappa2_graphs, kappa2_parts, kappa2_perms, kappa3_graphs, kappa3_parts, kappa3_perms,
};
pub use kstat::k_statistics;
pub use mc::{bootstrap, mc_cumulants, mc_joint_cumulant2, sample_statistic, CumulantReport, JointCumulant, BOOTSTRAP, MIN_REPS};
pub use regime::{formal_limits, BasisObject, CumulantRegime, Limits};
