//! Densities of finite objects and of parameters, and the evaluation of
//! formal sums of basis objects.

mod graph;
mod graphon;
mod observable;
mod partition;
mod permutation;

pub use graph::{emb_count, emb_density, expected_hom_density, hom_count, hom_density, hom_density_bits, HOM_CAP, HOST_CAP};
pub use graphon::{
    graphon_density, DensityMethod, GraphonDensity, BLOCK_SUM_CAP, QUADRATURE_BUDGET, QUADRATURE_CAP, QUADRATURE_ORDER,
    QUADRATURE_TOL,
};
pub use observable::{evaluate, evaluate_exact, evaluate_on, EvalOptions, Observable};
pub use partition::{partition_density, t_rho, thoma_moment};
pub use permutation::{
    f_tau, pattern_density, permuton_density, permuton_density_exact, permuton_density_of_perm, Estimate, F_TAU_CAP,
    PERMUTON_PERM_CAP,
};
