//! Random combinatorial structures sampled from graphons, permutons and
//! Thoma parameters, the algebras of observables on them, the exact maps
//! giving limiting second and third cumulants, and Monte-Carlo checks of the
//! resulting central limit theorems and concentration inequalities.

pub mod combinatorics;
pub mod cumulants;
mod error;
pub mod formal;
pub mod models;
pub mod observables;
pub mod parallel;
pub mod rational;
pub mod stats;

pub use error::{Error, Result};
pub use formal::{Basis, FormalSum};
pub use rational::Q;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
