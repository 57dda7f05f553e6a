//! Numeric companions for the continuous models: normal distribution
//! functions, elliptical densities, Gaussian sequences, seeded sampling and
//! Monte Carlo dominance checks.

mod checks;
mod elliptical;
mod empirical;
mod gaussian_seq;
mod normal;
mod sampling;

use serde::Serialize;

pub use checks::{
    folded_normal_cdf, run_mc_check, verify_identity_11, verify_mlr_example, McCheck, MlrReport, OrderClaim, Stat,
    IDENTITY_TOLERANCE,
};
pub use elliptical::{
    density_reflection_grid, density_symmetry_grid, EllipticalSpec, Generator, Grid, Relation, DENSITY_TOLERANCE,
};
pub use empirical::{dkw_band, ks_one_sample, mc_dominance, Dominance, EmpiricalCdf};
pub use gaussian_seq::{build_gaussian_seq, GaussianSeq, GaussianSeqSpec, SeqCase, PD_TOLERANCE};
pub use normal::{phi, phi2, phi_density};
pub use sampling::{sample, ContinuousModel, MCConfig, SampleMatrix, ScaleFamily, DEFAULT_ALPHA, MIN_SAMPLES};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ContlabError {
    #[error("correlation {0} outside (-1, 1)")]
    RhoOutOfRange(f64),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("no grid point lies in the condition's region")]
    EmptyGrid,
    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(String),
    #[error("scale parameters must satisfy 0 < theta1 <= theta2, got {theta1} and {theta2}")]
    InvalidThetaOrder { theta1: f64, theta2: f64 },
}

/// Outcome of one numeric check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Grid points evaluated or Monte Carlo sample size.
    pub n: u64,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<u64>,
}
