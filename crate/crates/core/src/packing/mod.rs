//! Orbits of reflection groups and the packing properties built on them.

pub mod cluster;
pub mod descent;
pub mod lattice;
pub mod maxwell;
pub mod orbit;
pub mod section;
pub mod witness;

pub use cluster::seed_cluster;
pub use descent::{descent, DescentOutcome, DESCENT_BOUND};
pub use lattice::{det_and_index, LatticeComparison};
pub use maxwell::{packing_check, tangency_clusters, CliqueResult, PackingReport};
pub use orbit::{orbit, orbit_with_threads, Budget, OrbitElement, OrbitSet};
pub use section::{cross_section, CrossSection};
pub use witness::{limit_check, witness_checks, Check, LimitReport, ReyeCluster};

use crate::coxeter::CoxeterError;
use crate::lorentz::LorentzError;
use crate::matrix::MatrixError;
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PackingError {
    #[error("budget must allow at least one element")]
    BadBudget,
    #[error("generator {0} does not have negative norm")]
    BadGenerator(usize),
    #[error("no seeds given")]
    NoSeeds,
    #[error("orbit elements have mixed norms ({0} and {1})")]
    MixedNorms(Box<ExactScalar>, Box<ExactScalar>),
    #[error("packing elements must have negative norm")]
    NotSpheres,
    #[error("cluster condition violated: {0}")]
    ClusterCondition(String),
    #[error("cutting vector must have negative norm")]
    NotPlane,
    #[error("identities failed: {0}")]
    WitnessFailed(String),
    #[error("determinant ratio {0} is not the square of an integer")]
    NonIntegralIndex(Box<ExactScalar>),
    #[error("limit iteration does not converge")]
    Divergence,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
