//! Exact construction and verification of crystallographic sphere packings.
//!
//! A packing starts from a Coxeter graph ([`coxeter`]) whose Gram matrix
//! defines a Lorentz space ([`lorentz`]) over an exact quadratic field
//! ([`scalar`]). The reflection group orbit of seed spheres ([`packing`]) is
//! checked for Maxwell's packing condition and tangency clusters, and
//! realized as Euclidean spheres for any cusp taken as the point at infinity
//! ([`euclid`]).

pub mod bundled;
pub mod coxeter;
pub mod euclid;
pub mod lorentz;
pub mod matrix;
pub mod packing;
pub mod scalar;

pub use coxeter::{CoxeterError, CoxeterGraph, EdgeLabel, TailPattern, WeightSet};
pub use euclid::{Curvature, EuclidError, EuclideanSphere, Frame, Plane, Shape, SliceItem};
pub use lorentz::{Isometry, LatticeVector, LorentzError, LorentzSpace, NormClass};
pub use matrix::{Matrix, MatrixError, Signature};
pub use packing::{OrbitSet, PackingError, PackingReport};
pub use scalar::{ExactScalar, ScalarError};

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Euclid(#[from] EuclidError),
}
