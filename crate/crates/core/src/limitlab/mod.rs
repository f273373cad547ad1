//! Quantitative checks of the passage from the lattice to the GP equation:
//! the variable transformation, Taylor replacement of neighbours, the
//! continuum limit and the truncation condition `2R(0) ≪ sJ(0)`.

mod fit;
mod studies;
mod transform;

use thiserror::Error;

use crate::continuum::ContinuumError;
use crate::latticedyn::LatticeError;
use crate::models::ModelError;

pub use fit::{fit_loglog, ConvergenceReport, PointStatus};
pub use studies::{
    continuum_limit_point, expand_couplings, lattice_vs_continuum, taylor_check, truncation_point, truncation_study,
    BondCouplings, ContinuumLimitSetup, InitialScaling, TruncationSetup,
};
pub use transform::{compute_transform, AMode, TransformCoefficients};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitError {
    #[error("degenerate transformation: {0}")]
    DegenerateTransform(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("need at least 3 usable sweep points, have {0}")]
    TooFewPoints(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("lattice run failed: {0}")]
    Lattice(String),
    #[error("continuum run failed: {0}")]
    Continuum(String),
}

impl From<LatticeError> for LimitError {
    fn from(e: LatticeError) -> Self {
        LimitError::Lattice(e.to_string())
    }
}

impl From<ContinuumError> for LimitError {
    fn from(e: ContinuumError) -> Self {
        match e {
            ContinuumError::Transform(inner) => inner,
            other => LimitError::Continuum(other.to_string()),
        }
    }
}
