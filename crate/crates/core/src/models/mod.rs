//! Hamiltonian builders, equations of motion and finite-matrix identity checks.

mod derivation;
mod eom;
mod hubbard;
mod jordan_wigner;
mod statistics;
pub mod sym;
mod xxz;

pub use derivation::{commutator_oracle_deviation, verify_derivation, DerivationCheck, DerivationReport, Perturbation};
pub use eom::{
    derive_eom, hubbard_hopping_commutator, hubbard_interaction_commutator,
    isotropy_merge_expr, isotropy_merge_poly, lattice_amplitude_equation, xxz_eom_pattern,
    xxz_eom_printed, xxz_printed_ordering_correction,
};
pub use hubbard::{build_hubbard, hubbard_hamiltonian, HubbardParams, HubbardSectors};
pub use jordan_wigner::{verify_jordan_wigner, JordanWignerReport};
pub use statistics::{verify_statistics_independence, StatisticsReport};
pub use xxz::{build_xxz_bosonized, xxz_hamiltonian, CouplingMode, XxzParams, XxzSectors};

use thiserror::Error;

use crate::opalg::OpAlgError;
use crate::symbolmap::SymbolError;

/// Smallest lattice accepted by the public builders.
pub const MIN_SITES: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("flavor {flavor} out of range for {flavors} flavors")]
    FlavorOutOfRange { flavor: usize, flavors: usize },
    #[error("Jordan-Wigner check needs 2 <= N <= 6, got {0}")]
    JordanWignerSize(usize),
    #[error(transparent)]
    Algebra(#[from] OpAlgError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}
