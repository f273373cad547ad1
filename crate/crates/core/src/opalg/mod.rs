//! Exact symbolic algebra of bosonic and fermionic ladder operators on a
//! finite periodic lattice.
//!
//! Expressions are kept in a canonical form where each product is reordered
//! only through exact (anti)commutations of distinct modes, so `a a†` on one
//! mode stays distinct from `a† a`. [`OperatorExpr::normal_order`] applies
//! the contractions; [`matrix::to_matrix`] gives an independent numeric check.

mod coeff;
mod expr;
pub mod matrix;
mod op;
mod scalar;
mod text;

pub(crate) use text::Parser;

pub use coeff::{Bindings, Monomial, ParamCoeff};
pub use expr::{canonical_word, OperatorExpr, Word};
pub use matrix::{to_matrix, FockSpace};
pub use op::{LadderOp, ModeSpace, Statistics};
pub use scalar::CRational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpAlgError {
    #[error("statistics mismatch: {0} vs {1}")]
    StatisticsMismatch(Statistics, Statistics),
    #[error("lattice size mismatch: {left} vs {right} sites")]
    LatticeMismatch { left: usize, right: usize },
    #[error("parameter `{0}` has no numeric binding")]
    UnboundParameter(String),
    #[error("Fock space of {modes} modes with {levels} levels exceeds {max} states")]
    DimensionOverflow { levels: usize, modes: usize, max: usize },
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}
