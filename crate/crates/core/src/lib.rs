//! Spin-chain and Hubbard-model reductions to (coupled) Gross-Pitaevskii
//! dynamics: ladder-operator algebra, coherent-state symbols, lattice and
//! continuum solvers, and convergence studies.

// NaN must fail every validity test, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod continuum;
pub mod latticedyn;
pub mod limitlab;
pub mod models;
pub mod opalg;
pub mod symbolmap;
