//! Classical lattice dynamics for the XXZ and Hubbard amplitude equations.
//!
//! Amplitudes are stored flat, flavor-major: `φ_{j,κ}` lives at `κN + j`,
//! matching [`crate::symbolmap::FieldVar::mode_index`].

mod integrate;
mod model;

use std::io::{self, Write};

use num_complex::Complex64;
use thiserror::Error;

use crate::models::{HubbardParams, ModelError, XxzParams};
use crate::opalg::{ModeSpace, OpAlgError};
use crate::symbolmap::SymbolError;

pub use integrate::{integrate, IntegratorConfig, Scheme, Trajectory};
pub use model::{HubbardLattice, LatticeModel, SymbolMode, SymbolicModel, XxzLattice};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("expected {expected} amplitudes, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("non-finite amplitude at site {site}, flavor {flavor}, t = {time}")]
    NonFinite { time: f64, site: usize, flavor: usize },
    #[error("adaptive step size underflow at t = {time} (h = {step:e})")]
    StepUnderflow { time: f64, step: f64 },
    #[error("invalid integrator configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

impl From<OpAlgError> for LatticeError {
    fn from(e: OpAlgError) -> Self {
        LatticeError::Model(e.into())
    }
}

/// Amplitudes `φ_{j,κ}` at time `time`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    pub space: ModeSpace,
    pub time: f64,
    pub amplitudes: Vec<Complex64>,
}

impl LatticeState {
    pub fn new(space: ModeSpace, amplitudes: Vec<Complex64>) -> Result<Self, LatticeError> {
        let s = Self { space, time: 0.0, amplitudes };
        s.check()?;
        Ok(s)
    }

    pub fn zeros(space: ModeSpace) -> Self {
        Self { space, time: 0.0, amplitudes: vec![Complex64::new(0.0, 0.0); space.modes()] }
    }

    /// Builds a state from one array per flavor.
    pub fn from_flavors(flavors: &[Vec<Complex64>]) -> Result<Self, LatticeError> {
        let sites = flavors.first().map_or(0, Vec::len);
        if let Some(bad) = flavors.iter().find(|f| f.len() != sites) {
            return Err(LatticeError::Shape { expected: sites, got: bad.len() });
        }
        Self::new(ModeSpace::new(sites, flavors.len()), flavors.concat())
    }

    pub fn flavor(&self, kappa: usize) -> &[Complex64] {
        let n = self.space.sites;
        &self.amplitudes[kappa * n..(kappa + 1) * n]
    }

    /// Shape and finiteness.
    pub fn check(&self) -> Result<(), LatticeError> {
        if self.amplitudes.len() != self.space.modes() {
            return Err(LatticeError::Shape { expected: self.space.modes(), got: self.amplitudes.len() });
        }
        match self.amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            Some(m) => Err(LatticeError::NonFinite {
                time: self.time,
                site: m % self.space.sites,
                flavor: m / self.space.sites,
            }),
            None => Ok(()),
        }
    }
}

fn checked_rhs(model: &dyn LatticeModel, state: &LatticeState) -> Result<Vec<Complex64>, LatticeError> {
    if state.space != model.space() {
        return Err(LatticeError::Shape { expected: model.space().modes(), got: state.amplitudes.len() });
    }
    state.check()?;
    let mut out = vec![Complex64::new(0.0, 0.0); state.amplitudes.len()];
    model.rhs(&state.amplitudes, &mut out);
    Ok(out)
}

/// `φ̇` of the XXZ amplitude equation with uniform couplings from `p`.
pub fn xxz_rhs(state: &LatticeState, p: &XxzParams, mode: SymbolMode) -> Result<Vec<Complex64>, LatticeError> {
    checked_rhs(&XxzLattice::from_params(p, mode)?, state)
}

/// `φ̇_{·,κ}` of the two-flavor Hubbard amplitude equations.
pub fn hubbard_rhs(state: &LatticeState, p: &HubbardParams) -> Result<Vec<Complex64>, LatticeError> {
    if state.space.flavors != 2 {
        return Err(LatticeError::Shape { expected: 2 * state.space.sites, got: state.amplitudes.len() });
    }
    checked_rhs(&HubbardLattice::from_params(p)?, state)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observables {
    pub norm: f64,
    pub energy: f64,
    pub per_flavor_norm: Vec<f64>,
}

pub fn observables(state: &LatticeState, model: &dyn LatticeModel) -> Observables {
    let per_flavor_norm: Vec<f64> = (0..state.space.flavors)
        .map(|k| {
            let mut acc = model::Neumaier::default();
            state.flavor(k).iter().for_each(|z| acc.add(z.norm_sqr()));
            acc.total()
        })
        .collect();
    Observables {
        norm: per_flavor_norm.iter().sum(),
        energy: model.energy(&state.amplitudes),
        per_flavor_norm,
    }
}

/// Final observables and the largest deviations from the initial ones.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftSummary {
    pub initial: Observables,
    pub last: Observables,
    pub max_norm_drift: f64,
    pub max_energy_drift: f64,
    pub max_flavor_norm_drift: f64,
}

pub fn drift_summary(traj: &Trajectory, model: &dyn LatticeModel) -> DriftSummary {
    let all: Vec<Observables> = traj.snapshots.iter().map(|s| observables(s, model)).collect();
    let initial = all[0].clone();
    let mut out = DriftSummary {
        last: all[all.len() - 1].clone(),
        max_norm_drift: 0.0,
        max_energy_drift: 0.0,
        max_flavor_norm_drift: 0.0,
        initial: initial.clone(),
    };
    for o in &all {
        out.max_norm_drift = out.max_norm_drift.max((o.norm - initial.norm).abs());
        out.max_energy_drift = out.max_energy_drift.max((o.energy - initial.energy).abs());
        for (a, b) in o.per_flavor_norm.iter().zip(&initial.per_flavor_norm) {
            out.max_flavor_norm_drift = out.max_flavor_norm_drift.max((a - b).abs());
        }
    }
    out
}

/// Writes `time,site,flavor,re,im` rows for every snapshot.
pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "time,site,flavor,re,im")?;
    for s in &traj.snapshots {
        for (m, z) in s.amplitudes.iter().enumerate() {
            let (site, flavor) = (m % s.space.sites, m / s.space.sites);
            writeln!(w, "{:.12e},{site},{flavor},{:.17e},{:.17e}", s.time, z.re, z.im)?;
        }
    }
    Ok(())
}
