//! Periodic one-dimensional continuum equations.
//!
//! * the full equation before rescaling, with its dispersive terms;
//! * the rescaled precursor equation;
//! * the final GP equation `iϕ̇ = ϕ − ϕ_ξξ − |ϕ|²ϕ − Vϕ`;
//! * the coupled two-flavor GP system.
//!
//! Derivatives are spectral. The GP forms are split-step integrable; the
//! others are integrated with RK4, optionally in integrating-factor form.

mod equations;
mod profile;
mod spectral;
mod stepping;

use std::io::{self, Write};

use num_complex::Complex64;
use thiserror::Error;

use crate::limitlab::LimitError;

pub use equations::{
    gp_rhs, precursor_rhs, pretransform_rhs, CurvatureTerm, GpModel, PrecursorModel, PrecursorOptions,
    PretransformModel, PretransformOptions, SpectralModel,
};
pub use profile::Profile;
pub use spectral::Spectral;
pub use stepping::{
    coupled_gp_step, evolve, gp_step_splitstep, CoupledGp, SplitStepGp, TimeScheme,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContinuumError {
    #[error("grid needs a power-of-two point count of at least 16 and a positive length, got M = {points}, L = {length}")]
    Grid { points: usize, length: f64 },
    #[error("field has {got} samples on a grid of {expected}")]
    Shape { expected: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("non-finite value at sample {index}, t = {time}")]
    NonFinite { index: usize, time: f64 },
    #[error("invalid time stepping: {0}")]
    Stepping(String),
    #[error(transparent)]
    Transform(#[from] LimitError),
}

/// Uniform periodic grid `ξ_m = −L/2 + mΔξ`, `Δξ = L/M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    length: f64,
    points: usize,
}

impl Grid1D {
    pub fn new(length: f64, points: usize) -> Result<Self, ContinuumError> {
        if points < 16 || !points.is_power_of_two() || !(length > 0.0) || !length.is_finite() {
            return Err(ContinuumError::Grid { points, length });
        }
        Ok(Self { length, points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn coordinate(&self, m: usize) -> f64 {
        -0.5 * self.length + m as f64 * self.spacing()
    }

    pub fn points_iter(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|m| self.coordinate(m))
    }

    /// Samples `f` at every grid point.
    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        self.points_iter().map(f).collect()
    }
}

/// Samples of `φ(ξ)` at time `time`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumField {
    pub grid: Grid1D,
    pub time: f64,
    pub values: Vec<Complex64>,
}

impl ContinuumField {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self, ContinuumError> {
        let f = Self { grid, time: 0.0, values };
        f.check()?;
        Ok(f)
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        Self { grid, time: 0.0, values: grid.sample(f) }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self::from_fn(grid, |_| Complex64::new(0.0, 0.0))
    }

    pub fn check(&self) -> Result<(), ContinuumError> {
        if self.values.len() != self.grid.points() {
            return Err(ContinuumError::Shape { expected: self.grid.points(), got: self.values.len() });
        }
        match self.values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            Some(index) => Err(ContinuumError::NonFinite { index, time: self.time }),
            None => Ok(()),
        }
    }

    /// `Δξ Σ|a − b|²`, square-rooted.
    pub fn l2_distance(&self, other: &ContinuumField) -> f64 {
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        (s * self.grid.spacing()).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.spacing()).sqrt()
    }
}

/// Real samples of an external potential or coupling profile.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialField {
    pub values: Vec<f64>,
}

impl PotentialField {
    pub fn new(values: Vec<f64>) -> Result<Self, ContinuumError> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(ContinuumError::NonFinite { index, time: 0.0 });
        }
        Ok(Self { values })
    }

    pub fn zeros(grid: &Grid1D) -> Self {
        Self { values: vec![0.0; grid.points()] }
    }

    pub fn uniform(grid: &Grid1D, v: f64) -> Self {
        Self { values: vec![v; grid.points()] }
    }

    pub fn from_fn(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self { values: grid.points_iter().map(f).collect() }
    }

    pub(crate) fn check_on(&self, grid: &Grid1D) -> Result<(), ContinuumError> {
        if self.values.len() != grid.points() {
            return Err(ContinuumError::Shape { expected: grid.points(), got: self.values.len() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumObservables {
    pub norm: f64,
    pub energy: f64,
    pub momentum: f64,
}

fn quadrature(grid: &Grid1D, density: impl Iterator<Item = f64>) -> f64 {
    let mut acc = 0.0;
    let mut comp = 0.0;
    for x in density {
        let t = acc + x;
        comp += if acc.abs() >= x.abs() { (acc - t) + x } else { (x - t) + acc };
        acc = t;
    }
    (acc + comp) * grid.spacing()
}

/// Norm, momentum `∫Im(φ*φ_ξ)` and the GP energy
/// `∫ |φ_ξ|² + |φ|² − ½|φ|⁴ − V|φ|²`, which generates
/// `iφ̇ = φ − φ_ξξ − |φ|²φ − Vφ` through `iφ̇ = δE/δφ*`.
pub fn continuum_observables(field: &ContinuumField, v: Option<&PotentialField>) -> ContinuumObservables {
    let grid = field.grid;
    let sp = Spectral::new(&grid);
    let d = sp.derivative(&field.values, 1);
    let pot = |m: usize| v.map_or(0.0, |p| p.values[m]);
    let phi = &field.values;
    ContinuumObservables {
        norm: quadrature(&grid, phi.iter().map(|z| z.norm_sqr())),
        momentum: quadrature(&grid, phi.iter().zip(&d).map(|(z, dz)| (z.conj() * dz).im)),
        energy: quadrature(
            &grid,
            (0..phi.len()).map(|m| {
                let n = phi[m].norm_sqr();
                d[m].norm_sqr() + n - 0.5 * n * n - pot(m) * n
            }),
        ),
    }
}

/// Per-flavor norms and the coupled energy
/// `Σ_κ ∫ (2t|φ_κ,ξ|² − 4t|φ_κ|²) + ∫ U|φ_0|²|φ_1|²` (in units of ħ).
pub fn coupled_observables(fields: &[ContinuumField; 2], u: &PotentialField, t_hop: f64) -> (Vec<f64>, f64) {
    let grid = fields[0].grid;
    let sp = Spectral::new(&grid);
    let norms = fields.iter().map(|f| quadrature(&grid, f.values.iter().map(|z| z.norm_sqr()))).collect();
    let mut density = vec![0.0; grid.points()];
    for f in fields {
        let d = sp.derivative(&f.values, 1);
        for m in 0..grid.points() {
            density[m] += 2.0 * t_hop * d[m].norm_sqr() - 4.0 * t_hop * f.values[m].norm_sqr();
        }
    }
    for (m, dm) in density.iter_mut().enumerate() {
        *dm += u.values[m] * fields[0].values[m].norm_sqr() * fields[1].values[m].norm_sqr();
    }
    (norms, quadrature(&grid, density.into_iter()))
}

/// Writes `xi,re,im` rows.
pub fn write_field_csv<W: Write>(mut w: W, field: &ContinuumField) -> io::Result<()> {
    writeln!(w, "xi,re,im")?;
    for (x, z) in field.grid.points_iter().zip(&field.values) {
        writeln!(w, "{x:.17e},{:.17e},{:.17e}", z.re, z.im)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(1.0, 8).is_err());
        assert!(Grid1D::new(1.0, 48).is_err());
        assert!(Grid1D::new(0.0, 64).is_err());
        let g = Grid1D::new(4.0, 16).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.coordinate(0), -2.0);
    }

    #[test]
    fn zero_field_observables() {
        let g = Grid1D::new(10.0, 32).unwrap();
        let o = continuum_observables(&ContinuumField::zeros(g), None);
        assert_eq!(o, ContinuumObservables { norm: 0.0, energy: 0.0, momentum: 0.0 });
    }

    #[test]
    fn plane_wave_momentum() {
        let g = Grid1D::new(std::f64::consts::TAU, 64).unwrap();
        let f = ContinuumField::from_fn(g, |x| Complex64::from_polar(0.5, 2.0 * x));
        let o = continuum_observables(&f, None);
        assert!((o.norm - 0.25 * std::f64::consts::TAU).abs() < 1e-12);
        assert!((o.momentum - 2.0 * o.norm).abs() < 1e-12);
    }

    #[test]
    fn non_finite_field_is_rejected() {
        let g = Grid1D::new(1.0, 16).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 16];
        v[5].im = f64::INFINITY;
        assert_eq!(ContinuumField::new(g, v).unwrap_err(), ContinuumError::NonFinite { index: 5, time: 0.0 });
    }
}
