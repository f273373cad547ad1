use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::Grid1D;

/// FFT plans and wavenumbers for one periodic grid.
#[derive(Clone)]
pub struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
    /// Largest |k| kept by the two-thirds rule.
    k_cut: f64,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("points", &self.k.len()).finish()
    }
}

impl Spectral {
    pub fn new(grid: &Grid1D) -> Self {
        let m = grid.points();
        let mut planner = FftPlanner::new();
        let k = (0..m)
            .map(|i| {
                let signed = if 2 * i < m { i as f64 } else { i as f64 - m as f64 };
                TAU * signed / grid.length()
            })
            .collect();
        let k_cut = TAU / grid.length() * (m as f64 / 3.0).floor();
        Self { forward: planner.plan_fft_forward(m), inverse: planner.plan_fft_inverse(m), k, k_cut }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn forward(&self, v: &mut [Complex64]) {
        self.forward.process(v);
    }

    /// Normalized inverse transform.
    pub fn inverse(&self, v: &mut [Complex64]) {
        self.inverse.process(v);
        let scale = 1.0 / v.len() as f64;
        v.iter_mut().for_each(|z| *z *= scale);
    }

    /// `(ik)^order` applied in Fourier space; odd orders drop the Nyquist
    /// mode, which has no sign.
    pub fn derivative(&self, v: &[Complex64], order: u32) -> Vec<Complex64> {
        let mut w = v.to_vec();
        self.forward(&mut w);
        let m = w.len();
        for (i, (z, &k)) in w.iter_mut().zip(&self.k).enumerate() {
            *z *= if order % 2 == 1 && 2 * i == m { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, k).powu(order) };
        }
        self.inverse(&mut w);
        w
    }

    /// Multiplies each Fourier mode by `symbol(k)`.
    pub fn apply(&self, v: &mut [Complex64], symbol: impl Fn(f64) -> Complex64) {
        self.forward(v);
        for (z, &k) in v.iter_mut().zip(&self.k) {
            *z *= symbol(k);
        }
        self.inverse(v);
    }

    /// Zeroes modes with `|k|` above two thirds of the Nyquist wavenumber.
    pub fn dealias(&self, v: &mut [Complex64]) {
        let cut = self.k_cut * (1.0 + 1e-12);
        self.forward(v);
        let m = v.len();
        for (i, z) in v.iter_mut().enumerate() {
            if self.k[i].abs() > cut || 2 * i == m {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        self.inverse(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_a_plane_wave() {
        let grid = Grid1D::new(TAU, 32).unwrap();
        let sp = Spectral::new(&grid);
        let v: Vec<Complex64> = grid.points_iter().map(|x| Complex64::from_polar(1.0, 3.0 * x)).collect();
        let d1 = sp.derivative(&v, 1);
        let d2 = sp.derivative(&v, 2);
        for ((a, b), z) in d1.iter().zip(&d2).zip(&v) {
            assert!((a - Complex64::new(0.0, 3.0) * z).norm() < 1e-12);
            assert!((b + 9.0 * z).norm() < 1e-12);
        }
    }

    #[test]
    fn dealias_keeps_low_modes_only() {
        let grid = Grid1D::new(TAU, 32).unwrap();
        let sp = Spectral::new(&grid);
        let low: Vec<Complex64> = grid.points_iter().map(|x| Complex64::from_polar(1.0, 10.0 * x)).collect();
        let mut w = low.clone();
        sp.dealias(&mut w);
        assert!(w.iter().zip(&low).all(|(a, b)| (a - b).norm() < 1e-12));
        let mut high: Vec<Complex64> = grid.points_iter().map(|x| Complex64::from_polar(1.0, 11.0 * x)).collect();
        sp.dealias(&mut high);
        assert!(high.iter().all(|z| z.norm() < 1e-12));
    }
}
