//! Dense matrix representation on a (truncated) Fock space.
//!
//! Bosonic modes keep occupations `0..=cutoff`; a creator acting on a full
//! mode gives zero, which only corrupts states near the cutoff. Fermionic
//! modes use the ordering `flavor * sites + site` for the exchange sign.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::coeff::Bindings;
use super::expr::OperatorExpr;
use super::op::{LadderOp, ModeSpace, Statistics};
use super::OpAlgError;

/// Largest Fock-space dimension [`to_matrix`] will allocate.
pub const MAX_DIMENSION: usize = 2048;

#[derive(Clone, Debug)]
pub struct FockSpace {
    space: ModeSpace,
    stats: Statistics,
    levels: usize,
    dim: usize,
}

impl FockSpace {
    pub fn new(space: ModeSpace, stats: Statistics, boson_cutoff: usize) -> Result<Self, OpAlgError> {
        let levels = match stats {
            Statistics::Bose => boson_cutoff + 1,
            Statistics::Fermi => 2,
        };
        let modes = space.modes();
        let dim = (0..modes).try_fold(1usize, |acc, _| {
            acc.checked_mul(levels).filter(|d| *d <= MAX_DIMENSION)
        });
        let dim = dim.ok_or(OpAlgError::DimensionOverflow { levels, modes, max: MAX_DIMENSION })?;
        Ok(Self { space, stats, levels, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.levels - 1
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.space.modes()];
        for n in occ.iter_mut() {
            *n = index % self.levels;
            index /= self.levels;
        }
        occ
    }

    pub fn index(&self, occ: &[usize]) -> usize {
        occ.iter().rev().fold(0, |acc, n| acc * self.levels + n)
    }

    /// Applies a word (rightmost factor first) to a basis state.
    pub fn apply_word(&self, word: &[LadderOp], state: usize) -> Option<(usize, f64)> {
        let mut occ = self.occupations(state);
        let mut amp = 1.0;
        for op in word.iter().rev() {
            let m = op.mode_index(&self.space);
            if self.stats == Statistics::Fermi {
                let parity: usize = occ[..m].iter().sum();
                if parity % 2 == 1 {
                    amp = -amp;
                }
            }
            if op.dagger {
                if occ[m] + 1 >= self.levels {
                    return None;
                }
                occ[m] += 1;
                if self.stats == Statistics::Bose {
                    amp *= (occ[m] as f64).sqrt();
                }
            } else {
                if occ[m] == 0 {
                    return None;
                }
                if self.stats == Statistics::Bose {
                    amp *= (occ[m] as f64).sqrt();
                }
                occ[m] -= 1;
            }
        }
        Some((self.index(&occ), amp))
    }

    /// Basis states whose every occupation is at most `cutoff - margin`;
    /// words raising any mode by no more than `margin` act on them exactly.
    pub fn interior_states(&self, margin: usize) -> Vec<usize> {
        if self.stats == Statistics::Fermi {
            return (0..self.dim).collect();
        }
        let cap = self.cutoff() as i64 - margin as i64;
        if cap < 0 {
            return Vec::new();
        }
        (0..self.dim)
            .filter(|&i| self.occupations(i).iter().all(|&n| n as i64 <= cap))
            .collect()
    }

    /// Product of truncated, normalized Glauber coherent states, one per mode.
    pub fn coherent_state(&self, amplitudes: &[Complex64]) -> DVector<Complex64> {
        assert_eq!(self.stats, Statistics::Bose, "coherent states need bosonic modes");
        assert_eq!(amplitudes.len(), self.space.modes());
        let mut local = Vec::with_capacity(amplitudes.len());
        for z in amplitudes {
            let mut v = vec![Complex64::new(1.0, 0.0); self.levels];
            for n in 1..self.levels {
                v[n] = v[n - 1] * z / (n as f64).sqrt();
            }
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            local.push(v.into_iter().map(|c| c / norm).collect::<Vec<_>>());
        }
        DVector::from_fn(self.dim, |i, _| {
            self.occupations(i)
                .iter()
                .enumerate()
                .fold(Complex64::new(1.0, 0.0), |acc, (m, &n)| acc * local[m][n])
        })
    }
}

/// Matrix of `expr` on the truncated Fock space with all parameters bound.
pub fn to_matrix(
    expr: &OperatorExpr,
    boson_cutoff: usize,
    bindings: &Bindings,
) -> Result<DMatrix<Complex64>, OpAlgError> {
    let fock = FockSpace::new(expr.space(), expr.statistics(), boson_cutoff)?;
    matrix_on(&fock, expr, bindings)
}

pub fn matrix_on(
    fock: &FockSpace,
    expr: &OperatorExpr,
    bindings: &Bindings,
) -> Result<DMatrix<Complex64>, OpAlgError> {
    let mut m = DMatrix::from_element(fock.dim(), fock.dim(), Complex64::new(0.0, 0.0));
    for (word, c) in expr.terms() {
        let value = c.eval(bindings)?;
        for col in 0..fock.dim() {
            if let Some((row, amp)) = fock.apply_word(word, col) {
                m[(row, col)] += value * amp;
            }
        }
    }
    Ok(m)
}

/// Default oracle cutoff: two levels above the highest term degree.
pub fn default_cutoff(expr: &OperatorExpr) -> usize {
    expr.max_degree() + 2
}

/// Largest entry difference restricted to the given columns.
pub fn max_column_deviation(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, cols: &[usize]) -> f64 {
    cols.iter()
        .flat_map(|&c| (0..a.nrows()).map(move |r| (r, c)))
        .map(|(r, c)| (a[(r, c)] - b[(r, c)]).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn creator_matrix_single_mode() {
        let sp = ModeSpace::spinless(1);
        let ad = OperatorExpr::creator(sp, Statistics::Bose, 0, 0);
        let m = to_matrix(&ad, 2, &Bindings::new()).unwrap();
        assert_eq!(m.nrows(), 3);
        assert!((m[(1, 0)].re - 1.0).abs() < 1e-15);
        assert!((m[(2, 1)].re - 2f64.sqrt()).abs() < 1e-15);
        let nonzero = m.iter().filter(|c| c.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn fermion_anticommutator_is_identity() {
        let sp = ModeSpace::spinless(1);
        let a = OperatorExpr::annihilator(sp, Statistics::Fermi, 0, 0);
        let ad = OperatorExpr::creator(sp, Statistics::Fermi, 0, 0);
        let e = a.multiply(&ad).unwrap().add(&ad.multiply(&a).unwrap()).unwrap();
        let m = to_matrix(&e, 0, &Bindings::new()).unwrap();
        assert!((m - DMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn dimension_guard() {
        let sp = ModeSpace::spinless(8);
        let a = OperatorExpr::annihilator(sp, Statistics::Bose, 0, 0);
        assert!(matches!(
            to_matrix(&a, 4, &Bindings::new()),
            Err(OpAlgError::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn unbound_parameter_is_reported() {
        let sp = ModeSpace::spinless(1);
        let e = OperatorExpr::scalar(sp, Statistics::Bose, crate::opalg::ParamCoeff::symbol("s"));
        assert!(matches!(to_matrix(&e, 1, &Bindings::new()), Err(OpAlgError::UnboundParameter(_))));
    }
}
