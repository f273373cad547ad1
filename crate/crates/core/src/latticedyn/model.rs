use num_complex::Complex64;

use crate::models::{derive_eom, HubbardParams, ModelError, XxzParams};
use crate::opalg::{Bindings, ModeSpace, OperatorExpr};
use crate::symbolmap::{naive_symbol, CompiledPoly, FieldPoly};

use super::LatticeError;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which coherent-state symbol of the operator equation drives the flow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SymbolMode {
    /// Positional replacement of the equation as written.
    #[default]
    Naive,
    /// Normal-ordered symbol of the equation as written, which adds
    /// `½(R_{i,i+1} + R_{i,i−1}) φ_i` to the naive right-hand side.
    Wick,
}

/// A classical Hamiltonian flow `iħ φ̇ = ∂E/∂φ*` on a periodic lattice.
///
/// `rhs` writes `φ̇` for the flattened amplitudes (index `κN + j`).
pub trait LatticeModel: Sync {
    fn space(&self) -> ModeSpace;
    fn rhs(&self, state: &[Complex64], out: &mut [Complex64]);
    /// The conserved classical energy of the flow.
    fn energy(&self, state: &[Complex64]) -> f64;
}

/// XXZ chain with isotropic per-bond couplings; bond `b` joins sites `b`
/// and `b + 1` (mod N).
#[derive(Clone, Debug, PartialEq)]
pub struct XxzLattice {
    pub j: Vec<f64>,
    pub r: Vec<f64>,
    pub h: Vec<f64>,
    pub s: f64,
    pub hbar: f64,
    pub mode: SymbolMode,
}

impl XxzLattice {
    /// Uniformly strained chain: every bond carries `J(0) − J(1)|x_ξ|` and
    /// `R(0) − R(1)|x_ξ|`.
    pub fn from_params(p: &XxzParams, mode: SymbolMode) -> Result<Self, ModelError> {
        p.validate()?;
        Ok(Self {
            j: vec![p.j_bond(); p.sites],
            r: vec![p.r_bond(); p.sites],
            h: p.h.clone(),
            s: p.s,
            hbar: p.hbar,
            mode,
        })
    }

    pub fn sites(&self) -> usize {
        self.h.len()
    }

    /// `c_i = ½(R_{i,i+1} + R_{i,i−1})`, the Wick shift at site `i`.
    fn wick_shift(&self, i: usize) -> f64 {
        let n = self.sites();
        0.5 * (self.r[i] + self.r[(i + n - 1) % n])
    }

    /// Right-hand side `F_i` of `−iħ φ̇_i = F_i`.
    pub fn force(&self, phi: &[Complex64], i: usize) -> Complex64 {
        let n = self.sites();
        let (up, down) = ((i + 1) % n, (i + n - 1) % n);
        let (jr, jl) = (self.j[i], self.j[down]);
        let (rr, rl) = (self.r[i], self.r[down]);
        let mut f = self.s * (jr * phi[up] + jl * phi[down]) - (rr + rl) * self.s * phi[i]
            + (rr * phi[up].norm_sqr() + rl * phi[down].norm_sqr()) * phi[i]
            - self.h[i] * phi[i];
        if self.mode == SymbolMode::Wick {
            f += self.wick_shift(i) * phi[i];
        }
        f
    }
}

impl LatticeModel for XxzLattice {
    fn space(&self) -> ModeSpace {
        ModeSpace::spinless(self.sites())
    }

    fn rhs(&self, state: &[Complex64], out: &mut [Complex64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = I * self.force(state, i) / self.hbar;
        }
    }

    fn energy(&self, phi: &[Complex64]) -> f64 {
        let n = self.sites();
        let s = self.s;
        let mut e = Neumaier::default();
        for b in 0..n {
            let k = (b + 1) % n;
            let hop = (phi[b].conj() * phi[k]).re * 2.0;
            e.add(-s * self.j[b] * hop);
            e.add(-self.r[b] * (s - phi[b].norm_sqr()) * (s - phi[k].norm_sqr()));
            e.add(-self.h[b] * (s - phi[b].norm_sqr()));
            if self.mode == SymbolMode::Wick {
                e.add(-self.wick_shift(b) * phi[b].norm_sqr());
            }
        }
        e.total()
    }
}

/// Two-flavor Hubbard lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct HubbardLattice {
    pub t: f64,
    pub u: Vec<f64>,
    pub hbar: f64,
}

impl HubbardLattice {
    pub fn from_params(p: &HubbardParams) -> Result<Self, ModelError> {
        p.validate()?;
        Ok(Self { t: p.t, u: p.u.clone(), hbar: p.hbar })
    }

    pub fn sites(&self) -> usize {
        self.u.len()
    }
}

impl LatticeModel for HubbardLattice {
    fn space(&self) -> ModeSpace {
        ModeSpace::new(self.sites(), 2)
    }

    fn rhs(&self, state: &[Complex64], out: &mut [Complex64]) {
        let n = self.sites();
        for kappa in 0..2 {
            let (own, other) = (kappa * n, (1 - kappa) * n);
            for i in 0..n {
                let hop = state[own + (i + 1) % n] + state[own + (i + n - 1) % n];
                let f = 2.0 * self.t * hop - self.u[i] * state[other + i].norm_sqr() * state[own + i];
                out[own + i] = I * f / self.hbar;
            }
        }
    }

    fn energy(&self, state: &[Complex64]) -> f64 {
        let n = self.sites();
        let mut e = Neumaier::default();
        for kappa in 0..2 {
            for i in 0..n {
                let k = (i + 1) % n;
                // two directed hops per bond, each entered twice
                e.add(-4.0 * self.t * (state[kappa * n + i].conj() * state[kappa * n + k]).re);
            }
        }
        for i in 0..n {
            e.add(self.u[i] * state[i].norm_sqr() * state[n + i].norm_sqr());
        }
        e.total()
    }
}

/// Flow driven by compiled field polynomials: `φ̇_m = i F_m(φ)/ħ`.
#[derive(Clone, Debug)]
pub struct SymbolicModel {
    space: ModeSpace,
    forces: Vec<CompiledPoly>,
    energy: CompiledPoly,
    hbar: f64,
}

impl SymbolicModel {
    /// One force polynomial per mode, in mode-index order.
    pub fn from_equations(
        forces: &[FieldPoly],
        energy: &FieldPoly,
        bindings: &Bindings,
        hbar: f64,
    ) -> Result<Self, LatticeError> {
        let space = energy.space();
        if forces.len() != space.modes() {
            return Err(LatticeError::Shape { expected: space.modes(), got: forces.len() });
        }
        let forces = forces.iter().map(|p| p.compile(bindings)).collect::<Result<_, _>>()?;
        Ok(Self { space, forces, energy: energy.compile(bindings)?, hbar })
    }

    /// Derives `[H, a_m]` for every mode and uses its naive symbol as the
    /// force; the energy is the naive symbol of `H`.
    pub fn from_hamiltonian(h: &OperatorExpr, bindings: &Bindings, hbar: f64) -> Result<Self, LatticeError> {
        let space = h.space();
        let mut forces = Vec::with_capacity(space.modes());
        for flavor in 0..space.flavors {
            for site in 0..space.sites {
                forces.push(naive_symbol(&derive_eom(h, site, flavor)?));
            }
        }
        Self::from_equations(&forces, &naive_symbol(h), bindings, hbar)
    }
}

impl LatticeModel for SymbolicModel {
    fn space(&self) -> ModeSpace {
        self.space
    }

    fn rhs(&self, state: &[Complex64], out: &mut [Complex64]) {
        for (o, f) in out.iter_mut().zip(&self.forces) {
            *o = I * f.eval(state).expect("state length checked by caller") / self.hbar;
        }
    }

    fn energy(&self, state: &[Complex64]) -> f64 {
        self.energy.eval(state).expect("state length checked by caller").re
    }
}

/// Compensated summation; the result does not depend on thread count.
#[derive(Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
