use crate::opalg::{Bindings, CRational, LadderOp, ModeSpace, OperatorExpr, ParamCoeff, Statistics};

use super::sym;
use super::{ModelError, MIN_SITES};

#[derive(Clone, Debug, PartialEq)]
pub struct HubbardParams {
    /// Hopping amplitude.
    pub t: f64,
    /// On-site interaction `U_j`.
    pub u: Vec<f64>,
    pub hbar: f64,
    pub sites: usize,
}

impl Default for HubbardParams {
    fn default() -> Self {
        Self { t: 1.0, u: vec![1.0; 7], hbar: 1.0, sites: 7 }
    }
}

impl HubbardParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::InvalidParams(m));
        if self.sites < MIN_SITES {
            return bad(format!("N = {} is below the minimum of {MIN_SITES}", self.sites));
        }
        if !(self.hbar > 0.0) {
            return bad(format!("hbar = {} must be positive", self.hbar));
        }
        if self.u.len() != self.sites {
            return bad(format!("U has {} entries for {} sites", self.u.len(), self.sites));
        }
        if !self.t.is_finite() || self.u.iter().any(|v| !v.is_finite()) {
            return bad("non-finite parameter".into());
        }
        Ok(())
    }

    pub fn bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        b.insert(sym::HOP.into(), self.t);
        b.insert(sym::HBAR.into(), self.hbar);
        for (j, &u) in self.u.iter().enumerate() {
            b.insert(sym::site("U", j), u);
        }
        b
    }
}

/// `H_hub1` (hopping) and `H_hub2` (on-site interaction) switches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HubbardSectors {
    pub hopping: bool,
    pub interaction: bool,
}

impl HubbardSectors {
    pub const ALL: HubbardSectors = HubbardSectors { hopping: true, interaction: true };
    pub const HOPPING: HubbardSectors = HubbardSectors { hopping: true, interaction: false };
    pub const INTERACTION: HubbardSectors = HubbardSectors { hopping: false, interaction: true };
}

/// Two-flavor Hubbard Hamiltonian
///
/// `H = −t Σ_{σ,j,κ} (a_{j+σ,κ} a†_{j,κ} + a†_{j+σ,κ} a_{j,κ})
///      + Σ_j U_j a†_{j,1} a_{j,1} a†_{j,0} a_{j,0}`
///
/// with hopping products entered creator-first, as for the XXZ builder.
pub fn hubbard_hamiltonian(
    sites: usize,
    stats: Statistics,
    sectors: HubbardSectors,
) -> Result<OperatorExpr, ModelError> {
    if sites < 3 {
        return Err(ModelError::InvalidParams(format!("Hubbard ring needs at least 3 sites, got {sites}")));
    }
    let space = ModeSpace::new(sites, 2);
    let mut h = OperatorExpr::zero(space, stats);
    let minus_t = ParamCoeff::symbol(sym::HOP).scale(&CRational::from_int(-1));
    for j in 0..sites as i64 {
        if sectors.hopping {
            for sigma in [1i64, -1] {
                for kappa in 0..2 {
                    h.add_word(
                        vec![LadderOp::creator(&space, j, kappa), LadderOp::annihilator(&space, j + sigma, kappa)],
                        minus_t.clone(),
                    );
                    h.add_word(
                        vec![LadderOp::creator(&space, j + sigma, kappa), LadderOp::annihilator(&space, j, kappa)],
                        minus_t.clone(),
                    );
                }
            }
        }
        if sectors.interaction {
            h.add_word(
                vec![
                    LadderOp::creator(&space, j, 1),
                    LadderOp::annihilator(&space, j, 1),
                    LadderOp::creator(&space, j, 0),
                    LadderOp::annihilator(&space, j, 0),
                ],
                ParamCoeff::symbol(&sym::site("U", j as usize)),
            );
        }
    }
    Ok(h)
}

pub fn build_hubbard(p: &HubbardParams, stats: Statistics) -> Result<OperatorExpr, ModelError> {
    p.validate()?;
    hubbard_hamiltonian(p.sites, stats, HubbardSectors::ALL)
}
