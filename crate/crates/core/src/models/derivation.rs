//! The symbolic derivation steps, each reduced to a canonical equality.

use crate::opalg::matrix::{matrix_on, max_column_deviation, FockSpace};
use crate::opalg::{Bindings, LadderOp, OperatorExpr, ParamCoeff, Statistics};
use crate::symbolmap::{naive_symbol, ordering_correction};

use super::eom::{
    derive_eom, hubbard_hopping_commutator, hubbard_interaction_commutator, isotropy_merge_poly,
    lattice_amplitude_equation, xxz_eom_pattern, xxz_eom_printed, xxz_printed_ordering_correction,
};
use super::hubbard::{hubbard_hamiltonian, HubbardSectors};
use super::xxz::{xxz_hamiltonian, CouplingMode, XxzSectors};
use super::{ModelError, MIN_SITES};

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationCheck {
    pub name: String,
    pub site: usize,
    pub passed: bool,
    /// Canonical text of `computed − expected`; empty when they agree.
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationReport {
    pub sites: usize,
    pub checks: Vec<DerivationCheck>,
}

impl DerivationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DerivationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Deliberate defect injected into the Hamiltonians: an extra on-site term
/// `δ a†_site a_site`. Every check touching `site` must then fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub site: usize,
}

fn perturb(h: &mut OperatorExpr, p: Option<Perturbation>) {
    if let Some(p) = p {
        let space = h.space();
        for flavor in 0..space.flavors {
            let word = vec![
                LadderOp::creator(&space, p.site as i64, flavor),
                LadderOp::annihilator(&space, p.site as i64, flavor),
            ];
            h.add_word(word, ParamCoeff::symbol("delta"));
        }
    }
}

fn check(name: &str, site: usize, diff: String) -> DerivationCheck {
    DerivationCheck { name: name.into(), site, passed: diff.is_empty(), residual: diff }
}

fn residual_expr(a: &OperatorExpr, b: &OperatorExpr) -> Result<String, ModelError> {
    let d = a.sub(b)?.normal_order();
    Ok(if d.is_zero() { String::new() } else { d.to_string() })
}

/// Runs every check on a ring of `sites` sites:
///
/// * `[H, a_i]` of the bosonized XXZ chain against the operator equation
///   with `n̂_{i±1}a_i` quartic products;
/// * the naive symbol of that commutator, isotropy merged, against the
///   lattice amplitude equation;
/// * the ordering correction of the printed operator equation;
/// * both Hubbard commutators under each statistics.
pub fn verify_derivation(sites: usize, perturbation: Option<Perturbation>) -> Result<DerivationReport, ModelError> {
    if sites < MIN_SITES {
        return Err(ModelError::InvalidParams(format!("need at least {MIN_SITES} sites, got {sites}")));
    }
    if let Some(p) = perturbation {
        if p.site >= sites {
            return Err(ModelError::SiteOutOfRange { site: p.site, sites });
        }
    }
    let mut checks = Vec::new();
    let mut h = xxz_hamiltonian(sites, Statistics::Bose, CouplingMode::Symbolic, XxzSectors::ALL)?;
    perturb(&mut h, perturbation);
    for i in 0..sites {
        let eom = derive_eom(&h, i, 0)?;
        checks.push(check("xxz_operator_eom", i, residual_expr(&eom, &xxz_eom_pattern(sites, i))?));
        let sym = isotropy_merge_poly(&naive_symbol(&eom)).sub(&lattice_amplitude_equation(sites, i));
        checks.push(check("xxz_naive_symbol", i, if sym.is_zero() { String::new() } else { sym.to_string() }));
        let corr = ordering_correction(&xxz_eom_printed(sites, i))?.sub(&xxz_printed_ordering_correction(sites, i));
        checks.push(check("xxz_ordering_correction", i, if corr.is_zero() { String::new() } else { corr.to_string() }));
    }
    for stats in [Statistics::Bose, Statistics::Fermi] {
        let tag = match stats {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        };
        let mut hop = hubbard_hamiltonian(sites, stats, HubbardSectors::HOPPING)?;
        let mut int = hubbard_hamiltonian(sites, stats, HubbardSectors::INTERACTION)?;
        perturb(&mut hop, perturbation);
        perturb(&mut int, perturbation);
        for i in 0..sites {
            for kappa in 0..2 {
                let got = derive_eom(&hop, i, kappa)?;
                let name = format!("hubbard_hopping_{tag}_flavor{kappa}");
                checks.push(check(&name, i, residual_expr(&got, &hubbard_hopping_commutator(sites, stats, i, kappa))?));
                let got = derive_eom(&int, i, kappa)?;
                let name = format!("hubbard_interaction_{tag}_flavor{kappa}");
                let expect = hubbard_interaction_commutator(sites, stats, i, kappa);
                checks.push(check(&name, i, residual_expr(&got, &expect)?));
            }
        }
    }
    Ok(DerivationReport { sites, checks })
}

/// Worst deviation between the matrix of the symbolic `[H, a]` and the
/// matrix commutator `[M(H), M(a)]`, over every mode and over the Fock
/// columns far enough from the cutoff for truncation not to matter.
pub fn commutator_oracle_deviation(h: &OperatorExpr, bindings: &Bindings, cutoff: usize) -> Result<f64, ModelError> {
    let space = h.space();
    let fock = FockSpace::new(space, h.statistics(), cutoff)?;
    let cols = fock.interior_states(h.max_creators());
    let mh = matrix_on(&fock, h, bindings)?;
    let mut worst = 0.0f64;
    for flavor in 0..space.flavors {
        for site in 0..space.sites {
            let a = OperatorExpr::annihilator(space, h.statistics(), site as i64, flavor);
            let ma = matrix_on(&fock, &a, bindings)?;
            let me = matrix_on(&fock, &derive_eom(h, site, flavor)?, bindings)?;
            worst = worst.max(max_column_deviation(&me, &(&mh * &ma - &ma * &mh), &cols));
        }
    }
    Ok(worst)
}
