//! Bose versus Fermi equations of motion compared at the naive-symbol level.

use crate::opalg::{OperatorExpr, Statistics};
use crate::symbolmap::{naive_symbol, FieldPoly};

use super::eom::derive_eom;
use super::xxz::{xxz_hamiltonian, CouplingMode, XxzParams, XxzSectors};
use super::ModelError;

#[derive(Clone, Debug, PartialEq)]
pub struct StatisticsReport {
    pub site: usize,
    pub sectors: XxzSectors,
    /// Naive symbols of both equations of motion coincide.
    pub equal: bool,
    /// Terms linear in the fields (hopping and field sectors) coincide.
    pub linear_equal: bool,
    /// Terms cubic in the fields (exchange sector) coincide.
    pub cubic_equal: bool,
    pub bose_eom: OperatorExpr,
    pub fermi_eom: OperatorExpr,
    /// Naive Bose symbol minus naive Fermi symbol.
    pub diff: FieldPoly,
}

/// Derives `[H, a_i]` at the central site under each statistics, normal
/// orders each in its own algebra and compares positional symbols. Only the
/// sectors with non-vanishing couplings in `p` are included.
pub fn verify_statistics_independence(p: &XxzParams) -> Result<StatisticsReport, ModelError> {
    p.validate()?;
    let sectors = XxzSectors::from_params(p);
    let site = p.sites / 2;
    let eom = |stats| -> Result<OperatorExpr, ModelError> {
        let h = xxz_hamiltonian(p.sites, stats, CouplingMode::Symbolic, sectors)?;
        derive_eom(&h, site, 0)
    };
    let bose_eom = eom(Statistics::Bose)?;
    let fermi_eom = eom(Statistics::Fermi)?;
    let diff = naive_symbol(&bose_eom).sub(&naive_symbol(&fermi_eom));
    Ok(StatisticsReport {
        site,
        sectors,
        equal: diff.is_zero(),
        linear_equal: diff.degree_part(1).is_zero(),
        cubic_equal: diff.degree_part(3).is_zero(),
        bose_eom,
        fermi_eom,
        diff,
    })
}
