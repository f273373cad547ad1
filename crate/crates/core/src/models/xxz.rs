use crate::opalg::{Bindings, CRational, LadderOp, ModeSpace, OperatorExpr, ParamCoeff, Statistics};

use super::sym;
use super::{ModelError, MIN_SITES};

/// Couplings of the XXZ chain in a static, uniformly strained lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct XxzParams {
    pub j0: f64,
    pub j1: f64,
    pub r0: f64,
    pub r1: f64,
    /// Spin magnitude.
    pub s: f64,
    /// Longitudinal field `h^z_j`, one entry per site.
    pub h: Vec<f64>,
    pub hbar: f64,
    /// Static displacement gradient.
    pub x_xi: f64,
    pub sites: usize,
}

impl Default for XxzParams {
    fn default() -> Self {
        Self::uniform(7, 1.0, 0.5, 0.0)
    }
}

impl XxzParams {
    /// Unstrained chain with uniform field `h`.
    pub fn uniform(sites: usize, j0: f64, r0: f64, h: f64) -> Self {
        Self {
            j0,
            j1: 0.0,
            r0,
            r1: 0.0,
            s: 1.0,
            h: vec![h; sites],
            hbar: 1.0,
            x_xi: 0.0,
            sites,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::InvalidParams(m));
        if self.sites < MIN_SITES {
            return bad(format!("N = {} is below the minimum of {MIN_SITES}", self.sites));
        }
        if !(self.s > 0.0) {
            return bad(format!("spin s = {} must be positive", self.s));
        }
        if !(self.hbar > 0.0) {
            return bad(format!("hbar = {} must be positive", self.hbar));
        }
        if self.h.len() != self.sites {
            return bad(format!("field has {} entries for {} sites", self.h.len(), self.sites));
        }
        let scalars = [self.j0, self.j1, self.r0, self.r1, self.s, self.hbar, self.x_xi];
        if scalars.iter().chain(self.h.iter()).any(|v| !v.is_finite()) {
            return bad("non-finite parameter".into());
        }
        Ok(())
    }

    /// Bond coupling `J(0) − J(1)|x_ξ|`.
    pub fn j_bond(&self) -> f64 {
        self.j0 - self.j1 * self.x_xi.abs()
    }

    /// Bond coupling `R(0) − R(1)|x_ξ|`.
    pub fn r_bond(&self) -> f64 {
        self.r0 - self.r1 * self.x_xi.abs()
    }

    /// Numeric values for every symbol either coupling mode can emit.
    pub fn bindings(&self) -> Bindings {
        let mut b = Bindings::new();
        let n = self.sites as i64;
        for j in 0..n {
            for sigma in [1, -1] {
                let k = (j + sigma).rem_euclid(n) as usize;
                b.insert(sym::bond("J", k, j as usize), self.j_bond());
                b.insert(sym::bond("R", k, j as usize), self.r_bond());
            }
            b.insert(sym::site("h", j as usize), self.h[j as usize]);
        }
        b.insert(sym::SPIN.into(), self.s);
        b.insert(sym::HBAR.into(), self.hbar);
        b.insert(sym::J0.into(), self.j0);
        b.insert(sym::J1.into(), self.j1);
        b.insert(sym::R0.into(), self.r0);
        b.insert(sym::R1.into(), self.r1);
        b.insert(sym::BOND_LENGTH.into(), self.x_xi.abs());
        b
    }
}

/// How bond couplings appear in the symbolic Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CouplingMode {
    /// One formal symbol `J[a,b]`, `R[a,b]` per oriented bond.
    #[default]
    Symbolic,
    /// `J0 − J1·dx` and `R0 − R1·dx`.
    Expanded,
}

/// Which parts of the Hamiltonian to emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XxzSectors {
    pub hopping: bool,
    pub exchange: bool,
    pub field: bool,
}

impl XxzSectors {
    pub const ALL: XxzSectors = XxzSectors { hopping: true, exchange: true, field: true };

    /// Drops sectors whose couplings vanish identically.
    pub fn from_params(p: &XxzParams) -> Self {
        Self {
            hopping: p.j0 != 0.0 || p.j1 != 0.0,
            exchange: p.r0 != 0.0 || p.r1 != 0.0,
            field: p.h.iter().any(|&v| v != 0.0),
        }
    }
}

fn coupling(kind: &str, a: usize, b: usize, mode: CouplingMode) -> ParamCoeff {
    match mode {
        CouplingMode::Symbolic => ParamCoeff::symbol(&sym::bond(kind, a, b)),
        CouplingMode::Expanded => {
            let (c0, c1) = if kind == "J" { (sym::J0, sym::J1) } else { (sym::R0, sym::R1) };
            ParamCoeff::symbol(c0) - ParamCoeff::symbol(c1) * ParamCoeff::symbol(sym::BOND_LENGTH)
        }
    }
}

/// Large-spin bosonized XXZ Hamiltonian
///
/// `H = −½ Σ_{σ,j} [ J_{j+σ,j} s (a_{j+σ} a†_j + a†_{j+σ} a_j)
///       + R_{j+σ,j} (s − n̂_{j+σ})(s − n̂_j) ] − Σ_j h_j (s − n̂_j)`
///
/// on a ring of `sites ≥ 3` sites. Hopping products are entered with the
/// creator first (`a†_j a_{j+σ}`), which is the same operator for bosons
/// and the Jordan-Wigner hopping for fermions.
pub fn xxz_hamiltonian(
    sites: usize,
    stats: Statistics,
    mode: CouplingMode,
    sectors: XxzSectors,
) -> Result<OperatorExpr, ModelError> {
    if sites < 3 {
        return Err(ModelError::InvalidParams(format!("XXZ ring needs at least 3 sites, got {sites}")));
    }
    let space = ModeSpace::spinless(sites);
    let s = ParamCoeff::symbol(sym::SPIN);
    let minus_half = CRational::ratio(-1, 2);
    let mut h = OperatorExpr::zero(space, stats);
    let spin_dev = |j: usize| -> Result<OperatorExpr, ModelError> {
        Ok(OperatorExpr::scalar(space, stats, s.clone())
            .sub(&OperatorExpr::number(space, stats, j as i64, 0))?)
    };
    for j in 0..sites {
        for sigma in [1i64, -1] {
            let k = space.wrap(j as i64 + sigma);
            if sectors.hopping {
                let c = (&coupling("J", k, j, mode) * &s).scale(&minus_half);
                h.add_word(
                    vec![LadderOp::creator(&space, j as i64, 0), LadderOp::annihilator(&space, k as i64, 0)],
                    c.clone(),
                );
                h.add_word(
                    vec![LadderOp::creator(&space, k as i64, 0), LadderOp::annihilator(&space, j as i64, 0)],
                    c,
                );
            }
            if sectors.exchange {
                let c = coupling("R", k, j, mode).scale(&minus_half);
                let prod = spin_dev(k)?.multiply(&spin_dev(j)?)?.scale(&c);
                h = h.add(&prod)?;
            }
        }
    }
    if sectors.field {
        for j in 0..sites {
            let hj = ParamCoeff::symbol(&sym::site("h", j));
            h = h.sub(&spin_dev(j)?.scale(&hj))?;
        }
    }
    Ok(h)
}

/// Validated builder for the bosonic chain described by `p`.
pub fn build_xxz_bosonized(p: &XxzParams, mode: CouplingMode) -> Result<OperatorExpr, ModelError> {
    p.validate()?;
    xxz_hamiltonian(p.sites, Statistics::Bose, mode, XxzSectors::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut p = XxzParams::default();
        assert!(p.validate().is_ok());
        p.sites = 4;
        p.h.truncate(4);
        assert!(build_xxz_bosonized(&p, CouplingMode::Symbolic).is_err());
        let p = XxzParams { s: 0.0, ..XxzParams::default() };
        assert!(p.validate().is_err());
        let mut p = XxzParams::default();
        p.h.pop();
        assert!(p.validate().is_err());
    }

    #[test]
    fn field_only_chain() {
        let sectors = XxzSectors { hopping: false, exchange: false, field: true };
        let h = xxz_hamiltonian(5, Statistics::Bose, CouplingMode::Symbolic, sectors).unwrap();
        let space = ModeSpace::spinless(5);
        let mut expect = OperatorExpr::zero(space, Statistics::Bose);
        for j in 0..5 {
            let hj = ParamCoeff::symbol(&sym::site("h", j));
            expect.add_word(vec![], -(&hj * &ParamCoeff::symbol("s")));
            expect.add_word(
                vec![LadderOp::creator(&space, j as i64, 0), LadderOp::annihilator(&space, j as i64, 0)],
                hj,
            );
        }
        assert_eq!(h, expect);
    }

    #[test]
    fn xx_limit_is_pure_hopping() {
        let sectors = XxzSectors { hopping: true, exchange: false, field: false };
        let h = xxz_hamiltonian(6, Statistics::Bose, CouplingMode::Symbolic, sectors).unwrap();
        assert!(h.terms().all(|(w, _)| w.len() == 2 && w[0].dagger && !w[1].dagger));
        // a†_2 a_3 collects J[3,2] (σ=+1 at j=2) and J[2,3] (σ=−1 at j=3)
        let space = ModeSpace::spinless(6);
        let c = h.coefficient(&[LadderOp::creator(&space, 2, 0), LadderOp::annihilator(&space, 3, 0)]);
        let s = ParamCoeff::symbol("s");
        let expect = ((sym::j_bond(3, 2) + sym::j_bond(2, 3)) * s).scale(&CRational::ratio(-1, 2));
        assert_eq!(c, expect);
    }

    #[test]
    fn expanded_mode_uses_bond_length() {
        let p = XxzParams::default();
        let h = build_xxz_bosonized(&p, CouplingMode::Expanded).unwrap();
        assert!(h.terms().all(|(_, c)| !c.symbols().any(|s| s.starts_with("J["))));
        assert!(h.terms().any(|(_, c)| c.contains_symbol(sym::BOND_LENGTH)));
    }

    #[test]
    fn bosonized_hamiltonian_is_self_adjoint() {
        for mode in [CouplingMode::Symbolic, CouplingMode::Expanded] {
            let h = build_xxz_bosonized(&XxzParams::default(), mode).unwrap();
            assert_eq!(h.adjoint(), h);
        }
    }
}
