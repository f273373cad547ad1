//! Operator equations of motion and the reference expressions they are
//! compared against.
//!
//! Time evolution follows `i dA/dt = −[H, A]`, so the right-hand side of
//! `−iħ ȧ_i = RHS` is the commutator `[H, a_i]`.

use crate::opalg::{CRational, LadderOp, ModeSpace, OperatorExpr, ParamCoeff, Statistics};
use crate::symbolmap::{FieldPoly, FieldVar};

use super::sym;
use super::ModelError;

/// `[H, a_{site,flavor}]`, normal ordered.
pub fn derive_eom(h: &OperatorExpr, site: usize, flavor: usize) -> Result<OperatorExpr, ModelError> {
    let space = h.space();
    if site >= space.sites {
        return Err(ModelError::SiteOutOfRange { site, sites: space.sites });
    }
    if flavor >= space.flavors {
        return Err(ModelError::FlavorOutOfRange { flavor, flavors: space.flavors });
    }
    let a = OperatorExpr::annihilator(space, h.statistics(), site as i64, flavor);
    Ok(h.commutator(&a)?)
}

/// Identifies `J[a,b]` with `J[b,a]` and `R[a,b]` with `R[b,a]`.
pub fn isotropy_merge_expr(e: &OperatorExpr) -> OperatorExpr {
    e.map_coeffs(|c| c.rename_symbols(sym::isotropic))
}

pub fn isotropy_merge_poly(p: &FieldPoly) -> FieldPoly {
    p.map_coeffs(|c| c.rename_symbols(sym::isotropic))
}

struct Site {
    space: ModeSpace,
    i: i64,
    up: usize,
    down: usize,
    here: usize,
}

impl Site {
    fn new(sites: usize, i: usize) -> Self {
        let space = ModeSpace::spinless(sites);
        let i = i as i64;
        Self { space, i, up: space.wrap(i + 1), down: space.wrap(i - 1), here: space.wrap(i) }
    }

    fn a(&self, j: usize) -> LadderOp {
        LadderOp::annihilator(&self.space, j as i64, 0)
    }

    fn ad(&self, j: usize) -> LadderOp {
        LadderOp::creator(&self.space, j as i64, 0)
    }
}

fn half() -> CRational {
    CRational::ratio(1, 2)
}

fn xxz_eom_common(sites: usize, i: usize) -> (Site, OperatorExpr) {
    let st = Site::new(sites, i);
    let (up, down, here) = (st.up, st.down, st.here);
    let s = ParamCoeff::symbol(sym::SPIN);
    let mut e = OperatorExpr::zero(st.space, Statistics::Bose);
    let hs = s.scale(&half());
    e.add_word(vec![st.a(up)], &hs * &sym::j_bond(up, here));
    e.add_word(vec![st.a(down)], &hs * &sym::j_bond(down, here));
    e.add_word(vec![st.a(up)], &hs * &sym::j_bond(here, up));
    e.add_word(vec![st.a(down)], &hs * &sym::j_bond(here, down));
    let r_out = sym::r_bond(here, up) + sym::r_bond(here, down);
    let r_in = sym::r_bond(up, here) + sym::r_bond(down, here);
    e.add_word(vec![st.a(here)], -(&hs * &r_out));
    e.add_word(vec![st.a(here)], -(&hs * &r_in));
    e.add_word(vec![st.ad(up), st.a(up), st.a(here)], sym::r_bond(up, here).scale(&half()));
    e.add_word(vec![st.ad(down), st.a(down), st.a(here)], sym::r_bond(down, here).scale(&half()));
    e.add_word(vec![st.a(here)], -ParamCoeff::symbol(&sym::site("h", here)));
    debug_assert_eq!(st.i as usize % sites, here);
    (st, e)
}

/// Operator equation of motion of `a_i` for the bosonized XXZ chain, term
/// for term as printed, including the factor order `a_{i±1} a†_{i±1} a_i`
/// of the two `R_{i,i±1}` quartic products.
pub fn xxz_eom_printed(sites: usize, i: usize) -> OperatorExpr {
    let (st, mut e) = xxz_eom_common(sites, i);
    let (up, down, here) = (st.up, st.down, st.here);
    e.add_word(vec![st.a(up), st.ad(up), st.a(here)], sym::r_bond(here, up).scale(&half()));
    e.add_word(vec![st.a(down), st.ad(down), st.a(here)], sym::r_bond(here, down).scale(&half()));
    e
}

/// The printed equation with its `R_{i,i±1}` quartic products read as
/// `n̂_{i±1} a_i`, the operator that `R (s − n̂)(s − n̂)` contributes.
pub fn xxz_eom_pattern(sites: usize, i: usize) -> OperatorExpr {
    let (st, mut e) = xxz_eom_common(sites, i);
    let (up, down, here) = (st.up, st.down, st.here);
    e.add_word(vec![st.ad(up), st.a(up), st.a(here)], sym::r_bond(here, up).scale(&half()));
    e.add_word(vec![st.ad(down), st.a(down), st.a(here)], sym::r_bond(here, down).scale(&half()));
    e
}

/// `½ (R_{i,i+1} + R_{i,i−1}) φ_i`: the Wick-minus-naive difference of
/// [`xxz_eom_printed`].
pub fn xxz_printed_ordering_correction(sites: usize, i: usize) -> FieldPoly {
    let st = Site::new(sites, i);
    let mut p = FieldPoly::zero(st.space);
    let c = (sym::r_bond(st.here, st.up) + sym::r_bond(st.here, st.down)).scale(&half());
    p.add_term(vec![phi(st.here, false)], c);
    p
}

fn phi(site: usize, conj: bool) -> FieldVar {
    FieldVar { site, flavor: 0, conj }
}

/// Classical lattice amplitude equation, right-hand side of `−iħ φ̇_i`,
/// with bond couplings already identified under isotropy:
///
/// `s J_{i+1,i} φ_{i+1} + s J_{i,i−1} φ_{i−1} − (R_{i+1,i} + R_{i−1,i}) s φ_i
///  + (R_{i+1,i} |φ_{i+1}|² + R_{i−1,i} |φ_{i−1}|²) φ_i − h_i φ_i`
pub fn lattice_amplitude_equation(sites: usize, i: usize) -> FieldPoly {
    let st = Site::new(sites, i);
    let (up, down, here) = (st.up, st.down, st.here);
    let s = ParamCoeff::symbol(sym::SPIN);
    let mut p = FieldPoly::zero(st.space);
    p.add_term(vec![phi(up, false)], &s * &sym::j_bond(up, here));
    p.add_term(vec![phi(down, false)], &s * &sym::j_bond(here, down));
    p.add_term(vec![phi(here, false)], -(&s * &(sym::r_bond(up, here) + sym::r_bond(down, here))));
    p.add_term(vec![phi(up, true), phi(up, false), phi(here, false)], sym::r_bond(up, here));
    p.add_term(vec![phi(down, true), phi(down, false), phi(here, false)], sym::r_bond(down, here));
    p.add_term(vec![phi(here, false)], -ParamCoeff::symbol(&sym::site("h", here)));
    isotropy_merge_poly(&p)
}

/// `[H_hub1, a_{i,κ}] = 2t a_{i+1,κ} + 2t a_{i−1,κ}`
pub fn hubbard_hopping_commutator(sites: usize, stats: Statistics, i: usize, kappa: usize) -> OperatorExpr {
    let space = ModeSpace::new(sites, 2);
    let two_t = ParamCoeff::symbol(sym::HOP).scale(&CRational::from_int(2));
    let mut e = OperatorExpr::zero(space, stats);
    e.add_word(vec![LadderOp::annihilator(&space, i as i64 + 1, kappa)], two_t.clone());
    e.add_word(vec![LadderOp::annihilator(&space, i as i64 - 1, kappa)], two_t);
    e
}

/// `[H_hub2, a_{i,κ}]`: `−U_i a_{i,1} a†_{i,0} a_{i,0}` for κ = 1 and
/// `−U_i a†_{i,1} a_{i,1} a_{i,0}` for κ = 0.
pub fn hubbard_interaction_commutator(sites: usize, stats: Statistics, i: usize, kappa: usize) -> OperatorExpr {
    let space = ModeSpace::new(sites, 2);
    let j = i as i64;
    let word = if kappa == 1 {
        vec![
            LadderOp::annihilator(&space, j, 1),
            LadderOp::creator(&space, j, 0),
            LadderOp::annihilator(&space, j, 0),
        ]
    } else {
        vec![
            LadderOp::creator(&space, j, 1),
            LadderOp::annihilator(&space, j, 1),
            LadderOp::annihilator(&space, j, 0),
        ]
    };
    OperatorExpr::word(space, stats, &word, -ParamCoeff::symbol(&sym::site("U", space.wrap(j))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{hubbard_hamiltonian, xxz_hamiltonian, CouplingMode, HubbardSectors, XxzSectors};
    use crate::symbolmap::{naive_symbol, ordering_correction};

    const N: usize = 7;

    fn xxz(stats: Statistics) -> OperatorExpr {
        xxz_hamiltonian(N, stats, CouplingMode::Symbolic, XxzSectors::ALL).unwrap()
    }

    #[test]
    fn xxz_commutator_matches_pattern_at_every_site() {
        let h = xxz(Statistics::Bose);
        for i in 0..N {
            assert_eq!(derive_eom(&h, i, 0).unwrap(), xxz_eom_pattern(N, i), "site {i}");
        }
    }

    #[test]
    fn printed_and_pattern_differ_by_contraction() {
        for i in 0..N {
            let diff = xxz_eom_pattern(N, i).sub(&xxz_eom_printed(N, i)).unwrap().normal_order();
            let st = Site::new(N, i);
            let c = (sym::r_bond(st.here, st.up) + sym::r_bond(st.here, st.down)).scale(&CRational::ratio(-1, 2));
            let expect = OperatorExpr::word(st.space, Statistics::Bose, &[st.a(st.here)], c);
            assert_eq!(diff, expect);
        }
    }

    #[test]
    fn naive_symbol_gives_lattice_equation() {
        let h = xxz(Statistics::Bose);
        for i in 0..N {
            let rhs = derive_eom(&h, i, 0).unwrap();
            let merged = isotropy_merge_poly(&naive_symbol(&rhs));
            assert_eq!(merged, lattice_amplitude_equation(N, i));
            let printed = isotropy_merge_poly(&naive_symbol(&xxz_eom_printed(N, i)));
            assert_eq!(printed, lattice_amplitude_equation(N, i));
        }
    }

    #[test]
    fn printed_ordering_correction() {
        for i in 0..N {
            let corr = ordering_correction(&xxz_eom_printed(N, i)).unwrap();
            assert_eq!(corr, xxz_printed_ordering_correction(N, i));
            assert!(!corr.mentions_symbol(sym::SPIN));
        }
    }

    #[test]
    fn hubbard_commutators() {
        for stats in [Statistics::Bose, Statistics::Fermi] {
            let hop = hubbard_hamiltonian(N, stats, HubbardSectors::HOPPING).unwrap();
            let int = hubbard_hamiltonian(N, stats, HubbardSectors::INTERACTION).unwrap();
            for i in 0..N {
                for kappa in 0..2 {
                    assert_eq!(
                        derive_eom(&hop, i, kappa).unwrap(),
                        hubbard_hopping_commutator(N, stats, i, kappa)
                    );
                    assert_eq!(
                        derive_eom(&int, i, kappa).unwrap(),
                        hubbard_interaction_commutator(N, stats, i, kappa).normal_order()
                    );
                }
            }
        }
    }

    #[test]
    fn eom_range_checks() {
        let h = xxz(Statistics::Bose);
        assert!(matches!(derive_eom(&h, N, 0), Err(ModelError::SiteOutOfRange { .. })));
        assert!(matches!(derive_eom(&h, 0, 1), Err(ModelError::FlavorOutOfRange { .. })));
    }

    #[test]
    fn translation_covariance() {
        let h = xxz(Statistics::Bose);
        let shift = |p: &FieldPoly, by: usize| -> String {
            // relabel sites textually through a parse round trip
            let mut q = FieldPoly::zero(p.space());
            for (vars, c) in p.terms() {
                let vars = vars
                    .iter()
                    .map(|v| FieldVar { site: (v.site + by) % N, ..*v })
                    .collect();
                let c = c.rename_symbols(|name| shift_name(name, by));
                q.add_term(vars, c);
            }
            q.to_string()
        };
        let base = naive_symbol(&derive_eom(&h, 2, 0).unwrap());
        for i in 0..N {
            let here = naive_symbol(&derive_eom(&h, i, 0).unwrap());
            assert_eq!(shift(&base, (i + N - 2) % N), here.to_string());
        }
    }

    fn shift_name(name: &str, by: usize) -> String {
        let Some(open) = name.find('[') else { return name.to_owned() };
        let inner = &name[open + 1..name.len() - 1];
        let idx: Vec<String> = inner
            .split(',')
            .map(|x| ((x.parse::<usize>().unwrap() + by) % N).to_string())
            .collect();
        format!("{}[{}]", &name[..open], idx.join(","))
    }
}
