//! Names of the formal parameters used in symbolic coefficients.
//!
//! Bond couplings are `J[a,b]` and `R[a,b]` with site indices already
//! reduced modulo the lattice size; per-site fields are `h[j]` and `U[j]`.

use crate::opalg::ParamCoeff;

pub const SPIN: &str = "s";
pub const HOP: &str = "t";
pub const HBAR: &str = "hbar";
pub const J0: &str = "J0";
pub const J1: &str = "J1";
pub const R0: &str = "R0";
pub const R1: &str = "R1";
/// Bond length `|x_j − x_{j+σ}|` in the expanded coupling mode.
pub const BOND_LENGTH: &str = "dx";

pub fn bond(kind: &str, a: usize, b: usize) -> String {
    format!("{kind}[{a},{b}]")
}

pub fn site(kind: &str, j: usize) -> String {
    format!("{kind}[{j}]")
}

pub fn j_bond(a: usize, b: usize) -> ParamCoeff {
    ParamCoeff::symbol(&bond("J", a, b))
}

pub fn r_bond(a: usize, b: usize) -> ParamCoeff {
    ParamCoeff::symbol(&bond("R", a, b))
}

/// Maps `J[a,b]`, `R[a,b]` to the index-sorted name, identifying the two
/// orientations of a bond. Other names pass through.
pub fn isotropic(name: &str) -> String {
    let Some(open) = name.find('[') else {
        return name.to_owned();
    };
    let kind = &name[..open];
    if kind != "J" && kind != "R" {
        return name.to_owned();
    }
    let inner = &name[open + 1..name.len() - 1];
    let mut idx: Vec<usize> = match inner.split(',').map(str::parse).collect() {
        Ok(v) => v,
        Err(_) => return name.to_owned(),
    };
    if idx.len() != 2 {
        return name.to_owned();
    }
    idx.sort_unstable();
    bond(kind, idx[0], idx[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_names() {
        assert_eq!(isotropic("J[3,2]"), "J[2,3]");
        assert_eq!(isotropic("R[0,6]"), "R[0,6]");
        assert_eq!(isotropic("h[3]"), "h[3]");
        assert_eq!(isotropic("s"), "s");
    }
}
