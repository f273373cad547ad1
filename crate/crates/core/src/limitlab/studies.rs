use num_complex::Complex64;

use super::fit::{ConvergenceReport, PointStatus};
use super::transform::compute_transform;
use super::LimitError;
use crate::continuum::{
    evolve, ContinuumField, CurvatureTerm, GpModel, Grid1D, PotentialField, PrecursorModel, PrecursorOptions,
    PretransformModel, PretransformOptions, Profile, TimeScheme,
};
use crate::latticedyn::{integrate, IntegratorConfig, LatticeState, SymbolMode, XxzLattice};
use crate::models::XxzParams;

/// Bond couplings `J_{j,j±1}` and `R_{j,j±1}` indexed by site.
#[derive(Clone, Debug, PartialEq)]
pub struct BondCouplings {
    pub j_plus: Vec<f64>,
    pub j_minus: Vec<f64>,
    pub r_plus: Vec<f64>,
    pub r_minus: Vec<f64>,
}

impl BondCouplings {
    /// Lattice model whose bond `(b, b+1)` carries `j_plus[b]`, `r_plus[b]`.
    pub fn lattice(&self, h: Vec<f64>, s: f64, hbar: f64, mode: SymbolMode) -> Result<XxzLattice, LimitError> {
        if h.len() != self.j_plus.len() {
            return Err(LimitError::Invalid(format!("{} field values for {} sites", h.len(), self.j_plus.len())));
        }
        Ok(XxzLattice { j: self.j_plus.clone(), r: self.r_plus.clone(), h, s, hbar, mode })
    }
}

/// `J_{j,j+σ} = J(0) − J(1)|x_j − x_{j+σ}|` and likewise for `R`, on a ring.
///
/// `x` holds site positions. With `period = Some(P)` the closing bond sees
/// `x_0 + P` as the right neighbour of `x_{N−1}`; otherwise the literal
/// difference `x_0 − x_{N−1}` is used.
pub fn expand_couplings(j0: f64, j1: f64, r0: f64, r1: f64, x: &[f64], period: Option<f64>) -> BondCouplings {
    let n = x.len();
    let gap = |b: usize| {
        let next = if b + 1 == n { x[0] + period.unwrap_or(0.0) } else { x[b + 1] };
        (x[b] - next).abs()
    };
    let gaps: Vec<f64> = (0..n).map(gap).collect();
    let minus = |v: &[f64]| (0..n).map(|j| v[(j + n - 1) % n]).collect::<Vec<_>>();
    let j_plus: Vec<f64> = gaps.iter().map(|d| j0 - j1 * d).collect();
    let r_plus: Vec<f64> = gaps.iter().map(|d| r0 - r1 * d).collect();
    BondCouplings { j_minus: minus(&j_plus), r_minus: minus(&r_plus), j_plus, r_plus }
}

/// Worst pointwise error of `φ(ξ ± Δ) ≈ φ ± Δφ_ξ + ½Δ²φ_ξξ` over `points`,
/// for each spacing. Smooth data gives slope 3.
pub fn taylor_check(
    f: &dyn Fn(f64) -> Complex64,
    df: &dyn Fn(f64) -> Complex64,
    d2f: &dyn Fn(f64) -> Complex64,
    points: &[f64],
    spacings: &[f64],
) -> ConvergenceReport {
    let errors = spacings
        .iter()
        .map(|&d| {
            let mut worst = 0.0f64;
            for &x in points {
                for sigma in [-1.0, 1.0] {
                    let approx = f(x) + df(x) * (sigma * d) + d2f(x) * (0.5 * d * d);
                    worst = worst.max((f(x + sigma * d) - approx).norm());
                }
            }
            worst
        })
        .collect();
    ConvergenceReport::assemble(spacings.to_vec(), errors, vec![PointStatus::Ok; spacings.len()], false)
}

/// Lattice chain against the continuum equation it expands to.
///
/// `params` are continuum couplings: the stiffness `sJ(0)` multiplies
/// `φ_ξξ` directly. A lattice of spacing `c` gets `J/c²` so that both sides
/// share the same dispersion as `c → 0`; `R` is not rescaled.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumLimitSetup {
    pub params: XxzParams,
    /// Uniform field `h` of the lattice Hamiltonian.
    pub field: f64,
    pub profile: Profile,
    pub length: f64,
    /// Lattice sizes; each must be a power of two so the continuum grid is.
    pub sites: Vec<usize>,
    pub t_end: f64,
    /// Lattice step is `min(max_dt, courant·c²)`.
    pub courant: f64,
    pub max_dt: f64,
    pub continuum_dt: f64,
    /// Continuum points per lattice site (power of two).
    pub refinement: usize,
    pub curvature: CurvatureTerm,
    pub drop_first: bool,
}

impl Default for ContinuumLimitSetup {
    fn default() -> Self {
        Self {
            params: XxzParams { j0: 1.0, r0: 0.05, ..XxzParams::default() },
            field: 0.0,
            profile: Profile::Gaussian { amplitude: 0.5, width: 2.0, center: 0.0, wavenumber: 0.0 },
            length: 20.0,
            sites: vec![64, 128, 256, 512],
            t_end: 0.5,
            courant: 0.005,
            max_dt: 1e-3,
            continuum_dt: 1e-3,
            refinement: 4,
            curvature: CurvatureTerm::Cubic,
            drop_first: false,
        }
    }
}

impl ContinuumLimitSetup {
    pub fn spacing(&self, sites: usize) -> f64 {
        self.length / sites as f64
    }

    fn lattice_params(&self, sites: usize) -> XxzParams {
        let c2 = self.spacing(sites).powi(2);
        XxzParams {
            j0: self.params.j0 / c2,
            j1: self.params.j1 / c2,
            h: vec![self.field; sites],
            sites,
            ..self.params.clone()
        }
    }
}

/// L2 distance at `t_end` between the lattice run with `sites` sites and the
/// continuum run, sampled at the lattice points.
pub fn continuum_limit_point(setup: &ContinuumLimitSetup, sites: usize) -> Result<f64, LimitError> {
    if !sites.is_power_of_two() || !setup.refinement.is_power_of_two() {
        return Err(LimitError::Invalid("site count and refinement must be powers of two".into()));
    }
    let c = setup.spacing(sites);
    let lp = setup.lattice_params(sites);
    let model = XxzLattice::from_params(&lp, SymbolMode::Naive)?;
    let xs: Vec<f64> = (0..sites).map(|j| -0.5 * setup.length + j as f64 * c).collect();
    let initial = LatticeState::from_flavors(&[setup.profile.sample(&xs)?])?;
    let dt = setup.max_dt.min(setup.courant * c * c);
    let lattice = integrate(&initial, &model, &IntegratorConfig::rk4(dt, setup.t_end))?;

    let grid = Grid1D::new(setup.length, sites * setup.refinement)?;
    let fine: Vec<f64> = grid.points_iter().collect();
    let field0 = ContinuumField::new(grid, setup.profile.sample(&fine)?)?;
    // the lattice expansion carries +hφ; the printed continuum form has −hφ
    let h = PotentialField::uniform(&grid, -setup.field);
    let opts = PretransformOptions { lattice_constant: c, curvature: setup.curvature };
    let cont = evolve(&PretransformModel::new(&lp, &h, opts), &field0, setup.continuum_dt, setup.t_end, TimeScheme::IfRk4)?;

    let sum: f64 = lattice
        .last()
        .amplitudes
        .iter()
        .enumerate()
        .map(|(j, z)| (z - cont.values[j * setup.refinement]).norm_sqr())
        .sum();
    Ok((sum * c).sqrt())
}

/// Runs every lattice size; failed runs are flagged rather than aborting.
pub fn lattice_vs_continuum(setup: &ContinuumLimitSetup) -> ConvergenceReport {
    let results = setup.sites.iter().map(|&n| continuum_limit_point(setup, n)).collect();
    let spacings = setup.sites.iter().map(|&n| setup.spacing(n)).collect();
    ConvergenceReport::from_results(spacings, results, setup.drop_first)
}

/// How the shared initial data enters the rescaled variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InitialScaling {
    /// `ϕ₀ = φ₀/|A|`: one physical profile for every `s`, so the rescaled
    /// amplitude shrinks like `√ρ`.
    #[default]
    Physical,
    /// `ϕ₀` is the profile itself for every `s`.
    Rescaled,
}

/// Precursor equation against the final GP equation over a sweep of `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationSetup {
    pub params: XxzParams,
    pub spins: Vec<f64>,
    pub profile: Profile,
    pub scaling: InitialScaling,
    pub potential: f64,
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub t_end: f64,
    pub options: PrecursorOptions,
    pub drop_first: bool,
}

impl Default for TruncationSetup {
    fn default() -> Self {
        Self {
            params: XxzParams { j0: 1.0, r0: 0.05, ..XxzParams::default() },
            spins: vec![1.0, 3.0, 10.0, 30.0, 100.0],
            profile: Profile::Gaussian { amplitude: 1.0, width: 2.0, center: 0.0, wavenumber: 0.0 },
            scaling: InitialScaling::Physical,
            potential: 0.0,
            length: 40.0,
            points: 256,
            dt: 1e-3,
            t_end: 1.0,
            options: PrecursorOptions::default(),
            drop_first: false,
        }
    }
}

impl TruncationSetup {
    /// `ρ = 2R(0)/(sJ(0))`.
    pub fn ratio(&self, s: f64) -> f64 {
        2.0 * self.params.r0 / (s * self.params.j0)
    }
}

/// Relative L2 difference `‖ϕ_pre − ϕ_GP‖/‖ϕ_GP‖` at `t_end` for spin `s`
/// (zero when the GP solution vanishes).
pub fn truncation_point(setup: &TruncationSetup, s: f64) -> Result<f64, LimitError> {
    let p = XxzParams { s, ..setup.params.clone() };
    let coeffs = compute_transform(&p)?;
    if coeffs.degenerate {
        return Err(LimitError::DegenerateTransform(format!("s = {s}")));
    }
    let grid = Grid1D::new(setup.length, setup.points)?;
    let xs: Vec<f64> = grid.points_iter().collect();
    let scale = match setup.scaling {
        InitialScaling::Physical => 1.0 / coeffs.a_squared_f64().abs().sqrt(),
        InitialScaling::Rescaled => 1.0,
    };
    let values = setup.profile.sample(&xs)?.into_iter().map(|z| z * scale).collect();
    let field0 = ContinuumField::new(grid, values)?;
    let v = PotentialField::uniform(&grid, setup.potential);
    let pre = PrecursorModel::new(&p, &coeffs, &v, setup.options)?;
    let a = evolve(&pre, &field0, setup.dt, setup.t_end, TimeScheme::IfRk4)?;
    let b = evolve(&GpModel::new(&v), &field0, setup.dt, setup.t_end, TimeScheme::IfRk4)?;
    let norm = b.l2_norm();
    Ok(if norm == 0.0 { a.l2_distance(&b) } else { a.l2_distance(&b) / norm })
}

/// Runs the `s` sweep; degenerate points are flagged and left out of the fit.
pub fn truncation_study(setup: &TruncationSetup) -> ConvergenceReport {
    let results = setup.spins.iter().map(|&s| truncation_point(setup, s)).collect();
    let ratios = setup.spins.iter().map(|&s| setup.ratio(s)).collect();
    ConvergenceReport::from_results(ratios, results, setup.drop_first)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_couplings_without_strain() {
        let b = expand_couplings(1.0, 0.0, 0.3, 0.0, &[0.0, 1.3, 2.1, 7.0], None);
        assert!(b.j_plus.iter().chain(&b.j_minus).all(|&j| j == 1.0));
        assert!(b.r_plus.iter().chain(&b.r_minus).all(|&r| r == 0.3));
    }

    #[test]
    fn uniform_spacing_gives_equal_bonds() {
        let gap = 1.25;
        let x: Vec<f64> = (0..6).map(|j| j as f64 * gap).collect();
        let b = expand_couplings(2.0, 0.5, 1.0, 0.25, &x, Some(6.0 * gap));
        for j in 0..6 {
            assert!((b.j_plus[j] - (2.0 - 0.5 * gap)).abs() < 1e-14);
            assert!((b.r_plus[j] - (1.0 - 0.25 * gap)).abs() < 1e-14);
            assert_eq!(b.j_plus[j], b.j_minus[j]);
        }
        let open = expand_couplings(2.0, 0.5, 1.0, 0.25, &x, None);
        assert!((open.j_plus[5] - (2.0 - 0.5 * 5.0 * gap)).abs() < 1e-14);
    }

    #[test]
    fn taylor_is_exact_for_quadratics() {
        let f = |x: f64| Complex64::new(1.0 + 2.0 * x - 0.5 * x * x, 3.0 * x);
        let df = |x: f64| Complex64::new(2.0 - x, 3.0);
        let d2f = |_: f64| Complex64::new(-1.0, 0.0);
        let r = taylor_check(&f, &df, &d2f, &[-1.0, 0.0, 0.7], &[0.1, 0.05, 0.025, 0.0125]);
        assert!(r.errors.iter().all(|&e| e < 1e-14));
    }

    #[test]
    fn taylor_slope_is_three_for_smooth_data() {
        let f = |x: f64| Complex64::from_polar(1.0, x);
        let df = |x: f64| Complex64::i() * f(x);
        let d2f = |x: f64| -f(x);
        let pts: Vec<f64> = (0..16).map(|m| m as f64 * 0.4).collect();
        let r = taylor_check(&f, &df, &d2f, &pts, &[0.1, 0.05, 0.025, 0.0125]);
        assert!(r.within(3.0, 0.05), "{:?}", r.slope);
    }

    #[test]
    fn degenerate_spin_is_flagged() {
        let setup = TruncationSetup {
            params: XxzParams { j0: 1.0, r0: 1.0, ..XxzParams::default() },
            spins: vec![1.0, 2.0, 3.0],
            points: 32,
            t_end: 0.01,
            ..TruncationSetup::default()
        };
        let r = truncation_study(&setup);
        assert!(r.status.iter().all(|s| matches!(s, PointStatus::Skipped(_))));
        assert_eq!(r.slope, None);
    }
}
