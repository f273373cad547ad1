//! Run configuration. Every section has defaults, so an empty file (or no
//! file) is a valid configuration; unknown keys are rejected.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spingp::continuum::{CurvatureTerm, PrecursorOptions, Profile};
use spingp::latticedyn::{Scheme, SymbolMode};
use spingp::limitlab::{AMode, ContinuumLimitSetup, InitialScaling, TruncationSetup};
use spingp::models::{HubbardParams, XxzParams, MIN_SITES};

use crate::failure::Failure;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub derivation: DerivationConfig,
    pub simulation: SimulationConfig,
    pub study: StudyConfig,
}

impl RunConfig {
    /// Reads `path`, or returns the defaults when no path is given. Relative
    /// profile files are resolved against the config file's directory.
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for spec in cfg.profiles_mut() {
            if let ProfileSpec::File { path } = spec {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        Ok(cfg)
    }

    fn profiles_mut(&mut self) -> [&mut ProfileSpec; 4] {
        [
            &mut self.simulation.initial,
            &mut self.simulation.initial_flavor1,
            &mut self.study.continuum_limit.profile,
            &mut self.study.truncation.profile,
        ]
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

fn grid_points(name: &str, m: usize) -> Result<(), Failure> {
    if m >= 16 && m.is_power_of_two() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be a power of two of at least 16, got {m}")))
    }
}

/// XXZ couplings; the field is uniform.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct XxzSection {
    pub j0: f64,
    pub j1: f64,
    pub r0: f64,
    pub r1: f64,
    pub s: f64,
    pub h: f64,
    pub x_xi: f64,
    pub hbar: f64,
}

impl Default for XxzSection {
    fn default() -> Self {
        Self { j0: 1.0, j1: 0.0, r0: 0.5, r1: 0.0, s: 1.0, h: 0.0, x_xi: 0.0, hbar: 1.0 }
    }
}

impl XxzSection {
    fn small_ratio() -> Self {
        Self { r0: 0.05, ..Self::default() }
    }

    pub fn params(&self, sites: usize) -> XxzParams {
        XxzParams {
            j0: self.j0,
            j1: self.j1,
            r0: self.r0,
            r1: self.r1,
            s: self.s,
            h: vec![self.h; sites],
            hbar: self.hbar,
            x_xi: self.x_xi,
            sites,
        }
    }
}

/// Hubbard hopping and uniform on-site interaction.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct HubbardSection {
    pub t: f64,
    pub u: f64,
    pub hbar: f64,
}

impl Default for HubbardSection {
    fn default() -> Self {
        Self { t: 0.5, u: 1.0, hbar: 1.0 }
    }
}

impl HubbardSection {
    pub fn params(&self, sites: usize) -> HubbardParams {
        HubbardParams { t: self.t, u: vec![self.u; sites], hbar: self.hbar, sites }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileSpec {
    Zero {},
    Uniform {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: f64,
        #[serde(default)]
        wavenumber: f64,
    },
    PlaneWave {
        amplitude: f64,
        wavenumber: f64,
    },
    SechSoliton {
        #[serde(default = "one")]
        eta: f64,
        #[serde(default)]
        center: f64,
    },
    /// CSV with columns `re,im` or `xi,re,im` and a header row.
    File {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

impl ProfileSpec {
    pub fn resolve(&self) -> Result<Profile, Failure> {
        Ok(match *self {
            ProfileSpec::Zero {} => Profile::Zero,
            ProfileSpec::Uniform { re, im } => Profile::Uniform { value: Complex64::new(re, im) },
            ProfileSpec::Gaussian { amplitude, width, center, wavenumber } => {
                positive("gaussian width", width)?;
                Profile::Gaussian { amplitude, width, center, wavenumber }
            }
            ProfileSpec::PlaneWave { amplitude, wavenumber } => Profile::PlaneWave { amplitude, wavenumber },
            ProfileSpec::SechSoliton { eta, center } => {
                positive("soliton eta", eta)?;
                Profile::Sech { eta, center }
            }
            ProfileSpec::File { ref path } => Profile::Samples(read_samples(path)?),
        })
    }
}

fn read_samples(path: &Path) -> Result<Vec<Complex64>, Failure> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| invalid(format!("profile file {}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| invalid(format!("profile file {}: {e}", path.display())))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(re), Some(im)) = (col("re"), col("im")) else {
        return Err(invalid(format!("profile file {} needs `re` and `im` columns", path.display())));
    };
    let mut out = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| invalid(format!("profile file {}: {e}", path.display())))?;
        let num = |k: usize| -> Result<f64, Failure> {
            row.get(k)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| invalid(format!("profile file {} row {}: bad number", path.display(), line + 2)))
        };
        out.push(Complex64::new(num(re)?, num(im)?));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum AModeSpec {
    #[default]
    Signed,
    Modulus,
}

impl From<AModeSpec> for AMode {
    fn from(m: AModeSpec) -> Self {
        match m {
            AModeSpec::Signed => AMode::Signed,
            AModeSpec::Modulus => AMode::Modulus,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureSpec {
    AsPrinted,
    #[default]
    Cubic,
}

impl From<CurvatureSpec> for CurvatureTerm {
    fn from(c: CurvatureSpec) -> Self {
        match c {
            CurvatureSpec::AsPrinted => CurvatureTerm::AsPrinted,
            CurvatureSpec::Cubic => CurvatureTerm::Cubic,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PrecursorSection {
    pub a_mode: AModeSpec,
    pub curvature: CurvatureSpec,
    pub dispersive: bool,
}

impl Default for PrecursorSection {
    fn default() -> Self {
        Self { a_mode: AModeSpec::Signed, curvature: CurvatureSpec::AsPrinted, dispersive: true }
    }
}

impl From<&PrecursorSection> for PrecursorOptions {
    fn from(p: &PrecursorSection) -> Self {
        PrecursorOptions { a_mode: p.a_mode.into(), curvature: p.curvature.into(), dispersive: p.dispersive }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DerivationConfig {
    /// Ring size for the symbolic checks.
    pub sites: usize,
    /// Ring size and Bose cutoff of the truncated-Fock oracle.
    pub oracle_sites: usize,
    pub oracle_cutoff: usize,
    pub oracle_samples: usize,
    pub seed: u64,
    pub jordan_wigner_max_sites: usize,
    /// Couplings for the Bose/Fermi comparison.
    pub statistics: XxzSection,
    /// Negative control: adds `δ a†a` at this site to every Hamiltonian.
    pub fault_injection_site: Option<usize>,
}

impl Default for DerivationConfig {
    fn default() -> Self {
        Self {
            sites: 7,
            oracle_sites: 3,
            oracle_cutoff: 4,
            oracle_samples: 4,
            seed: 2024,
            jordan_wigner_max_sites: 4,
            statistics: XxzSection { h: 0.2, ..XxzSection::default() },
            fault_injection_site: None,
        }
    }
}

impl DerivationConfig {
    pub fn validate(&self) -> Result<(), Failure> {
        if self.sites < MIN_SITES {
            return Err(invalid(format!("derivation.sites must be at least {MIN_SITES}, got {}", self.sites)));
        }
        if !(3..=4).contains(&self.oracle_sites) || !(1..=6).contains(&self.oracle_cutoff) {
            return Err(invalid("derivation.oracle_sites must be 3 or 4 and oracle_cutoff 1..=6"));
        }
        if !(2..=6).contains(&self.jordan_wigner_max_sites) {
            return Err(invalid("derivation.jordan_wigner_max_sites must lie in 2..=6"));
        }
        if let Some(site) = self.fault_injection_site {
            if site >= self.sites {
                return Err(invalid(format!("fault_injection_site {site} outside a ring of {}", self.sites)));
            }
        }
        self.statistics.params(self.sites).validate().map_err(|e| invalid(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    XxzLattice,
    HubbardLattice,
    Pretransform,
    Precursor,
    #[default]
    Gp,
    CoupledGp,
}

impl Family {
    pub fn is_lattice(self) -> bool {
        matches!(self, Family::XxzLattice | Family::HubbardLattice)
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeScheme {
    #[default]
    Rk4,
    Rk45,
}

impl From<LatticeScheme> for Scheme {
    fn from(s: LatticeScheme) -> Self {
        match s {
            LatticeScheme::Rk4 => Scheme::Rk4,
            LatticeScheme::Rk45 => Scheme::Rk45,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolModeSpec {
    #[default]
    Naive,
    Wick,
}

impl From<SymbolModeSpec> for SymbolMode {
    fn from(m: SymbolModeSpec) -> Self {
        match m {
            SymbolModeSpec::Naive => SymbolMode::Naive,
            SymbolModeSpec::Wick => SymbolMode::Wick,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuumScheme {
    /// Strang splitting; GP families only.
    SplitStep,
    IfRk4,
    Rk4,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub family: Family,
    pub t_end: f64,
    pub dt: f64,
    /// Time between stored snapshots; also the granularity at which the
    /// last good state is kept if a run blows up.
    pub snapshot_interval: Option<f64>,
    pub sites: usize,
    /// Lattice spacing used to place profile samples on the sites.
    pub lattice_spacing: f64,
    pub lattice_scheme: LatticeScheme,
    pub tolerance: f64,
    pub symbol_mode: SymbolModeSpec,
    pub points: usize,
    pub length: f64,
    /// Defaults to split-step for the GP families and IF-RK4 otherwise.
    pub continuum_scheme: Option<ContinuumScheme>,
    /// Evolve `e^{it}ϕ` (no constant term) instead of `ϕ`; GP only.
    pub reduced_gauge: bool,
    /// Uniform potential `V` for the GP and precursor families.
    pub potential: f64,
    pub xxz: XxzSection,
    pub hubbard: HubbardSection,
    pub precursor: PrecursorSection,
    pub pretransform_curvature: CurvatureSpec,
    pub initial: ProfileSpec,
    /// Second flavor for the Hubbard lattice and coupled GP.
    pub initial_flavor1: ProfileSpec,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            family: Family::Gp,
            t_end: 1.0,
            dt: 1e-3,
            snapshot_interval: None,
            sites: 256,
            lattice_spacing: 1.0,
            lattice_scheme: LatticeScheme::Rk4,
            tolerance: 1e-10,
            symbol_mode: SymbolModeSpec::Naive,
            points: 512,
            length: 40.0 * std::f64::consts::PI,
            continuum_scheme: None,
            reduced_gauge: false,
            potential: 0.0,
            xxz: XxzSection::default(),
            hubbard: HubbardSection::default(),
            precursor: PrecursorSection::default(),
            pretransform_curvature: CurvatureSpec::AsPrinted,
            initial: ProfileSpec::SechSoliton { eta: 1.0, center: 0.0 },
            initial_flavor1: ProfileSpec::Zero {},
        }
    }
}

impl SimulationConfig {
    pub fn scheme(&self) -> ContinuumScheme {
        self.continuum_scheme.unwrap_or(match self.family {
            Family::Gp | Family::CoupledGp => ContinuumScheme::SplitStep,
            _ => ContinuumScheme::IfRk4,
        })
    }

    pub fn validate(&self) -> Result<(), Failure> {
        positive("simulation.t_end", self.t_end)?;
        positive("simulation.dt", self.dt)?;
        if let Some(dt) = self.snapshot_interval {
            positive("simulation.snapshot_interval", dt)?;
        }
        self.initial.resolve()?;
        self.initial_flavor1.resolve()?;
        match self.family {
            Family::XxzLattice | Family::HubbardLattice => {
                positive("simulation.lattice_spacing", self.lattice_spacing)?;
                positive("simulation.tolerance", self.tolerance)?;
                let check = match self.family {
                    Family::XxzLattice => self.xxz.params(self.sites).validate(),
                    _ => self.hubbard.params(self.sites).validate(),
                };
                check.map_err(|e| invalid(e.to_string()))?;
                if self.sites < MIN_SITES {
                    return Err(invalid(format!("simulation.sites must be at least {MIN_SITES}")));
                }
            }
            _ => {
                grid_points("simulation.points", self.points)?;
                positive("simulation.length", self.length)?;
                if self.scheme() == ContinuumScheme::SplitStep && !matches!(self.family, Family::Gp | Family::CoupledGp) {
                    return Err(invalid("split-step is only available for the gp and coupled-gp families"));
                }
                if self.family == Family::CoupledGp && self.scheme() != ContinuumScheme::SplitStep {
                    return Err(invalid("coupled-gp is integrated by split-step only"));
                }
                if matches!(self.family, Family::Pretransform | Family::Precursor) {
                    self.xxz.params(MIN_SITES).validate().map_err(|e| invalid(e.to_string()))?;
                }
                positive("simulation.hubbard.hbar", self.hubbard.hbar)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    #[default]
    ContinuumLimit,
    Truncation,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingSpec {
    #[default]
    Physical,
    Rescaled,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ContinuumLimitSection {
    /// Continuum couplings; the lattice gets `J/c²`.
    pub xxz: XxzSection,
    pub profile: ProfileSpec,
    pub length: f64,
    pub sites: Vec<usize>,
    pub t_end: f64,
    pub courant: f64,
    pub max_dt: f64,
    pub continuum_dt: f64,
    pub refinement: usize,
    pub curvature: CurvatureSpec,
    pub drop_first: bool,
}

impl Default for ContinuumLimitSection {
    fn default() -> Self {
        Self {
            xxz: XxzSection::small_ratio(),
            profile: ProfileSpec::Gaussian { amplitude: 0.5, width: 2.0, center: 0.0, wavenumber: 0.0 },
            length: 20.0,
            sites: vec![64, 128, 256, 512],
            t_end: 0.5,
            courant: 0.005,
            max_dt: 1e-3,
            continuum_dt: 1e-3,
            refinement: 4,
            curvature: CurvatureSpec::Cubic,
            drop_first: false,
        }
    }
}

impl ContinuumLimitSection {
    pub fn setup(&self) -> Result<ContinuumLimitSetup, Failure> {
        if self.sites.len() < 3 {
            return Err(invalid(format!("continuum-limit sweep needs at least 3 lattice sizes, got {}", self.sites.len())));
        }
        if let Some(n) = self.sites.iter().find(|&&n| n < MIN_SITES || !n.is_power_of_two()) {
            return Err(invalid(format!("lattice size {n} must be a power of two of at least {MIN_SITES}")));
        }
        if !self.refinement.is_power_of_two() || self.sites.iter().any(|n| n * self.refinement < 16) {
            return Err(invalid("refinement must be a power of two giving at least 16 continuum points"));
        }
        for (name, v) in [
            ("length", self.length),
            ("t_end", self.t_end),
            ("courant", self.courant),
            ("max_dt", self.max_dt),
            ("continuum_dt", self.continuum_dt),
        ] {
            positive(&format!("study.continuum_limit.{name}"), v)?;
        }
        let params = self.xxz.params(MIN_SITES);
        params.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(ContinuumLimitSetup {
            params,
            field: self.xxz.h,
            profile: self.profile.resolve()?,
            length: self.length,
            sites: self.sites.clone(),
            t_end: self.t_end,
            courant: self.courant,
            max_dt: self.max_dt,
            continuum_dt: self.continuum_dt,
            refinement: self.refinement,
            curvature: self.curvature.into(),
            drop_first: self.drop_first,
        })
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationSection {
    pub xxz: XxzSection,
    pub spins: Vec<f64>,
    pub profile: ProfileSpec,
    pub scaling: ScalingSpec,
    pub potential: f64,
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub t_end: f64,
    pub precursor: PrecursorSection,
    pub drop_first: bool,
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self {
            xxz: XxzSection::small_ratio(),
            spins: vec![1.0, 3.0, 10.0, 30.0, 100.0],
            profile: ProfileSpec::Gaussian { amplitude: 1.0, width: 2.0, center: 0.0, wavenumber: 0.0 },
            scaling: ScalingSpec::Physical,
            potential: 0.0,
            length: 40.0,
            points: 256,
            dt: 1e-3,
            t_end: 1.0,
            precursor: PrecursorSection::default(),
            drop_first: false,
        }
    }
}

impl TruncationSection {
    pub fn setup(&self) -> Result<TruncationSetup, Failure> {
        if self.spins.len() < 3 {
            return Err(invalid(format!("truncation sweep needs at least 3 spin values, got {}", self.spins.len())));
        }
        for &s in &self.spins {
            positive("study.truncation.spins entry", s)?;
        }
        grid_points("study.truncation.points", self.points)?;
        positive("study.truncation.length", self.length)?;
        positive("study.truncation.dt", self.dt)?;
        positive("study.truncation.t_end", self.t_end)?;
        let params = self.xxz.params(MIN_SITES);
        params.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(TruncationSetup {
            params,
            spins: self.spins.clone(),
            profile: self.profile.resolve()?,
            scaling: match self.scaling {
                ScalingSpec::Physical => InitialScaling::Physical,
                ScalingSpec::Rescaled => InitialScaling::Rescaled,
            },
            potential: self.potential,
            length: self.length,
            points: self.points,
            dt: self.dt,
            t_end: self.t_end,
            options: (&self.precursor).into(),
            drop_first: self.drop_first,
        })
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct StudyConfig {
    pub kind: StudyKind,
    /// Defaults to 2 for the continuum limit and 1 for truncation.
    pub expected_slope: Option<f64>,
    pub band: f64,
    pub continuum_limit: ContinuumLimitSection,
    pub truncation: TruncationSection,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            kind: StudyKind::ContinuumLimit,
            expected_slope: None,
            band: 0.3,
            continuum_limit: ContinuumLimitSection::default(),
            truncation: TruncationSection::default(),
        }
    }
}

impl StudyConfig {
    pub fn expected(&self) -> f64 {
        self.expected_slope.unwrap_or(match self.kind {
            StudyKind::ContinuumLimit => 2.0,
            StudyKind::Truncation => 1.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = RunConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.simulation, cfg.simulation);
        assert_eq!(back.study, cfg.study);
        assert_eq!(back.derivation, cfg.derivation);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("[simulation]\nfamly = \"gp\"\n").is_err());
        assert!(toml::from_str::<RunConfig>("[simulation.initial]\nkind = \"zero\"\nextra = 1\n").is_err());
        assert!(toml::from_str::<RunConfig>("[simulation.initial]\nkind = \"gaussian\"\namplitude = 1.0\nwidth = 2.0\n").is_ok());
    }

    #[test]
    fn derivation_needs_five_sites() {
        let cfg = DerivationConfig { sites: 3, ..DerivationConfig::default() };
        assert!(matches!(cfg.validate(), Err(Failure::Config(_))));
    }

    #[test]
    fn short_sweeps_are_rejected() {
        let cl = ContinuumLimitSection { sites: vec![], ..ContinuumLimitSection::default() };
        assert!(cl.setup().is_err());
        let tr = TruncationSection { spins: vec![1.0, 2.0], ..TruncationSection::default() };
        assert!(tr.setup().is_err());
    }
}
