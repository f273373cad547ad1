use num_complex::Complex64;

use crate::limitlab::{AMode, TransformCoefficients};
use crate::models::XxzParams;

use super::{ContinuumError, ContinuumField, PotentialField, Spectral};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `∂_t φ = L(∂_ξ) φ + N(φ)` with a constant-coefficient linear part that is
/// diagonal in Fourier space.
pub trait SpectralModel: Sync {
    /// Fourier symbol `L(k)`.
    fn linear(&self, k: f64) -> Complex64;
    /// Writes `N(φ)` into `out`.
    fn nonlinear(&self, sp: &Spectral, phi: &[Complex64], out: &mut [Complex64]);

    /// Full `∂_t φ`; the nonlinear part is filtered by the two-thirds rule.
    fn rhs(&self, sp: &Spectral, phi: &[Complex64], out: &mut [Complex64]) {
        self.nonlinear(sp, phi, out);
        sp.dealias(out);
        let mut lin = phi.to_vec();
        sp.apply(&mut lin, |k| self.linear(k));
        out.iter_mut().zip(&lin).for_each(|(o, l)| *o += l);
    }
}

/// How the curvature term `−R(0)(φ*φ_ξξ + φφ*_ξξ)` enters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CurvatureTerm {
    /// Quadratic in the field, as written.
    #[default]
    AsPrinted,
    /// Multiplied by `φ`, as the Taylor expansion of the lattice equation
    /// gives.
    Cubic,
}

fn curvature(sp: &Spectral, phi: &[Complex64], form: CurvatureTerm) -> Vec<Complex64> {
    let d2 = sp.derivative(phi, 2);
    let d2c = sp.derivative(&phi.iter().map(|z| z.conj()).collect::<Vec<_>>(), 2);
    phi.iter()
        .zip(d2.iter().zip(&d2c))
        .map(|(z, (a, b))| {
            let c = z.conj() * a + z * b;
            match form {
                CurvatureTerm::AsPrinted => c,
                CurvatureTerm::Cubic => c * z,
            }
        })
        .collect()
}

/// Final GP equation `iϕ̇ = ϕ − ϕ_ξξ − |ϕ|²ϕ − Vϕ`. In the reduced gauge
/// `ψ = e^{it}ϕ` the constant term is dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct GpModel {
    pub potential: Vec<f64>,
    pub reduced: bool,
}

impl GpModel {
    pub fn new(v: &PotentialField) -> Self {
        Self { potential: v.values.clone(), reduced: false }
    }

    pub fn reduced(v: &PotentialField) -> Self {
        Self { potential: v.values.clone(), reduced: true }
    }
}

impl SpectralModel for GpModel {
    fn linear(&self, k: f64) -> Complex64 {
        let shift = if self.reduced { 0.0 } else { 1.0 };
        -I * (shift + k * k)
    }

    fn nonlinear(&self, _: &Spectral, phi: &[Complex64], out: &mut [Complex64]) {
        for ((o, z), v) in out.iter_mut().zip(phi).zip(&self.potential) {
            *o = I * (z.norm_sqr() + v) * z;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecursorOptions {
    pub a_mode: AMode,
    pub curvature: CurvatureTerm,
    /// `false` zeroes the three dispersive terms.
    pub dispersive: bool,
}

impl Default for PrecursorOptions {
    fn default() -> Self {
        Self { a_mode: AMode::Signed, curvature: CurvatureTerm::AsPrinted, dispersive: true }
    }
}

/// Rescaled equation
///
/// `iϕ̇ = ϕ − ϕ_ξξ − |ϕ|²ϕ + (R(1)x_ξ/R(0))|ϕ|²ϕ − B⁻²|ϕ_ξ|²ϕ
///       − B⁻²(ϕ*ϕ_ξξ + ϕϕ*_ξξ)/(2A) − Vϕ`
///
/// in the rescaled coordinate; `x_ξ` is the physical strain gradient, so
/// `R(1)x_ξ = R(1)B⁻¹x_ξ′`. The `Cubic` curvature form uses
/// `B⁻²(ϕ*ϕ_ξξ + ϕϕ*_ξξ)ϕ/2` instead.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecursorModel {
    pub strain_cubic: f64,
    pub inv_b_squared: f64,
    pub a: Complex64,
    pub potential: Vec<f64>,
    pub options: PrecursorOptions,
}

impl PrecursorModel {
    pub fn new(
        p: &XxzParams,
        coeffs: &TransformCoefficients,
        v: &PotentialField,
        options: PrecursorOptions,
    ) -> Result<Self, ContinuumError> {
        Ok(Self {
            strain_cubic: p.r1 * p.x_xi / p.r0,
            inv_b_squared: coeffs.inv_b_squared()?,
            a: coeffs.amplitude(options.a_mode)?,
            potential: v.values.clone(),
            options,
        })
    }
}

impl SpectralModel for PrecursorModel {
    fn linear(&self, k: f64) -> Complex64 {
        -I * (1.0 + k * k)
    }

    fn nonlinear(&self, sp: &Spectral, phi: &[Complex64], out: &mut [Complex64]) {
        let disp = self.options.dispersive;
        let (d1, curv) = if disp {
            (sp.derivative(phi, 1), curvature(sp, phi, self.options.curvature))
        } else {
            (Vec::new(), Vec::new())
        };
        let curv_scale = match self.options.curvature {
            CurvatureTerm::AsPrinted => self.inv_b_squared / (2.0 * self.a),
            CurvatureTerm::Cubic => Complex64::new(0.5 * self.inv_b_squared, 0.0),
        };
        for m in 0..phi.len() {
            let z = phi[m];
            let n = z.norm_sqr();
            // same arithmetic as the GP model, so `dispersive: false` matches it bitwise
            out[m] = I * (n + self.potential[m]) * z;
            if disp {
                let f = self.strain_cubic * n * z - self.inv_b_squared * d1[m].norm_sqr() * z - curv_scale * curv[m];
                out[m] -= I * f;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PretransformOptions {
    /// Lattice constant `c`; each `ξ`-derivative carries one power of it.
    pub lattice_constant: f64,
    pub curvature: CurvatureTerm,
}

impl Default for PretransformOptions {
    fn default() -> Self {
        Self { lattice_constant: 1.0, curvature: CurvatureTerm::AsPrinted }
    }
}

/// Continuum equation before rescaling
///
/// `iħφ̇ = (−2J(0) + 2R(0))sφ − sJ(0)c²φ_ξξ + 2(J(1) − R(1))s x_ξ φ
///        − 2R(0)|φ|²φ + 2R(1)x_ξ|φ|²φ − 2R(0)c²|φ_ξ|²φ
///        − R(0)c²(φ*φ_ξξ + φφ*_ξξ) − h(ξ)φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PretransformModel {
    pub j0: f64,
    pub r0: f64,
    pub r1: f64,
    pub s: f64,
    pub hbar: f64,
    pub x_xi: f64,
    /// Constant linear coefficient `(−2J(0) + 2R(0) + 2(J(1) − R(1))x_ξ)s`.
    pub shift: f64,
    pub field: Vec<f64>,
    pub options: PretransformOptions,
}

impl PretransformModel {
    pub fn new(p: &XxzParams, h: &PotentialField, options: PretransformOptions) -> Self {
        Self {
            j0: p.j0,
            r0: p.r0,
            r1: p.r1,
            s: p.s,
            hbar: p.hbar,
            x_xi: p.x_xi,
            shift: (-2.0 * p.j0 + 2.0 * p.r0 + 2.0 * (p.j1 - p.r1) * p.x_xi) * p.s,
            field: h.values.clone(),
            options,
        }
    }
}

impl SpectralModel for PretransformModel {
    fn linear(&self, k: f64) -> Complex64 {
        let c2 = self.options.lattice_constant.powi(2);
        -I * (self.shift + self.s * self.j0 * c2 * k * k) / self.hbar
    }

    fn nonlinear(&self, sp: &Spectral, phi: &[Complex64], out: &mut [Complex64]) {
        let c2 = self.options.lattice_constant.powi(2);
        let d1 = sp.derivative(phi, 1);
        let curv = curvature(sp, phi, self.options.curvature);
        let cubic = -2.0 * self.r0 + 2.0 * self.r1 * self.x_xi;
        for m in 0..phi.len() {
            let z = phi[m];
            let f = cubic * z.norm_sqr() * z - 2.0 * self.r0 * c2 * d1[m].norm_sqr() * z - self.r0 * c2 * curv[m]
                - self.field[m] * z;
            out[m] = -I * f / self.hbar;
        }
    }
}

fn evaluate(model: &dyn SpectralModel, field: &ContinuumField) -> Result<Vec<Complex64>, ContinuumError> {
    field.check()?;
    let sp = Spectral::new(&field.grid);
    let mut out = vec![Complex64::new(0.0, 0.0); field.values.len()];
    model.rhs(&sp, &field.values, &mut out);
    Ok(out)
}

/// `∂_t ϕ` of the final GP equation.
pub fn gp_rhs(field: &ContinuumField, v: &PotentialField) -> Result<Vec<Complex64>, ContinuumError> {
    v.check_on(&field.grid)?;
    evaluate(&GpModel::new(v), field)
}

/// `∂_t ϕ` of the rescaled precursor equation.
pub fn precursor_rhs(
    field: &ContinuumField,
    p: &XxzParams,
    coeffs: &TransformCoefficients,
    v: &PotentialField,
    options: PrecursorOptions,
) -> Result<Vec<Complex64>, ContinuumError> {
    v.check_on(&field.grid)?;
    evaluate(&PrecursorModel::new(p, coeffs, v, options)?, field)
}

/// `∂_t φ` of the continuum equation before rescaling, with field profile
/// `h` sampled on the same grid.
pub fn pretransform_rhs(
    field: &ContinuumField,
    p: &XxzParams,
    h: &PotentialField,
    options: PretransformOptions,
) -> Result<Vec<Complex64>, ContinuumError> {
    h.check_on(&field.grid)?;
    evaluate(&PretransformModel::new(p, h, options), field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::Grid1D;
    use crate::limitlab::compute_transform;

    fn gaussian(grid: Grid1D) -> ContinuumField {
        ContinuumField::from_fn(grid, |x| Complex64::new((-x * x).exp() * 0.4, 0.1 * (-x * x / 2.0).exp()))
    }

    fn params() -> XxzParams {
        let mut p = XxzParams::uniform(5, 1.0, 0.05, 0.0);
        p.s = 4.0;
        p.r1 = 0.02;
        p.x_xi = 0.3;
        p
    }

    #[test]
    fn zero_field_gives_zero() {
        let g = Grid1D::new(20.0, 64).unwrap();
        let z = ContinuumField::zeros(g);
        let p = params();
        let t = compute_transform(&p).unwrap();
        let v = PotentialField::zeros(&g);
        assert!(gp_rhs(&z, &v).unwrap().iter().all(|w| w.norm() == 0.0));
        assert!(precursor_rhs(&z, &p, &t, &v, PrecursorOptions::default()).unwrap().iter().all(|w| w.norm() == 0.0));
        assert!(pretransform_rhs(&z, &p, &v, PretransformOptions::default()).unwrap().iter().all(|w| w.norm() == 0.0));
    }

    #[test]
    fn precursor_without_dispersion_is_gp() {
        let g = Grid1D::new(20.0, 128).unwrap();
        let p = params();
        let t = compute_transform(&p).unwrap();
        let v = PotentialField::from_fn(&g, |x| 0.1 * x.cos());
        let f = gaussian(g);
        let opts = PrecursorOptions { dispersive: false, ..PrecursorOptions::default() };
        assert_eq!(precursor_rhs(&f, &p, &t, &v, opts).unwrap(), gp_rhs(&f, &v).unwrap());
        let full = precursor_rhs(&f, &p, &t, &v, PrecursorOptions::default()).unwrap();
        assert_ne!(full, gp_rhs(&f, &v).unwrap());
    }

    #[test]
    fn uniform_pretransform() {
        let g = Grid1D::new(10.0, 32).unwrap();
        let mut p = XxzParams::uniform(5, 1.2, 0.4, 0.0);
        p.s = 2.0;
        p.hbar = 0.5;
        let phi0 = Complex64::new(0.3, 0.4);
        let f = ContinuumField::from_fn(g, |_| phi0);
        let got = pretransform_rhs(&f, &p, &PotentialField::zeros(&g), PretransformOptions::default()).unwrap();
        let rhs = (-2.0 * 1.2 + 2.0 * 0.4) * 2.0 * phi0 - 2.0 * 0.4 * phi0.norm_sqr() * phi0;
        let expect = -I * rhs / 0.5;
        assert!(got.iter().all(|z| (z - expect).norm() < 1e-13));
    }

    #[test]
    fn pretransform_dispersive_terms_match_direct_evaluation() {
        let g = Grid1D::new(16.0, 256).unwrap();
        let p = params();
        let c = 0.5;
        // φ = e^{−x²}(1 + ix)/2 with closed-form derivatives
        let phi = |x: f64| Complex64::new(1.0, x) * (-x * x).exp() * 0.5;
        let d1 = |x: f64| (Complex64::new(0.0, 1.0) - 2.0 * x * Complex64::new(1.0, x)) * (-x * x).exp() * 0.5;
        let d2 = |x: f64| {
            let e = (-x * x).exp() * 0.5;
            (Complex64::new(1.0, x) * (4.0 * x * x - 2.0) - 4.0 * x * Complex64::new(0.0, 1.0)) * e
        };
        let f = ContinuumField::from_fn(g, phi);
        for form in [CurvatureTerm::AsPrinted, CurvatureTerm::Cubic] {
            let opts = PretransformOptions { lattice_constant: c, curvature: form };
            let got = pretransform_rhs(&f, &p, &PotentialField::zeros(&g), opts).unwrap();
            let shift = (-2.0 * p.j0 + 2.0 * p.r0 + 2.0 * (p.j1 - p.r1) * p.x_xi) * p.s;
            for (x, gz) in g.points_iter().zip(&got) {
                let (z, z1, z2) = (phi(x), d1(x), d2(x));
                let mut curv = z.conj() * z2 + z * z2.conj();
                if form == CurvatureTerm::Cubic {
                    curv *= z;
                }
                let rhs = shift * z - p.s * p.j0 * c * c * z2 + (-2.0 * p.r0 + 2.0 * p.r1 * p.x_xi) * z.norm_sqr() * z
                    - 2.0 * p.r0 * c * c * z1.norm_sqr() * z
                    - p.r0 * c * c * curv;
                assert!((gz - (-I * rhs)).norm() < 1e-10, "{x}: {gz} vs {}", -I * rhs);
            }
        }
    }
}
