use num_complex::Complex64;

use super::ContinuumError;

/// Named initial profiles shared by lattice and continuum runs.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    Zero,
    Uniform { value: Complex64 },
    /// `a·exp(−(ξ − ξ₀)²/w²)·e^{ikξ}`.
    Gaussian { amplitude: f64, width: f64, center: f64, wavenumber: f64 },
    /// `a·e^{ikξ}`; `k` should be commensurate with the domain.
    PlaneWave { amplitude: f64, wavenumber: f64 },
    /// `√2 η sech(η(ξ − ξ₀))`, the bright soliton of `iψ_t + ψ_ξξ + |ψ|²ψ = 0`.
    Sech { eta: f64, center: f64 },
    /// Explicit samples; only valid on a point set of the same length.
    Samples(Vec<Complex64>),
}

impl Profile {
    /// Value at `x`; `None` for sample data.
    pub fn value(&self, x: f64) -> Option<Complex64> {
        Some(match *self {
            Profile::Zero => Complex64::new(0.0, 0.0),
            Profile::Uniform { value } => value,
            Profile::Gaussian { amplitude, width, center, wavenumber } => {
                let d = (x - center) / width;
                Complex64::from_polar(amplitude * (-d * d).exp(), wavenumber * x)
            }
            Profile::PlaneWave { amplitude, wavenumber } => Complex64::from_polar(amplitude, wavenumber * x),
            Profile::Sech { eta, center } => {
                Complex64::new(std::f64::consts::SQRT_2 * eta / (eta * (x - center)).cosh(), 0.0)
            }
            Profile::Samples(_) => return None,
        })
    }

    /// Samples at the given coordinates.
    pub fn sample(&self, xs: &[f64]) -> Result<Vec<Complex64>, ContinuumError> {
        match self {
            Profile::Samples(v) if v.len() == xs.len() => Ok(v.clone()),
            Profile::Samples(v) => Err(ContinuumError::Shape { expected: xs.len(), got: v.len() }),
            p => Ok(xs.iter().map(|&x| p.value(x).expect("analytic profile")).collect()),
        }
    }
}
