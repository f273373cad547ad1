use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::models::XxzParams;

use super::LimitError;

/// How the amplitude scale `A` is taken from the signed `A²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AMode {
    /// `A = √(A²)`, purely imaginary when `A² < 0`.
    #[default]
    Signed,
    /// `A = √|A²|`.
    Modulus,
}

/// Coefficients of the linear rescaling `φ → Aϕ`, `t → t′/(2A²R(0))`,
/// `ξ → Bξ′`, kept as exact rationals of the binary inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformCoefficients {
    pub a_squared: BigRational,
    pub b_squared: BigRational,
    /// `1/(2A²R(0))`; `None` when degenerate.
    pub time_scale: Option<BigRational>,
    /// `A² = 0` or `B² = 0`.
    pub degenerate: bool,
    r0: BigRational,
}

fn exact(x: f64, what: &str) -> Result<BigRational, LimitError> {
    BigRational::from_float(x).ok_or_else(|| LimitError::Invalid(format!("{what} = {x} is not finite")))
}

/// `A² = (−2J(0) + 2R(0) + 2J(1)x_ξ − 2R(1)x_ξ)s / (2R(0))` and
/// `B² = sJ(0) / ((2R(0) + 2J(1)x_ξ − 2R(1)x_ξ − 2J(0))s)`, signs kept.
pub fn compute_transform(p: &XxzParams) -> Result<TransformCoefficients, LimitError> {
    let j0 = exact(p.j0, "J(0)")?;
    let j1 = exact(p.j1, "J(1)")?;
    let r0 = exact(p.r0, "R(0)")?;
    let r1 = exact(p.r1, "R(1)")?;
    let s = exact(p.s, "s")?;
    let x = exact(p.x_xi, "x_xi")?;
    if r0.is_zero() {
        return Err(LimitError::DegenerateTransform("R(0) = 0".into()));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let bracket = &two * (&r0 - &j0 + &j1 * &x - &r1 * &x);
    let a_squared = &bracket * &s / (&two * &r0);
    let b_den = &bracket * &s;
    let b_squared = if b_den.is_zero() { BigRational::zero() } else { &s * &j0 / b_den };
    let degenerate = a_squared.is_zero() || b_squared.is_zero();
    let time_scale = (!degenerate).then(|| (&two * &a_squared * &r0).recip());
    Ok(TransformCoefficients { a_squared, b_squared, time_scale, degenerate, r0 })
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl TransformCoefficients {
    pub fn a_squared_f64(&self) -> f64 {
        f(&self.a_squared)
    }

    pub fn b_squared_f64(&self) -> f64 {
        f(&self.b_squared)
    }

    pub fn time_scale_f64(&self) -> Option<f64> {
        self.time_scale.as_ref().map(f)
    }

    fn live(&self) -> Result<(), LimitError> {
        if self.degenerate {
            Err(LimitError::DegenerateTransform(format!(
                "A² = {}, B² = {}",
                self.a_squared, self.b_squared
            )))
        } else {
            Ok(())
        }
    }

    pub fn amplitude(&self, mode: AMode) -> Result<Complex64, LimitError> {
        self.live()?;
        let a2 = self.a_squared_f64();
        Ok(match mode {
            AMode::Signed if a2 < 0.0 => Complex64::new(0.0, (-a2).sqrt()),
            _ => Complex64::new(a2.abs().sqrt(), 0.0),
        })
    }

    /// `B⁻²`, signed.
    pub fn inv_b_squared(&self) -> Result<f64, LimitError> {
        self.live()?;
        Ok(f(&self.b_squared.recip()))
    }

    /// `V = h / (2|A|²R(0))` for each field sample.
    pub fn potential(&self, h: &[f64]) -> Result<Vec<f64>, LimitError> {
        self.live()?;
        let scale = f(&(BigRational::from_integer(BigInt::from(2)) * self.a_squared.abs() * &self.r0).recip());
        Ok(h.iter().map(|v| v * scale).collect())
    }

    /// Coefficient `−|A|²/A²` that the exact change of variables gives the
    /// cubic term; the rescaled equation carries `−1`.
    pub fn exact_cubic_sign(&self, mode: AMode) -> Result<f64, LimitError> {
        self.live()?;
        Ok(match mode {
            AMode::Signed if self.a_squared.is_negative() => 1.0,
            _ => -1.0,
        })
    }
}
