//! Exact multivariate polynomials over named real parameters.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::scalar::CRational;
use super::OpAlgError;

/// Numeric values for the named parameters of a [`ParamCoeff`].
pub type Bindings = HashMap<String, f64>;

/// Product of parameter symbols with positive exponents, sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn symbol(name: &str) -> Self {
        Self(vec![(name.to_owned(), 1)])
    }

    pub fn from_powers<I: IntoIterator<Item = (String, u32)>>(powers: I) -> Self {
        let mut acc: BTreeMap<String, u32> = BTreeMap::new();
        for (s, p) in powers {
            if p > 0 {
                *acc.entry(s).or_insert(0) += p;
            }
        }
        Self(acc.into_iter().collect())
    }

    pub fn powers(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| p).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).cloned())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (s, p)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *p == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{p}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in the model parameters with exact complex-rational scalars.
///
/// The zero polynomial is the empty map; no stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamCoeff {
    terms: BTreeMap<Monomial, CRational>,
}

impl ParamCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CRational::one())
    }

    pub fn constant(c: CRational) -> Self {
        let mut out = Self::zero();
        out.add_term(Monomial::unit(), c);
        out
    }

    pub fn int(n: i64) -> Self {
        Self::constant(CRational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(CRational::ratio(num, den))
    }

    pub fn symbol(name: &str) -> Self {
        let mut out = Self::zero();
        out.add_term(Monomial::symbol(name), CRational::one());
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, CRational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, mono: Monomial, c: CRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_unit() && c.is_one())
                .unwrap_or(false)
    }

    pub fn scale(&self, c: &CRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Complex conjugate; parameters are real so only scalars change.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.conj())).collect() }
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(s, _)| s == name))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(s, _)| s.as_str()))
    }

    /// Renames every symbol through `rename`; colliding monomials merge.
    pub fn rename_symbols<F: Fn(&str) -> String>(&self, rename: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_powers(m.0.iter().map(|(s, p)| (rename(s), *p))),
                c.clone(),
            )
        }))
    }

    pub fn eval(&self, bindings: &Bindings) -> Result<Complex64, OpAlgError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex64();
            for (s, p) in &m.0 {
                let x = bindings
                    .get(s)
                    .ok_or_else(|| OpAlgError::UnboundParameter(s.clone()))?;
                v *= x.powi(*p as i32);
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
}

impl From<CRational> for ParamCoeff {
    fn from(c: CRational) -> Self {
        Self::constant(c)
    }
}

impl Add for &ParamCoeff {
    type Output = ParamCoeff;
    fn add(self, rhs: &ParamCoeff) -> ParamCoeff {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for ParamCoeff {
    type Output = ParamCoeff;
    fn add(self, rhs: ParamCoeff) -> ParamCoeff {
        &self + &rhs
    }
}

impl Sub for &ParamCoeff {
    type Output = ParamCoeff;
    fn sub(self, rhs: &ParamCoeff) -> ParamCoeff {
        self + &(-rhs)
    }
}

impl Sub for ParamCoeff {
    type Output = ParamCoeff;
    fn sub(self, rhs: ParamCoeff) -> ParamCoeff {
        &self - &rhs
    }
}

impl Neg for &ParamCoeff {
    type Output = ParamCoeff;
    fn neg(self) -> ParamCoeff {
        ParamCoeff { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for ParamCoeff {
    type Output = ParamCoeff;
    fn neg(self) -> ParamCoeff {
        -&self
    }
}

impl Mul for &ParamCoeff {
    type Output = ParamCoeff;
    fn mul(self, rhs: &ParamCoeff) -> ParamCoeff {
        let mut out = ParamCoeff::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for ParamCoeff {
    type Output = ParamCoeff;
    fn mul(self, rhs: ParamCoeff) -> ParamCoeff {
        &self * &rhs
    }
}

impl fmt::Display for ParamCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative_real() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
