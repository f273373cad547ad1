//! Classical coherent-state symbols of operator expressions.
//!
//! Two maps are provided. [`naive_symbol`] replaces `a → φ`, `a† → φ*` in
//! place, whatever the factor order. [`wick_symbol`] normal orders first and
//! therefore equals the coherent-state expectation value `⟨φ|A|φ⟩`. Their
//! difference is [`ordering_correction`].

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::opalg::{Bindings, ModeSpace, OpAlgError, OperatorExpr, ParamCoeff, Parser, Statistics};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("Grassmann symbols out of scope: Wick symbols need bosonic input")]
    GrassmannOutOfScope,
    #[error("state has {got} amplitudes, expected {expected}")]
    StateShape { expected: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] OpAlgError),
}

/// `φ_{site,flavor}` or its conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldVar {
    pub site: usize,
    pub flavor: usize,
    pub conj: bool,
}

impl FieldVar {
    pub fn mode_index(&self, space: &ModeSpace) -> usize {
        self.flavor * space.sites + self.site
    }
}

/// Polynomial in commuting lattice fields `φ_j, φ*_j` with parametric
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldPoly {
    space: ModeSpace,
    terms: BTreeMap<Vec<FieldVar>, ParamCoeff>,
}

impl FieldPoly {
    pub fn zero(space: ModeSpace) -> Self {
        Self { space, terms: BTreeMap::new() }
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<FieldVar>, &ParamCoeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mut vars: Vec<FieldVar>, c: ParamCoeff) {
        if c.is_zero() {
            return;
        }
        vars.sort();
        let merged = match self.terms.remove(&vars) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(vars, merged);
        }
    }

    pub fn coefficient(&self, vars: &[FieldVar]) -> ParamCoeff {
        let mut v = vars.to_vec();
        v.sort();
        self.terms.get(&v).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &FieldPoly) -> FieldPoly {
        assert_eq!(self.space, other.space, "field polynomials on different lattices");
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(v.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &FieldPoly) -> FieldPoly {
        self.add(&other.map_coeffs(|c| -c))
    }

    pub fn map_coeffs<F: Fn(&ParamCoeff) -> ParamCoeff>(&self, f: F) -> FieldPoly {
        let mut out = Self::zero(self.space);
        for (v, c) in &self.terms {
            out.add_term(v.clone(), f(c));
        }
        out
    }

    pub fn degree_part(&self, degree: usize) -> FieldPoly {
        let mut out = Self::zero(self.space);
        for (v, c) in self.terms.iter().filter(|(v, _)| v.len() == degree) {
            out.add_term(v.clone(), c.clone());
        }
        out
    }

    /// True when some coefficient monomial contains `name`.
    pub fn mentions_symbol(&self, name: &str) -> bool {
        self.terms.values().any(|c| c.contains_symbol(name))
    }

    /// Binds parameters, producing a numeric polynomial ready for repeated
    /// evaluation.
    pub fn compile(&self, bindings: &Bindings) -> Result<CompiledPoly, SymbolError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (vars, c) in &self.terms {
            let value = c.eval(bindings)?;
            let idx = vars
                .iter()
                .map(|v| (v.mode_index(&self.space), v.conj))
                .collect();
            terms.push((value, idx));
        }
        Ok(CompiledPoly { modes: self.space.modes(), terms })
    }

    /// Evaluates at a state given as amplitudes indexed by
    /// `flavor * sites + site`.
    pub fn eval(&self, state: &[Complex64], bindings: &Bindings) -> Result<Complex64, SymbolError> {
        self.compile(bindings)?.eval(state)
    }

    pub fn parse(text: &str) -> Result<FieldPoly, SymbolError> {
        let mut p = Parser::new(text);
        let head = p.ident()?;
        if head != "field" {
            return Err(p.error("expected `field` header").into());
        }
        let space = p.space_header()?;
        let mut out = FieldPoly::zero(space);
        p.skip_ws();
        if p.eat('0') {
            p.expect_end()?;
            return Ok(out);
        }
        loop {
            let c = p.braced_poly()?;
            let mut vars = Vec::new();
            loop {
                p.skip_ws();
                if p.peek() != Some('p') {
                    break;
                }
                let name = p.ident()?;
                if name != "phi" {
                    return Err(p.error("expected `phi`").into());
                }
                let conj = p.eat('*');
                let (site, flavor) = p.site_args()?;
                vars.push(FieldVar { site: space.wrap(site), flavor, conj });
            }
            out.add_term(vars, c);
            if !p.eat('+') {
                break;
            }
        }
        p.expect_end()?;
        Ok(out)
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "field N={} F={}: ", self.space.sites, self.space.flavors)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let with_flavor = self.space.flavors > 1;
        for (k, (vars, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{{{c}}}")?;
            for v in vars {
                let head = if v.conj { "phi*" } else { "phi" };
                if with_flavor {
                    write!(f, " {head}({},{})", v.site, v.flavor)?;
                } else {
                    write!(f, " {head}({})", v.site)?;
                }
            }
        }
        Ok(())
    }
}

/// A [`FieldPoly`] with all parameters bound to numbers.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    modes: usize,
    terms: Vec<(Complex64, Vec<(usize, bool)>)>,
}

impl CompiledPoly {
    /// Neumaier-compensated sum over terms in fixed order.
    pub fn eval(&self, state: &[Complex64]) -> Result<Complex64, SymbolError> {
        if state.len() != self.modes {
            return Err(SymbolError::StateShape { expected: self.modes, got: state.len() });
        }
        let mut sum = NeumaierSum::default();
        for (c, vars) in &self.terms {
            let mut v = *c;
            for &(m, conj) in vars {
                v *= if conj { state[m].conj() } else { state[m] };
            }
            sum.add(v);
        }
        Ok(sum.total())
    }
}

#[derive(Default)]
struct NeumaierSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl NeumaierSum {
    fn add(&mut self, z: Complex64) {
        fn step(acc: &mut (f64, f64), x: f64) {
            let t = acc.0 + x;
            if acc.0.abs() >= x.abs() {
                acc.1 += (acc.0 - t) + x;
            } else {
                acc.1 += (x - t) + acc.0;
            }
            acc.0 = t;
        }
        step(&mut self.re, z.re);
        step(&mut self.im, z.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Positional replacement `a → φ`, `a† → φ*` with no ordering corrections.
pub fn naive_symbol(expr: &OperatorExpr) -> FieldPoly {
    let mut out = FieldPoly::zero(expr.space());
    for (word, c) in expr.terms() {
        let vars = word
            .iter()
            .map(|op| FieldVar { site: op.site, flavor: op.flavor, conj: op.dagger })
            .collect();
        out.add_term(vars, c.clone());
    }
    out
}

/// Normal orders, then replaces: the exact coherent-state expectation value.
pub fn wick_symbol(expr: &OperatorExpr) -> Result<FieldPoly, SymbolError> {
    if expr.statistics() == Statistics::Fermi {
        return Err(SymbolError::GrassmannOutOfScope);
    }
    Ok(naive_symbol(&expr.normal_order()))
}

/// `wick_symbol(expr) − naive_symbol(expr)`
pub fn ordering_correction(expr: &OperatorExpr) -> Result<FieldPoly, SymbolError> {
    Ok(wick_symbol(expr)?.sub(&naive_symbol(expr)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Statistics = Statistics::Bose;

    fn sp() -> ModeSpace {
        ModeSpace::spinless(5)
    }

    fn a(i: i64) -> OperatorExpr {
        OperatorExpr::annihilator(sp(), B, i, 0)
    }

    fn ad(i: i64) -> OperatorExpr {
        OperatorExpr::creator(sp(), B, i, 0)
    }

    fn phi(i: usize) -> FieldVar {
        FieldVar { site: i, flavor: 0, conj: false }
    }

    fn phis(i: usize) -> FieldVar {
        FieldVar { site: i, flavor: 0, conj: true }
    }

    fn poly(terms: &[(&[FieldVar], i64)]) -> FieldPoly {
        let mut p = FieldPoly::zero(sp());
        for (v, c) in terms {
            p.add_term(v.to_vec(), ParamCoeff::int(*c));
        }
        p
    }

    #[test]
    fn naive_replacement_examples() {
        let e = ad(2).multiply(&a(2)).unwrap().multiply(&a(1)).unwrap();
        assert_eq!(naive_symbol(&e), poly(&[(&[phis(2), phi(2), phi(1)], 1)]));
        let e = a(1).multiply(&ad(1)).unwrap();
        assert_eq!(naive_symbol(&e), poly(&[(&[phis(1), phi(1)], 1)]));
    }

    #[test]
    fn wick_examples() {
        let e = a(1).multiply(&ad(1)).unwrap();
        assert_eq!(wick_symbol(&e).unwrap(), poly(&[(&[phis(1), phi(1)], 1), (&[], 1)]));
        let n = ad(1).multiply(&a(1)).unwrap();
        assert_eq!(wick_symbol(&n).unwrap(), naive_symbol(&n));
        assert!(ordering_correction(&n).unwrap().is_zero());

        let e = a(2).multiply(&ad(2)).unwrap().multiply(&a(1)).unwrap();
        assert_eq!(
            wick_symbol(&e).unwrap(),
            poly(&[(&[phis(2), phi(2), phi(1)], 1), (&[phi(1)], 1)])
        );
        assert_eq!(ordering_correction(&e).unwrap(), poly(&[(&[phi(1)], 1)]));
    }

    #[test]
    fn fermi_wick_is_rejected() {
        let f = OperatorExpr::annihilator(sp(), Statistics::Fermi, 0, 0);
        assert_eq!(wick_symbol(&f), Err(SymbolError::GrassmannOutOfScope));
        assert!(ordering_correction(&f).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut p = poly(&[(&[phis(2), phi(2), phi(1)], 3), (&[], -1)]);
        p.add_term(vec![phi(4)], ParamCoeff::parse("1/2*R[3,4] - s").unwrap());
        assert_eq!(FieldPoly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn compiled_eval() {
        let p = poly(&[(&[phis(1), phi(1)], 2), (&[phi(0)], 1)]);
        let mut st = vec![Complex64::new(0.0, 0.0); 5];
        st[0] = Complex64::new(0.5, 0.5);
        st[1] = Complex64::new(0.0, 2.0);
        let v = p.eval(&st, &Bindings::new()).unwrap();
        assert!((v - Complex64::new(8.5, 0.5)).norm() < 1e-15);
        assert!(p.eval(&st[..3], &Bindings::new()).is_err());
    }
}
