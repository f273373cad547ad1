//! Text form shared by operator expressions and field polynomials.
//!
//! ```text
//! expr   := stats " N=" int " F=" int ":" body
//! body   := "0" | term (" + " term)*
//! term   := "{" poly "}" factor*
//! factor := ("a" | "a+") "(" site ["," flavor] ")"
//! poly   := "0" | ["-"] mono (("+" | "-") mono)*
//! mono   := scalar ["*" sym ("*" sym)*] | sym ("*" sym)*
//! scalar := int ["/" int] | "(" complex ")"
//! sym    := ident ["[" int ("," int)* "]"] ["^" int]
//! ```

use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::coeff::{Monomial, ParamCoeff};
use super::expr::OperatorExpr;
use super::op::{LadderOp, ModeSpace, Statistics};
use super::scalar::CRational;
use super::OpAlgError;

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = self.space();
        write!(f, "{} N={} F={}: ", self.statistics(), sp.sites, sp.flavors)?;
        if self.is_zero() {
            return write!(f, "0");
        }
        let with_flavor = sp.flavors > 1;
        for (k, (w, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{{{c}}}")?;
            for op in w {
                write!(f, " ")?;
                op.write(f, with_flavor)?;
            }
        }
        Ok(())
    }
}

impl OperatorExpr {
    /// Inverse of the `Display` form.
    pub fn parse(text: &str) -> Result<OperatorExpr, OpAlgError> {
        let mut p = Parser::new(text);
        let stats = match p.ident()?.as_str() {
            "bose" => Statistics::Bose,
            "fermi" => Statistics::Fermi,
            other => return Err(p.error(&format!("unknown statistics `{other}`"))),
        };
        let space = p.space_header()?;
        let mut out = OperatorExpr::zero(space, stats);
        p.skip_ws();
        if p.eat('0') {
            p.expect_end()?;
            return Ok(out);
        }
        loop {
            let c = p.braced_poly()?;
            let mut word = Vec::new();
            loop {
                p.skip_ws();
                if p.peek() != Some('a') {
                    break;
                }
                p.bump();
                let dagger = p.eat('+');
                let (site, flavor) = p.site_args()?;
                let op = if dagger {
                    LadderOp::creator(&space, site, flavor)
                } else {
                    LadderOp::annihilator(&space, site, flavor)
                };
                word.push(op);
            }
            out.add_word(word, c);
            p.skip_ws();
            if !p.eat('+') {
                break;
            }
        }
        p.expect_end()?;
        Ok(out)
    }
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, chars: src.chars().collect(), pos: 0 }
    }

    pub(crate) fn error(&self, msg: &str) -> OpAlgError {
        OpAlgError::Parse { position: self.pos, message: format!("{msg} in `{}`", self.src) }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), OpAlgError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), OpAlgError> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(self.error("trailing input"));
        }
        Ok(())
    }

    pub(crate) fn ident(&mut self) -> Result<String, OpAlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            if self.pos == start && !self.peek().unwrap().is_ascii_alphabetic() {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    pub(crate) fn uint(&mut self) -> Result<BigInt, OpAlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>().map_err(|_| self.error("bad integer"))
    }

    pub(crate) fn small_uint(&mut self) -> Result<usize, OpAlgError> {
        let v = self.uint()?;
        usize::try_from(v).map_err(|_| self.error("integer out of range"))
    }

    fn int(&mut self) -> Result<i64, OpAlgError> {
        let neg = self.eat('-');
        let v = self.small_uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    /// ` N=<sites> F=<flavors>:`
    pub(crate) fn space_header(&mut self) -> Result<ModeSpace, OpAlgError> {
        let mut sites = None;
        let mut flavors = None;
        loop {
            self.skip_ws();
            if self.eat(':') {
                break;
            }
            let key = self.ident()?;
            self.expect('=')?;
            let v = self.small_uint()?;
            match key.as_str() {
                "N" => sites = Some(v),
                "F" => flavors = Some(v),
                _ => return Err(self.error(&format!("unknown header key `{key}`"))),
            }
        }
        let sites = sites.filter(|&n| n > 0).ok_or_else(|| self.error("missing N"))?;
        let flavors = flavors.unwrap_or(1).max(1);
        Ok(ModeSpace::new(sites, flavors))
    }

    /// `(site)` or `(site,flavor)`
    pub(crate) fn site_args(&mut self) -> Result<(i64, usize), OpAlgError> {
        self.expect('(')?;
        let site = self.int()?;
        let flavor = if self.eat(',') { self.small_uint()? } else { 0 };
        self.expect(')')?;
        Ok((site, flavor))
    }

    fn rational(&mut self) -> Result<BigRational, OpAlgError> {
        let num = self.uint()?;
        let den = if self.eat('/') { self.uint()? } else { BigInt::from(1) };
        if den.is_zero() {
            return Err(self.error("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }

    /// Contents of a parenthesized complex scalar, without the parentheses.
    fn complex_body(&mut self) -> Result<CRational, OpAlgError> {
        let neg = self.eat('-');
        let mut first = self.rational()?;
        if neg {
            first = -first;
        }
        if self.eat('i') {
            return Ok(CRational::new(BigRational::zero(), first));
        }
        let sign = if self.eat('+') {
            1
        } else if self.eat('-') {
            -1
        } else {
            return Ok(CRational::real(first));
        };
        let mut im = self.rational()?;
        if sign < 0 {
            im = -im;
        }
        self.expect('i')?;
        Ok(CRational::new(first, im))
    }

    fn symbol(&mut self) -> Result<(String, u32), OpAlgError> {
        let mut name = self.ident()?;
        if self.peek() == Some('[') {
            self.bump();
            name.push('[');
            loop {
                let neg = self.eat('-');
                let v = self.small_uint()?;
                if neg {
                    name.push('-');
                }
                write!(name, "{v}").unwrap();
                if self.eat(',') {
                    name.push(',');
                    continue;
                }
                self.expect(']')?;
                name.push(']');
                break;
            }
        }
        let power = if self.eat('^') { self.small_uint()? as u32 } else { 1 };
        Ok((name, power))
    }

    fn monomial(&mut self) -> Result<(Monomial, CRational), OpAlgError> {
        self.skip_ws();
        let mut scalar = CRational::one();
        let mut syms = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                scalar = CRational::real(self.rational()?);
                if !self.eat('*') {
                    return Ok((Monomial::unit(), scalar));
                }
            }
            Some('(') => {
                self.bump();
                scalar = self.complex_body()?;
                self.expect(')')?;
                if !self.eat('*') {
                    return Ok((Monomial::unit(), scalar));
                }
            }
            _ => {}
        }
        loop {
            syms.push(self.symbol()?);
            if !self.eat('*') {
                break;
            }
        }
        Ok((Monomial::from_powers(syms), scalar))
    }

    pub(crate) fn poly(&mut self) -> Result<ParamCoeff, OpAlgError> {
        self.skip_ws();
        let mut out = ParamCoeff::zero();
        let mut negate = self.eat('-');
        loop {
            let (m, c) = self.monomial()?;
            out.add_term(m, if negate { -c } else { c });
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                break;
            }
        }
        Ok(out)
    }

    pub(crate) fn braced_poly(&mut self) -> Result<ParamCoeff, OpAlgError> {
        self.expect('{')?;
        let c = self.poly()?;
        self.expect('}')?;
        Ok(c)
    }
}

impl ParamCoeff {
    pub fn parse(text: &str) -> Result<ParamCoeff, OpAlgError> {
        let mut p = Parser::new(text);
        let c = p.poly()?;
        p.expect_end()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_sample() {
        let sp = ModeSpace::new(5, 2);
        let mut e = OperatorExpr::zero(sp, Statistics::Fermi);
        let c = ParamCoeff::parse("-1/2*s*J[1,0] + (2-3i)*h[4]^2 + 7").unwrap();
        e.add_word(
            vec![LadderOp::creator(&sp, 1, 1), LadderOp::annihilator(&sp, 3, 0)],
            c,
        );
        e.add_word(vec![], ParamCoeff::parse("(1/3i)").unwrap());
        let text = e.to_string();
        assert_eq!(OperatorExpr::parse(&text).unwrap(), e);
    }

    #[test]
    fn zero_round_trip() {
        let e = OperatorExpr::zero(ModeSpace::spinless(7), Statistics::Bose);
        assert_eq!(e.to_string(), "bose N=7 F=1: 0");
        assert_eq!(OperatorExpr::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn rejects_garbage() {
        assert!(OperatorExpr::parse("bose N=3 F=1: {1} b(2)").is_err());
        assert!(OperatorExpr::parse("boson N=3: 0").is_err());
        assert!(ParamCoeff::parse("1/0").is_err());
    }
}
