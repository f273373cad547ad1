use std::collections::BTreeMap;

use super::coeff::ParamCoeff;
use super::op::{LadderOp, ModeSpace, Statistics};
use super::scalar::CRational;
use super::OpAlgError;

/// Ordered product of ladder operators.
pub type Word = Vec<LadderOp>;

/// Canonical representative of `word` under free reorderings.
///
/// Only adjacent swaps of factors that (anti)commute exactly are used, so the
/// result is the same operator; creator/annihilator pairs on a shared mode
/// keep their relative order. Among all reachable orderings the
/// lexicographically smallest (by [`LadderOp`] order) is chosen. Returns
/// `None` for a fermionic word that vanishes identically, and otherwise the
/// word plus a flag telling whether the reordering flipped the sign.
pub fn canonical_word(word: &[LadderOp], stats: Statistics) -> Option<(Word, bool)> {
    if stats == Statistics::Fermi && fermi_vanishes(word) {
        return None;
    }
    let mut rest: Vec<LadderOp> = word.to_vec();
    let mut out = Vec::with_capacity(word.len());
    let mut negate = false;
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for r in 0..rest.len() {
            if !rest[..r].iter().all(|q| q.swappable(&rest[r])) {
                continue;
            }
            match best {
                Some(b) if rest[b] <= rest[r] => {}
                _ => best = Some(r),
            }
        }
        let b = best.expect("first remaining factor is always available");
        if stats == Statistics::Fermi && b % 2 == 1 {
            negate = !negate;
        }
        out.push(rest.remove(b));
    }
    Some((out, negate))
}

/// A fermionic word is zero when two identical factors can be brought
/// together, i.e. no adjoint factor sits between them.
fn fermi_vanishes(word: &[LadderOp]) -> bool {
    for p in 0..word.len() {
        for q in p + 1..word.len() {
            if word[q] == word[p] {
                let blocked = word[p + 1..q].iter().any(|x| *x == word[p].adjoint());
                if !blocked {
                    return true;
                }
            }
        }
    }
    false
}

/// Finite sum of `ParamCoeff × word` terms in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorExpr {
    stats: Statistics,
    space: ModeSpace,
    terms: BTreeMap<Word, ParamCoeff>,
}

impl OperatorExpr {
    pub fn zero(space: ModeSpace, stats: Statistics) -> Self {
        Self { stats, space, terms: BTreeMap::new() }
    }

    pub fn scalar(space: ModeSpace, stats: Statistics, c: ParamCoeff) -> Self {
        let mut out = Self::zero(space, stats);
        out.add_word(Vec::new(), c);
        out
    }

    pub fn identity(space: ModeSpace, stats: Statistics) -> Self {
        Self::scalar(space, stats, ParamCoeff::one())
    }

    pub fn word(space: ModeSpace, stats: Statistics, word: &[LadderOp], c: ParamCoeff) -> Self {
        let mut out = Self::zero(space, stats);
        out.add_word(word.to_vec(), c);
        out
    }

    /// `a_{site,flavor}`
    pub fn annihilator(space: ModeSpace, stats: Statistics, site: i64, flavor: usize) -> Self {
        let op = LadderOp::annihilator(&space, site, flavor);
        Self::word(space, stats, &[op], ParamCoeff::one())
    }

    /// `a†_{site,flavor}`
    pub fn creator(space: ModeSpace, stats: Statistics, site: i64, flavor: usize) -> Self {
        let op = LadderOp::creator(&space, site, flavor);
        Self::word(space, stats, &[op], ParamCoeff::one())
    }

    /// `n̂ = a† a`
    pub fn number(space: ModeSpace, stats: Statistics, site: i64, flavor: usize) -> Self {
        let w = [LadderOp::creator(&space, site, flavor), LadderOp::annihilator(&space, site, flavor)];
        Self::word(space, stats, &w, ParamCoeff::one())
    }

    pub fn statistics(&self) -> Statistics {
        self.stats
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ParamCoeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[LadderOp]) -> ParamCoeff {
        match canonical_word(word, self.stats) {
            Some((w, neg)) => {
                let c = self.terms.get(&w).cloned().unwrap_or_default();
                if neg {
                    -c
                } else {
                    c
                }
            }
            None => ParamCoeff::zero(),
        }
    }

    /// Adds `c · word`, canonicalizing the word and merging like terms.
    pub fn add_word(&mut self, word: Word, c: ParamCoeff) {
        if c.is_zero() {
            return;
        }
        let Some((w, neg)) = canonical_word(&word, self.stats) else {
            return;
        };
        let c = if neg { -c } else { c };
        self.add_canonical(w, c);
    }

    fn add_canonical(&mut self, w: Word, c: ParamCoeff) {
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing = &*existing + &c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(w, c);
                }
            }
        }
    }

    fn check_compatible(&self, other: &OperatorExpr) -> Result<(), OpAlgError> {
        if self.stats != other.stats {
            return Err(OpAlgError::StatisticsMismatch(self.stats, other.stats));
        }
        if self.space != other.space {
            return Err(OpAlgError::LatticeMismatch {
                left: self.space.sites,
                right: other.space.sites,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &OperatorExpr) -> Result<OperatorExpr, OpAlgError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_canonical(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OperatorExpr) -> Result<OperatorExpr, OpAlgError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OperatorExpr {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &ParamCoeff) -> OperatorExpr {
        let mut out = Self::zero(self.space, self.stats);
        for (w, v) in &self.terms {
            out.add_canonical(w.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &CRational) -> OperatorExpr {
        self.map_coeffs(|v| v.scale(c))
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs<F: Fn(&ParamCoeff) -> ParamCoeff>(&self, f: F) -> OperatorExpr {
        let mut out = Self::zero(self.space, self.stats);
        for (w, v) in &self.terms {
            out.add_canonical(w.clone(), f(v));
        }
        out
    }

    /// Distributed, canonicalized product `self · other`.
    pub fn multiply(&self, other: &OperatorExpr) -> Result<OperatorExpr, OpAlgError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.space, self.stats);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_word(w, c1 * c2);
            }
        }
        Ok(out)
    }

    /// `[self, other] = self·other − other·self`, normal ordered.
    pub fn commutator(&self, other: &OperatorExpr) -> Result<OperatorExpr, OpAlgError> {
        let ab = self.multiply(other)?;
        let ba = other.multiply(self)?;
        Ok(ab.sub(&ba)?.normal_order())
    }

    /// `{self, other} = self·other + other·self`, normal ordered.
    pub fn anticommutator(&self, other: &OperatorExpr) -> Result<OperatorExpr, OpAlgError> {
        let ab = self.multiply(other)?;
        let ba = other.multiply(self)?;
        Ok(ab.add(&ba)?.normal_order())
    }

    /// Rewrites every term with all creators left of all annihilators,
    /// generating contraction terms (and permutation signs for fermions).
    pub fn normal_order(&self) -> OperatorExpr {
        let mut out = Self::zero(self.space, self.stats);
        let mut work: Vec<(Word, ParamCoeff)> =
            self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        while let Some((w, c)) = work.pop() {
            let pos = w.windows(2).position(|p| !p[0].dagger && p[1].dagger);
            let Some(p) = pos else {
                out.add_word(w, c);
                continue;
            };
            let (x, y) = (w[p], w[p + 1]);
            let mut swapped = w.clone();
            swapped.swap(p, p + 1);
            let fermi = self.stats == Statistics::Fermi;
            work.push((swapped, if fermi { -c.clone() } else { c.clone() }));
            if x.same_mode(&y) {
                let mut contracted = w;
                contracted.drain(p..p + 2);
                work.push((contracted, c));
            }
        }
        out
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms
            .keys()
            .all(|w| !w.windows(2).any(|p| !p[0].dagger && p[1].dagger))
    }

    /// Formal adjoint: reverse factors, toggle daggers, conjugate scalars.
    pub fn adjoint(&self) -> OperatorExpr {
        let mut out = Self::zero(self.space, self.stats);
        for (w, c) in &self.terms {
            let rev: Word = w.iter().rev().map(LadderOp::adjoint).collect();
            out.add_word(rev, c.conj());
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_creators(&self) -> usize {
        self.terms
            .keys()
            .map(|w| w.iter().filter(|o| o.dagger).count())
            .max()
            .unwrap_or(0)
    }

    /// Terms whose words have exactly `degree` factors.
    pub fn degree_part(&self, degree: usize) -> OperatorExpr {
        let mut out = Self::zero(self.space, self.stats);
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == degree) {
            out.add_canonical(w.clone(), c.clone());
        }
        out
    }

    /// Same terms under the other statistics, re-canonicalized.
    pub fn with_statistics(&self, stats: Statistics) -> OperatorExpr {
        let mut out = Self::zero(self.space, stats);
        for (w, c) in &self.terms {
            out.add_word(w.clone(), c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Statistics = Statistics::Bose;
    const F: Statistics = Statistics::Fermi;

    fn sp() -> ModeSpace {
        ModeSpace::spinless(4)
    }

    #[test]
    fn creator_times_annihilator_is_already_canonical() {
        let p = OperatorExpr::creator(sp(), B, 1, 0)
            .multiply(&OperatorExpr::annihilator(sp(), B, 1, 0))
            .unwrap();
        assert_eq!(p, OperatorExpr::number(sp(), B, 1, 0));
    }

    #[test]
    fn product_with_zero_vanishes() {
        let sum = OperatorExpr::annihilator(sp(), B, 1, 0)
            .add(&OperatorExpr::annihilator(sp(), B, 2, 0))
            .unwrap();
        assert!(sum.multiply(&OperatorExpr::zero(sp(), B)).unwrap().is_zero());
    }

    #[test]
    fn fermion_square_vanishes() {
        let a = OperatorExpr::annihilator(sp(), F, 1, 0);
        assert!(a.multiply(&a).unwrap().is_zero());
    }

    #[test]
    fn fermion_repeat_separated_by_adjoint_survives() {
        let a = OperatorExpr::annihilator(sp(), F, 1, 0);
        let ad = OperatorExpr::creator(sp(), F, 1, 0);
        let w = a.multiply(&ad).unwrap().multiply(&a).unwrap();
        assert!(!w.is_zero());
        // a a† a = a for a single fermion mode
        assert_eq!(w.normal_order(), a);
    }

    #[test]
    fn same_mode_order_is_preserved() {
        let a = OperatorExpr::annihilator(sp(), B, 1, 0);
        let ad = OperatorExpr::creator(sp(), B, 1, 0);
        let p = a.multiply(&ad).unwrap();
        assert!(!p.is_normal_ordered());
        assert_ne!(p, OperatorExpr::number(sp(), B, 1, 0));
    }

    #[test]
    fn bose_commutator_basics() {
        let a = OperatorExpr::annihilator(sp(), B, 2, 0);
        let ad = OperatorExpr::creator(sp(), B, 2, 0);
        assert_eq!(a.commutator(&ad).unwrap(), OperatorExpr::identity(sp(), B));
        let n = OperatorExpr::number(sp(), B, 2, 0);
        assert_eq!(n.commutator(&a).unwrap(), a.neg());
    }

    #[test]
    fn normal_order_examples() {
        let a1 = OperatorExpr::annihilator(sp(), B, 1, 0);
        let ad1 = OperatorExpr::creator(sp(), B, 1, 0);
        let ad2 = OperatorExpr::creator(sp(), B, 2, 0);
        let id = OperatorExpr::identity(sp(), B);
        let n1 = OperatorExpr::number(sp(), B, 1, 0);
        assert_eq!(a1.multiply(&ad1).unwrap().normal_order(), n1.add(&id).unwrap());
        let expect = ad2.multiply(&a1).unwrap();
        assert_eq!(a1.multiply(&ad2).unwrap().normal_order(), expect);

        let fa = OperatorExpr::annihilator(sp(), F, 1, 0);
        let fad = OperatorExpr::creator(sp(), F, 1, 0);
        let fid = OperatorExpr::identity(sp(), F);
        let fn1 = OperatorExpr::number(sp(), F, 1, 0);
        assert_eq!(fa.multiply(&fad).unwrap().normal_order(), fid.sub(&fn1).unwrap());
    }

    #[test]
    fn fermion_anticommutators() {
        let a1 = OperatorExpr::annihilator(sp(), F, 1, 0);
        let ad1 = OperatorExpr::creator(sp(), F, 1, 0);
        let ad3 = OperatorExpr::creator(sp(), F, 3, 0);
        assert_eq!(a1.anticommutator(&ad1).unwrap(), OperatorExpr::identity(sp(), F));
        assert!(a1.anticommutator(&ad3).unwrap().is_zero());
        assert!(a1.anticommutator(&a1).unwrap().is_zero());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = OperatorExpr::annihilator(sp(), B, 1, 0);
        let f = OperatorExpr::annihilator(sp(), F, 1, 0);
        assert!(matches!(a.multiply(&f), Err(OpAlgError::StatisticsMismatch(..))));
        let other = OperatorExpr::annihilator(ModeSpace::spinless(5), B, 1, 0);
        assert!(matches!(a.commutator(&other), Err(OpAlgError::LatticeMismatch { .. })));
    }

    #[test]
    fn sites_wrap_periodically() {
        let a = OperatorExpr::annihilator(sp(), B, -1, 0);
        assert_eq!(a, OperatorExpr::annihilator(sp(), B, 3, 0));
    }
}
