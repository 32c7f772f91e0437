//! The free graded algebra spanned by words `θ…θ·S_m` at a fixed level `n`.
//!
//! Symbols are level-agnostic; the level (number of points) lives on
//! [`Element`]. Shifting an element to a lower level reuses its monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::coeff::{DPoly, Rational};
use crate::error::{AlgebraError, ParseError};

/// Künneth component of a Segre class of the universal ideal sheaf: paired
/// with the fundamental class (`T0`) or with the hyperplane class (`T1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    T0,
    T1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaSym {
    pub kind: Kind,
    pub index: u32,
}

impl ThetaSym {
    pub const fn t0(index: u32) -> Self {
        ThetaSym {
            kind: Kind::T0,
            index,
        }
    }

    pub const fn t1(index: u32) -> Self {
        ThetaSym {
            kind: Kind::T1,
            index,
        }
    }

    /// Codimension of the class; `θ_0^1` sits in codimension −1.
    pub fn degree(self) -> i64 {
        match self.kind {
            Kind::T0 => self.index as i64,
            Kind::T1 => self.index as i64 - 1,
        }
    }
}

impl fmt::Display for ThetaSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::T0 => write!(f, "t0_{}", self.index),
            Kind::T1 => write!(f, "t1_{}", self.index),
        }
    }
}

/// A multiset of θ-symbols times exactly one Segre factor `S_m`
/// (`S_0` is the unit).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    thetas: Vec<ThetaSym>,
    s_index: u32,
}

impl Monomial {
    pub fn new(mut thetas: Vec<ThetaSym>, s_index: u32) -> Self {
        thetas.sort_unstable();
        Monomial { thetas, s_index }
    }

    /// The bare Segre class `S_m`.
    pub fn segre(m: u32) -> Self {
        Monomial {
            thetas: Vec::new(),
            s_index: m,
        }
    }

    pub fn unit() -> Self {
        Monomial::segre(0)
    }

    pub fn thetas(&self) -> &[ThetaSym] {
        &self.thetas
    }

    pub fn s_index(&self) -> u32 {
        self.s_index
    }

    pub fn degree(&self) -> i64 {
        self.thetas.iter().map(|t| t.degree()).sum::<i64>() + self.s_index as i64
    }

    /// `(w, i)`: number of θ-factors and number of those of kind `T0`.
    pub fn signature(&self) -> (usize, usize) {
        let i = self.thetas.iter().filter(|t| t.kind == Kind::T0).count();
        (self.thetas.len(), i)
    }

    pub fn count_t1(&self) -> usize {
        self.thetas.iter().filter(|t| t.kind == Kind::T1).count()
    }

    /// Same θ-factors with a different Segre index.
    pub fn with_s(&self, s_index: u32) -> Monomial {
        Monomial {
            thetas: self.thetas.clone(),
            s_index,
        }
    }

    /// θ-factors with the listed positions removed (positions must be distinct).
    pub(crate) fn thetas_without(&self, skip: &[usize]) -> Vec<ThetaSym> {
        self.thetas
            .iter()
            .enumerate()
            .filter(|(pos, _)| !skip.contains(pos))
            .map(|(_, t)| *t)
            .collect()
    }

    /// Builds `base ∪ extra` with Segre index `s`.
    pub(crate) fn assemble(base: &[ThetaSym], extra: &[ThetaSym], s: u32) -> Monomial {
        let mut thetas = Vec::with_capacity(base.len() + extra.len());
        thetas.extend_from_slice(base);
        thetas.extend_from_slice(extra);
        Monomial::new(thetas, s)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.thetas {
            write!(f, "{t}*")?;
        }
        write!(f, "S_{}", self.s_index)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Monomial {
    type Err = ParseError;

    /// Parses the rendering produced by `Display`, e.g. `t0_3*t1_2*S_4`.
    /// A missing `S_m` factor means `S_0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Monomial(s.to_string());
        let mut thetas = Vec::new();
        let mut s_index = None;
        for factor in s.split('*').map(str::trim) {
            let (head, idx) = factor.split_once('_').ok_or_else(bad)?;
            let idx: u32 = idx.parse().map_err(|_| bad())?;
            match head {
                "t0" => thetas.push(ThetaSym::t0(idx)),
                "t1" => thetas.push(ThetaSym::t1(idx)),
                "S" if s_index.is_none() => s_index = Some(idx),
                _ => return Err(bad()),
            }
        }
        Ok(Monomial::new(thetas, s_index.unwrap_or(0)))
    }
}

/// Which vanishing and normalization rules apply to an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rules {
    /// When false the element is left completely raw: `θ_0^0` factors are
    /// kept and nothing is killed. Used for grading bookkeeping.
    pub normalize: bool,
    /// Dimension vanishing on `S^[n]` (classes of codimension above `2n`,
    /// and `θ_0^1`).
    pub prune: bool,
    /// `θ_1^0 = θ_1^1 = 0` since the ideal sheaf has trivial determinant.
    pub kill_theta_one: bool,
}

impl Default for Rules {
    fn default() -> Self {
        Rules {
            normalize: true,
            prune: true,
            kill_theta_one: false,
        }
    }
}

impl Rules {
    pub const RAW: Rules = Rules {
        normalize: false,
        prune: false,
        kill_theta_one: false,
    };

    /// Normal form of one monomial at `level`, or `None` if it vanishes.
    pub fn normalize_monomial(&self, mon: &Monomial, level: u32) -> Option<Monomial> {
        if !self.normalize {
            return Some(mon.clone());
        }
        let top = 2 * level as i64;
        let mut out = Vec::with_capacity(mon.thetas.len());
        for &t in &mon.thetas {
            if t == ThetaSym::t0(0) {
                continue;
            }
            if level == 0 {
                return None;
            }
            if self.prune && (t == ThetaSym::t1(0) || t.degree() > top) {
                return None;
            }
            if self.kill_theta_one && t.index == 1 {
                return None;
            }
            out.push(t);
        }
        if level == 0 && mon.s_index > 0 {
            return None;
        }
        if self.prune && (mon.s_index as i64 > top || mon.degree() > top) {
            return None;
        }
        Some(Monomial {
            thetas: out,
            s_index: mon.s_index,
        })
    }
}

/// A formal class at level `n`: a finite `Monomial → DPoly` map without zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    level: u32,
    terms: BTreeMap<Monomial, DPoly>,
}

impl Element {
    pub fn zero(level: u32) -> Self {
        Element {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(level: u32, mon: Monomial, coeff: DPoly) -> Self {
        let mut e = Element::zero(level);
        e.add_term(mon, coeff);
        e
    }

    /// `S_m` at level `n` with coefficient 1.
    pub fn segre(level: u32, m: u32) -> Self {
        Element::monomial(level, Monomial::segre(m), DPoly::one())
    }

    pub fn level(&self) -> u32 {
        self.level
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &DPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mon: &Monomial) -> DPoly {
        self.terms.get(mon).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mon: Monomial, coeff: DPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mon) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `coeff · mon` after normalizing `mon` at this element's level.
    pub fn add_normalized(&mut self, mon: Monomial, coeff: DPoly, rules: &Rules) {
        if let Some(mon) = rules.normalize_monomial(&mon, self.level) {
            self.add_term(mon, coeff);
        }
    }

    /// Adds every term of `other`. Levels must agree.
    pub fn merge(&mut self, other: Element) {
        debug_assert_eq!(self.level, other.level);
        if self.terms.is_empty() {
            self.terms = other.terms;
            return;
        }
        for (m, c) in other.terms {
            self.add_term(m, c);
        }
    }

    pub fn normalize(&self, rules: &Rules) -> Element {
        let mut out = Element::zero(self.level);
        for (m, c) in &self.terms {
            out.add_normalized(m.clone(), c.clone(), rules);
        }
        out
    }

    /// The same formal class read at another level (the shift `[k]`).
    pub fn at_level(&self, level: u32) -> Element {
        Element {
            level,
            terms: self.terms.clone(),
        }
    }

    pub fn scale(&self, c: &DPoly) -> Element {
        let mut out = Element::zero(self.level);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Lowers every Segre index by one; `S_0` terms vanish.
    pub fn shift_s(&self) -> Element {
        let mut out = Element::zero(self.level);
        for (m, c) in &self.terms {
            if m.s_index > 0 {
                out.add_term(m.with_s(m.s_index - 1), c.clone());
            }
        }
        out
    }

    /// Product in the algebra. At most one factor may carry terms with a
    /// positive Segre index.
    pub fn mul(&self, other: &Element, rules: &Rules) -> Result<Element, AlgebraError> {
        if self.level != other.level {
            return Err(AlgebraError::LevelMismatch(self.level, other.level));
        }
        let has_s = |e: &Element| e.terms.keys().any(|m| m.s_index > 0);
        if has_s(self) && has_s(other) {
            return Err(AlgebraError::TwoSegreFactors);
        }
        let mut out = Element::zero(self.level);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mon = Monomial::assemble(&ma.thetas, &mb.thetas, ma.s_index + mb.s_index);
                out.add_normalized(mon, ca * cb, rules);
            }
        }
        Ok(out)
    }

    /// Coefficients that are not divisible by `(d − 3)`, with their monomials.
    pub fn non_divisible_terms(&self) -> impl Iterator<Item = (&Monomial, &DPoly)> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_divisible_by_d_minus_3())
    }

    pub fn max_abs_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            level: self.level,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}] ", self.level)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Convenience: an element with integer coefficients from `(monomial, c)` pairs.
pub fn element_from(level: u32, terms: &[(&str, i64)]) -> Element {
    let mut e = Element::zero(level);
    for (m, c) in terms {
        e.add_term(
            m.parse().expect("valid monomial"),
            DPoly::constant(Rational::from(*c)),
        );
    }
    e
}
