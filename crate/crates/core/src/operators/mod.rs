//! The graded pieces `δ_0 … δ_3` of the pushforward–pullback map
//! `f: B(n+1) → B(n)`, their sum, the Segre shift, and commutator calculus.
//!
//! Every δ takes an element at level `n + 1` and returns one at level `n`.
//! Level-0 inputs map to zero. Sums over positions in a monomial run over
//! occurrences, so a repeated symbol contributes once per copy (and δ₃ once
//! per unordered pair of copies).

mod closed_form;
mod expr;

pub use closed_form::{chain_closed_form, compositions, double_chain_closed_form};
pub use expr::{sum_over_chains, OpExpr};

use rayon::prelude::*;

use crate::coeff::{DPoly, Rational};
use crate::symalg::{Element, Kind, Monomial, Rules, ThetaSym};

/// How the curve degree `d` enters coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DValue {
    Symbolic,
    Fixed(Rational),
}

/// Evaluation settings shared by all operators.
#[derive(Clone, Debug)]
pub struct OpContext {
    pub d: DValue,
    pub rules: Rules,
    /// Fan out over monomials with rayon for large inputs.
    pub parallel: bool,
}

impl Default for OpContext {
    fn default() -> Self {
        OpContext {
            d: DValue::Symbolic,
            rules: Rules::default(),
            parallel: true,
        }
    }
}

const PARALLEL_THRESHOLD: usize = 64;

impl OpContext {
    pub fn raw() -> Self {
        OpContext {
            rules: Rules::RAW,
            ..OpContext::default()
        }
    }

    pub fn with_rules(rules: Rules) -> Self {
        OpContext {
            rules,
            ..OpContext::default()
        }
    }

    pub fn fixed(d: i64) -> Self {
        OpContext {
            d: DValue::Fixed(Rational::from(d)),
            ..OpContext::default()
        }
    }

    /// The coefficient standing for `d`.
    pub fn d_poly(&self) -> DPoly {
        match &self.d {
            DValue::Symbolic => DPoly::d(),
            DValue::Fixed(v) => DPoly::constant(v.clone()),
        }
    }
}

/// One raw output term of a δ on a single monomial: the monomial, an integer
/// factor, and whether the factor carries one power of `d`.
type RawTerm = (Monomial, i64, bool);

fn delta0_monomial(mon: &Monomial, out: &mut Vec<RawTerm>) {
    let m = mon.s_index();
    for t in 0..m {
        let next = Monomial::assemble(mon.thetas(), &[ThetaSym::t1(t)], m - t - 1);
        out.push((next, -1, true));
    }
}

fn delta1_monomial(mon: &Monomial, out: &mut Vec<RawTerm>) {
    let m = mon.s_index();
    for (pos, sym) in mon.thetas().iter().enumerate() {
        let l = sym.index;
        if l < 2 {
            continue;
        }
        let base = mon.thetas_without(&[pos]);
        for t in 0..=l - 2 {
            let (extra, c) = match sym.kind {
                Kind::T1 => ([ThetaSym::t0(l - t - 2), ThetaSym::t1(t)], -(l as i64)),
                Kind::T0 => ([ThetaSym::t0(l - t - 2), ThetaSym::t0(t)], -(t as i64 + 1)),
            };
            out.push((Monomial::assemble(&base, &extra, m), c, false));
        }
    }
}

fn delta2_monomial(mon: &Monomial, out: &mut Vec<RawTerm>) {
    let m = mon.s_index();
    for (pos, sym) in mon.thetas().iter().enumerate() {
        let l = sym.index;
        if sym.kind != Kind::T1 || l < 2 {
            continue;
        }
        let base = mon.thetas_without(&[pos]);
        for t in 0..=l - 2 {
            for a in 0..m {
                let extra = [ThetaSym::t0(l - t - 2), ThetaSym::t0(a + t)];
                out.push((
                    Monomial::assemble(&base, &extra, m - a - 1),
                    t as i64 + 1,
                    true,
                ));
            }
        }
        if l >= 3 {
            for t in 0..=l - 3 {
                let t = t as i64;
                let extra = [ThetaSym::t0(l - t as u32 - 3), ThetaSym::t0(t as u32)];
                out.push((
                    Monomial::assemble(&base, &extra, m),
                    -3 * (t + 1) * (t + 2) / 2,
                    false,
                ));
            }
        }
    }
}

fn delta3_monomial(mon: &Monomial, out: &mut Vec<RawTerm>) {
    let m = mon.s_index();
    let thetas = mon.thetas();
    for j in 0..thetas.len() {
        if thetas[j].kind != Kind::T1 || thetas[j].index < 2 {
            continue;
        }
        for k in j + 1..thetas.len() {
            if thetas[k].kind != Kind::T1 || thetas[k].index < 2 {
                continue;
            }
            let (lj, lk) = (thetas[j].index, thetas[k].index);
            let base = mon.thetas_without(&[j, k]);
            for t in 0..=lk - 2 {
                for a in 0..=lj - 2 {
                    let extra = [
                        ThetaSym::t0(lk - t - 2),
                        ThetaSym::t0(lj - a - 2),
                        ThetaSym::t0(a + t),
                    ];
                    let c = (t as i64 + 1) * (a as i64 + 1);
                    out.push((Monomial::assemble(&base, &extra, m), c, false));
                }
            }
        }
    }
}

fn expand_monomial(which: &[u8], mon: &Monomial, out: &mut Vec<RawTerm>) {
    for &j in which {
        match j {
            0 => delta0_monomial(mon, out),
            1 => delta1_monomial(mon, out),
            2 => delta2_monomial(mon, out),
            3 => delta3_monomial(mon, out),
            _ => panic!("no operator δ_{j}"),
        }
    }
}

/// Applies `Σ_{j ∈ which} δ_j` to `e`, one monomial at a time.
fn apply_deltas(which: &[u8], e: &Element, ctx: &OpContext) -> Element {
    if e.level() == 0 {
        return Element::zero(0);
    }
    let target = e.level() - 1;
    let d = ctx.d_poly();
    let expand = |(mon, coeff): (&Monomial, &DPoly)| {
        let mut raw = Vec::new();
        expand_monomial(which, mon, &mut raw);
        let with_d = coeff * &d;
        let mut local = Element::zero(target);
        for (m, c, has_d) in raw {
            let base = if has_d { &with_d } else { coeff };
            local.add_normalized(m, base.scale(&Rational::from(c)), &ctx.rules);
        }
        local
    };
    if ctx.parallel && e.len() >= PARALLEL_THRESHOLD {
        let terms: Vec<_> = e.terms().collect();
        terms.into_par_iter().map(expand).reduce(
            || Element::zero(target),
            |mut a, b| {
                a.merge(b);
                a
            },
        )
    } else {
        let mut acc = Element::zero(target);
        for term in e.terms() {
            acc.merge(expand(term));
        }
        acc
    }
}

pub fn delta0(e: &Element, ctx: &OpContext) -> Element {
    apply_deltas(&[0], e, ctx)
}

pub fn delta1(e: &Element, ctx: &OpContext) -> Element {
    apply_deltas(&[1], e, ctx)
}

pub fn delta2(e: &Element, ctx: &OpContext) -> Element {
    apply_deltas(&[2], e, ctx)
}

pub fn delta3(e: &Element, ctx: &OpContext) -> Element {
    apply_deltas(&[3], e, ctx)
}

pub fn delta(j: u8, e: &Element, ctx: &OpContext) -> Element {
    apply_deltas(&[j], e, ctx)
}

/// The full pushforward `f = δ_0 + δ_1 + δ_2 + δ_3`.
pub fn pushf(e: &Element, ctx: &OpContext) -> Element {
    apply_deltas(&[0, 1, 2, 3], e, ctx)
}

/// The Segre shift `(1)`: `S_m ↦ S_{m−1}`, with `S_{−1} = 0`.
pub fn shift_s(e: &Element) -> Element {
    e.shift_s()
}

/// Evaluates an operator expression on `e`.
pub fn apply_op(op: &OpExpr, e: &Element, ctx: &OpContext) -> Element {
    let target = e.level().saturating_sub(op.level_drop());
    match op {
        OpExpr::Base(j) => delta(*j, e, ctx),
        OpExpr::Sum(parts) => {
            let mut acc = Element::zero(target);
            for p in parts {
                acc.merge(apply_op(p, e, ctx).at_level(target));
            }
            acc
        }
        OpExpr::Compose(parts) => parts
            .iter()
            .rev()
            .fold(e.clone(), |cur, p| apply_op(p, &cur, ctx)),
        OpExpr::Ad(j, inner) => {
            let left = delta(*j, &apply_op(inner, e, ctx), ctx);
            let right = apply_op(inner, &delta(*j, e, ctx), ctx);
            (&left - &right).at_level(target)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::element_from;

    fn ctx() -> OpContext {
        OpContext::default()
    }

    fn d_elem(level: u32, terms: &[(&str, &[i64])]) -> Element {
        let mut e = Element::zero(level);
        for (m, c) in terms {
            e.add_term(m.parse().unwrap(), DPoly::from_i64s(c));
        }
        e
    }

    #[test]
    fn delta0_examples() {
        let out = delta0(&Element::segre(2, 4), &OpContext::raw());
        let expect = d_elem(
            1,
            &[
                ("t1_0*S_3", &[0, -1]),
                ("t1_1*S_2", &[0, -1]),
                ("t1_2*S_1", &[0, -1]),
                ("t1_3*S_0", &[0, -1]),
            ],
        );
        assert_eq!(out, expect);
        assert!(delta0(&Element::segre(5, 0), &ctx()).is_zero());
        let raw = delta0(&element_from(3, &[("t1_2*S_1", 1)]), &OpContext::raw());
        assert_eq!(raw, d_elem(2, &[("t1_0*t1_2*S_0", &[0, -1])]));
        assert!(delta0(&element_from(3, &[("t1_2*S_1", 1)]), &ctx()).is_zero());
    }

    #[test]
    fn delta1_examples() {
        assert!(delta1(&Element::segre(3, 4), &ctx()).is_zero());
        let out = delta1(&element_from(3, &[("t1_3*S_0", 1)]), &OpContext::raw());
        assert_eq!(
            out,
            element_from(2, &[("t0_1*t1_0*S_0", -3), ("t0_0*t1_1*S_0", -3)])
        );
        let out = delta1(&element_from(3, &[("t0_2*S_0", 1)]), &ctx());
        assert_eq!(out, element_from(2, &[("S_0", -1)]));
    }

    #[test]
    fn delta2_examples() {
        let out = delta2(&element_from(3, &[("t1_2*S_1", 1)]), &ctx());
        assert_eq!(out, d_elem(2, &[("S_0", &[0, 1])]));
        let out = delta2(&element_from(3, &[("t1_3*S_0", 1)]), &ctx());
        assert_eq!(out, element_from(2, &[("S_0", -3)]));
        assert!(delta2(&element_from(3, &[("t0_4*S_3", 1)]), &ctx()).is_zero());
    }

    #[test]
    fn delta3_examples() {
        let out = delta3(&element_from(3, &[("t1_2*t1_2*S_0", 1)]), &ctx());
        assert_eq!(out, element_from(2, &[("S_0", 1)]));
        assert!(delta3(&element_from(3, &[("t1_2*S_4", 1)]), &ctx()).is_zero());
        let out = delta3(&element_from(3, &[("t1_2*t1_3*S_0", 1)]), &ctx());
        assert_eq!(out, element_from(2, &[("t0_1*S_0", 3)]));
    }

    #[test]
    fn delta3_counts_each_unordered_pair_of_copies() {
        // three copies of θ_2^1 give C(3,2) = 3 pairs
        let out = delta3(&element_from(3, &[("t1_2*t1_2*t1_2*S_0", 1)]), &ctx());
        assert_eq!(out, element_from(2, &[("t1_2*S_0", 3)]));
    }

    #[test]
    fn level_zero_inputs_vanish() {
        let e = element_from(0, &[("S_0", 1)]);
        for j in 0..4 {
            assert!(delta(j, &e, &ctx()).is_zero());
        }
    }

    #[test]
    fn pushf_examples() {
        let out = pushf(&Element::segre(2, 4), &ctx());
        // θ_0^1 is pruned at level 1
        let expect = d_elem(
            1,
            &[
                ("t1_1*S_2", &[0, -1]),
                ("t1_2*S_1", &[0, -1]),
                ("t1_3*S_0", &[0, -1]),
            ],
        );
        assert_eq!(out, expect);
        let out = pushf(&element_from(1, &[("t1_2*S_1", 1)]), &ctx());
        assert_eq!(out, d_elem(0, &[("S_0", &[0, 1])]));
        let out = pushf(&element_from(1, &[("t1_3*S_0", 1)]), &ctx());
        assert_eq!(out, element_from(0, &[("S_0", -3)]));
    }

    #[test]
    fn fixed_d_matches_symbolic_evaluation() {
        let e = element_from(4, &[("t1_3*t1_4*S_3", 2), ("t0_2*t1_2*S_5", -1)]);
        let sym = pushf(&pushf(&e, &ctx()), &ctx());
        let fixed = pushf(&pushf(&e, &OpContext::fixed(5)), &OpContext::fixed(5));
        let mut evaluated = Element::zero(sym.level());
        for (m, c) in sym.terms() {
            evaluated.add_term(m.clone(), DPoly::constant(c.eval(&5.into())));
        }
        assert_eq!(evaluated, fixed);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let mut e = Element::zero(6);
        for a in 2..8u32 {
            for b in 2..8u32 {
                for s in 0..4u32 {
                    let m = Monomial::new(
                        vec![ThetaSym::t1(a), ThetaSym::t1(b), ThetaSym::t0(a + b)],
                        s,
                    );
                    e.add_term(m, DPoly::from_i64s(&[a as i64, -(b as i64)]));
                }
            }
        }
        assert!(e.len() >= PARALLEL_THRESHOLD);
        let serial = OpContext {
            parallel: false,
            ..ctx()
        };
        assert_eq!(pushf(&e, &serial), pushf(&e, &ctx()));
    }

    #[test]
    fn apply_op_semantics() {
        let c = ctx();
        let s4 = Element::segre(2, 4);
        let twice = OpExpr::Compose(vec![OpExpr::Base(0), OpExpr::Base(0)]);
        assert_eq!(apply_op(&twice, &s4, &c), delta0(&delta0(&s4, &c), &c));
        let b = element_from(4, &[("t1_3*S_3", 1)]);
        let ad = OpExpr::Ad(0, Box::new(OpExpr::Base(2)));
        let expect = &delta0(&delta2(&b, &c), &c) - &delta2(&delta0(&b, &c), &c);
        assert_eq!(apply_op(&ad, &b, &c), expect);
        let empty = apply_op(&OpExpr::Sum(vec![]), &b, &c);
        assert!(empty.is_zero());
        assert_eq!(apply_op(&OpExpr::Compose(vec![]), &b, &c), b);
    }
}
