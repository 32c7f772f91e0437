//! Coefficient-wise divisibility checkers. Each builds an operator, applies it
//! to `S_m(n)` with symbolic `d`, and inspects every coefficient. A failure
//! carries the offending monomial instead of a bare `false`.

use std::fmt;

use crate::coeff::DPoly;
use crate::error::PreconditionError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::operators::{apply_op, delta, sum_over_chains, OpContext, OpExpr};
use crate::symalg::{Element, Monomial, Rules, ThetaSym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub monomial: String,
    pub coefficient: DPoly,
    pub reason: &'static str,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} with coefficient {}",
            self.reason, self.monomial, self.coefficient
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub passed: bool,
    /// Number of surviving terms in the checked element.
    pub terms: usize,
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    fn pass(terms: usize) -> Self {
        CheckOutcome {
            passed: true,
            terms,
            witness: None,
        }
    }

    fn fail(terms: usize, witness: Witness) -> Self {
        CheckOutcome {
            passed: false,
            terms,
            witness: Some(witness),
        }
    }
}

fn symbolic(rules: Rules) -> OpContext {
    OpContext::with_rules(rules)
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), PreconditionError> {
    if cond {
        Ok(())
    } else {
        Err(PreconditionError(what()))
    }
}

fn divisibility(e: &Element, also_by_d: bool) -> CheckOutcome {
    for (m, c) in e.terms() {
        if !c.is_divisible_by_d_minus_3() {
            return CheckOutcome::fail(
                e.len(),
                Witness {
                    monomial: m.to_string(),
                    coefficient: c.clone(),
                    reason: "not divisible by (d-3)",
                },
            );
        }
        if also_by_d && !c.coeff(0).is_zero() {
            return CheckOutcome::fail(
                e.len(),
                Witness {
                    monomial: m.to_string(),
                    coefficient: c.clone(),
                    reason: "not divisible by d(d-3)",
                },
            );
        }
    }
    CheckOutcome::pass(e.len())
}

/// `Σ_{i_1+…+i_k = r} δ_{i_1}⋯δ_{i_k}(S_m(n))` is formally zero when `r > k`.
pub fn check_chain_vanishing(
    k: usize,
    r: usize,
    m: u32,
    n: u32,
    rules: Rules,
) -> Result<CheckOutcome, PreconditionError> {
    require(r > k, || {
        format!("chain vanishing needs r > k, got k={k}, r={r}")
    })?;
    let op = sum_over_chains(k, r as i64, &[0, 1, 2, 3]);
    let e = apply_op(&op, &Element::segre(n, m), &symbolic(rules));
    let outcome = match e.terms().next() {
        None => CheckOutcome::pass(0),
        Some((mon, c)) => CheckOutcome::fail(
            e.len(),
            Witness {
                monomial: mon.to_string(),
                coefficient: c.clone(),
                reason: "over-weighted chain is not zero",
            },
        ),
    };
    Ok(outcome)
}

/// `Σ_{i_1+…+i_k = k} δ_{i_1}⋯δ_{i_k}`.
pub fn main_theorem_operator(k: usize) -> OpExpr {
    sum_over_chains(k, k as i64, &[0, 1, 2, 3])
}

/// Every coefficient of the balanced chain sum applied to `S_m(n)` is
/// divisible by `(d − 3)`.
pub fn check_main_theorem(
    k: usize,
    m: u32,
    n: u32,
    rules: Rules,
) -> Result<CheckOutcome, PreconditionError> {
    require(k >= 1 && m >= 1 && n >= 1 && n as usize >= k, || {
        format!("main theorem needs k, m, n >= 1 and n >= k, got k={k}, m={m}, n={n}")
    })?;
    let e = apply_op(
        &main_theorem_operator(k),
        &Element::segre(n, m),
        &symbolic(rules),
    );
    Ok(divisibility(&e, false))
}

fn ones(count: usize) -> impl Iterator<Item = u8> {
    std::iter::repeat_n(1u8, count)
}

/// `δ_2 (δ_1)^k δ_0 + Σ_{s<k} δ_3 (δ_1)^{k−s−1} δ_0 (δ_1)^s δ_0`.
pub fn wkmain_operator(k: usize) -> OpExpr {
    let mut parts = Vec::with_capacity(k + 1);
    let head: Vec<u8> = std::iter::once(2).chain(ones(k)).chain([0]).collect();
    parts.push(OpExpr::chain(&head));
    for s in 0..k {
        let chain: Vec<u8> = std::iter::once(3)
            .chain(ones(k - s - 1))
            .chain([0])
            .chain(ones(s))
            .chain([0])
            .collect();
        parts.push(OpExpr::chain(&chain));
    }
    OpExpr::Sum(parts)
}

/// The special sum is `(d − 3)`-divisible; for `k ≥ 1` it is even divisible
/// by `d(d − 3)`.
pub fn check_wkmain(
    k: usize,
    m: u32,
    n: u32,
    rules: Rules,
) -> Result<CheckOutcome, PreconditionError> {
    require(m >= 1 && n >= 1, || {
        format!("wkmain needs m, n >= 1, got m={m}, n={n}")
    })?;
    let e = apply_op(&wkmain_operator(k), &Element::segre(n, m), &symbolic(rules));
    Ok(divisibility(&e, k >= 1))
}

/// `Ξ(k) = Ad_{δ_0}(Ad_{δ_1})^k(δ_2) + Σ_{s<k} Ad_{δ_0}(Ad_{δ_1})^{k−1−s} Ad_{δ_0}(Ad_{δ_1})^s(δ_3)`.
pub fn xi_operator(k: usize) -> OpExpr {
    let mut parts = vec![OpExpr::ad(0, OpExpr::ad_pow(1, k, OpExpr::Base(2)))];
    for s in 0..k {
        let inner = OpExpr::ad(0, OpExpr::ad_pow(1, s, OpExpr::Base(3)));
        parts.push(OpExpr::ad(0, OpExpr::ad_pow(1, k - 1 - s, inner)));
    }
    OpExpr::Sum(parts)
}

/// `Ad_{δ_{i_1}} ⋯ Ad_{δ_{i_l}} (Ξ(k)) (S_m(n))` is `(d − 3)`-divisible.
pub fn check_xi(
    k: usize,
    m: u32,
    n: u32,
    ad_prefix: &[u8],
    rules: Rules,
) -> Result<CheckOutcome, PreconditionError> {
    require(ad_prefix.iter().all(|&j| j <= 3), || {
        format!("Ad prefix entries must be in 0..=3, got {ad_prefix:?}")
    })?;
    let op = ad_prefix
        .iter()
        .rev()
        .fold(xi_operator(k), |acc, &j| OpExpr::ad(j, acc));
    let e = apply_op(&op, &Element::segre(n, m), &symbolic(rules));
    Ok(divisibility(&e, false))
}

fn prefixed_chains(k: usize, r: i64, alphabet: &[u8]) -> OpExpr {
    let with = |head: u8, total: i64| {
        OpExpr::Compose(vec![
            OpExpr::Base(head),
            sum_over_chains(k, total, alphabet),
        ])
    };
    OpExpr::Sum(vec![with(2, r), with(3, r - 1)])
}

/// `δ_2 Σ_{Σi=r} δ_{i_1}⋯δ_{i_k} + δ_3 Σ_{Σj=r−1} δ_{j_1}⋯δ_{j_k}` over all of `{0,1,2,3}`.
pub fn ii_operator(k: usize, r: i64) -> OpExpr {
    prefixed_chains(k, r, &[0, 1, 2, 3])
}

/// Same as [`ii_operator`] with the chains restricted to `{0, 1}`.
pub fn i_operator(k: usize, r: i64) -> OpExpr {
    prefixed_chains(k, r, &[0, 1])
}

/// Both `II(k, r)` and `I(k, r)` applied to `S_m(n)` are `(d − 3)`-divisible.
pub fn check_i_and_ii(
    k: usize,
    r: usize,
    m: u32,
    n: u32,
    rules: Rules,
) -> Result<CheckOutcome, PreconditionError> {
    let ctx = symbolic(rules);
    let s = Element::segre(n, m);
    let ii = apply_op(&ii_operator(k, r as i64), &s, &ctx);
    let outcome = divisibility(&ii, false);
    if !outcome.passed {
        return Ok(outcome);
    }
    let i = apply_op(&i_operator(k, r as i64), &s, &ctx);
    let mut outcome = divisibility(&i, false);
    outcome.terms += ii.len();
    Ok(outcome)
}

/// A random monomial with up to four θ factors of index at most 6 and a
/// Segre index at most 8.
pub fn random_monomial(rng: &mut impl Rng) -> Monomial {
    let count = rng.random_range(0..=4);
    let thetas = (0..count)
        .map(|_| {
            let index = rng.random_range(0..=6);
            if rng.random_bool(0.5) {
                ThetaSym::t0(index)
            } else {
                ThetaSym::t1(index)
            }
        })
        .collect();
    Monomial::new(thetas, rng.random_range(0..=8))
}

/// `δ_j` sends a monomial of signature `(w, i)` and degree `D` to a sum of
/// monomials of signature `(w + 1, i + j)` and degree `D − 2`. Checked on
/// `samples` seeded random monomials, without any vanishing rules.
pub fn check_grading(j: u8, samples: usize, seed: u64) -> Result<CheckOutcome, PreconditionError> {
    require(j <= 3, || format!("no operator d{j}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(j));
    let ctx = OpContext::raw();
    let mut terms = 0;
    for _ in 0..samples {
        let mon = random_monomial(&mut rng);
        let (w, i) = mon.signature();
        let level = rng.random_range(1..=6);
        let out = delta(
            j,
            &Element::monomial(level, mon.clone(), DPoly::one()),
            &ctx,
        );
        terms += out.len();
        for (m, c) in out.terms() {
            let reason = if m.signature() != (w + 1, i + j as usize) {
                "signature not shifted by (1, j)"
            } else if m.degree() != mon.degree() - 2 {
                "degree not lowered by 2"
            } else {
                continue;
            };
            return Ok(CheckOutcome::fail(
                terms,
                Witness {
                    monomial: format!("d{j}({mon}) -> {m}"),
                    coefficient: c.clone(),
                    reason,
                },
            ));
        }
    }
    Ok(CheckOutcome::pass(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Rules {
        Rules::default()
    }

    #[test]
    fn chain_vanishing_examples() {
        assert!(check_chain_vanishing(1, 2, 4, 3, r()).unwrap().passed);
        assert!(check_chain_vanishing(2, 3, 6, 4, r()).unwrap().passed);
        assert!(check_chain_vanishing(2, 2, 4, 4, r()).is_err());
    }

    #[test]
    fn main_theorem_examples() {
        let k1 = check_main_theorem(1, 2, 2, r()).unwrap();
        assert!(k1.passed);
        assert_eq!(k1.terms, 0);
        assert!(check_main_theorem(2, 4, 3, r()).unwrap().passed);
        assert!(check_main_theorem(3, 6, 4, r()).unwrap().passed);
        assert!(check_main_theorem(3, 6, 2, r()).is_err());
    }

    #[test]
    fn wkmain_examples() {
        assert!(check_wkmain(0, 3, 3, r()).unwrap().passed);
        assert!(check_wkmain(1, 5, 4, r()).unwrap().passed);
        assert!(check_wkmain(2, 6, 5, r()).unwrap().passed);
    }

    #[test]
    fn xi_examples() {
        assert!(check_xi(0, 3, 3, &[], r()).unwrap().passed);
        assert!(check_xi(1, 5, 5, &[], r()).unwrap().passed);
        assert!(check_xi(0, 4, 5, &[1], r()).unwrap().passed);
        assert!(check_xi(0, 4, 5, &[4], r()).is_err());
    }

    #[test]
    fn i_and_ii_examples() {
        let trivial = check_i_and_ii(0, 0, 3, 2, r()).unwrap();
        assert!(trivial.passed);
        assert_eq!(trivial.terms, 0);
        assert!(check_i_and_ii(1, 1, 4, 4, r()).unwrap().passed);
        assert!(check_i_and_ii(2, 1, 5, 5, r()).unwrap().passed);
    }

    #[test]
    fn non_divisible_elements_produce_witnesses() {
        let mut e = Element::zero(2);
        e.add_term("t0_2*S_0".parse().unwrap(), DPoly::from_i64s(&[1, 1]));
        let out = divisibility(&e, false);
        assert!(!out.passed);
        assert_eq!(out.witness.unwrap().monomial, "t0_2*S_0");
        let mut e = Element::zero(2);
        e.add_term("S_4".parse().unwrap(), DPoly::from_i64s(&[-3, 1]));
        assert!(divisibility(&e, false).passed);
        assert!(!divisibility(&e, true).passed);
    }

    #[test]
    fn grading_holds_and_is_not_vacuous() {
        for j in 0..4 {
            let out = check_grading(j, 50, 7).unwrap();
            assert!(out.passed, "{:?}", out.witness);
            assert!(out.terms > 0);
        }
        assert!(check_grading(4, 1, 0).is_err());
    }

    #[test]
    fn operator_shapes() {
        assert_eq!(wkmain_operator(0).to_string(), "d2∘d0");
        assert_eq!(wkmain_operator(1).to_string(), "d2∘d1∘d0 + d3∘d0∘d0");
        assert_eq!(xi_operator(0).to_string(), "Ad(d0, d2)");
        assert_eq!(
            xi_operator(1).to_string(),
            "Ad(d0, Ad(d1, d2)) + Ad(d0, Ad(d0, d3))"
        );
    }
}
