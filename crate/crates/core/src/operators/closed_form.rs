//! Explicit expansions of `(δ_1)^k δ_0 (S_m)` and
//! `(δ_1)^{k−1−s} δ_0 (δ_1)^s δ_0 (S_m)`, generated directly from their
//! summation formulas without applying any operator.

use num_bigint::BigInt;
use num_traits::One;

use super::OpContext;
use crate::coeff::{binomial, DPoly, Rational};
use crate::symalg::{Element, Monomial, ThetaSym};

/// All `parts`-tuples of non-negative integers summing to `total`.
pub fn compositions(parts: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fill(parts, total, &mut cur, &mut out);
    out
}

fn fill(parts: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if parts == 1 {
        cur.push(left);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for v in 0..=left {
        cur.push(v);
        fill(parts - 1, left - v, cur, out);
        cur.pop();
    }
}

/// `Π_{j=0}^{len−1} (j + a + 1 + Σ_i (a_i + 1))` with `len = a_vec.len()`.
fn rising_weight(a: u32, a_vec: &[u32]) -> BigInt {
    let base = a as i64 + 1 + a_vec.iter().map(|&x| x as i64 + 1).sum::<i64>();
    (0..a_vec.len() as i64).fold(BigInt::one(), |acc, j| acc * BigInt::from(j + base))
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(δ_1)^k δ_0 (S_m(n))` at level `n − k − 1`:
/// `(−1)^{k+1} d Σ Π_{j<k}(j + a + 1 + Σ(a_i + 1)) θ^0_{a_1}…θ^0_{a_k} θ^1_a S_{m'}`
/// over `m' + a + 2k + 1 + Σ a_i = m`.
pub fn chain_closed_form(k: usize, m: u32, n: u32, ctx: &OpContext) -> Element {
    let level = n.saturating_sub(k as u32 + 1);
    let mut out = Element::zero(level);
    if n < k as u32 + 1 {
        return out;
    }
    let Some(budget) = m.checked_sub(2 * k as u32 + 1) else {
        return out;
    };
    let lead = ctx.d_poly().scale(&Rational::from(sign(k + 1)));
    for parts in compositions(k + 2, budget) {
        let (a_vec, rest) = parts.split_at(k);
        let (a, m_rest) = (rest[0], rest[1]);
        let mut thetas: Vec<ThetaSym> = a_vec.iter().map(|&x| ThetaSym::t0(x)).collect();
        thetas.push(ThetaSym::t1(a));
        let c = Rational::from(rising_weight(a, a_vec));
        out.add_normalized(Monomial::new(thetas, m_rest), lead.scale(&c), &ctx.rules);
    }
    out
}

/// `(δ_1)^{k−1−s} δ_0 (δ_1)^s δ_0 (S_m(n))` at level `n − k − 1`, for
/// `k ≥ 1` and `0 ≤ s ≤ k − 1`.
pub fn double_chain_closed_form(k: usize, s: usize, m: u32, n: u32, ctx: &OpContext) -> Element {
    assert!(k >= 1 && s < k, "need k >= 1 and s < k");
    let level = n.saturating_sub(k as u32 + 1);
    let mut out = Element::zero(level);
    if n < k as u32 + 1 {
        return out;
    }
    let Some(budget) = m.checked_sub(2 * k as u32) else {
        return out;
    };
    let d = ctx.d_poly();
    let lead = (&d * &d).scale(&Rational::from(sign(k + 1)));
    for i in 0..k - s {
        let p = s + i;
        let q = k - s - i - 1;
        let choose = binomial((k - s - 1) as i64, i as i64);
        for parts in compositions(p + q + 3, budget) {
            let (a_vec, rest) = parts.split_at(p);
            let a = rest[0];
            let (b_vec, rest) = rest[1..].split_at(q);
            let (b, m_rest) = (rest[0], rest[1]);
            let weight = &choose * rising_weight(a, a_vec) * rising_weight(b, b_vec);
            let mut thetas: Vec<ThetaSym> = a_vec.iter().map(|&x| ThetaSym::t0(x)).collect();
            thetas.extend(b_vec.iter().map(|&x| ThetaSym::t0(x)));
            thetas.push(ThetaSym::t1(a));
            thetas.push(ThetaSym::t1(b));
            let coeff: DPoly = lead.scale(&Rational::from(weight));
            out.add_normalized(Monomial::new(thetas, m_rest), coeff, &ctx.rules);
        }
    }
    out
}
