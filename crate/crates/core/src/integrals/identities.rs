//! The two combinatorial identities used to match the closed forms against
//! the operator sums, evaluated by brute force.

use crate::coeff::{binomial, Rational};
use crate::operators::compositions;

/// `Σ_{s+i=M} C(k−s−1, i) = C(k, M)` for `0 ≤ M ≤ k − 1`.
pub fn lemma_combi(k: u32, big_m: u32) -> bool {
    let (k, big_m) = (k as i64, big_m as i64);
    let lhs: num_bigint::BigInt = (0..=big_m).map(|s| binomial(k - s - 1, big_m - s)).sum();
    lhs == binomial(k, big_m)
}

fn rising(len: i64, base: &Rational) -> Rational {
    (0..len).fold(Rational::one(), |acc, j| acc * (base + &Rational::from(j)))
}

fn shifted(parts: &[u32]) -> i64 {
    parts.iter().map(|&x| x as i64 + 1).sum()
}

/// Left and right sides of the telescoping identity, with `θ^0_a` replaced
/// by the scalar function `theta`.
pub fn lemma_combi2_sides(
    a: u32,
    n: &Rational,
    m: u32,
    k: u32,
    theta: &dyn Fn(u32) -> Rational,
) -> (Rational, Rational) {
    let k = k as usize;
    let a1 = Rational::from(a as i64 + 1);
    let tuples = compositions(k + 1, m);
    let weight = |vec: &[u32]| -> Rational {
        vec.iter()
            .map(|&x| theta(x))
            .fold(Rational::one(), |acc, t| acc * t)
    };

    let mut lhs = Rational::zero();
    for big_m in 0..=k {
        let choose = Rational::from(binomial(k as i64 + 1, big_m as i64));
        let mut inner = Rational::zero();
        for v in &tuples {
            let head = &a1 + &Rational::from(shifted(&v[..big_m]));
            let tail_base = Rational::from(v[k] as i64 + 1 + shifted(&v[big_m..k]) + 1) + n;
            inner +=
                &(weight(v) * rising(big_m as i64, &head) * rising((k - big_m) as i64, &tail_base));
        }
        lhs += &(n * &choose * inner);
    }

    let mut rhs = Rational::zero();
    for v in &tuples {
        let base = &a1 + &Rational::from(shifted(v));
        let len = k as i64 + 1;
        rhs += &(weight(v) * (rising(len, &(&base + n)) - rising(len, &base)));
    }
    (lhs, rhs)
}

pub fn lemma_combi2(a: u32, n: &Rational, m: u32, k: u32, theta: &dyn Fn(u32) -> Rational) -> bool {
    let (l, r) = lemma_combi2_sides(a, n, m, k, theta);
    l == r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combi_examples() {
        assert!(lemma_combi(3, 1));
        assert!(lemma_combi(1, 0));
        assert!(lemma_combi(5, 2));
        for k in 1..=10 {
            for m in 0..k {
                assert!(lemma_combi(k, m), "k={k} M={m}");
            }
        }
    }

    #[test]
    fn combi2_small_values() {
        let one = |_: u32| Rational::one();
        let lin = |a: u32| Rational::from(a as i64 + 1);
        // hand evaluation: k=1, N=1, a=0, m=0, θ ≡ 1 gives 8 on both sides
        let (l, r) = lemma_combi2_sides(0, &Rational::one(), 0, 1, &one);
        assert_eq!(l, Rational::from(8));
        assert_eq!(r, Rational::from(8));
        assert!(lemma_combi2(3, &Rational::zero(), 4, 2, &lin));
        let (l, r) = lemma_combi2_sides(0, &Rational::from(2), 1, 0, &one);
        assert_eq!((l.clone(), r), (Rational::from(2), Rational::from(2)));
        assert!(lemma_combi2(1, &Rational::one(), 2, 2, &lin));
        assert!(lemma_combi2(2, &Rational::new(-5, 3), 3, 3, &lin));
    }

    #[test]
    fn combi2_rejects_a_perturbed_side() {
        let sq = |a: u32| Rational::from((a * a) as i64);
        let (l, r) = lemma_combi2_sides(1, &Rational::from(2), 4, 2, &sq);
        assert_eq!(l, r);
        assert_ne!(l + Rational::one(), r);
    }
}
