//! Integrals frozen from an independent series expansion of the closed form
//! (computer algebra, outside this crate), coefficients ascending in `d`.

use segre_core::coeff::{DPoly, Rational};
use segre_core::integrals::IntegralEngine;
use segre_core::operators::OpContext;

const FROZEN: &[(u32, &[&str])] = &[
    (0, &["1"]),
    (1, &[]),
    (2, &["0", "3/2", "-1/2"]),
    (3, &["0", "-6", "2"]),
    (4, &["0", "87/4", "-49/8", "-3/4", "1/8"]),
    (5, &["0", "-78", "17", "6", "-1"]),
    (
        6,
        &["0", "281", "-1033/24", "-531/16", "81/16", "3/16", "-1/48"],
    ),
    (7, &["0", "-1020", "185/2", "633/4", "-83/4", "-9/4", "1/4"]),
    (
        8,
        &[
            "0",
            "29847/8",
            "-3763/32",
            "-22375/32",
            "28361/384",
            "135/8",
            "-113/64",
            "-1/32",
            "1/384",
        ],
    ),
];

fn frozen(coeffs: &[&str]) -> DPoly {
    DPoly::from_coeffs(
        coeffs
            .iter()
            .map(|c| c.parse::<Rational>().unwrap())
            .collect(),
    )
}

#[test]
fn symbolic_integrals_match_frozen_values() {
    let engine = IntegralEngine::new(OpContext::default());
    for &(n, coeffs) in FROZEN {
        assert_eq!(engine.integral(n).unwrap().value, frozen(coeffs), "n={n}");
    }
}

#[test]
fn integrals_factor_through_d_times_d_minus_3() {
    for &(n, coeffs) in &FROZEN[1..] {
        let p = frozen(coeffs);
        assert!(p.is_divisible_by_d_minus_3(), "n={n}");
        assert!(p.coeff(0).is_zero(), "n={n}");
    }
}
