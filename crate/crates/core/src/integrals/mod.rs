//! The integral pipeline `∫_{S^[n]} s_{2n}(α^[n])` as a polynomial in `d`,
//! and executable checkers for the divisibility statements behind it.

mod checks;
mod identities;

pub use checks::{
    check_chain_vanishing, check_grading, check_i_and_ii, check_main_theorem, check_wkmain,
    check_xi, i_operator, ii_operator, main_theorem_operator, random_monomial, wkmain_operator,
    xi_operator, CheckOutcome, Witness,
};
pub use identities::{lemma_combi, lemma_combi2, lemma_combi2_sides};

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeff::{divides, factorial, DPoly, Rational};
use crate::error::IntegralError;
use crate::operators::{pushf, DValue, OpContext};
use crate::symalg::Element;

/// One row of the integral table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralRecord {
    pub n: u32,
    pub value: DPoly,
    /// Largest number of monomials held at any intermediate level.
    pub chain_count: usize,
}

/// Runs the pushforward recursion and memoizes `f^k(S_{2n}(n))` by `(n, k)`.
///
/// The cache is readable concurrently and written under an exclusive lock;
/// the operator context (and so the key's flags) is fixed per engine.
pub struct IntegralEngine {
    ctx: OpContext,
    cache: RwLock<HashMap<(u32, u32), Arc<Element>>>,
}

impl IntegralEngine {
    pub fn new(ctx: OpContext) -> Self {
        IntegralEngine {
            ctx,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn context(&self) -> &OpContext {
        &self.ctx
    }

    fn cached(&self, key: (u32, u32)) -> Option<Arc<Element>> {
        self.cache.read().expect("cache lock").get(&key).cloned()
    }

    /// `f^k(S_{2n}(n))`, checked to be homogeneous of degree `2(n − k)`.
    pub fn pushforward_power(&self, n: u32, k: u32) -> Result<Arc<Element>, IntegralError> {
        assert!(k <= n, "cannot push S_2n(n) down more than n levels");
        if let Some(hit) = self.cached((n, k)) {
            return Ok(hit);
        }
        // resume from the deepest cached step
        let mut start = 0;
        let mut cur = Arc::new(Element::segre(n, 2 * n));
        for j in (1..k).rev() {
            if let Some(hit) = self.cached((n, j)) {
                start = j;
                cur = hit;
                break;
            }
        }
        for step in start + 1..=k {
            let next = pushf(&cur, &self.ctx);
            check_homogeneous(&next, n, step)?;
            cur = Arc::new(next);
            self.cache
                .write()
                .expect("cache lock")
                .insert((n, step), Arc::clone(&cur));
        }
        Ok(cur)
    }

    /// `∫_{S^[n]} s_{2n}(α^[n])`: push `S_{2n}` down to level 0 and divide by `n!`.
    pub fn integral(&self, n: u32) -> Result<IntegralRecord, IntegralError> {
        let mut chain_count = 1;
        for k in 1..=n {
            chain_count = chain_count.max(self.pushforward_power(n, k)?.len());
        }
        let bottom = self.pushforward_power(n, n)?;
        let raw = level_zero_value(&bottom, n)?;
        check_factorial_divisible(&raw, n, &self.ctx.d)?;
        let value = raw.scale(&Rational::from(factorial(n)).recip().expect("n! > 0"));
        Ok(IntegralRecord {
            n,
            value,
            chain_count,
        })
    }

    pub fn table(&self, n_max: u32) -> Result<Vec<IntegralRecord>, IntegralError> {
        (0..=n_max).map(|n| self.integral(n)).collect()
    }

    pub fn clear(&self) {
        self.cache.write().expect("cache lock").clear();
    }
}

fn check_homogeneous(e: &Element, n: u32, steps: u32) -> Result<(), IntegralError> {
    let expected = 2 * (n - steps) as i64;
    match e.terms().find(|(m, _)| m.degree() != expected) {
        Some((m, _)) => Err(IntegralError::Inhomogeneous {
            n,
            steps,
            monomial: m.to_string(),
            found: m.degree(),
            expected,
        }),
        None => Ok(()),
    }
}

/// The number a level-0 element stands for. Only `S_0` (possibly with unit
/// factors `θ_0^0` in raw mode) may survive.
fn level_zero_value(e: &Element, n: u32) -> Result<DPoly, IntegralError> {
    let unit = crate::symalg::ThetaSym::t0(0);
    let mut value = DPoly::zero();
    for (m, c) in e.terms() {
        if m.s_index() != 0 || m.thetas().iter().any(|t| *t != unit) {
            return Err(IntegralError::SurvivingSymbols {
                n,
                monomial: m.to_string(),
            });
        }
        value += c;
    }
    Ok(value)
}

/// `raw / n!` must be an integer-valued polynomial. With integer coefficients
/// it suffices to test the values at `d = 0, …, deg`.
fn check_factorial_divisible(raw: &DPoly, n: u32, d: &DValue) -> Result<(), IntegralError> {
    let fact = factorial(n);
    let fail = || IntegralError::InexactFactorial {
        n,
        value: raw.to_string(),
    };
    if !raw.has_integer_coeffs() {
        return Err(fail());
    }
    let points: Vec<Rational> = match d {
        DValue::Symbolic => (0..=raw.degree().unwrap_or(0) as i64)
            .map(Rational::from)
            .collect(),
        DValue::Fixed(_) => vec![Rational::zero()],
    };
    for x in points {
        let v = raw.eval(&x);
        let v: BigInt = v.numer().clone();
        if !divides(&fact, &v) {
            return Err(fail());
        }
    }
    Ok(())
}

/// `∫ s_{2n}` with symbolic `d` and default rules.
pub fn segre_integral_poly(n: u32) -> Result<DPoly, IntegralError> {
    IntegralEngine::new(OpContext::default())
        .integral(n)
        .map(|r| r.value)
}
