//! Truncated power series over the rationals, the closed-form rank-zero
//! series under `z = t(1 + t)`, and the quadratic-in-`d` fit of `log S_d(z)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coeff::{DPoly, Rational};
use crate::error::SeriesError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    #[serde(rename = "t")]
    T,
    #[serde(rename = "z")]
    Z,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::T => 't',
            Var::Z => 'z',
        }
    }
}

/// `Σ_{i=0}^{N} c_i x^i`, exact up to and including `x^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSeries {
    var: Var,
    coeffs: Vec<Rational>,
}

type SResult<T> = Result<T, SeriesError>;

impl PowerSeries {
    /// Pads with zeros or truncates to `order + 1` coefficients.
    pub fn new(var: Var, mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        PowerSeries { var, coeffs }
    }

    pub fn zero(var: Var, order: usize) -> Self {
        Self::new(var, Vec::new(), order)
    }

    pub fn constant(var: Var, c: Rational, order: usize) -> Self {
        Self::new(var, vec![c], order)
    }

    pub fn one(var: Var, order: usize) -> Self {
        Self::constant(var, Rational::one(), order)
    }

    /// The series `x` itself.
    pub fn variable(var: Var, order: usize) -> Self {
        Self::new(var, vec![Rational::zero(), Rational::one()], order)
    }

    /// `c_0 + c_1 x` for integer `c_0, c_1`.
    pub fn linear(var: Var, c0: i64, c1: i64, order: usize) -> Self {
        Self::new(var, vec![c0.into(), c1.into()], order)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    fn compatible(&self, other: &Self) -> SResult<()> {
        if self.var != other.var {
            return Err(SeriesError::VariableMismatch(
                self.var.symbol(),
                other.var.symbol(),
            ));
        }
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    fn with(&self, coeffs: Vec<Rational>) -> Self {
        PowerSeries {
            var: self.var,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> SResult<Self> {
        self.compatible(other)?;
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> SResult<Self> {
        self.compatible(other)?;
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> SResult<Self> {
        self.compatible(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Ok(self.with(out))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.with(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from(-1))
    }

    pub fn inverse(&self) -> SResult<Self> {
        let c0 = self.coeffs[0].recip().ok_or(SeriesError::NotInvertible)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = c0.clone();
        for i in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=i {
                acc += &(&self.coeffs[j] * &out[i - j]);
            }
            out[i] = -(acc * &c0);
        }
        Ok(self.with(out))
    }

    pub fn derivative(&self) -> Self {
        let mut out: Vec<Rational> = (1..self.coeffs.len())
            .map(|i| &self.coeffs[i] * &Rational::from(i as i64))
            .collect();
        out.push(Rational::zero());
        self.with(out)
    }

    /// Antiderivative with zero constant; the top coefficient falls off.
    fn integrate(&self) -> Self {
        let mut out = vec![Rational::zero()];
        for i in 0..self.order() {
            out.push(&self.coeffs[i] * &Rational::new(1, i as i64 + 1));
        }
        self.with(out)
    }

    fn require_unit(&self) -> SResult<()> {
        if self.coeffs[0] != Rational::one() {
            return Err(SeriesError::NonUnitConstant(self.coeffs[0].to_string()));
        }
        Ok(())
    }

    /// `log f = ∫ f'/f`, for `f(0) = 1`.
    pub fn log(&self) -> SResult<Self> {
        self.require_unit()?;
        Ok(self.derivative().mul(&self.inverse()?)?.integrate())
    }

    /// `exp g`, for `g(0) = 0`, via `E' = g' E`.
    pub fn exp(&self) -> SResult<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstant(self.coeffs[0].to_string()));
        }
        let n = self.order();
        let dg = self.derivative();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = Rational::one();
        for i in 1..=n {
            let mut acc = Rational::zero();
            for j in 0..i {
                acc += &(&dg.coeffs[j] * &out[i - 1 - j]);
            }
            out[i] = acc * Rational::new(1, i as i64);
        }
        Ok(self.with(out))
    }

    /// `f^α = exp(α log f)`, for `f(0) = 1`.
    pub fn pow_rational(&self, alpha: &Rational) -> SResult<Self> {
        self.log()?.scale(alpha).exp()
    }

    /// `self(inner)`, in the variable of `inner`. `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self) -> SResult<Self> {
        if self.order() != inner.order() {
            return Err(SeriesError::OrderMismatch(self.order(), inner.order()));
        }
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantInSubstitution);
        }
        let n = inner.order();
        let mut acc = PowerSeries::zero(inner.var, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.var.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = c.numer().sign() == num_bigint::Sign::Minus;
            let abs = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = abs == Rational::one();
            match i {
                0 => write!(f, "{abs}")?,
                _ if unit => write!(f, "{x}")?,
                _ => write!(f, "{abs}*{x}")?,
            }
            if i > 1 {
                write!(f, "^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({x}^{})", self.order() + 1)
    }
}

/// `t(z)` with `t + t² = z`, as `((1 + 4z)^{1/2} − 1)/2`.
pub fn t_of_z(order: usize) -> PowerSeries {
    let root = PowerSeries::linear(Var::Z, 1, 4, order)
        .pow_rational(&Rational::new(1, 2))
        .expect("unit constant term");
    let mut t = root.scale(&Rational::new(1, 2));
    t.coeffs[0] = Rational::zero();
    t
}

/// `(1 + t)^{−c2 − c1K} (1 + 2t)^{(c1sq + c1K)/2}` with `t = t(z)`, as a `z`-series.
pub fn mop_closed_form(
    c2: &Rational,
    c1sq: &Rational,
    c1k: &Rational,
    order: usize,
) -> PowerSeries {
    let a = -(c2 + c1k);
    let b = (c1sq + c1k) * Rational::new(1, 2);
    let in_t = PowerSeries::linear(Var::T, 1, 1, order)
        .pow_rational(&a)
        .and_then(|x| x.mul(&PowerSeries::linear(Var::T, 1, 2, order).pow_rational(&b)?))
        .expect("unit constant terms");
    in_t.compose(&t_of_z(order))
        .expect("t(z) has zero constant term")
}

/// The closed form for a plane curve of degree `d`: `c2 = c1² = d²`, `c1·K = −3d`.
pub fn curve_closed_form(d: i64, order: usize) -> PowerSeries {
    let sq = Rational::from(d * d);
    mop_closed_form(&sq, &sq, &Rational::from(-3 * d), order)
}

/// `−log(1 + t) + ½ log(1 + 2t)` as a `z`-series.
pub fn expected_q(order: usize) -> PowerSeries {
    let l1 = PowerSeries::linear(Var::T, 1, 1, order)
        .log()
        .expect("unit");
    let l2 = PowerSeries::linear(Var::T, 1, 2, order)
        .log()
        .expect("unit");
    let q = l2.scale(&Rational::new(1, 2)).sub(&l1).expect("same shape");
    q.compose(&t_of_z(order))
        .expect("t(z) has zero constant term")
}

/// `log S_d(z) = d²·Q(z) + d·L(z) + C(z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalFit {
    pub q: PowerSeries,
    pub l: PowerSeries,
    pub c: PowerSeries,
}

impl UniversalFit {
    /// `L = −3Q` and `C = 0`.
    pub fn is_rank_zero_shape(&self) -> bool {
        self.l == self.q.scale(&Rational::from(-3)) && self.c.is_zero()
    }
}

/// Fits `Q, L, C` coefficient-wise from the first three `d` values and
/// demands exact agreement on the remaining ones. `integral(n, d)` supplies
/// `∫_{S^[n]} s_{2n}` for the degree-`d` curve.
pub fn fit_universal_exponents(
    d_set: &[i64],
    order: usize,
    integral: &dyn Fn(usize, i64) -> Option<Rational>,
) -> SResult<UniversalFit> {
    let mut distinct = d_set.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != d_set.len() || d_set.len() < 3 || d_set.contains(&3) {
        return Err(SeriesError::SingularFit(d_set.to_vec()));
    }
    let mut logs = Vec::with_capacity(d_set.len());
    for &d in d_set {
        let coeffs = (0..=order)
            .map(|n| integral(n, d).ok_or(SeriesError::MissingIntegral { n, d }))
            .collect::<SResult<Vec<_>>>()?;
        logs.push(PowerSeries::new(Var::Z, coeffs, order).log()?);
    }
    let nodes: Vec<Rational> = d_set[..3].iter().map(|&d| Rational::from(d)).collect();
    let mut q = Vec::with_capacity(order + 1);
    let mut l = Vec::with_capacity(order + 1);
    let mut c = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let values: Vec<&Rational> = logs[..3].iter().map(|s| s.coeff(j)).collect();
        let p = interpolate(&nodes, &values);
        for (&d, s) in d_set.iter().zip(&logs).skip(3) {
            if p.eval(&Rational::from(d)) != *s.coeff(j) {
                return Err(SeriesError::FitResidual { d, order: j });
            }
        }
        c.push(p.coeff(0));
        l.push(p.coeff(1));
        q.push(p.coeff(2));
    }
    Ok(UniversalFit {
        q: PowerSeries::new(Var::Z, q, order),
        l: PowerSeries::new(Var::Z, l, order),
        c: PowerSeries::new(Var::Z, c, order),
    })
}

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(xs: &[Rational], ys: &[&Rational]) -> DPoly {
    let mut out = DPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = DPoly::constant((*yi).clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let factor = DPoly::from_coeffs(vec![-xj, Rational::one()]);
                let inv = (xi - xj).recip().expect("distinct nodes");
                basis = (&basis * &factor).scale(&inv);
            }
        }
        out += &basis;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ints(var: Var, cs: &[i64]) -> PowerSeries {
        PowerSeries::new(var, cs.iter().map(|&c| c.into()).collect(), cs.len() - 1)
    }

    #[test]
    fn log_of_one_plus_t() {
        let s = PowerSeries::linear(Var::T, 1, 1, 3).log().unwrap();
        assert_eq!(s.coeffs(), &[q(0, 1), q(1, 1), q(-1, 2), q(1, 3)]);
    }

    #[test]
    fn square_root_binomial() {
        let s = PowerSeries::linear(Var::T, 1, 2, 2)
            .pow_rational(&q(1, 2))
            .unwrap();
        assert_eq!(
            s,
            PowerSeries::new(Var::T, vec![q(1, 1), q(1, 1), q(-1, 2)], 2)
        );
    }

    #[test]
    fn exp_inverts_log() {
        let s = PowerSeries::linear(Var::T, 1, 1, 6);
        assert_eq!(s.log().unwrap().exp().unwrap(), s);
    }

    #[test]
    fn inverse_of_geometric() {
        let s = PowerSeries::linear(Var::T, 1, -1, 4).inverse().unwrap();
        assert_eq!(s, ints(Var::T, &[1, 1, 1, 1, 1]));
        assert_eq!(
            PowerSeries::variable(Var::T, 3).inverse(),
            Err(SeriesError::NotInvertible)
        );
    }

    #[test]
    fn domain_errors() {
        let two = PowerSeries::constant(Var::T, 2.into(), 2);
        assert!(matches!(two.log(), Err(SeriesError::NonUnitConstant(_))));
        assert!(matches!(
            two.pow_rational(&q(1, 2)),
            Err(SeriesError::NonUnitConstant(_))
        ));
        assert!(matches!(two.exp(), Err(SeriesError::ExpConstant(_))));
        let z = PowerSeries::one(Var::Z, 2);
        assert_eq!(two.add(&z), Err(SeriesError::VariableMismatch('t', 'z')));
        assert_eq!(
            two.mul(&PowerSeries::one(Var::T, 3)),
            Err(SeriesError::OrderMismatch(2, 3))
        );
        assert_eq!(
            two.compose(&z),
            Err(SeriesError::NonzeroConstantInSubstitution)
        );
    }

    #[test]
    fn t_of_z_is_signed_catalan() {
        let t = t_of_z(5);
        assert_eq!(t, ints(Var::Z, &[0, 1, -1, 2, -5, 14]));
        let back = t.add(&t.mul(&t).unwrap()).unwrap();
        assert_eq!(back, PowerSeries::variable(Var::Z, 5));
    }

    #[test]
    fn t_of_z_round_trip() {
        let n = 8;
        let z_of_t = PowerSeries::linear(Var::T, 0, 1, n)
            .add(&PowerSeries::new(
                Var::T,
                vec![0.into(), 0.into(), 1.into()],
                n,
            ))
            .unwrap();
        assert_eq!(
            t_of_z(n).compose(&z_of_t).unwrap(),
            PowerSeries::variable(Var::T, n)
        );
    }

    #[test]
    fn cubic_closed_form_is_one() {
        assert_eq!(
            mop_closed_form(&9.into(), &9.into(), &(-9).into(), 8),
            PowerSeries::one(Var::Z, 8)
        );
        assert_eq!(curve_closed_form(3, 6), PowerSeries::one(Var::Z, 6));
    }

    #[test]
    fn closed_form_low_coefficients() {
        for d in [1i64, 2, 4, 5] {
            let s = curve_closed_form(d, 3);
            assert_eq!(*s.coeff(0), Rational::one());
            assert_eq!(*s.coeff(1), Rational::zero());
            assert_eq!(*s.coeff(2), q(-(d * d - 3 * d), 2), "d={d}");
        }
    }

    #[test]
    fn powers_add() {
        let s = PowerSeries::new(Var::T, vec![1.into(), 3.into(), q(-2, 7)], 5);
        let a = s.pow_rational(&q(2, 3)).unwrap();
        let b = s.pow_rational(&q(-5, 4)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), s.pow_rational(&q(-7, 12)).unwrap());
    }

    #[test]
    fn fit_recovers_closed_form_exponents() {
        let order = 6;
        let table = |n: usize, d: i64| Some(curve_closed_form(d, order).coeff(n).clone());
        let fit = fit_universal_exponents(&[1, 2, 4, 5], order, &table).unwrap();
        assert!(fit.is_rank_zero_shape());
        assert_eq!(fit.q, expected_q(order));
    }

    #[test]
    fn fit_rejects_bad_inputs() {
        let table = |_: usize, _: i64| Some(Rational::one());
        assert!(matches!(
            fit_universal_exponents(&[1, 2], 2, &table),
            Err(SeriesError::SingularFit(_))
        ));
        assert!(matches!(
            fit_universal_exponents(&[1, 2, 3], 2, &table),
            Err(SeriesError::SingularFit(_))
        ));
        let missing = |n: usize, _: i64| (n < 2).then(Rational::one);
        assert_eq!(
            fit_universal_exponents(&[1, 2, 4], 3, &missing),
            Err(SeriesError::MissingIntegral { n: 2, d: 1 })
        );
        // a cubic term in d cannot be absorbed
        let cubic = |n: usize, d: i64| {
            Some(if n == 1 {
                Rational::from(d * d * d)
            } else {
                Rational::from((n == 0) as i64)
            })
        };
        assert_eq!(
            fit_universal_exponents(&[1, 2, 4, 5], 2, &cubic),
            Err(SeriesError::FitResidual { d: 5, order: 1 })
        );
    }

    #[test]
    fn display() {
        assert_eq!(t_of_z(3).to_string(), "z - z^2 + 2*z^3 + O(z^4)");
        assert_eq!(PowerSeries::zero(Var::T, 1).to_string(), "0 + O(t^2)");
    }

    #[test]
    fn serde_round_trip() {
        let s = t_of_z(3);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"var":"z","coeffs":["0/1","1/1","-1/1","2/1"]}"#);
        assert_eq!(serde_json::from_str::<PowerSeries>(&json).unwrap(), s);
    }
}
