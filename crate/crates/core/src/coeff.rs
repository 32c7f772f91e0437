//! Exact coefficients: arbitrary-precision rationals and dense polynomials in
//! the curve degree `d`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseError::Rational(s.to_string());
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(n, d))
            }
            None => Ok(Rational::from_integer(
                s.parse::<BigInt>().map_err(|_| bad())?,
            )),
        }
    }
}

// Serialized form is always "num/den", even for integers.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}/{}", self.numer(), self.denom()))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// A univariate polynomial in `d` with rational coefficients.
///
/// Stored densely in ascending powers with no trailing zero, so equal
/// polynomials have identical representations. The zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct DPoly {
    coeffs: Vec<Rational>,
}

impl<'de> Deserialize<'de> for DPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(DPoly::from_coeffs(Vec::<Rational>::deserialize(
            deserializer,
        )?))
    }
}

impl DPoly {
    pub fn zero() -> Self {
        DPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DPoly::constant(Rational::one())
    }

    /// The indeterminate `d`.
    pub fn d() -> Self {
        DPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        DPoly::from_coeffs(vec![c])
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        DPoly::from_coeffs(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        DPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `d`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> DPoly {
        if c.is_zero() {
            return DPoly::zero();
        }
        DPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, d0: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * d0 + c)
    }

    /// Synthetic division by `(d - root)`: returns `(q, r)` with
    /// `self = q * (d - root) + r`.
    pub fn div_by_linear(&self, root: &Rational) -> (DPoly, Rational) {
        if self.coeffs.is_empty() {
            return (DPoly::zero(), Rational::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &(&carry * root);
            if i == 0 {
                return (DPoly::from_coeffs(q), v);
            }
            q[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    pub fn div_by_d_minus_3(&self) -> (DPoly, Rational) {
        self.div_by_linear(&Rational::from(3))
    }

    pub fn is_divisible_by_d_minus_3(&self) -> bool {
        self.div_by_d_minus_3().1.is_zero()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(Rational::is_integer)
    }
}

impl Add for &DPoly {
    type Output = DPoly;
    fn add(self, rhs: &DPoly) -> DPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, c) in out.iter_mut().zip(&short.coeffs) {
            *o += c;
        }
        DPoly::from_coeffs(out)
    }
}

impl Add for DPoly {
    type Output = DPoly;
    fn add(self, rhs: DPoly) -> DPoly {
        &self + &rhs
    }
}

impl AddAssign<&DPoly> for DPoly {
    fn add_assign(&mut self, rhs: &DPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Rational::zero());
        }
        for (o, c) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o += c;
        }
        while self.coeffs.last().is_some_and(Rational::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Neg for &DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        DPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for DPoly {
    type Output = DPoly;
    fn neg(self) -> DPoly {
        -&self
    }
}

impl Sub for &DPoly {
    type Output = DPoly;
    fn sub(self, rhs: &DPoly) -> DPoly {
        self + &(-rhs)
    }
}

impl Sub for DPoly {
    type Output = DPoly;
    fn sub(self, rhs: DPoly) -> DPoly {
        &self - &rhs
    }
}

impl Mul for &DPoly {
    type Output = DPoly;
    fn mul(self, rhs: &DPoly) -> DPoly {
        if self.is_zero() || rhs.is_zero() {
            return DPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        DPoly::from_coeffs(out)
    }
}

impl Mul for DPoly {
    type Output = DPoly;
    fn mul(self, rhs: DPoly) -> DPoly {
        &self * &rhs
    }
}

impl fmt::Display for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.as_big().is_negative();
            let abs = if negative { -c } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = abs == Rational::one();
            match power {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "d")?,
                1 => write!(f, "{abs}*d")?,
                _ if unit => write!(f, "d^{power}")?,
                _ => write!(f, "{abs}*d^{power}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPoly({self})")
    }
}

/// True iff `n` divides the integer `value`.
pub(crate) fn divides(n: &BigInt, value: &BigInt) -> bool {
    value.is_multiple_of(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> DPoly {
        DPoly::from_i64s(c)
    }

    #[test]
    fn arithmetic_examples() {
        assert!((&DPoly::d() + &(-&DPoly::d())).is_zero());
        assert_eq!(&DPoly::d() * &p(&[-3, 1]), p(&[0, -3, 1]));
        assert_eq!(&p(&[0, -3, 1]) - &p(&[0, 0, 1]), p(&[0, -3]));
    }

    #[test]
    fn eval_examples() {
        let q = p(&[0, -3, 1]);
        assert_eq!(q.eval(&3.into()), Rational::zero());
        assert_eq!(q.eval(&1.into()), Rational::from(-2));
        assert_eq!(DPoly::zero().eval(&5.into()), Rational::zero());
    }

    #[test]
    fn division_by_d_minus_3() {
        assert_eq!(
            p(&[0, -3, 1]).div_by_d_minus_3(),
            (DPoly::d(), Rational::zero())
        );
        assert_eq!(p(&[1]).div_by_d_minus_3(), (DPoly::zero(), Rational::one()));
        assert_eq!(
            p(&[0, -6, 2]).div_by_d_minus_3(),
            (p(&[0, 2]), Rational::zero())
        );
        assert_eq!(
            DPoly::zero().div_by_d_minus_3(),
            (DPoly::zero(), Rational::zero())
        );
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert_eq!(p(&[0, 0]), DPoly::zero());
        assert_eq!((&p(&[1, 1]) - &p(&[0, 1])).coeffs(), p(&[1]).coeffs());
    }

    #[test]
    fn rational_parse_and_serialize() {
        let r: Rational = "6/-4".parse().unwrap();
        assert_eq!(r, Rational::new(-3, 2));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-3/2\"");
        assert_eq!(
            serde_json::to_string(&Rational::from(2)).unwrap(),
            "\"2/1\""
        );
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        let poly: DPoly = serde_json::from_str("[\"0/1\",\"3/2\",\"-1/2\",\"0/1\"]").unwrap();
        assert_eq!(
            poly,
            DPoly::from_coeffs(vec![0.into(), Rational::new(3, 2), Rational::new(-1, 2)])
        );
    }

    #[test]
    fn display() {
        let q = DPoly::from_coeffs(vec![0.into(), Rational::new(3, 2), Rational::new(-1, 2)]);
        assert_eq!(q.to_string(), "-1/2*d^2 + 3/2*d");
        assert_eq!(p(&[1, -1]).to_string(), "-d + 1");
        assert_eq!(DPoly::zero().to_string(), "0");
    }

    #[test]
    fn binomials_and_factorials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(0), BigInt::from(1));
    }

    fn arb_poly() -> impl Strategy<Value = DPoly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..6).prop_map(|cs| {
            DPoly::from_coeffs(cs.into_iter().map(|(n, d)| Rational::new(n, d)).collect())
        })
    }

    proptest! {
        #[test]
        fn root_at_three_iff_divisible(q in arb_poly()) {
            let (quot, rem) = q.div_by_d_minus_3();
            prop_assert_eq!(q.eval(&3.into()).is_zero(), rem.is_zero());
            let back = &(&quot * &p(&[-3, 1])) + &DPoly::constant(rem);
            prop_assert_eq!(back, q);
        }

        #[test]
        fn add_then_sub_roundtrips(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn product_evaluates_pointwise(a in arb_poly(), b in arb_poly(), x in -5i64..5) {
            let x = Rational::from(x);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }
    }
}
