//! Exact rational scalars and the integer special functions built on them.
//!
//! [`Rat`] is a thin newtype over `BigRational` so that the textual form
//! (`"num/den"`, or `"n"` for integers) is fixed in one place and every
//! serializer agrees on it.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Largest Bernoulli index held by the shared table (covers genus <= 16
/// wherever `B_{2g+2}` is needed).
pub const BERNOULLI_MAX: usize = 64;

/// Arbitrary-precision rational in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i32) -> Self {
        if exp < 0 {
            return self.recip().pow(-exp);
        }
        Rat(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// `(-1)^e` as a rational.
    pub fn sign(e: i64) -> Self {
        if e.rem_euclid(2) == 0 {
            Rat::one()
        } else {
            Rat::int(-1)
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            None => Ok(Rat::from(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rat::from_big(n, d))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat($tr::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($tr::$method(&self.0, rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $assign_tr<Rat> for Rat {
            fn $assign_method(&mut self, rhs: Rat) {
                $assign_tr::$assign_method(&mut self.0, rhs.0);
            }
        }
        impl<'a> $assign_tr<&'a Rat> for Rat {
            fn $assign_method(&mut self, rhs: &'a Rat) {
                $assign_tr::$assign_method(&mut self.0, &rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);
forward_binop!(Div, div, DivAssign, div_assign);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn factorial_rat(n: u64) -> Rat {
    Rat::from(factorial(n))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `n! / (prod parts_i! * (n - sum parts)!)`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<Rat> {
    let total: u64 = parts.iter().sum();
    if total > n {
        return Err(domain(format!(
            "multinomial parts sum to {total}, which exceeds n = {n}"
        )));
    }
    let denom = parts
        .iter()
        .chain(std::iter::once(&(n - total)))
        .fold(BigInt::one(), |acc, &p| acc * factorial(p));
    Ok(Rat::from(factorial(n) / denom))
}

/// `m!!` for odd `m >= -1`, with `(-1)!! = 1`.
pub fn double_factorial(m: i64) -> Result<Rat> {
    if m < -1 || m.rem_euclid(2) == 0 {
        return Err(domain(format!(
            "double factorial needs an odd argument >= -1, got {m}"
        )));
    }
    let mut acc = BigInt::one();
    let mut k = m;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(Rat::from(acc))
}

/// `1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: u64) -> Rat {
    (1..=n as i64).map(|k| Rat::new(1, k)).sum()
}

/// Bernoulli numbers with `t/(e^t - 1) = sum B_m t^m / m!`, so `B_1 = -1/2`.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<Rat>,
}

impl BernoulliTable {
    /// Builds `B_0..=B_max` by the Akiyama-Tanigawa transform and, independently,
    /// by inverting `(e^t - 1)/t`; the two must agree.
    pub fn new(max: usize) -> Result<Self> {
        let at = akiyama_tanigawa(max);
        let inv = series_inversion(max);
        if let Some(m) = (0..=max).find(|&m| at[m] != inv[m]) {
            return Err(Error::Integrity(format!(
                "Bernoulli B_{m}: Akiyama-Tanigawa gives {}, series inversion gives {}",
                at[m], inv[m]
            )));
        }
        Ok(BernoulliTable { values: inv })
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, m: usize) -> Result<&Rat> {
        self.values.get(m).ok_or(Error::Capacity {
            requested: m,
            limit: self.max_index(),
        })
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }
}

fn akiyama_tanigawa(max: usize) -> Vec<Rat> {
    let mut row: Vec<Rat> = Vec::with_capacity(max + 1);
    let mut out = Vec::with_capacity(max + 1);
    for m in 0..=max {
        row.push(Rat::new(1, m as i64 + 1));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * Rat::int(j as i64);
        }
        out.push(row[0].clone());
    }
    // the transform produces the B_1 = +1/2 convention
    if max >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

fn series_inversion(max: usize) -> Vec<Rat> {
    // (e^t - 1)/t = sum_k t^k/(k+1)!; its inverse has coefficients B_m/m!
    let a: Vec<Rat> = (0..=max as u64)
        .map(|k| factorial_rat(k + 1).recip())
        .collect();
    let mut inv: Vec<Rat> = Vec::with_capacity(max + 1);
    inv.push(Rat::one());
    for m in 1..=max {
        let s: Rat = (1..=m).map(|j| &a[j] * &inv[m - j]).sum();
        inv.push(-s);
    }
    inv.into_iter()
        .enumerate()
        .map(|(m, c)| c * factorial_rat(m as u64))
        .collect()
}

pub fn bernoulli_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::new(BERNOULLI_MAX).expect("Bernoulli self-check failed"))
}

/// `B_m`, from the shared table.
pub fn bernoulli(m: usize) -> Result<Rat> {
    bernoulli_table().get(m).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0).unwrap(), Rat::one());
        assert_eq!(bernoulli(1).unwrap(), Rat::new(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), Rat::new(1, 6));
        assert_eq!(bernoulli(3).unwrap(), Rat::zero());
        assert_eq!(bernoulli(4).unwrap(), Rat::new(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), Rat::new(-691, 2730));
    }

    #[test]
    fn bernoulli_capacity() {
        assert_eq!(
            bernoulli(BERNOULLI_MAX + 1),
            Err(Error::Capacity {
                requested: BERNOULLI_MAX + 1,
                limit: BERNOULLI_MAX
            })
        );
        assert!(bernoulli(BERNOULLI_MAX).is_ok());
    }

    #[test]
    fn bernoulli_defining_recurrence() {
        for m in 1..BERNOULLI_MAX {
            let s: Rat = (0..=m)
                .map(|k| Rat::from(binomial(m as u64 + 1, k as u64)) * bernoulli(k).unwrap())
                .sum();
            assert!(s.is_zero(), "recurrence fails at m = {m}");
        }
    }

    #[test]
    fn bernoulli_odd_vanish_and_even_alternate() {
        for m in (3..=BERNOULLI_MAX).step_by(2) {
            assert!(bernoulli(m).unwrap().is_zero());
        }
        for g in 1..BERNOULLI_MAX / 2 {
            let p = bernoulli(2 * g).unwrap() * bernoulli(2 * g + 2).unwrap();
            assert!(p.is_negative(), "no sign alternation at 2g = {}", 2 * g);
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(0, &[]).unwrap(), Rat::one());
        assert_eq!(multinomial(3, &[1, 1, 1]).unwrap(), Rat::int(6));
        assert_eq!(multinomial(4, &[2]).unwrap(), Rat::int(6));
        assert!(matches!(multinomial(2, &[2, 1]), Err(Error::Domain(_))));
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(-1).unwrap(), Rat::one());
        assert_eq!(double_factorial(1).unwrap(), Rat::one());
        assert_eq!(double_factorial(5).unwrap(), Rat::int(15));
        assert_eq!(double_factorial(9).unwrap(), Rat::int(945));
        assert!(double_factorial(4).is_err());
        assert!(double_factorial(-3).is_err());
    }

    #[test]
    fn rat_text_form() {
        assert_eq!(Rat::new(14, 11520).to_string(), "7/5760");
        assert_eq!(Rat::new(6, -3).to_string(), "-2");
        assert_eq!("7/5760".parse::<Rat>().unwrap(), Rat::new(7, 5760));
        assert_eq!("-4/6".parse::<Rat>().unwrap(), Rat::new(-2, 3));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert_eq!(serde_json::to_string(&Rat::new(1, 24)).unwrap(), "\"1/24\"");
    }

    proptest! {
        #[test]
        fn multinomial_symmetric(mut parts in proptest::collection::vec(0u64..4, 0..5), extra in 0u64..4) {
            let n = parts.iter().sum::<u64>() + extra;
            let a = multinomial(n, &parts).unwrap();
            parts.reverse();
            let r = parts.len().min(1);
            parts.rotate_left(r);
            prop_assert_eq!(a, multinomial(n, &parts).unwrap());
        }

        #[test]
        fn rat_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rat::new(n, d);
            prop_assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
        }
    }
}
