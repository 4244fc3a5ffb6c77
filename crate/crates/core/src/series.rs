//! Truncated formal power series over [`Rat`], and over `Q[k]` for the
//! two-variable generating function `F(t, k)`.
//!
//! A [`Series`] of order `N` stores exactly `N + 1` coefficients. Orders are
//! never extended or truncated implicitly: combining two series of different
//! orders is an error.

use serde::{Deserialize, Serialize};

use crate::arith::{bernoulli, factorial_rat, Rat};
use crate::error::{domain, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct Series {
    coeffs: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<Rat>,
}

impl TryFrom<SeriesRepr> for Series {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.coeffs.len() != r.order + 1 {
            return Err(Error::Parse(format!(
                "series of order {} needs {} coefficients, got {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            )));
        }
        Ok(Series { coeffs: r.coeffs })
    }
}

impl From<Series> for SeriesRepr {
    fn from(s: Series) -> Self {
        SeriesRepr {
            order: s.order(),
            coeffs: s.coeffs,
        }
    }
}

impl Series {
    /// Order is `coeffs.len() - 1`; an empty vector is rejected.
    pub fn new(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("a series needs at least a constant term"));
        }
        Ok(Series { coeffs })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rat) -> Self {
        Series {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Series::from_fn(order, |_| Rat::zero())
    }

    pub fn one(order: usize) -> Self {
        Series::constant(order, Rat::one())
    }

    pub fn constant(order: usize, c: Rat) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * t^power`, dropped if `power > order`.
    pub fn monomial(order: usize, c: Rat, power: usize) -> Self {
        let mut s = Series::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    fn check_order(&self, other: &Series) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series::from_fn(self.order(), |i| {
            &self.coeffs[i] + &other.coeffs[i]
        }))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series::from_fn(self.order(), |i| {
            &self.coeffs[i] - &other.coeffs[i]
        }))
    }

    pub fn neg(&self) -> Series {
        Series::from_fn(self.order(), |i| -&self.coeffs[i])
    }

    pub fn scale(&self, c: &Rat) -> Series {
        Series::from_fn(self.order(), |i| c * &self.coeffs[i])
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series::from_fn(self.order(), |n| {
            (0..=n)
                .filter(|&j| !self.coeffs[j].is_zero())
                .map(|j| &self.coeffs[j] * &other.coeffs[n - j])
                .sum()
        }))
    }

    pub fn inverse(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Singular);
        }
        let inv0 = a0.recip();
        let mut b: Vec<Rat> = Vec::with_capacity(self.coeffs.len());
        b.push(inv0.clone());
        for n in 1..=self.order() {
            let s: Rat = (1..=n).map(|j| &self.coeffs[j] * &b[n - j]).sum();
            b.push(-(s * &inv0));
        }
        Ok(Series { coeffs: b })
    }

    /// Formal logarithm via `n L_n = n a_n - sum_{j<n} j L_j a_{n-j}`.
    pub fn log(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(domain(format!(
                "log needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        let a = &self.coeffs;
        let mut l: Vec<Rat> = vec![Rat::zero()];
        for n in 1..=self.order() {
            let mut s = Rat::int(n as i64) * &a[n];
            for j in 1..n {
                s -= Rat::int(j as i64) * &l[j] * &a[n - j];
            }
            l.push(s / Rat::int(n as i64));
        }
        Ok(Series { coeffs: l })
    }

    /// Formal exponential via `n E_n = sum_{j=1}^n j a_j E_{n-j}`.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(domain(format!(
                "exp needs constant term 0, got {}",
                self.coeffs[0]
            )));
        }
        let a = &self.coeffs;
        let mut e: Vec<Rat> = vec![Rat::one()];
        for n in 1..=self.order() {
            let s: Rat = (1..=n)
                .filter(|&j| !a[j].is_zero())
                .map(|j| Rat::int(j as i64) * &a[j] * &e[n - j])
                .sum();
            e.push(s / Rat::int(n as i64));
        }
        Ok(Series { coeffs: e })
    }

    /// Integer power by repeated multiplication (and inversion for `e < 0`).
    pub fn powi(&self, e: i64) -> Result<Series> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Series::one(self.order());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// `a(t)^(k+1) = exp((k+1) log a)` as a series in `t` over `Q[k]`.
    pub fn pow_kplus1(&self) -> Result<KSeries> {
        if !self.coeffs[0].is_one() {
            return Err(domain(format!(
                "(k+1)-th power needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        let log = self.log()?;
        let m: Vec<KPoly> = log
            .coeffs
            .iter()
            .map(|c| KPoly::new(vec![c.clone(), c.clone()]))
            .collect();
        let mut e: Vec<KPoly> = vec![KPoly::one()];
        for n in 1..=self.order() {
            let mut s = KPoly::zero();
            for j in 1..=n {
                if m[j].is_zero() {
                    continue;
                }
                s = s.add(&m[j].mul(&e[n - j]).scale(&Rat::int(j as i64)));
            }
            e.push(s.scale(&Rat::new(1, n as i64)));
        }
        Ok(KSeries { coeffs: e })
    }

    /// Substitutes `t -> i t`. Only defined when every odd coefficient is
    /// zero, so the result stays rational: `c_{2g} -> (-1)^g c_{2g}`.
    pub fn substitute_it(&self) -> Result<Series> {
        if let Some(i) = (1..=self.order())
            .step_by(2)
            .find(|&i| !self.coeffs[i].is_zero())
        {
            return Err(domain(format!(
                "t -> it needs an even series, but t^{i} has coefficient {}",
                self.coeffs[i]
            )));
        }
        Ok(Series::from_fn(self.order(), |i| {
            if i % 4 == 2 {
                -&self.coeffs[i]
            } else {
                self.coeffs[i].clone()
            }
        }))
    }
}

/// `sin(t/2) / (t/2)` straight from the sine Taylor series.
pub fn sinc_half(order: usize) -> Series {
    Series::from_fn(order, |n| {
        if n % 2 == 1 {
            return Rat::zero();
        }
        let j = (n / 2) as i64;
        Rat::sign(j) / (Rat::int(2).pow(n as i32) * factorial_rat(n as u64 + 1))
    })
}

/// `(t/2) / sin(t/2)`, built from the Bernoulli closed form
/// `1 + sum (2^{2g-1} - 1)/2^{2g-1} |B_2g|/(2g)! t^{2g}` and checked against
/// the inverse of [`sinc_half`].
pub fn sinc_half_inverse(order: usize) -> Result<Series> {
    let mut closed = vec![Rat::one()];
    for n in 1..=order {
        if n % 2 == 1 {
            closed.push(Rat::zero());
            continue;
        }
        let p = Rat::int(2).pow(n as i32 - 1);
        let c = (&p - Rat::one()) / &p * bernoulli(n)?.abs() / factorial_rat(n as u64);
        closed.push(c);
    }
    let closed = Series::new(closed)?;
    let inverted = sinc_half(order).inverse()?;
    if closed != inverted {
        let i = (0..=order)
            .find(|&i| closed.coeff(i) != inverted.coeff(i))
            .unwrap_or(0);
        return Err(Error::Integrity(format!(
            "(t/2)/sin(t/2) at t^{i}: Bernoulli form {} vs inverted sine {}",
            closed.coeff(i),
            inverted.coeff(i)
        )));
    }
    Ok(closed)
}

/// Polynomial in `k`; the highest stored coefficient is nonzero and the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rat>", into = "Vec<Rat>")]
pub struct KPoly {
    coeffs: Vec<Rat>,
}

impl From<Vec<Rat>> for KPoly {
    fn from(v: Vec<Rat>) -> Self {
        KPoly::new(v)
    }
}

impl From<KPoly> for Vec<Rat> {
    fn from(p: KPoly) -> Self {
        p.coeffs
    }
}

impl KPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        KPoly { coeffs }
    }

    pub fn zero() -> Self {
        KPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        KPoly::new(vec![Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn add(&self, other: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        KPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &KPoly) -> KPoly {
        if self.is_zero() || other.is_zero() {
            return KPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        KPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> KPoly {
        KPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, k: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * k + c)
    }
}

/// Truncated series in `t` with [`KPoly`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSeries {
    coeffs: Vec<KPoly>,
}

impl KSeries {
    pub fn new(coeffs: Vec<KPoly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("a series needs at least a constant term"));
        }
        Ok(KSeries { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &KPoly {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[KPoly] {
        &self.coeffs
    }

    /// Specializes `k`.
    pub fn eval(&self, k: &Rat) -> Series {
        Series::from_fn(self.order(), |i| self.coeffs[i].eval(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[(i64, i64)]) -> Series {
        Series::new(v.iter().map(|&(n, d)| Rat::new(n, d)).collect()).unwrap()
    }

    #[test]
    fn product_examples() {
        let a = s(&[(1, 1), (1, 1), (0, 1)]);
        let b = s(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.mul(&b).unwrap(), s(&[(1, 1), (0, 1), (-1, 1)]));
        let f0 = sinc_half_inverse(10).unwrap();
        assert_eq!(f0.mul(&f0.inverse().unwrap()).unwrap(), Series::one(10));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let err = Series::one(2).mul(&Series::one(3)).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 2, right: 3 });
        assert!(Series::one(2).add(&Series::one(4)).is_err());
    }

    #[test]
    fn f0_squared_matches_bernoulli_convolution() {
        // |B_2g| / (2g (2g-2)!) evaluated directly
        let f0 = sinc_half_inverse(12).unwrap();
        let sq = f0.mul(&f0).unwrap();
        for g in 1..=6usize {
            let expect = bernoulli(2 * g).unwrap().abs()
                / (Rat::int(2 * g as i64) * factorial_rat(2 * g as u64 - 2));
            assert_eq!(sq.coeff(2 * g), &expect, "g = {g}");
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Series::one(5).inverse().unwrap(), Series::one(5));
        let inv = sinc_half_inverse(6).unwrap().inverse().unwrap();
        assert_eq!(inv.coeff(2), &Rat::new(-1, 24));
        assert_eq!(inv.coeff(4), &Rat::new(1, 1920));
        assert_eq!(inv, sinc_half(6));
        assert_eq!(Series::zero(3).inverse(), Err(Error::Singular));
    }

    #[test]
    fn log_exp_examples() {
        assert_eq!(Series::one(4).log().unwrap(), Series::zero(4));
        assert_eq!(Series::zero(4).exp().unwrap(), Series::one(4));
        let l = sinc_half_inverse(20).unwrap().log().unwrap();
        for k in 1..=10usize {
            let expect = bernoulli(2 * k).unwrap().abs()
                / (Rat::int(2 * k as i64) * factorial_rat(2 * k as u64));
            assert_eq!(l.coeff(2 * k), &expect, "k = {k}");
        }
        assert_eq!(l.coeff(2), &Rat::new(1, 24));
        assert_eq!(l.coeff(4), &Rat::new(1, 2880));
        let e = Series::monomial(8, Rat::new(1, 24), 1).exp().unwrap();
        for g in 0..=8u64 {
            let expect = (Rat::int(24).pow(g as i32) * factorial_rat(g)).recip();
            assert_eq!(e.coeff(g as usize), &expect);
        }
        assert!(Series::constant(3, Rat::int(2)).log().is_err());
        assert!(Series::one(3).exp().is_err());
    }

    #[test]
    fn sinc_half_inverse_coefficients() {
        let f = sinc_half_inverse(6).unwrap();
        assert_eq!(f.coeff(2), &Rat::new(1, 24));
        assert_eq!(f.coeff(4), &Rat::new(7, 5760));
        assert_eq!(f.coeff(6), &Rat::new(31, 967680));
        assert!(f.coeff(1).is_zero() && f.coeff(3).is_zero());
    }

    #[test]
    fn pow_kplus1_examples() {
        let one = Series::one(6).pow_kplus1().unwrap();
        assert!(one.coeffs().iter().skip(1).all(KPoly::is_zero));
        assert_eq!(one.coeff(0), &KPoly::one());

        let f0 = sinc_half_inverse(8).unwrap();
        let f = f0.pow_kplus1().unwrap();
        assert_eq!(
            f.coeff(2),
            &KPoly::new(vec![Rat::new(1, 24), Rat::new(1, 24)])
        );
        assert_eq!(f.eval(&Rat::zero()), f0);
        for g in 0..=4 {
            assert!(f.coeff(2 * g).degree().unwrap_or(0) <= g);
        }
        assert!(Series::constant(2, Rat::int(3)).pow_kplus1().is_err());
    }

    #[test]
    fn pow_kplus1_agrees_with_integer_powers() {
        let f0 = sinc_half_inverse(10).unwrap();
        let f = f0.pow_kplus1().unwrap();
        for xi in -3i64..=3 {
            assert_eq!(f.eval(&Rat::int(xi)), f0.powi(xi + 1).unwrap(), "xi = {xi}");
        }
    }

    #[test]
    fn substitute_it_flips_alternate_even_terms() {
        let f = sinc_half_inverse(4).unwrap().substitute_it().unwrap();
        assert_eq!(f.coeff(2), &Rat::new(-1, 24));
        assert_eq!(f.coeff(4), &Rat::new(7, 5760));
        assert!(s(&[(1, 1), (1, 1)]).substitute_it().is_err());
    }

    #[test]
    fn json_forms() {
        let f = sinc_half_inverse(2).unwrap();
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"order":2,"coeffs":["1","0","1/24"]}"#
        );
        let back: Series =
            serde_json::from_str(r#"{"order":2,"coeffs":["1","0","1/24"]}"#).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Series>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
        let p = KPoly::new(vec![Rat::new(1, 24), Rat::new(1, 24), Rat::zero()]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["1/24","1/24"]"#);
    }

    fn small_series(order: usize) -> impl Strategy<Value = Series> {
        proptest::collection::vec((-5i64..=5, 1i64..=4), order + 1).prop_map(|v| {
            Series::new(v.into_iter().map(|(n, d)| Rat::new(n, d)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_series(5), b in small_series(5), c in small_series(5)) {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn inverse_is_an_involution(mut a in small_series(5), c0 in 1i64..5) {
            a.coeffs[0] = Rat::int(c0);
            prop_assert_eq!(a.inverse().unwrap().inverse().unwrap(), a.clone());
            prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), Series::one(5));
        }

        #[test]
        fn exp_log_inverse(mut a in small_series(6)) {
            a.coeffs[0] = Rat::zero();
            let e = a.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), a.clone());
            let mut b = a.clone();
            b.coeffs[0] = Rat::one();
            prop_assert_eq!(b.log().unwrap().exp().unwrap(), b);
        }
    }
}
