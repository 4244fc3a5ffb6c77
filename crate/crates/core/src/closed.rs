//! Closed-form values built only from Bernoulli numbers and series
//! arithmetic. Nothing here calls the integral engine.

use serde::Serialize;

use crate::arith::{bernoulli, double_factorial, factorial_rat, harmonic, multinomial, Rat};
use crate::error::{domain, Result};
use crate::series::{sinc_half_inverse, Series};

fn abs_bernoulli(m: usize) -> Result<Rat> {
    Ok(bernoulli(m)?.abs())
}

/// `(2^{2g-1} - 1) / 2^{2g-1}`, with absolute value taken so that `g = 0` gives 1.
fn sinc_weight(g: u32) -> Rat {
    let p = Rat::int(2).pow(2 * g as i32 - 1);
    ((&p - Rat::one()) / p).abs()
}

/// `b_g = ∫_{M̄_{g,1}} ψ^{2g-2} λ_g`; `b_0 = 1`.
pub fn b_closed(g: u32) -> Result<Rat> {
    if g == 0 {
        return Ok(Rat::one());
    }
    let m = 2 * g as usize;
    Ok(sinc_weight(g) * abs_bernoulli(m)? / factorial_rat(m as u64))
}

/// `Σ_g c_g t^{2g} = f · log f` with `f = (t/2)/sin(t/2)`, through `t^N`.
pub fn c_closed_series(order: usize) -> Result<Series> {
    if order < 2 {
        return Err(domain(format!("order must be at least 2, got {order}")));
    }
    let f = sinc_half_inverse(order)?;
    f.mul(&f.log()?)
}

/// Genus-`g` degree-`d` multiple-cover contribution.
#[allow(non_snake_case)]
pub fn C_closed(g: u32, d: i64) -> Result<Rat> {
    if d <= 0 {
        return Err(domain(format!("degree must be positive, got {d}")));
    }
    let d = Rat::int(d);
    Ok(match g {
        0 => d.pow(-3),
        1 => (Rat::int(12) * d).recip(),
        _ => {
            let m = 2 * g as usize;
            abs_bernoulli(m)? * d.pow(m as i32 - 3)
                / (Rat::int(m as i64) * factorial_rat(m as u64 - 2))
        }
    })
}

/// `∫_{M̄_g} λ_{g-1}^3 = |B_{2g}|/2g · |B_{2g-2}|/(2g-2) · 1/(2g-2)!`.
pub fn lambda3_closed(g: u32) -> Result<Rat> {
    if g < 2 {
        return Err(domain(format!("needs g >= 2, got {g}")));
    }
    let m = 2 * g as usize;
    Ok(
        abs_bernoulli(m)? / Rat::int(m as i64) * abs_bernoulli(m - 2)?
            / Rat::int(m as i64 - 2)
            / factorial_rat(m as u64 - 2),
    )
}

/// `∫ ψ_1^{k_1} ... ψ_n^{k_n} λ_g = binom(2g-3+n; k) · b_g`, or 0 off-dimension.
pub fn lamg_closed(g: u32, ks: &[u32]) -> Result<Rat> {
    let n = ks.len() as i64;
    let top = 2 * g as i64 - 3 + n;
    let sum: i64 = ks.iter().map(|&k| k as i64).sum();
    if top < 0 || sum != top {
        return Ok(Rat::zero());
    }
    let parts: Vec<u64> = ks.iter().map(|&k| k as u64).collect();
    Ok(multinomial(top as u64, &parts)? * b_closed(g)?)
}

/// n-point `∫ Π ψ_i^{k_i} λ_g λ_{g-1}` from the one-point value `base`.
pub fn lamgg_closed(g: u32, ks: &[u32], base: &Rat) -> Result<Rat> {
    if g < 2 {
        return Err(domain(format!("needs g >= 2, got {g}")));
    }
    if ks.contains(&0) {
        return Err(domain("all exponents must be positive"));
    }
    let n = ks.len() as i64;
    let sum: i64 = ks.iter().map(|&k| k as i64).sum();
    if sum != g as i64 - 2 + n {
        return Ok(Rat::zero());
    }
    let mut den = factorial_rat(2 * g as u64 - 1);
    for &k in ks {
        den *= double_factorial(2 * k as i64 - 1)?;
    }
    let num = factorial_rat((2 * g as i64 + n - 3) as u64) * double_factorial(2 * g as i64 - 1)?;
    Ok(num / den * base)
}

/// `(c_g, H_{2g-1} b_g - ½ Σ (2g_1-1)!(2g_2-1)!/(2g-1)! b_{g_1} b_{g_2})`.
pub fn ihop_check(g: u32) -> Result<(Rat, Rat)> {
    if g == 0 {
        return Err(domain("needs g >= 1"));
    }
    let c = c_closed_series(2 * g as usize)?
        .coeff(2 * g as usize)
        .clone();
    let mut split = Rat::zero();
    for g1 in 1..g {
        let g2 = g - g1;
        split += factorial_rat(2 * g1 as u64 - 1) * factorial_rat(2 * g2 as u64 - 1)
            / factorial_rat(2 * g as u64 - 1)
            * b_closed(g1)?
            * b_closed(g2)?;
    }
    let rhs = harmonic(2 * g as u64 - 1) * b_closed(g)? - split / Rat::int(2);
    Ok((c, rhs))
}

/// One exact identity, `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, lhs: Rat, rhs: Rat) -> Self {
        IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn beta(g: u32) -> Result<Rat> {
    let m = 2 * g as usize;
    Ok((Rat::int(2) - Rat::int(2).pow(m as i32)) * bernoulli(m)? / factorial_rat(m as u64))
}

/// The Bernoulli-number identities at genus `g`: the convolution of the `b`'s,
/// the `t^{2g}` coefficient of `log((t/2)/sin(t/2))`, and the identity behind
/// the `c_g` prediction in its stated form and in the `a + b = c` form.
pub fn bernoulli_identity_checks(g: u32) -> Result<Vec<IdentityCheck>> {
    if g == 0 {
        return Err(domain("needs g >= 1"));
    }
    let m = 2 * g as usize;
    let bm = abs_bernoulli(m)?;
    let mut out = Vec::new();

    let conv = (0..=g)
        .map(|h| Ok(b_closed(h)? * b_closed(g - h)?))
        .sum::<Result<Rat>>()?;
    out.push(IdentityCheck::new(
        format!("b-convolution/g={g}"),
        conv,
        &bm / (Rat::int(m as i64) * factorial_rat(m as u64 - 2)),
    ));

    let log = sinc_half_inverse(m)?.log()?;
    out.push(IdentityCheck::new(
        format!("log-sinc/k={g}"),
        log.coeff(m).clone(),
        &bm / (Rat::int(m as i64) * factorial_rat(m as u64)),
    ));

    let lhs = harmonic(m as u64 - 1) * sinc_weight(g) * &bm / factorial_rat(m as u64);
    let mut rhs = Rat::zero();
    for k in 0..g {
        let (a, r) = (2 * k as usize, m - 2 * k as usize);
        rhs += sinc_weight(k) * abs_bernoulli(a)? / factorial_rat(a as u64) * abs_bernoulli(r)?
            / (Rat::int(r as i64) * factorial_rat(r as u64));
    }
    let mut tail = Rat::zero();
    for g1 in 1..g {
        let g2 = g - g1;
        tail += sinc_weight(g1) * sinc_weight(g2) * abs_bernoulli(2 * g1 as usize)?
            / Rat::int(2 * g1 as i64)
            * abs_bernoulli(2 * g2 as usize)?
            / Rat::int(2 * g2 as i64);
    }
    rhs += tail / (Rat::int(2) * factorial_rat(m as u64 - 1));
    out.push(IdentityCheck::new(
        format!("harmonic-weighted/g={g}"),
        lhs,
        rhs,
    ));

    let a = harmonic(m as u64 - 1) * beta(g)?;
    let mut b = Rat::zero();
    for n in 1..=g {
        let k = 2 * n as usize;
        b += Rat::int(2).pow(k as i32) * bernoulli(k)?
            / (Rat::int(k as i64) * factorial_rat(k as u64))
            * beta(g - n)?;
    }
    let mut c = Rat::zero();
    for g1 in 1..g {
        let g2 = g - g1;
        c += factorial_rat(2 * g1 as u64 - 1) * factorial_rat(2 * g2 as u64 - 1)
            / factorial_rat(m as u64 - 1)
            * beta(g1)?
            * beta(g2)?;
    }
    out.push(IdentityCheck::new(
        format!("beta-convolution/g={g}"),
        a + b,
        c / Rat::int(2),
    ));
    Ok(out)
}
