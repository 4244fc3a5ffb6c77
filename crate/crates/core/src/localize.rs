//! Relations from torus localization on spaces of maps to P¹, in the
//! collapsed forms that only involve one-pointed Hodge integrals.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{factorial_rat, Rat};
use crate::error::{domain, Result};
use crate::hodge::{HodgeEngine, LambdaPoly};
use crate::series::Series;

/// A partition of `d`, parts in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(domain("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// Every partition of `d`, in reverse lexicographic order.
    pub fn all(d: u32) -> Vec<Partition> {
        fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(d, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `Π_v (multiplicity of v)!`.
    pub fn aut(&self) -> Rat {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for &p in &self.parts {
            *counts.entry(p).or_default() += 1;
        }
        counts.values().map(|&c| factorial_rat(c)).product()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Torus weights `[α, α]` or `[α, α+1]` and `[β, β+1]` on the two bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Linearization {
    pub alpha: i64,
    pub beta: i64,
}

impl Linearization {
    pub fn new(alpha: i64, beta: i64) -> Self {
        Linearization { alpha, beta }
    }
}

/// `∫_{M̄_{h,1}} Π Λ(k_j) / (1 - ψ_1)`; 1 when `h = 0`.
fn lambda_factor(e: &HodgeEngine, h: u32, ks: &[i64]) -> Result<Rat> {
    let cap = if h == 0 { 0 } else { 3 * h - 2 };
    let poly = ks.iter().fold(LambdaPoly::one(h), |acc, &k| {
        acc.mul(&LambdaPoly::capital_lambda(h, &Rat::int(k)), cap)
    });
    e.one_point_descendant(&poly)
}

fn split_sum(e: &HodgeEngine, g: u32, first: &[i64], second: &[i64]) -> Result<Rat> {
    let mut total = Rat::zero();
    for g1 in 0..=g {
        let a = lambda_factor(e, g1, first)?;
        if a.is_zero() {
            continue;
        }
        total += a * lambda_factor(e, g - g1, second)?;
    }
    Ok(total)
}

/// `I_g(α, β)`.
#[allow(non_snake_case)]
pub fn I_g(e: &HodgeEngine, g: u32, lin: Linearization) -> Result<Rat> {
    let Linearization { alpha, beta } = lin;
    split_sum(e, g, &[-1, -alpha, -beta], &[-1, alpha, beta + 1])
}

/// `J_g(α, β)`.
#[allow(non_snake_case)]
pub fn J_g(e: &HodgeEngine, g: u32, lin: Linearization) -> Result<Rat> {
    let Linearization { alpha, beta } = lin;
    split_sum(e, g, &[-1, -alpha, -beta], &[-1, alpha + 1, beta + 1])
}

fn one_plus(max_genus: u32, mut coeff: impl FnMut(u32) -> Result<Rat>) -> Result<Series> {
    let mut c = vec![Rat::zero(); 2 * max_genus as usize + 1];
    c[0] = Rat::one();
    for g in 1..=max_genus {
        c[2 * g as usize] = coeff(g)?;
    }
    Series::new(c)
}

/// `1 + Σ_g t^{2g} I_g(α, β)` through `t^{2G}`.
pub fn i_series(e: &HodgeEngine, max_genus: u32, lin: Linearization) -> Result<Series> {
    one_plus(max_genus, |g| I_g(e, g, lin))
}

/// `1 + Σ_g t^{2g} J_g(α, β)` through `t^{2G}`.
pub fn j_series(e: &HodgeEngine, max_genus: u32, lin: Linearization) -> Result<Series> {
    one_plus(max_genus, |g| J_g(e, g, lin))
}

/// `g_ξ(t) = 1 + Σ_g t^{2g} ∫ Λ(-1)Λ(0)Λ(-ξ)/(1 - ψ_1)`.
pub fn g_series(e: &HodgeEngine, xi: i64, max_genus: u32) -> Result<Series> {
    one_plus(max_genus, |g| lambda_factor(e, g, &[-1, 0, -xi]))
}

/// `C(g, d) = d^{2g-3} Σ_{g_1+g_2=g} b_{g_1} b_{g_2}`, with `b` from the engine.
#[allow(non_snake_case)]
pub fn C_localized(e: &HodgeEngine, g: u32, d: i64) -> Result<Rat> {
    if d <= 0 {
        return Err(domain(format!("degree must be positive, got {d}")));
    }
    let b = e.capped_lambda_series(0, g.max(1))?;
    let conv: Rat = (0..=g)
        .map(|h| b.coeff(2 * h as usize) * b.coeff(2 * (g - h) as usize))
        .sum();
    Ok(Rat::int(d).pow(2 * g as i32 - 3) * conv)
}

/// All exponent vectors of length `n` with the given sum.
pub fn compositions(n: usize, sum: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if sum == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=sum {
        for mut rest in compositions(n - 1, sum - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One summand of the partition relation, indexed by `m`.
pub fn partition_term(e: &HodgeEngine, g: u32, m: &Partition) -> Result<Rat> {
    let l = m.len();
    let d = m.size();
    let mut weight = Rat::sign(d as i64 + l as i64) / m.aut();
    for &p in m.parts() {
        let r = Rat::int(p as i64);
        weight *= r.pow(p as i32) / (&r * factorial_rat(p as u64));
    }
    let mut integral = Rat::zero();
    for ks in compositions(l, 2 * g + l as u32 - 2) {
        let mut psi = ks.clone();
        psi.push(0);
        let c: Rat = ks
            .iter()
            .zip(m.parts())
            .map(|(&k, &p)| Rat::int(p as i64).pow(k as i32))
            .product();
        integral += c * e.hodge(g, &psi, &[g])?;
    }
    Ok(weight * integral)
}

/// `Σ_{m ⊢ d} (-1)^{d+l(m)} Π m_i^{m_i} / (Aut(m) Π m_i Π m_i!) ∫ λ_g / Π(1 - m_i ψ_i)`.
pub fn partition_relation(e: &HodgeEngine, g: u32, d: u32) -> Result<Rat> {
    if g == 0 || d < 2 {
        return Err(domain(format!("needs g >= 1 and d >= 2, got g={g}, d={d}")));
    }
    Partition::all(d)
        .iter()
        .map(|m| partition_term(e, g, m))
        .sum()
}

/// `∫_{M̄_{g,1}} (c(E)/(1 + ψ_1))_j · ψ_1^{3g-2-j}`.
pub fn chern_over_psi(e: &HodgeEngine, g: u32, j: u32) -> Result<Rat> {
    if g == 0 || j > 3 * g - 2 {
        return Err(domain(format!(
            "needs g >= 1 and j <= 3g-2, got g={g}, j={j}"
        )));
    }
    let mut total = Rat::zero();
    for i in 0..=g.min(j) {
        let v = e.hodge(g, &[3 * g - 2 - i], &[i])?;
        total += Rat::sign((j - i) as i64) * v;
    }
    Ok(total)
}
