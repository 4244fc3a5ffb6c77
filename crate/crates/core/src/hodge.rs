//! Hodge integrals `∫_{M̄_{g,n}} Π ψ_i^{k_i} Π λ_j^{e_j}`.
//!
//! λ monomials are first rewritten in the odd Chern characters of the Hodge
//! bundle. Each `ch_{2l-1}` is then replaced using Mumford's
//! Grothendieck-Riemann-Roch expression
//!
//! ```text
//! ch_{2l-1}(E) = B_{2l}/(2l)! [ κ_{2l-1}
//!                + 1/2 Σ_{ξ ∈ Δ} ι_* Σ_{i=0}^{2l-2} (-1)^i ψ_*^i ψ_•^{2l-2-i} ]
//! ```
//!
//! where `Δ` holds every ordered stable splitting (with repetition) plus the
//! irreducible divisor. Remaining ch insertions restrict additively to the two
//! factors of a reducible divisor and unchanged to the irreducible one. The
//! κ introduced by a step is eliminated right away through the forgetful map,
//! so κ classes never need restricting to the boundary.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::arith::{bernoulli, factorial_rat, Rat};
use crate::cache::IntegralCache;
use crate::error::{domain, Error, Result};
use crate::intersect::{dimension, is_stable, join, Intersector, PsiKey};
use crate::series::{KPoly, KSeries, Series};

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// `Π ψ_i^{k_i} · λ_1^{e_1} ... λ_g^{e_g}` on `M̄_{g,n}`, `n = psi.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaMonomial {
    genus: u32,
    psi: Vec<u32>,
    lambda_exps: Vec<u32>,
}

impl LambdaMonomial {
    /// `lambda_exps[j-1]` is the exponent of `λ_j`; at most `g` entries.
    pub fn new(genus: u32, psi: Vec<u32>, mut lambda_exps: Vec<u32>) -> Result<Self> {
        if !is_stable(genus, psi.len()) {
            return Err(Error::Unstable {
                genus,
                markings: psi.len(),
            });
        }
        if lambda_exps.len() > genus as usize {
            if lambda_exps[genus as usize..].iter().any(|&e| e > 0) {
                return Err(domain(format!("λ index exceeds the genus {genus}")));
            }
            lambda_exps.truncate(genus as usize);
        }
        lambda_exps.resize(genus as usize, 0);
        Ok(LambdaMonomial {
            genus,
            psi: sorted_desc(psi),
            lambda_exps,
        })
    }

    /// From a list of λ indices, e.g. `[1, 1, 1]` for `λ_1^3`. Index 0 is `λ_0 = 1`.
    pub fn from_indices(genus: u32, psi: Vec<u32>, lambdas: &[u32]) -> Result<Self> {
        let mut exps = vec![0u32; genus as usize];
        for &j in lambdas {
            if j == 0 {
                continue;
            }
            if j > genus {
                return Err(domain(format!("λ_{j} does not exist in genus {genus}")));
            }
            exps[j as usize - 1] += 1;
        }
        LambdaMonomial::new(genus, psi, exps)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn psi(&self) -> &[u32] {
        &self.psi
    }

    pub fn lambda_exps(&self) -> &[u32] {
        &self.lambda_exps
    }

    pub fn lambda_degree(&self) -> u32 {
        self.lambda_exps
            .iter()
            .enumerate()
            .map(|(j, &e)| (j as u32 + 1) * e)
            .sum()
    }

    pub fn degree(&self) -> i64 {
        self.psi.iter().map(|&k| k as i64).sum::<i64>() + self.lambda_degree() as i64
    }
}

/// Linear combination of monomials in `ch_1, ch_3, ch_5, ...`, each stored as
/// an ascending list of indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChPoly {
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl ChPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        ChPoly::monomial(vec![], Rat::one())
    }

    /// `c · Π ch_{i}`; zero if any index is even, since those components vanish.
    pub fn monomial(mut indices: Vec<u32>, c: Rat) -> Self {
        let mut p = ChPoly::zero();
        if c.is_zero() || indices.iter().any(|&i| i % 2 == 0) {
            return p;
        }
        indices.sort_unstable();
        p.terms.insert(indices, c);
        p
    }

    /// `ch_k` as a polynomial.
    pub fn ch(k: u32) -> Self {
        ChPoly::monomial(vec![k], Rat::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ChPoly) -> ChPoly {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    fn add_term(&mut self, k: Vec<u32>, v: Rat) {
        let e = self.terms.entry(k).or_default();
        *e += v;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn scale(&self, c: &Rat) -> ChPoly {
        if c.is_zero() {
            return ChPoly::zero();
        }
        ChPoly {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &ChPoly) -> ChPoly {
        let mut out = ChPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut k = a.clone();
                k.extend_from_slice(b);
                k.sort_unstable();
                out.add_term(k, x * y);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> ChPoly {
        (0..e).fold(ChPoly::one(), |acc, _| acc.mul(self))
    }

    /// Cohomological degree of every monomial, or `None` if mixed.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|k| k.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

/// `λ_j` in odd Chern characters, from
/// `Σ_k (-1)^{k-1} (k-1)! ch_k t^k = log Σ_j λ_j t^j`.
fn lambda_class_in_ch(max: u32) -> Vec<ChPoly> {
    // exponentiate the log series with ChPoly coefficients
    let p: Vec<ChPoly> = (0..=max)
        .map(|k| {
            if k == 0 {
                ChPoly::zero()
            } else {
                ChPoly::ch(k).scale(&(Rat::sign(k as i64 - 1) * factorial_rat(k as u64 - 1)))
            }
        })
        .collect();
    let mut e = vec![ChPoly::one()];
    for n in 1..=max as usize {
        let mut s = ChPoly::zero();
        for (j, pj) in p.iter().enumerate().take(n + 1).skip(1) {
            if pj.is_zero() {
                continue;
            }
            s = s.add(&pj.mul(&e[n - j]).scale(&Rat::int(j as i64)));
        }
        e.push(s.scale(&Rat::new(1, n as i64)));
    }
    e
}

/// The λ part of a monomial as a polynomial in odd ch's.
pub fn lambda_to_ch(m: &LambdaMonomial) -> ChPoly {
    let lambdas = lambda_class_in_ch(m.genus);
    m.lambda_exps
        .iter()
        .enumerate()
        .fold(ChPoly::one(), |acc, (j, &e)| {
            acc.mul(&lambdas[j + 1].pow(e))
        })
}

/// An integral of ψ, κ (relative dualizing) and ch insertions on `M̄_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HodgeKey {
    genus: u32,
    psi: Vec<u32>,
    kappas: Vec<u32>,
    ch: Vec<u32>,
}

impl HodgeKey {
    pub fn new(genus: u32, psi: Vec<u32>, kappas: Vec<u32>, ch: Vec<u32>) -> Result<Self> {
        if !is_stable(genus, psi.len()) {
            return Err(Error::Unstable {
                genus,
                markings: psi.len(),
            });
        }
        if kappas.contains(&0) {
            return Err(domain("κ indices must be positive"));
        }
        Ok(HodgeKey::raw(genus, psi, kappas, ch))
    }

    fn raw(genus: u32, psi: Vec<u32>, kappas: Vec<u32>, ch: Vec<u32>) -> Self {
        HodgeKey {
            genus,
            psi: sorted_desc(psi),
            kappas: sorted_desc(kappas),
            ch: sorted_desc(ch),
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn psi(&self) -> &[u32] {
        &self.psi
    }

    pub fn kappas(&self) -> &[u32] {
        &self.kappas
    }

    pub fn ch(&self) -> &[u32] {
        &self.ch
    }

    pub fn markings(&self) -> usize {
        self.psi.len()
    }

    pub fn degree(&self) -> i64 {
        self.psi
            .iter()
            .chain(&self.kappas)
            .chain(&self.ch)
            .map(|&k| k as i64)
            .sum()
    }

    fn dimension_matches(&self) -> bool {
        self.degree() == dimension(self.genus, self.psi.len())
    }
}

impl fmt::Display for HodgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}|psi:{}|kappa:{}|ch:{}",
            self.genus,
            join(&self.psi),
            join(&self.kappas),
            join(&self.ch)
        )
    }
}

impl FromStr for HodgeKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a key: {s:?}"));
        let mut parts = s.trim().split('|');
        let genus: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let mut list = |tag: &str| -> Result<Vec<u32>> {
            let field = parts.next().ok_or_else(bad)?;
            let body = field.strip_prefix(tag).ok_or_else(bad)?;
            if body.is_empty() {
                return Ok(vec![]);
            }
            body.split(',')
                .map(|x| x.parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        let psi = list("psi:")?;
        let kappas = list("kappa:")?;
        let ch = list("ch:")?;
        if parts.next().is_some() {
            return Err(bad());
        }
        HodgeKey::new(genus, psi, kappas, ch)
    }
}

/// `coeff · Π ∫ factors`; one factor for connected terms, two for a
/// reducible boundary stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrrTerm {
    pub coeff: Rat,
    pub factors: Vec<HodgeKey>,
}

/// Rewrites the highest-index ch insertion of `key` by Mumford's formula.
///
/// Factors that fail the dimension gate are dropped, and identical terms are
/// merged. The κ of the first term is the relative-dualizing class.
pub fn grr_step(key: &HodgeKey) -> Result<Vec<GrrTerm>> {
    let Some((&c, rest)) = key.ch.split_first() else {
        return Err(domain(format!(
            "{key} has no ch insertion; evaluate it as a κ/ψ integral"
        )));
    };
    if !key.kappas.is_empty() {
        return Err(domain(format!(
            "{key} still carries κ classes; eliminate them before a GRR step"
        )));
    }
    if c % 2 == 0 {
        return Ok(vec![]);
    }
    let two_l = c as usize + 1;
    let b = bernoulli(two_l)? / factorial_rat(two_l as u64);
    let half = &b / Rat::int(2);
    let top = c - 1; // 2l - 2
    let g = key.genus;
    let n = key.psi.len();
    let rest = rest.to_vec();

    let mut acc: BTreeMap<Vec<HodgeKey>, Rat> = BTreeMap::new();
    let mut push = |factors: Vec<HodgeKey>, coeff: Rat| {
        if factors.iter().all(HodgeKey::dimension_matches) {
            *acc.entry(factors).or_default() += coeff;
        }
    };

    push(
        vec![HodgeKey::raw(g, key.psi.clone(), vec![c], rest.clone())],
        b.clone(),
    );

    for i in 0..=top {
        let sign = Rat::sign(i as i64);
        if g >= 1 {
            let mut psi = key.psi.clone();
            psi.push(i);
            psi.push(top - i);
            push(
                vec![HodgeKey::raw(g - 1, psi, vec![], rest.clone())],
                &half * &sign,
            );
        }
        for g1 in 0..=g {
            let g2 = g - g1;
            for a_mask in 0u64..(1u64 << n) {
                let on_left = a_mask.count_ones() as usize;
                if !is_stable(g1, on_left + 1) || !is_stable(g2, n - on_left + 1) {
                    continue;
                }
                let (mut lpsi, mut rpsi) = (vec![i], vec![top - i]);
                for (j, &k) in key.psi.iter().enumerate() {
                    if a_mask >> j & 1 == 1 {
                        lpsi.push(k);
                    } else {
                        rpsi.push(k);
                    }
                }
                for r_mask in 0u64..(1u64 << rest.len()) {
                    let (mut lch, mut rch) = (vec![], vec![]);
                    for (j, &k) in rest.iter().enumerate() {
                        if r_mask >> j & 1 == 1 {
                            lch.push(k);
                        } else {
                            rch.push(k);
                        }
                    }
                    push(
                        vec![
                            HodgeKey::raw(g1, lpsi.clone(), vec![], lch),
                            HodgeKey::raw(g2, rpsi.clone(), vec![], rch),
                        ],
                        &half * &sign,
                    );
                }
            }
        }
    }

    Ok(acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(factors, coeff)| GrrTerm { coeff, factors })
        .collect())
}

/// Polynomial in the λ classes of a fixed genus, keyed by ascending index lists
/// (`λ_0 = 1` is the empty list).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPoly {
    genus: u32,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl LambdaPoly {
    pub fn one(genus: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![], Rat::one());
        LambdaPoly { genus, terms }
    }

    /// `Λ(k) = Σ_{i=0}^{g} k^i λ_{g-i}`.
    pub fn capital_lambda(genus: u32, k: &Rat) -> Self {
        let mut terms = BTreeMap::new();
        for i in 0..=genus {
            let c = k.pow(i as i32);
            if c.is_zero() {
                continue;
            }
            let j = genus - i;
            let key = if j == 0 { vec![] } else { vec![j] };
            terms.insert(key, c);
        }
        LambdaPoly { genus, terms }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Product, dropping monomials of degree above `max_degree`.
    pub fn mul(&self, other: &LambdaPoly, max_degree: u32) -> LambdaPoly {
        assert_eq!(self.genus, other.genus, "λ classes of different genera");
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let deg: u32 = a.iter().chain(b).sum();
                if deg > max_degree {
                    continue;
                }
                let mut k = a.clone();
                k.extend_from_slice(b);
                k.sort_unstable();
                *terms.entry(k).or_default() += x * y;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LambdaPoly {
            genus: self.genus,
            terms,
        }
    }
}

/// Memoized evaluator for Hodge integrals.
#[derive(Debug, Default)]
pub struct HodgeEngine {
    base: Intersector,
    keys: IntegralCache<HodgeKey>,
    monomials: IntegralCache<LambdaMonomial>,
}

impl HodgeEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intersector(&self) -> &Intersector {
        &self.base
    }

    pub fn key_cache(&self) -> &IntegralCache<HodgeKey> {
        &self.keys
    }

    /// `∫ Π ψ^{psi} Π λ_{lambdas}` over `M̄_{g,n}`, `n = psi.len()`.
    pub fn hodge(&self, genus: u32, psi: &[u32], lambdas: &[u32]) -> Result<Rat> {
        let m = LambdaMonomial::from_indices(genus, psi.to_vec(), lambdas)?;
        Ok(self.hodge_integral(&m))
    }

    pub fn hodge_integral(&self, m: &LambdaMonomial) -> Rat {
        if m.degree() != dimension(m.genus, m.psi.len()) {
            return Rat::zero();
        }
        if let Some(v) = self.monomials.get(m) {
            return v;
        }
        let poly = lambda_to_ch(m);
        let mut total = Rat::zero();
        for (ch, c) in poly.terms() {
            let key = HodgeKey::raw(m.genus, m.psi.clone(), vec![], ch.to_vec());
            let v = self.eval(&key);
            if !v.is_zero() {
                total += c * v;
            }
        }
        self.monomials.insert(m.clone(), total)
    }

    /// Value of an arbitrary stable key.
    pub fn eval(&self, key: &HodgeKey) -> Rat {
        if !key.dimension_matches() {
            return Rat::zero();
        }
        if key.ch.iter().any(|&c| c % 2 == 0 && c > 0) {
            return Rat::zero();
        }
        if key.ch.contains(&0) {
            let ch = key
                .ch
                .iter()
                .copied()
                .filter(|&c| c != 0)
                .collect::<Vec<_>>();
            let zeros = key.ch.len() - ch.len();
            let g = Rat::int(key.genus as i64).pow(zeros as i32);
            return g * self.eval(&HodgeKey::raw(
                key.genus,
                key.psi.clone(),
                key.kappas.clone(),
                ch,
            ));
        }
        if key.genus == 0 && !key.ch.is_empty() {
            // the Hodge bundle has rank 0
            return Rat::zero();
        }
        if key.kappas.is_empty() && key.ch.is_empty() {
            return self
                .base
                .psi_integral(&PsiKey::new(key.genus, key.psi.clone()).expect("stable key"));
        }
        if let Some(v) = self.keys.get(key) {
            return v;
        }
        let v = if key.kappas.is_empty() {
            self.eval_grr(key)
        } else {
            self.eliminate_kappa(key)
        };
        self.keys.insert(key.clone(), v)
    }

    fn eval_grr(&self, key: &HodgeKey) -> Rat {
        let mut total = Rat::zero();
        for term in grr_step(key).expect("key has a ch insertion") {
            let mut v = term.coeff;
            for f in &term.factors {
                if v.is_zero() {
                    break;
                }
                v *= self.eval(f);
            }
            total += v;
        }
        total
    }

    /// `∫ κ_a X = ∫_{n+1} ψ_{n+1}^{a+1} X - Σ_i ∫ ψ_i^{k_i + a} X'`; the Hodge
    /// bundle and the remaining κ's pull back along the forgetful map.
    fn eliminate_kappa(&self, key: &HodgeKey) -> Rat {
        let mut kappas = key.kappas.clone();
        let a = kappas.remove(0);
        let mut up = key.psi.clone();
        up.push(a + 1);
        let mut total = self.eval(&HodgeKey::raw(
            key.genus,
            up,
            kappas.clone(),
            key.ch.clone(),
        ));
        for i in 0..key.psi.len() {
            let mut psi = key.psi.clone();
            psi[i] += a;
            total -= self.eval(&HodgeKey::raw(
                key.genus,
                psi,
                kappas.clone(),
                key.ch.clone(),
            ));
        }
        total
    }

    /// `Σ c · ∫_{M̄_{g,n}} Π ψ^{psi} · (λ monomial)` over a [`LambdaPoly`].
    pub fn integrate_lambda_poly(&self, psi: &[u32], poly: &LambdaPoly) -> Result<Rat> {
        let mut total = Rat::zero();
        for (lambdas, c) in poly.terms() {
            total += c * self.hodge(poly.genus, psi, lambdas)?;
        }
        Ok(total)
    }

    /// `∫_{M̄_{g,1}} P / (1 - ψ_1)`, with the genus-0 factor defined as 1.
    pub fn one_point_descendant(&self, poly: &LambdaPoly) -> Result<Rat> {
        let g = poly.genus;
        if g == 0 {
            return Ok(poly.terms.get(&vec![]).cloned().unwrap_or_default());
        }
        let dim = 3 * g - 2;
        let mut total = Rat::zero();
        for (lambdas, c) in poly.terms() {
            let deg: u32 = lambdas.iter().sum();
            if deg > dim {
                continue;
            }
            total += c * self.hodge(g, &[dim - deg], lambdas)?;
        }
        Ok(total)
    }

    /// `∫_{M̄_{g,1}} ψ_1^{2g-2+i} λ_{g-i}`, the `k^i t^{2g}` coefficient of `F(t, k)`.
    pub fn f_coefficient(&self, genus: u32, i: u32) -> Result<Rat> {
        if genus == 0 || i > genus {
            return Err(domain(format!(
                "need 0 <= i <= g and g >= 1, got g={genus}, i={i}"
            )));
        }
        self.hodge(genus, &[2 * genus - 2 + i], &[genus - i])
    }

    /// `f_ξ(t) = 1 + Σ_g t^{2g} Σ_i ξ^i ∫ ψ^{2g-2+i} λ_{g-i}` through `t^{2G}`.
    pub fn capped_lambda_series(&self, xi: i64, max_genus: u32) -> Result<Series> {
        let xi = Rat::int(xi);
        let mut coeffs = vec![Rat::zero(); 2 * max_genus as usize + 1];
        coeffs[0] = Rat::one();
        for g in 1..=max_genus {
            let mut c = Rat::zero();
            for i in 0..=g {
                let w = xi.pow(i as i32);
                if !w.is_zero() {
                    c += w * self.f_coefficient(g, i)?;
                }
            }
            coeffs[2 * g as usize] = c;
        }
        Series::new(coeffs)
    }

    /// `F(t, k)` through `t^{2G}` from engine values.
    pub fn f_table(&self, max_genus: u32) -> Result<KSeries> {
        let mut coeffs = vec![KPoly::zero(); 2 * max_genus as usize + 1];
        coeffs[0] = KPoly::one();
        for g in 1..=max_genus {
            let c = (0..=g)
                .map(|i| self.f_coefficient(g, i))
                .collect::<Result<Vec<_>>>()?;
            coeffs[2 * g as usize] = KPoly::new(c);
        }
        KSeries::new(coeffs)
    }

    /// Cached values in the canonical `g|psi:..|kappa:..|ch:..` form, sorted.
    pub fn export_cache(&self) -> Vec<(String, Rat)> {
        let mut out: Vec<(String, Rat)> = self
            .base
            .psi_cache()
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .chain(
                self.base
                    .kappa_cache()
                    .entries()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v)),
            )
            .chain(
                self.keys
                    .entries()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v)),
            )
            .collect();
        out.sort();
        out
    }

    /// Seeds the caches from exported entries (write-once rules apply).
    pub fn import_entry(&self, key: &str, value: Rat) -> Result<()> {
        let key: HodgeKey = key.parse()?;
        if key.kappas.is_empty() && key.ch.is_empty() {
            self.base
                .psi_cache()
                .insert(PsiKey::new(key.genus, key.psi)?, value);
        } else if key.ch.is_empty() {
            self.base.kappa_cache().insert(
                crate::intersect::KappaPsiKey::new(key.genus, key.psi, key.kappas)?,
                value,
            );
        } else {
            self.keys.insert(key, value);
        }
        Ok(())
    }
}
