//! Pure ψ intersection numbers `<τ_{k_1} ... τ_{k_n}>_g` and the elimination
//! of κ classes in favor of ψ classes.
//!
//! ψ integrals are computed by the Dijkgraaf-Verlinde-Verlinde recursion on
//! the largest exponent, seeded with `<τ_0^3>_0 = 1` and `<τ_1>_1 = 1/24`.
//!
//! κ classes here are `κ_a = π_*(c_1(ω_π)^{a+1})` with `ω_π` the relative
//! dualizing sheaf of the universal curve, so on `M̄_{g,n}`
//! `κ_a = κ_a^{AC} - Σ_i ψ_i^a`, where `κ^{AC}` is the Arbarello-Cornalba class
//! pushed forward from `ψ_{n+1}^{a+1}`.

use std::fmt;

use crate::arith::{double_factorial, Rat};
use crate::cache::IntegralCache;
use crate::error::{Error, Result};

/// `2g - 2 + n > 0`.
pub fn is_stable(genus: u32, markings: usize) -> bool {
    2 * genus as i64 - 2 + markings as i64 > 0
}

/// `3g - 3 + n`.
pub fn dimension(genus: u32, markings: usize) -> i64 {
    3 * genus as i64 - 3 + markings as i64
}

fn check_stable(genus: u32, markings: usize) -> Result<()> {
    if is_stable(genus, markings) {
        Ok(())
    } else {
        Err(Error::Unstable { genus, markings })
    }
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

pub(crate) fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// A stable `(g, n)` with ψ exponents stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PsiKey {
    genus: u32,
    exps: Vec<u32>,
}

impl PsiKey {
    pub fn new(genus: u32, exps: Vec<u32>) -> Result<Self> {
        check_stable(genus, exps.len())?;
        Ok(PsiKey {
            genus,
            exps: sorted_desc(exps),
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|&k| k as i64).sum()
    }
}

impl fmt::Display for PsiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|psi:{}|kappa:|ch:", self.genus, join(&self.exps))
    }
}

/// ψ exponents together with a multiset of κ indices (all positive).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KappaPsiKey {
    genus: u32,
    exps: Vec<u32>,
    kappas: Vec<u32>,
}

impl KappaPsiKey {
    pub fn new(genus: u32, exps: Vec<u32>, kappas: Vec<u32>) -> Result<Self> {
        check_stable(genus, exps.len())?;
        if kappas.contains(&0) {
            return Err(crate::error::domain("κ indices must be positive"));
        }
        Ok(KappaPsiKey {
            genus,
            exps: sorted_desc(exps),
            kappas: sorted_desc(kappas),
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn kappas(&self) -> &[u32] {
        &self.kappas
    }

    pub fn degree(&self) -> i64 {
        self.exps
            .iter()
            .chain(&self.kappas)
            .map(|&k| k as i64)
            .sum()
    }
}

impl fmt::Display for KappaPsiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}|psi:{}|kappa:{}|ch:",
            self.genus,
            join(&self.exps),
            join(&self.kappas)
        )
    }
}

/// Which Arbarello-Cornalba κ to push down first when several are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationOrder {
    LargestFirst,
    SmallestFirst,
}

fn dfact(m: i64) -> Rat {
    double_factorial(m).expect("odd argument")
}

/// ψ/κ intersection numbers with memoization.
#[derive(Debug, Default)]
pub struct Intersector {
    psi: IntegralCache<PsiKey>,
    kappa: IntegralCache<KappaPsiKey>,
}

impl Intersector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn psi_cache(&self) -> &IntegralCache<PsiKey> {
        &self.psi
    }

    pub fn kappa_cache(&self) -> &IntegralCache<KappaPsiKey> {
        &self.kappa
    }

    /// `<τ_{k_1} ... τ_{k_n}>_g` for arbitrary (unsorted) exponents.
    pub fn psi(&self, genus: u32, exps: &[u32]) -> Result<Rat> {
        Ok(self.psi_integral(&PsiKey::new(genus, exps.to_vec())?))
    }

    pub fn psi_integral(&self, key: &PsiKey) -> Rat {
        if key.degree() != dimension(key.genus, key.exps.len()) {
            return Rat::zero();
        }
        if let Some(v) = self.psi.get(key) {
            return v;
        }
        let v = self.dvv(key.genus, &key.exps);
        self.psi.insert(key.clone(), v)
    }

    /// ψ integral of a possibly unstable or non-canonical exponent list;
    /// unstable spaces contribute zero.
    fn psi_raw(&self, genus: u32, exps: Vec<u32>) -> Rat {
        if !is_stable(genus, exps.len()) {
            return Rat::zero();
        }
        let key = PsiKey {
            genus,
            exps: sorted_desc(exps),
        };
        self.psi_integral(&key)
    }

    fn dvv(&self, g: u32, exps: &[u32]) -> Rat {
        // dimension already matches
        match (g, exps) {
            (0, [0, 0, 0]) => return Rat::one(),
            (1, [1]) => return Rat::new(1, 24),
            _ => {}
        }
        let top = exps[0] as i64;
        debug_assert!(top >= 1);
        let k = top - 1;
        let rest = &exps[1..];

        let mut total = Rat::zero();
        for (j, &d) in rest.iter().enumerate() {
            let d = d as i64;
            let mut sub: Vec<u32> = rest.to_vec();
            sub[j] = (d + k) as u32;
            let v = self.psi_raw(g, sub);
            if !v.is_zero() {
                total += dfact(2 * k + 2 * d + 1) / dfact(2 * d - 1) * v;
            }
        }

        let mut split = Rat::zero();
        for r in 0..k {
            let s = k - 1 - r;
            let weight = dfact(2 * r + 1) * dfact(2 * s + 1);
            let mut inner = Rat::zero();
            if g >= 1 {
                let mut sub = rest.to_vec();
                sub.push(r as u32);
                sub.push(s as u32);
                inner += self.psi_raw(g - 1, sub);
            }
            let m = rest.len();
            for mask in 0u64..(1u64 << m) {
                let (mut left, mut right) = (vec![r as u32], vec![s as u32]);
                for (i, &e) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(e);
                    } else {
                        right.push(e);
                    }
                }
                // the genus of each side is forced by its dimension
                let lsum: i64 = left.iter().map(|&e| e as i64).sum();
                let num = lsum - left.len() as i64 + 3;
                if num % 3 != 0 {
                    continue;
                }
                let g1 = num / 3;
                if g1 < 0 || g1 > g as i64 {
                    continue;
                }
                let g2 = g - g1 as u32;
                let a = self.psi_raw(g1 as u32, left);
                if a.is_zero() {
                    continue;
                }
                inner += a * self.psi_raw(g2, right);
            }
            if !inner.is_zero() {
                split += weight * inner;
            }
        }
        (total + split / Rat::int(2)) / dfact(2 * k + 3)
    }

    /// `∫ Π ψ_i^{k_i} Π κ_{a_j}` with the κ's of the relative dualizing sheaf.
    pub fn kappa_psi_integral(&self, key: &KappaPsiKey) -> Rat {
        if key.kappas.is_empty() {
            return self.psi_integral(&PsiKey {
                genus: key.genus,
                exps: key.exps.clone(),
            });
        }
        if key.degree() != dimension(key.genus, key.exps.len()) {
            return Rat::zero();
        }
        if let Some(v) = self.kappa.get(key) {
            return v;
        }
        let v = self.kappa_psi_integral_with(key, EliminationOrder::LargestFirst);
        self.kappa.insert(key.clone(), v)
    }

    pub fn kappa(&self, genus: u32, exps: &[u32], kappas: &[u32]) -> Result<Rat> {
        Ok(self.kappa_psi_integral(&KappaPsiKey::new(genus, exps.to_vec(), kappas.to_vec())?))
    }

    /// Rewrites every κ as `κ^{AC} - Σ ψ_i^a`, then pushes the AC classes down
    /// one at a time in the given order. Only ψ values are cached.
    pub fn kappa_psi_integral_with(&self, key: &KappaPsiKey, order: EliminationOrder) -> Rat {
        let mut total = Rat::zero();
        // each κ_a either stays as κ^AC_a or lands on one marking as -ψ^a
        let n = key.exps.len();
        let m = key.kappas.len();
        let choices = n + 1;
        let combos = choices.pow(m as u32);
        for mut code in 0..combos {
            let mut exps = key.exps.clone();
            let mut ac = Vec::new();
            let mut sign = 1i64;
            for &a in &key.kappas {
                let c = code % choices;
                code /= choices;
                if c == n {
                    ac.push(a);
                } else {
                    exps[c] += a;
                    sign = -sign;
                }
            }
            let v = self.ac_eval(key.genus, exps, ac, order);
            if !v.is_zero() {
                total += Rat::int(sign) * v;
            }
        }
        total
    }

    fn ac_eval(&self, g: u32, exps: Vec<u32>, mut ac: Vec<u32>, order: EliminationOrder) -> Rat {
        if ac.is_empty() {
            return self.psi_raw(g, exps);
        }
        let deg: i64 = exps.iter().chain(&ac).map(|&e| e as i64).sum();
        if deg != dimension(g, exps.len()) {
            return Rat::zero();
        }
        ac.sort_unstable();
        let a = match order {
            EliminationOrder::LargestFirst => ac.pop().unwrap(),
            EliminationOrder::SmallestFirst => ac.remove(0),
        };
        // π^* κ_b = κ_b - ψ_{n+1}^b on M̄_{g,n+1}
        let mut total = Rat::zero();
        for mask in 0u64..(1u64 << ac.len()) {
            let mut new_exp = a + 1;
            let mut keep = Vec::new();
            let mut sign = 1i64;
            for (i, &b) in ac.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    new_exp += b;
                    sign = -sign;
                } else {
                    keep.push(b);
                }
            }
            let mut sub = exps.clone();
            sub.push(new_exp);
            let v = self.ac_eval(g, sub, keep, order);
            if !v.is_zero() {
                total += Rat::int(sign) * v;
            }
        }
        total
    }

    /// Independent route: eliminates the relative-dualizing κ's directly by
    /// `∫ κ_a X = <τ_{a+1} X>_{n+1} - Σ_i <τ_{k_i+a} ...>_n`, using that these
    /// κ's pull back to themselves after multiplication by `ψ_{n+1}`.
    pub fn kappa_psi_integral_direct(&self, key: &KappaPsiKey) -> Rat {
        self.direct_eval(key.genus, key.exps.clone(), key.kappas.clone())
    }

    fn direct_eval(&self, g: u32, exps: Vec<u32>, mut kappas: Vec<u32>) -> Rat {
        if kappas.is_empty() {
            return self.psi_raw(g, exps);
        }
        let deg: i64 = exps.iter().chain(&kappas).map(|&e| e as i64).sum();
        if deg != dimension(g, exps.len()) {
            return Rat::zero();
        }
        let a = kappas.pop().unwrap();
        let mut up = exps.clone();
        up.push(a + 1);
        let mut total = self.direct_eval(g, up, kappas.clone());
        for i in 0..exps.len() {
            let mut sub = exps.clone();
            sub[i] += a;
            total -= self.direct_eval(g, sub, kappas.clone());
        }
        total
    }
}
