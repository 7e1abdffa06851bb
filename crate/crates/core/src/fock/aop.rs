use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::state::{exp_half, vacuum_expsum, EOpSpec};
use crate::exactmath::{
    elementary_series, euclid, factorial, pochhammer_int, rat, BigRational, ElementaryFn, ExtendedRational,
    TruncatedSeries,
};
use crate::hurwitz::HurwitzKind;
use crate::partitions::{connected_from_disconnected, nonempty_subsets};
use crate::polycheck::prefactor;
use crate::{Error, Result};

/// One `(t, v)` summand of an `A`-operator.
///
/// The operator is `Σ scalar · [z^{v-t}] 𝒮(uz)^{s_power} 𝒮(ruz)^{sr_power} 𝓔_{energy}(uz)`
/// (for the usual kind the argument is `uμ` and `scalar` already carries `μ^{v-t}`).
/// `folded` is `scalar` times the per-operator prefactor, which stays finite
/// even where `scalar` does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATerm {
    pub t: i64,
    pub v: i64,
    pub scalar: ExtendedRational,
    pub folded: BigRational,
    pub s_power: i64,
    pub sr_power: i64,
    pub energy: i64,
}

fn fact(n: i64) -> Option<BigRational> {
    (n >= 0).then(|| BigRational::from_integer(factorial(n as u64)))
}

fn mu_power(mu: i64, e: i64) -> BigRational {
    let m = rat(mu);
    if e >= 0 {
        num_traits::pow::pow(m, e as usize)
    } else {
        num_traits::pow::pow(m.recip(), (-e) as usize)
    }
}

fn ext_mul(a: ExtendedRational, b: ExtendedRational) -> ExtendedRational {
    use ExtendedRational::*;
    match (a, b) {
        (Finite(x), Finite(y)) => Finite(x * y),
        (Finite(x), Infinite) | (Infinite, Finite(x)) if x.is_zero() => Finite(x),
        _ => Infinite,
    }
}

/// Exponents of `𝒮(w)` and `𝒮(rw)` in the summand with index `t`.
fn s_powers(kind: HurwitzKind, mu: i64, nu: i64, t: i64) -> (i64, i64) {
    match kind {
        HurwitzKind::Monotone => (mu - 1, t + nu),
        HurwitzKind::StrictlyMonotone => (-mu - 1, t + nu),
        HurwitzKind::Usual => (0, t + nu),
    }
}

fn bare_scalar(kind: HurwitzKind, mu: i64, nu: i64, t: i64, v: i64) -> ExtendedRational {
    let inv_den = pochhammer_int(nu, t).recip();
    let num = match kind {
        HurwitzKind::Monotone => pochhammer_int(mu + nu, v - 1),
        HurwitzKind::StrictlyMonotone => pochhammer_int(mu - nu - v, v - 1),
        HurwitzKind::Usual => ExtendedRational::Finite(mu_power(mu, v - 1)),
    };
    ext_mul(num, inv_den)
}

/// Summand scalar with the prefactor multiplied in.
fn folded_scalar(kind: HurwitzKind, mu: i64, nu: i64, t: i64, v: i64) -> Result<BigRational> {
    let Some(den_t) = fact(nu + t) else { return Ok(BigRational::zero()) };
    Ok(match kind {
        HurwitzKind::Monotone => {
            let num = fact(mu + nu + v - 1)
                .ok_or_else(|| Error::Singular(format!("monotone summand mu={mu} t={t} v={v}")))?;
            num / (fact(mu).expect("mu >= 1") * den_t)
        }
        HurwitzKind::StrictlyMonotone => match fact(mu - nu - v) {
            None => BigRational::zero(),
            Some(d) => fact(mu - 1).expect("mu >= 1") / (den_t * d),
        },
        HurwitzKind::Usual => mu_power(mu, nu + v - 1) / den_t,
    })
}

/// Summands of the `A`-operator for one part `μ`, with `t ≤ t_max` and
/// `u`-exponent `v - t ≤ u_budget`. The exponent `-1` only occurs for the
/// energy-zero summand, where `1/ζ` contributes a simple pole.
pub fn a_operator_terms(kind: HurwitzKind, r: i64, mu: i64, t_max: i64, u_budget: i64) -> Vec<ATerm> {
    let (nu, eta) = euclid(mu, r);
    let mut out = Vec::new();
    for t in -nu..=t_max {
        let energy = t * r - eta;
        let m_min = if energy == 0 { -1 } else { 0 };
        for m in m_min..=u_budget {
            let v = t + m;
            if kind == HurwitzKind::StrictlyMonotone && v > mu - nu {
                break;
            }
            let folded = folded_scalar(kind, mu, nu, t, v).unwrap_or_else(|_| BigRational::zero());
            let scalar = bare_scalar(kind, mu, nu, t, v);
            if folded.is_zero() && scalar.finite().is_some_and(|s| s.is_zero()) {
                continue;
            }
            let (s_power, sr_power) = s_powers(kind, mu, nu, t);
            out.push(ATerm { t, v, scalar, folded, s_power, sr_power, energy });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct GKey {
    kind: HurwitzKind,
    r: i64,
    mu: i64,
    t: i64,
    half: i64,
    pole: bool,
    order: i64,
}

type GMemo = RwLock<HashMap<GKey, TruncatedSeries>>;

fn g_memo() -> &'static GMemo {
    static MEMO: OnceLock<GMemo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// One operator's contribution for a fixed wedge path: the `u`-series
/// `Σ_m folded(t, t+m) u^m [w^m] 𝒮(w)^a 𝒮(rw)^b e^{half·w/2} (1/ζ(w))^{pole}`,
/// exact below `order`.
fn g_series(key: &GKey) -> Result<TruncatedSeries> {
    if let Some(s) = g_memo().read().expect("memo poisoned").get(key) {
        return Ok(s.clone());
    }
    let GKey { kind, r, mu, t, half, pole, order } = key.clone();
    let (nu, _) = euclid(mu, r);
    let n = order + 1;
    let (a, b) = s_powers(kind, mu, nu, t);
    let s = elementary_series(ElementaryFn::S, "w", n);
    let mut base = s.pow(a)?.mul(&s.scale_var(0, &rat(r)).pow(b)?)?;
    base = base.mul(&exp_half("w", half, n))?;
    if pole {
        base = base.mul(&elementary_series(ElementaryFn::InvZeta, "w", n))?;
    }
    let mut terms = Vec::new();
    for m in -1..order {
        let c = base.coeff1(m)?;
        if c.is_zero() {
            continue;
        }
        let f = folded_scalar(kind, mu, nu, t, t + m)?;
        if !f.is_zero() {
            terms.push((m, c * f));
        }
    }
    let g = TruncatedSeries::univariate("u", order, terms)?;
    g_memo().write().expect("memo poisoned").insert(key.clone(), g.clone());
    Ok(g)
}

/// All `t`-tuples with `t_i ≥ -[μ_i]` and `Σ t_i = total`.
fn t_tuples(lower: &[i64], total: i64) -> Vec<Vec<i64>> {
    fn rec(lower: &[i64], rest: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let i = prefix.len();
        if i == lower.len() {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let tail: i64 = lower[i + 1..].iter().sum();
        for t in lower[i]..=rest - tail {
            prefix.push(t);
            rec(lower, rest - t, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(lower, total, &mut Vec::new(), &mut out);
    out
}

/// Disconnected correlator `Π prefactor · ⟨Π 𝒜⟩` as a `u`-series exact up to
/// and including `u^budget` (pole floor `-n`).
pub fn folded_correlator_series(kind: HurwitzKind, r: i64, mu: &[i64], budget: i64) -> Result<TruncatedSeries> {
    let n = mu.len();
    let zero = TruncatedSeries::zero(&["u"], &[budget + 1]).with_floor(0, -(n as i64))?;
    let (nus, etas): (Vec<i64>, Vec<i64>) = mu.iter().map(|&m| euclid(m, r)).unzip();
    let eta_sum: i64 = etas.iter().sum();
    if eta_sum % r != 0 {
        return Ok(zero);
    }
    let lower: Vec<i64> = nus.iter().map(|nu| -nu).collect();
    let g_order = budget + n as i64;
    let tuples = t_tuples(&lower, eta_sum / r);
    let parts: Vec<TruncatedSeries> = tuples
        .par_iter()
        .map(|ts| -> Result<TruncatedSeries> {
            let ops: Vec<EOpSpec> =
                ts.iter().zip(&etas).enumerate().map(|(i, (t, e))| EOpSpec::new(t * r - e, i)).collect();
            let sum = vacuum_expsum(&ops)?;
            let mut acc = zero.clone();
            for (key, mult) in &sum {
                let mut prod: Option<TruncatedSeries> = None;
                for i in 0..n {
                    let g = g_series(&GKey {
                        kind,
                        r,
                        mu: mu[i],
                        t: ts[i],
                        half: key.half[i],
                        pole: key.poles & (1 << i) != 0,
                        order: g_order,
                    })?
                    .with_floor(0, -(n as i64))?;
                    if g.is_zero() {
                        prod = None;
                        break;
                    }
                    prod = Some(match prod {
                        None => g,
                        Some(p) => p.mul(&g)?,
                    });
                    if i + 1 < n && prod.as_ref().is_some_and(|p| p.is_zero()) {
                        break;
                    }
                }
                if let Some(p) = prod {
                    acc = acc.add(&p.truncate(&[budget + 1]).scale(&BigRational::from_integer(mult.clone())))?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    parts.into_iter().try_fold(zero.clone(), |a, b| a.add(&b))
}

/// `[u^{2g-2+n}]` of the (dis)connected correlator with prefactors folded in,
/// i.e. the Hurwitz number itself.
pub fn fock_hurwitz_number(kind: HurwitzKind, r: i64, mu: &[i64], g: i64, connected: bool) -> Result<BigRational> {
    let n = mu.len();
    if n == 0 || r < 1 || mu.iter().any(|&m| m < 1) {
        return Err(Error::Invalid("need r >= 1 and a nonempty profile of positive parts".into()));
    }
    let d: i64 = mu.iter().sum();
    if d % r != 0 || g < 0 {
        return Ok(BigRational::zero());
    }
    let target = 2 * g - 2 + n as i64;
    if !connected {
        return folded_correlator_series(kind, r, mu, target)?.coeff1(target);
    }
    let mut cache: HashMap<(Vec<i64>, i64), TruncatedSeries> = HashMap::new();
    let mut blocks = BTreeMap::new();
    for subset in nonempty_subsets(n) {
        let mut sub: Vec<i64> = subset.iter().map(|&i| mu[i - 1]).collect();
        sub.sort_unstable();
        let budget = target + (n - subset.len()) as i64;
        let key = (sub.clone(), budget);
        let series = match cache.get(&key) {
            Some(s) => s.clone(),
            None => {
                let s = folded_correlator_series(kind, r, &sub, budget)?;
                cache.insert(key, s.clone());
                s
            }
        };
        blocks.insert(subset, series);
    }
    connected_from_disconnected(n, &blocks)?.coeff1(target)
}

/// `[u^{2g-2+n}] ⟨Π 𝒜⟩` (connected or not), the Hurwitz number divided by
/// the product of prefactors. Fails when a prefactor vanishes, since the
/// bare operators are then singular.
pub fn a_correlator(kind: HurwitzKind, r: i64, mu: &[i64], g: i64, connected: bool) -> Result<BigRational> {
    let mut pre = BigRational::one();
    for &m in mu {
        pre *= prefactor(kind, r, m);
    }
    if pre.is_zero() {
        return Err(Error::Singular(format!("prefactor of {kind} operators vanishes for r={r}, mu={mu:?}")));
    }
    Ok(fock_hurwitz_number(kind, r, mu, g, connected)? / pre)
}
