//! Orbifold Hurwitz numbers by three independent routes.
//!
//! The character route expands the disconnected generating series over
//! irreducible representations: for `d = |μ|`,
//!
//! ```text
//! H•(u, μ) = Σ_{λ ⊢ d}  χ^λ(r^{d/r}) / (r^{d/r} (d/r)!)  ·  W_λ(u)  ·  χ^λ(μ) / Π μ_i
//! ```
//!
//! where `W_λ` is the generating function of complete (monotone) or
//! elementary (strictly monotone) symmetric polynomials in the contents of
//! `λ`, or `exp(u · Σ contents)` (usual). The coefficient of `u^b` counts
//! covers with `b` simple ramifications, `b = 2g - 2 + n + d/r`.
//!
//! Connected numbers come out of inclusion-exclusion over subsets of the parts
//! of `μ`, performed on whole `u`-series.

mod oracle;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactmath::{euclid, factorial, rat, sym_poly_table_int, BigRational, SymKind, TruncatedSeries};
use crate::partitions::{
    character_int, connected_from_disconnected, contents, enumerate_partitions, nonempty_subsets, Partition,
};
use crate::{Error, Result};

pub use oracle::{oracle_group_algebra, oracle_group_algebra_with_cap, ORACLE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HurwitzKind {
    Monotone,
    StrictlyMonotone,
    Usual,
}

impl HurwitzKind {
    pub const ALL: [HurwitzKind; 3] = [HurwitzKind::Monotone, HurwitzKind::StrictlyMonotone, HurwitzKind::Usual];
}

impl fmt::Display for HurwitzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HurwitzKind::Monotone => "monotone",
            HurwitzKind::StrictlyMonotone => "strict",
            HurwitzKind::Usual => "usual",
        })
    }
}

impl FromStr for HurwitzKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monotone" => Ok(HurwitzKind::Monotone),
            "strict" | "strictly_monotone" | "strictly-monotone" => Ok(HurwitzKind::StrictlyMonotone),
            "usual" => Ok(HurwitzKind::Usual),
            other => Err(Error::Invalid(format!("unknown kind `{other}`"))),
        }
    }
}

/// Ramification profile over infinity, with the orbifold order `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    pub mu: Vec<usize>,
    pub r: usize,
}

impl Profile {
    pub fn new(mu: Vec<usize>, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("r must be positive".into()));
        }
        if mu.is_empty() || mu.contains(&0) {
            return Err(Error::Invalid("profile needs at least one part, all positive".into()));
        }
        Ok(Profile { mu, r })
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.mu.iter().sum()
    }

    /// `[μ_i]`
    pub fn quotient(&self, i: usize) -> usize {
        self.mu[i] / self.r
    }

    /// `⟨μ_i⟩`
    pub fn residue(&self, i: usize) -> usize {
        self.mu[i] % self.r
    }

    /// Number of simple ramifications in genus `g`, if integral.
    pub fn simple_ramifications(&self, g: i64) -> Option<i64> {
        let d = self.degree();
        (d % self.r == 0).then(|| 2 * g - 2 + self.len() as i64 + (d / self.r) as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Character,
    Fock,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Character, Method::Fock, Method::Oracle];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Character => "character",
            Method::Fock => "fock",
            Method::Oracle => "oracle",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "character" => Ok(Method::Character),
            "fock" => Ok(Method::Fock),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::Invalid(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzRequest {
    pub kind: HurwitzKind,
    pub r: usize,
    pub g: i64,
    pub mu: Vec<usize>,
    pub connected: bool,
    pub method: Method,
}

/// A computed number, with the reason when it vanishes for structural reasons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzValue {
    pub value: BigRational,
    pub note: Option<String>,
}

/// Exportable record of one computed number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzRecord {
    pub kind: HurwitzKind,
    pub r: usize,
    pub g: i64,
    pub mu: Vec<usize>,
    pub connected: bool,
    pub value: String,
    pub method: Method,
}

impl HurwitzRecord {
    pub fn new(req: &HurwitzRequest, value: &BigRational) -> Self {
        HurwitzRecord {
            kind: req.kind,
            r: req.r,
            g: req.g,
            mu: req.mu.clone(),
            connected: req.connected,
            value: value.to_string(),
            method: req.method,
        }
    }
}

type SeriesKey = (HurwitzKind, usize, Vec<usize>, i64);

fn series_memo() -> &'static RwLock<HashMap<SeriesKey, TruncatedSeries>> {
    static MEMO: OnceLock<RwLock<HashMap<SeriesKey, TruncatedSeries>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `Σ_k w_k u^k` for `k < order`, the eigenvalue generating function on `v_λ`.
fn content_weights(kind: HurwitzKind, lambda: &Partition, order: usize) -> Vec<BigRational> {
    if order == 0 {
        return Vec::new();
    }
    let cs = contents(lambda);
    let as_rat = |v: Vec<BigInt>| v.into_iter().map(BigRational::from_integer).collect();
    match kind {
        HurwitzKind::Monotone => as_rat(sym_poly_table_int(SymKind::Complete, order - 1, &cs)),
        HurwitzKind::StrictlyMonotone => as_rat(sym_poly_table_int(SymKind::Elementary, order - 1, &cs)),
        HurwitzKind::Usual => {
            let s = rat(cs.iter().sum());
            (0..order)
                .map(|k| num_traits::pow::pow(s.clone(), k) / BigRational::from_integer(factorial(k as u64)))
                .collect()
        }
    }
}

/// Disconnected generating series `Σ_b h•_b u^b`, exact below `u_order`.
pub fn disconnected_series_character(
    kind: HurwitzKind,
    r: usize,
    mu: &[usize],
    u_order: i64,
) -> Result<TruncatedSeries> {
    if r == 0 || mu.contains(&0) {
        return Err(Error::Invalid("r and all parts must be positive".into()));
    }
    let mut sorted = mu.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let key = (kind, r, sorted.clone(), u_order);
    if let Some(s) = series_memo().read().expect("memo poisoned").get(&key) {
        return Ok(s.clone());
    }
    let d: usize = mu.iter().sum();
    let order = u_order.max(0) as usize;
    if d % r != 0 {
        return TruncatedSeries::univariate("u", u_order, []);
    }
    let m = d / r;
    let rclass = Partition::rectangle(r, m);
    let mclass = Partition::new(sorted);
    let partials: Vec<Vec<BigRational>> = enumerate_partitions(d)
        .par_iter()
        .map(|lambda| -> Result<Vec<BigRational>> {
            let a = character_int(lambda, &rclass)?;
            if a == 0 {
                return Ok(Vec::new());
            }
            let b = character_int(lambda, &mclass)?;
            if b == 0 {
                return Ok(Vec::new());
            }
            let weight = BigRational::from_integer(BigInt::from(a) * BigInt::from(b));
            Ok(content_weights(kind, lambda, order).into_iter().map(|w| w * &weight).collect())
        })
        .collect::<Result<_>>()?;
    let mut coeffs = vec![BigRational::zero(); order];
    for p in partials {
        for (k, c) in p.into_iter().enumerate() {
            coeffs[k] += c;
        }
    }
    let prod: BigInt = mu.iter().map(|&x| BigInt::from(x)).product();
    let norm = BigRational::from_integer(num_traits::pow::pow(BigInt::from(r), m) * factorial(m as u64) * prod);
    let series =
        TruncatedSeries::univariate("u", u_order, coeffs.into_iter().enumerate().map(|(k, c)| (k as i64, c / &norm)))?;
    series_memo().write().expect("memo poisoned").insert(key, series.clone());
    Ok(series)
}

/// Connected generating series, by inclusion-exclusion over subsets of `μ`.
pub fn connected_series(
    mu: &[usize],
    u_order: i64,
    mut block: impl FnMut(&[usize], i64) -> Result<TruncatedSeries>,
) -> Result<TruncatedSeries> {
    let n = mu.len();
    let mut blocks = BTreeMap::new();
    for subset in nonempty_subsets(n) {
        let sub: Vec<usize> = subset.iter().map(|&i| mu[i - 1]).collect();
        blocks.insert(subset, block(&sub, u_order)?);
    }
    connected_from_disconnected(n, &blocks)
}

fn oracle_series(kind: HurwitzKind, r: usize, mu: &[usize], u_order: i64) -> Result<TruncatedSeries> {
    let terms = (0..u_order.max(0))
        .map(|b| oracle_group_algebra(kind, r, b as usize, mu).map(|c| (b, c)))
        .collect::<Result<Vec<_>>>()?;
    TruncatedSeries::univariate("u", u_order, terms)
}

/// `h^{∘/•}_{g;μ}` of the requested kind by the requested route.
pub fn hurwitz_number(req: &HurwitzRequest) -> Result<HurwitzValue> {
    let profile = Profile::new(req.mu.clone(), req.r)?;
    let zero = |why: &str| Ok(HurwitzValue { value: BigRational::zero(), note: Some(why.to_string()) });
    let Some(b) = profile.simple_ramifications(req.g) else {
        return zero("r does not divide |mu|, so the number of simple ramifications is not an integer");
    };
    if req.g < 0 {
        return zero("negative genus");
    }
    if b < 0 {
        return zero("negative number of simple ramifications");
    }
    let value = match req.method {
        Method::Character => {
            if req.connected {
                connected_series(&req.mu, b + 1, |s, o| disconnected_series_character(req.kind, req.r, s, o))?
                    .coeff1(b)?
            } else {
                disconnected_series_character(req.kind, req.r, &req.mu, b + 1)?.coeff1(b)?
            }
        }
        Method::Oracle => {
            if req.connected {
                connected_series(&req.mu, b + 1, |s, o| oracle_series(req.kind, req.r, s, o))?.coeff1(b)?
            } else {
                oracle_group_algebra(req.kind, req.r, b as usize, &req.mu)?
            }
        }
        Method::Fock => {
            let mu: Vec<i64> = req.mu.iter().map(|&m| m as i64).collect();
            crate::fock::fock_hurwitz_number(req.kind, req.r as i64, &mu, req.g, req.connected)?
        }
    };
    Ok(HurwitzValue { value, note: None })
}

/// `(quotient, residue)` of every part.
pub fn euclid_parts(mu: &[usize], r: usize) -> Vec<(i64, i64)> {
    mu.iter().map(|&m| euclid(m as i64, r as i64)).collect()
}
