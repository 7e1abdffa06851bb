//! Integer partitions, contents, symmetric-group characters and the
//! inclusion-exclusion that turns disconnected counts into connected ones.
//!
//! Characters are computed with the Murnaghan–Nakayama rule on beta-sets and
//! memoised in a process-wide table. The table can be persisted to a small
//! text file so repeated runs skip the recursion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::{factorial, BigRational, TruncatedSeries};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

/// Cycle type of a permutation, stored as a partition.
pub type ClassType = Partition;

impl Partition {
    /// Sorts `parts` descending and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `(k, k, …, k)` with `m` parts.
    pub fn rectangle(k: usize, m: usize) -> Self {
        Partition::new(vec![k; m])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicities `m_k` as a map `k → m_k`.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `z_ρ = Π_k m_k! k^{m_k}`, the order of the centraliser.
    pub fn z_factor(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .map(|(k, m)| factorial(m as u64) * num_traits::pow::pow(BigInt::from(k), m))
            .fold(BigInt::one(), |a, b| a * b)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl From<Vec<usize>> for Partition {
    fn from(parts: Vec<usize>) -> Self {
        Partition::new(parts)
    }
}

/// All partitions of `d`, in reverse lexicographic order (`(d)` first).
pub fn enumerate_partitions(d: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            rec(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// Contents `j - i` of the cells `(i, j)` of the Young diagram, row by row.
pub fn contents(lambda: &Partition) -> Vec<i64> {
    let mut out = Vec::with_capacity(lambda.size());
    for (i, &row) in lambda.parts.iter().enumerate() {
        for j in 0..row {
            out.push(j as i64 - i as i64);
        }
    }
    out
}

/// `d!/z_ρ`.
pub fn class_size(rho: &ClassType) -> BigRational {
    BigRational::new(factorial(rho.size() as u64), rho.z_factor())
}

type CharKey = (Vec<usize>, Vec<usize>);

fn memo() -> &'static RwLock<HashMap<CharKey, i128>> {
    static MEMO: OnceLock<RwLock<HashMap<CharKey, i128>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `χ^λ(ρ)` by the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, rho: &ClassType) -> Result<BigRational> {
    character_int(lambda, rho).map(|v| BigRational::from_integer(BigInt::from(v)))
}

/// Integer form of [`character`].
pub fn character_int(lambda: &Partition, rho: &ClassType) -> Result<i128> {
    if lambda.size() != rho.size() {
        return Err(Error::SizeMismatch { partition: lambda.size(), class: rho.size() });
    }
    Ok(mn(&lambda.parts, &rho.parts))
}

fn mn(lambda: &[usize], rho: &[usize]) -> i128 {
    if rho.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo().read().expect("character memo poisoned").get(&key) {
        return v;
    }
    // strip the largest cycle as a rim hook, working on the beta-set
    let k = rho[0];
    let rest = &rho[1..];
    let l = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect();
    let mut total: i128 = 0;
    for (idx, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let between = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let smaller: Vec<usize> = nb.iter().enumerate().map(|(i, &c)| c + i + 1 - l).filter(|&p| p > 0).collect();
        let v = mn(&smaller, rest);
        if between % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    memo().write().expect("character memo poisoned").insert(key, total);
    total
}

const CACHE_HEADER: &str = "# hurwitz character table v1";

fn parse_parts(s: &str) -> std::result::Result<Vec<usize>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| p.trim().parse::<usize>().map_err(|e| e.to_string())).collect()
}

/// Merges a character-table file into the in-memory memo; returns the number
/// of records read. A missing file is not an error.
pub fn load_character_cache(path: &Path) -> Result<usize> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(Error::Cache(e.to_string())),
    };
    let mut lines = text.lines();
    if lines.next() != Some(CACHE_HEADER) {
        return Err(Error::Cache(format!("{} has no recognised header", path.display())));
    }
    let mut records = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(';').collect();
        let bad = |why: String| Error::Cache(format!("line {}: {why}", n + 2));
        if fields.len() != 4 {
            return Err(bad("expected `d; lambda; rho; value`".into()));
        }
        let d: usize = fields[0].trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
        let lambda = parse_parts(fields[1]).map_err(bad)?;
        let rho = parse_parts(fields[2]).map_err(bad)?;
        let value: i128 = fields[3].trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?;
        if lambda.iter().sum::<usize>() != d || rho.iter().sum::<usize>() != d {
            return Err(bad("sizes disagree with d".into()));
        }
        records.push(((Partition::new(lambda).parts, Partition::new(rho).parts), value));
    }
    let count = records.len();
    memo().write().expect("character memo poisoned").extend(records);
    Ok(count)
}

/// Writes every memoised character value with `|λ| ≤ max_d` to `path`,
/// replacing the file atomically. Returns the number of records written.
pub fn save_character_cache(path: &Path, max_d: usize) -> Result<usize> {
    let table = memo().read().expect("character memo poisoned");
    let mut rows: Vec<(&CharKey, &i128)> =
        table.iter().filter(|((l, _), _)| l.iter().sum::<usize>() <= max_d).collect();
    rows.sort();
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::Cache(e.to_string()))?;
    let join = |p: &[usize]| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let mut body = String::new();
    body.push_str(CACHE_HEADER);
    body.push('\n');
    for ((l, r), v) in &rows {
        body.push_str(&format!("{}; {}; {}; {}\n", l.iter().sum::<usize>(), join(l), join(r), v));
    }
    tmp.write_all(body.as_bytes()).map_err(|e| Error::Cache(e.to_string()))?;
    tmp.persist(path).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(rows.len())
}

/// Fills the memo with the full character table of `S_d` for every `d ≤ max_d`.
pub fn precompute_characters(max_d: usize) {
    for d in 0..=max_d {
        let ps = enumerate_partitions(d);
        for l in &ps {
            for r in &ps {
                mn(&l.parts, &r.parts);
            }
        }
    }
}

/// A set partition of `{1..n}` with its Möbius weight `(-1)^{k-1}(k-1)!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartitionWeight {
    pub blocks: Vec<Vec<usize>>,
    pub weight: BigInt,
}

/// All set partitions of `{1..n}`, blocks sorted, weighted for inclusion-exclusion.
pub fn set_partitions(n: usize) -> Vec<SetPartitionWeight> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i > n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut raw = Vec::new();
    rec(1, n, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|blocks| {
            let k = blocks.len() as u64;
            let mag = factorial(k.saturating_sub(1));
            let weight = if k % 2 == 1 { mag } else { -mag };
            SetPartitionWeight { blocks, weight }
        })
        .collect()
}

/// Σ over set partitions π of `{1..n}` of `(-1)^{|π|-1}(|π|-1)! Π_{B∈π} blocks[B]`.
///
/// `blocks` is keyed by sorted 1-based subsets. Pole floors of the factors add
/// up in products, so each product is formed with the summed floor.
pub fn connected_from_disconnected(
    n: usize,
    blocks: &BTreeMap<Vec<usize>, TruncatedSeries>,
) -> Result<TruncatedSeries> {
    let full: Vec<usize> = (1..=n).collect();
    let top = blocks.get(&full).ok_or_else(|| Error::MissingBlock(full.clone()))?;
    let mut total: Option<TruncatedSeries> = None;
    for sp in set_partitions(n) {
        let factors: Vec<&TruncatedSeries> = sp
            .blocks
            .iter()
            .map(|b| blocks.get(b).ok_or_else(|| Error::MissingBlock(b.clone())))
            .collect::<Result<_>>()?;
        let nv = top.nvars();
        let floor: Vec<i64> = (0..nv).map(|v| factors.iter().map(|f| f.floor()[v].min(0)).sum()).collect();
        let mut prod: Option<TruncatedSeries> = None;
        for f in factors {
            let mut g = f.clone();
            for (v, &fl) in floor.iter().enumerate() {
                g = g.with_floor(v, fl)?;
            }
            prod = Some(match prod {
                None => g,
                Some(p) => p.mul(&g)?,
            });
        }
        let term = prod.expect("set partitions are nonempty").scale(&BigRational::from_integer(sp.weight));
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term)?,
        });
    }
    Ok(total.unwrap_or_else(|| TruncatedSeries::zero(top.vars(), top.order())))
}

/// Scalar version of [`connected_from_disconnected`].
pub fn connected_from_disconnected_scalar(n: usize, blocks: &BTreeMap<Vec<usize>, BigRational>) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for sp in set_partitions(n) {
        let mut prod = BigRational::from_integer(sp.weight);
        for b in &sp.blocks {
            prod *= blocks.get(b).ok_or_else(|| Error::MissingBlock(b.clone()))?;
        }
        total += prod;
    }
    Ok(total)
}

/// Nonempty subsets of `{1..n}` as sorted 1-based vectors.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n)).map(|mask| (1..=n).filter(|&i| mask & (1 << (i - 1)) != 0).collect()).collect()
}
