use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;

use super::HurwitzKind;
use crate::exactmath::{factorial, rat, BigRational};
use crate::partitions::Partition;
use crate::{Error, Result};

/// Default largest `d` the oracle accepts.
pub const ORACLE_CAP: usize = 6;

type Perm = Vec<u8>;

/// Sparse element of `Q[S_d]`; permutations in one-line notation.
type GroupElement = HashMap<Perm, BigRational>;

fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn cycle_type(p: &[u8]) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts)
}

fn all_perms(d: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

fn transposition(d: usize, i: usize, j: usize) -> Perm {
    let mut p: Perm = (0..d as u8).collect();
    p.swap(i, j);
    p
}

/// `x · J_k` with `J_k = Σ_{i<k} (i k)` (0-based `k`).
fn times_jm(x: &GroupElement, d: usize, k: usize) -> GroupElement {
    let mut out = GroupElement::new();
    for i in 0..k {
        let t = transposition(d, i, k);
        for (p, c) in x {
            *out.entry(compose(p, &t)).or_insert_with(BigRational::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn add_into(acc: &mut GroupElement, x: &GroupElement) {
    for (p, c) in x {
        *acc.entry(p.clone()).or_insert_with(BigRational::zero) += c;
    }
    acc.retain(|_, c| !c.is_zero());
}

fn identity(d: usize) -> GroupElement {
    let mut e = GroupElement::new();
    e.insert((0..d as u8).collect(), rat(1));
    e
}

/// `Φ_b`: `h_b(J_2..J_d)`, `e_b(J_2..J_d)` or `(J_2+…+J_d)^b / b!`.
fn phi(kind: HurwitzKind, d: usize, b: usize) -> Arc<GroupElement> {
    type Memo = RwLock<HashMap<(HurwitzKind, usize, usize), Arc<GroupElement>>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let memo = MEMO.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(x) = memo.read().expect("memo poisoned").get(&(kind, d, b)) {
        return x.clone();
    }
    let value = match kind {
        HurwitzKind::Usual => {
            let mut x = identity(d);
            for _ in 0..b {
                let mut next = GroupElement::new();
                for k in 1..d {
                    add_into(&mut next, &times_jm(&x, d, k));
                }
                x = next;
            }
            let scale = BigRational::from_integer(factorial(b as u64)).recip();
            x.values_mut().for_each(|c| *c *= &scale);
            x
        }
        HurwitzKind::Monotone | HurwitzKind::StrictlyMonotone => {
            // the same table recurrences as for scalar variables; JM elements commute
            let mut table: Vec<GroupElement> = vec![GroupElement::new(); b + 1];
            table[0] = identity(d);
            for k in 1..d {
                match kind {
                    HurwitzKind::Monotone => {
                        for j in 1..=b {
                            let add = times_jm(&table[j - 1], d, k);
                            add_into(&mut table[j], &add);
                        }
                    }
                    _ => {
                        for j in (1..=b).rev() {
                            let add = times_jm(&table[j - 1], d, k);
                            add_into(&mut table[j], &add);
                        }
                    }
                }
            }
            table.swap_remove(b)
        }
    };
    let value = Arc::new(value);
    memo.write().expect("memo poisoned").insert((kind, d, b), value.clone());
    value
}

/// `[u^b]` of the disconnected series, by direct multiplication in `Q[S_d]`:
/// the coefficient of a fixed `σ₀` of type `μ` in `C_{(r^{d/r})} · Φ_b`,
/// divided by `Π μ_i`.
pub fn oracle_group_algebra(kind: HurwitzKind, r: usize, b: usize, mu: &[usize]) -> Result<BigRational> {
    oracle_group_algebra_with_cap(kind, r, b, mu, ORACLE_CAP)
}

pub fn oracle_group_algebra_with_cap(
    kind: HurwitzKind,
    r: usize,
    b: usize,
    mu: &[usize],
    cap: usize,
) -> Result<BigRational> {
    let d: usize = mu.iter().sum();
    if d > cap {
        return Err(Error::OracleCap { d, cap });
    }
    if r == 0 || mu.contains(&0) {
        return Err(Error::Invalid("r and all parts must be positive".into()));
    }
    if d % r != 0 {
        return Ok(BigRational::zero());
    }
    // σ₀ = consecutive cycles (0 1 … μ₁-1)(μ₁ …) …
    let mut sigma0: Perm = vec![0; d];
    let mut start = 0;
    for &m in mu {
        for i in 0..m {
            sigma0[start + i] = (start + (i + 1) % m) as u8;
        }
        start += m;
    }
    let phi = phi(kind, d, b);
    let class = Partition::rectangle(r, d / r);
    let mut total = BigRational::zero();
    for a in all_perms(d) {
        if cycle_type(&a) != class {
            continue;
        }
        // a · x = σ₀  ⇒  x = a⁻¹ σ₀
        let mut inv = vec![0u8; d];
        for (i, &ai) in a.iter().enumerate() {
            inv[ai as usize] = i as u8;
        }
        if let Some(c) = phi.get(&compose(&inv, &sigma0)) {
            total += c;
        }
    }
    let prod: usize = mu.iter().product();
    Ok(total / rat(prod as i64))
}
