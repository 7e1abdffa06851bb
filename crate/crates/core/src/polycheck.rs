//! Quasi-polynomiality checks.
//!
//! For fixed residues `η_i = ⟨μ_i⟩`, a stable Hurwitz number divided by the
//! kind's per-part prefactor is a polynomial of total degree `3g - 3 + n` in
//! `ν_i = [μ_i]`. The verifier samples that quotient on a tensor grid,
//! interpolates exactly, and then predicts points outside the grid.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactmath::{binomial, euclid, factorial, rat, BigRational, MultiPolynomial};
use crate::hurwitz::{hurwitz_number, HurwitzKind, HurwitzRequest, Method};
use crate::{Error, Result};

/// Per-part prefactor: `binom(μ+[μ], μ)`, `binom(μ-1, [μ])` or `μ^{[μ]}/[μ]!`.
pub fn prefactor(kind: HurwitzKind, r: i64, mu: i64) -> BigRational {
    let (nu, _) = euclid(mu, r);
    match kind {
        HurwitzKind::Monotone => binomial(mu + nu, mu),
        HurwitzKind::StrictlyMonotone => binomial(mu - 1, nu),
        HurwitzKind::Usual => {
            num_traits::pow::pow(rat(mu), nu as usize) / BigRational::from_integer(factorial(nu as u64))
        }
    }
}

/// Exact interpolation on a full tensor grid. Every axis needs at least
/// `degree_cap + 1` distinct nodes; the result has per-axis degree below the
/// node count.
pub fn interpolate_on_grid(samples: &[(Vec<i64>, BigRational)], degree_cap: usize) -> Result<MultiPolynomial> {
    let n = samples.first().map(|(p, _)| p.len()).ok_or_else(|| Error::NotAGrid("no samples".into()))?;
    let mut table: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (p, v) in samples {
        if p.len() != n {
            return Err(Error::NotAGrid("points of different dimension".into()));
        }
        match table.get(p) {
            Some(old) if old != v => return Err(Error::InconsistentSample(p.clone())),
            _ => {
                table.insert(p.clone(), v.clone());
            }
        }
    }
    let axes: Vec<Vec<i64>> = (0..n)
        .map(|a| {
            let mut xs: Vec<i64> = table.keys().map(|p| p[a]).collect();
            xs.sort_unstable();
            xs.dedup();
            xs
        })
        .collect();
    for (a, xs) in axes.iter().enumerate() {
        if xs.len() < degree_cap + 1 {
            return Err(Error::NotAGrid(format!("axis {a} has {} nodes, need {}", xs.len(), degree_cap + 1)));
        }
    }
    let dims: Vec<usize> = axes.iter().map(|x| x.len()).collect();
    let total: usize = dims.iter().product();
    if total != table.len() {
        return Err(Error::NotAGrid(format!("{} samples for a {dims:?} grid", table.len())));
    }
    // row-major coefficient array
    let strides: Vec<usize> = (0..n).map(|a| dims[a + 1..].iter().product()).collect();
    let index_of = |flat: usize| -> Vec<usize> { (0..n).map(|a| (flat / strides[a]) % dims[a]).collect() };
    let mut c: Vec<BigRational> = (0..total)
        .map(|flat| {
            let idx = index_of(flat);
            let p: Vec<i64> = idx.iter().enumerate().map(|(a, &i)| axes[a][i]).collect();
            table[&p].clone()
        })
        .collect();
    // divided differences along every axis
    for a in 0..n {
        let xs = &axes[a];
        for k in 1..dims[a] {
            for flat in (0..total).rev() {
                let i = (flat / strides[a]) % dims[a];
                if i < k {
                    continue;
                }
                let diff = (&c[flat] - &c[flat - strides[a]]) / rat(xs[i] - xs[i - k]);
                c[flat] = diff;
            }
        }
    }
    // Newton basis Π_{j<k}(x - x_j) in monomial coefficients, per axis
    let newton: Vec<Vec<Vec<BigRational>>> = axes
        .iter()
        .map(|xs| {
            let mut basis = vec![vec![BigRational::one()]];
            for j in 0..xs.len().saturating_sub(1) {
                let last = basis.last().expect("nonempty");
                let mut next = vec![BigRational::zero(); last.len() + 1];
                for (d, coeff) in last.iter().enumerate() {
                    next[d + 1] += coeff;
                    next[d] -= coeff * rat(xs[j]);
                }
                basis.push(next);
            }
            basis
        })
        .collect();
    let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (flat, coeff) in c.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let idx = index_of(flat);
        let mut partial: Vec<(Vec<u32>, BigRational)> = vec![(Vec::new(), coeff.clone())];
        for (a, &i) in idx.iter().enumerate() {
            let poly = &newton[a][i];
            let mut next = Vec::new();
            for (e, v) in &partial {
                for (d, pc) in poly.iter().enumerate() {
                    if pc.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2.push(d as u32);
                    next.push((e2, v * pc));
                }
            }
            partial = next;
        }
        for (e, v) in partial {
            *terms.entry(e).or_insert_with(BigRational::zero) += v;
        }
    }
    let vars: Vec<String> = (1..=n).map(|i| format!("nu{i}")).collect();
    Ok(MultiPolynomial::from_terms(&vars, terms))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(&self) -> bool {
        *self == Status::Pass
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.is_pass() { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoldoutCheck {
    pub nu: Vec<i64>,
    pub mu: Vec<usize>,
    /// Normalised value from the Hurwitz number, `None` when a vanishing
    /// prefactor meets a nonzero number.
    #[serde(serialize_with = "ser_opt_rat")]
    pub actual: Option<BigRational>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub predicted: Option<BigRational>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiPolyReport {
    pub kind: HurwitzKind,
    pub r: usize,
    pub g: i64,
    pub n: usize,
    pub residues: Vec<usize>,
    pub degree_bound: i64,
    /// True when `r ∤ Σ η_i`, so every number in the class vanishes.
    pub empty: bool,
    pub grid: Vec<Vec<i64>>,
    pub polynomial: Option<MultiPolynomial>,
    pub observed_degree: Option<u32>,
    pub holdouts: Vec<HoldoutCheck>,
    pub status: Status,
    pub notes: Vec<String>,
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

/// `h°/Π prefactor`; `Some(0)` when both vanish, `None` for a nonzero number
/// over a vanishing prefactor.
pub fn normalized_value(kind: HurwitzKind, r: usize, g: i64, mu: &[usize]) -> Result<Option<BigRational>> {
    let req = HurwitzRequest { kind, r, g, mu: mu.to_vec(), connected: true, method: Method::Character };
    let h = hurwitz_number(&req)?.value;
    let pre: BigRational = mu.iter().map(|&m| prefactor(kind, r as i64, m as i64)).product();
    if pre.is_zero() {
        return Ok(h.is_zero().then(BigRational::zero));
    }
    Ok(Some(h / pre))
}

fn mu_of(nu: &[i64], residues: &[usize], r: usize) -> Vec<usize> {
    nu.iter().zip(residues).map(|(&v, &e)| v as usize * r + e).collect()
}

/// Samples the normalised numbers on a grid in `ν`, interpolates, checks the
/// degree bound and predicts `holdout_count` points outside the grid.
pub fn verify_quasipolynomiality(
    kind: HurwitzKind,
    r: usize,
    g: i64,
    n: usize,
    residues: &[usize],
    grid_base: i64,
    holdout_count: usize,
) -> Result<QuasiPolyReport> {
    if 2 * g - 2 + n as i64 <= 0 || g < 0 {
        return Err(Error::Invalid("quasi-polynomiality needs 2g - 2 + n > 0".into()));
    }
    if r == 0 || residues.len() != n || residues.iter().any(|&e| e >= r) {
        return Err(Error::Invalid(format!("residues {residues:?} do not fit n = {n}, r = {r}")));
    }
    if grid_base < 0 || (grid_base == 0 && residues.contains(&0)) {
        return Err(Error::Invalid("grid base would produce a part equal to zero".into()));
    }
    let degree_bound = 3 * g - 3 + n as i64;
    let mut report = QuasiPolyReport {
        kind,
        r,
        g,
        n,
        residues: residues.to_vec(),
        degree_bound,
        empty: false,
        grid: Vec::new(),
        polynomial: None,
        observed_degree: None,
        holdouts: Vec::new(),
        status: Status::Pass,
        notes: Vec::new(),
    };
    if residues.iter().sum::<usize>() % r != 0 {
        report.empty = true;
        report.notes.push("r does not divide the residue sum; every number in this class vanishes".into());
        return Ok(report);
    }
    let width = (degree_bound + 1).max(2);
    let axis: Vec<i64> = (grid_base..grid_base + width).collect();
    report.grid = vec![axis.clone(); n];
    let mut points: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        points = points.into_iter().flat_map(|p| axis.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    let holdouts: Vec<Vec<i64>> =
        (0..holdout_count)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if i == j % n {
                            grid_base + width + (j / n) as i64
                        } else {
                            grid_base + ((j + i) as i64 % width)
                        }
                    })
                    .collect()
            })
            .collect();
    let evaluate = |nu: &Vec<i64>| normalized_value(kind, r, g, &mu_of(nu, residues, r));
    let grid_values: Vec<Option<BigRational>> = points.par_iter().map(evaluate).collect::<Result<_>>()?;
    let holdout_values: Vec<Option<BigRational>> = holdouts.par_iter().map(evaluate).collect::<Result<_>>()?;
    if grid_values.iter().any(|v| v.is_none()) {
        report.status = Status::Fail;
        report.notes.push("nonzero number over a vanishing prefactor on the grid".into());
        return Ok(report);
    }
    let samples: Vec<(Vec<i64>, BigRational)> =
        points.into_iter().zip(grid_values).map(|(p, v)| (p, v.expect("checked above"))).collect();
    let poly = interpolate_on_grid(&samples, 0)?;
    let degree = poly.total_degree();
    let mut ok = degree.is_none_or(|d| d as i64 <= degree_bound);
    if !ok {
        report.notes.push(format!("interpolant has degree {} above the bound {degree_bound}", degree.unwrap_or(0)));
    }
    for (nu, actual) in holdouts.into_iter().zip(holdout_values) {
        let predicted = poly.eval_int(&nu);
        let matches = actual.as_ref() == Some(&predicted);
        ok &= matches;
        report.holdouts.push(HoldoutCheck {
            mu: mu_of(&nu, residues, r),
            nu,
            actual,
            predicted: Some(predicted),
            matches,
        });
    }
    if report.holdouts.len() < 3 {
        report.notes.push("fewer than three held-out points".into());
        ok = false;
    }
    report.observed_degree = degree;
    report.polynomial = Some(poly);
    report.status = Status::from_bool(ok);
    Ok(report)
}

/// All residue vectors `η ∈ {0..r-1}^n` with `r | Σ η`.
pub fn admissible_residues(r: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| (0..r).map(move |e| [p.clone(), vec![e]].concat())).collect();
    }
    out.retain(|e| e.iter().sum::<usize>() % r == 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ratio;

    #[test]
    fn prefactor_examples() {
        assert_eq!(prefactor(HurwitzKind::Monotone, 2, 5), rat(21));
        assert_eq!(prefactor(HurwitzKind::StrictlyMonotone, 2, 4), rat(3));
        assert_eq!(prefactor(HurwitzKind::Usual, 2, 4), rat(8));
        assert_eq!(prefactor(HurwitzKind::StrictlyMonotone, 1, 4), rat(0));
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let constant: Vec<_> = [1, 2, 3].iter().map(|&x| (vec![x], rat(7))).collect();
        let p = interpolate_on_grid(&constant, 0).unwrap();
        assert_eq!(p.total_degree(), Some(0));
        let linear: Vec<_> = [1, 2].iter().map(|&x| (vec![x], rat(2 * x + 3))).collect();
        let p = interpolate_on_grid(&linear, 1).unwrap();
        assert_eq!(p.coeff(&[1]), rat(2));
        assert_eq!(p.coeff(&[0]), rat(3));
        // f(a, b) = a²b/2 - b + 1 on a 3×2 grid
        let f = |a: i64, b: i64| ratio(a * a * b, 2) - rat(b) + rat(1);
        let mut samples = Vec::new();
        for a in [0, 2, 5] {
            for b in [1, 4] {
                samples.push((vec![a, b], f(a, b)));
            }
        }
        let p = interpolate_on_grid(&samples, 1).unwrap();
        assert_eq!(p.total_degree(), Some(3));
        assert_eq!(p.eval_int(&[7, -3]), f(7, -3));
    }

    #[test]
    fn interpolation_rejects_bad_input() {
        let dup = vec![(vec![1], rat(1)), (vec![1], rat(2))];
        assert_eq!(interpolate_on_grid(&dup, 0), Err(Error::InconsistentSample(vec![1])));
        let holey = vec![(vec![1, 1], rat(1)), (vec![2, 2], rat(2)), (vec![1, 2], rat(0))];
        assert!(matches!(interpolate_on_grid(&holey, 0), Err(Error::NotAGrid(_))));
        let short = vec![(vec![1], rat(1))];
        assert!(matches!(interpolate_on_grid(&short, 1), Err(Error::NotAGrid(_))));
    }

    #[test]
    fn genus_zero_three_points_is_constant() {
        let rep = verify_quasipolynomiality(HurwitzKind::Monotone, 1, 0, 3, &[0, 0, 0], 1, 3).unwrap();
        assert!(rep.status.is_pass(), "{rep:?}");
        assert_eq!(rep.observed_degree, Some(0));
        let rep = verify_quasipolynomiality(HurwitzKind::StrictlyMonotone, 2, 0, 3, &[1, 1, 0], 1, 3).unwrap();
        assert!(rep.status.is_pass(), "{rep:?}");
        assert_eq!(rep.observed_degree, Some(0));
        assert_eq!(rep.grid[0].len(), 2);
    }

    #[test]
    fn usual_genus_one() {
        let rep = verify_quasipolynomiality(HurwitzKind::Usual, 2, 1, 1, &[0], 1, 3).unwrap();
        assert!(rep.status.is_pass(), "{rep:?}");
        assert!(rep.observed_degree.unwrap() <= 1);
    }

    #[test]
    fn empty_residue_class() {
        let rep = verify_quasipolynomiality(HurwitzKind::Monotone, 2, 0, 3, &[1, 0, 0], 1, 3).unwrap();
        assert!(rep.empty && rep.status.is_pass());
        assert_eq!(admissible_residues(2, 3).len(), 4);
    }
}
