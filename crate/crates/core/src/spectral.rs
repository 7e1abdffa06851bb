//! Series computations on the three spectral curves.
//!
//! | kind               | curve                 | expansion variable |
//! |--------------------|-----------------------|--------------------|
//! | monotone           | `x = z(1 - z^r)`      | `x` near 0         |
//! | strictly monotone  | `x = z^{r-1} + 1/z`   | `s = 1/x` near 0   |
//! | usual              | `x = log z - z^r`     | `q = e^x` near 0   |
//!
//! Each curve is inverted to `z` as a power series in its expansion variable,
//! after which the basis functions `ξ_i` and the unstable `(0,1)`/`(0,2)`
//! free energies can be compared against their closed forms coefficient by
//! coefficient.
//!
//! Sign convention for the strictly monotone curve: with `s` a formal variable,
//! `(1/z²)(d/dx)(z^{i+1}/(i+1))` expands with all coefficients negative, so
//! [`xi_series`] returns its negative, whose coefficients are `binom(μ-1, [μ])`.
//! For the same reason the strictly monotone `(0,1)` differential matches
//! `-z dx` rather than `z dx`; [`check_f01`] reports the sign it uses.
//!
//! On the usual curve `ξ_i = z^i/(1 - r z^r)`, which is `(1/z)(d/dx)(z^{i+1}/(i+1))`.

use num_traits::Zero;
use serde::Serialize;

use crate::exactmath::{
    binomial, euclid, factorial, rat, series_reversion, BigRational, MultiPolynomial, TruncatedSeries,
};
use crate::hurwitz::HurwitzKind;
use crate::polycheck::{interpolate_on_grid, prefactor, Status};
use crate::{Error, Result};

/// A spectral curve together with the variable its functions are expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveSpec {
    pub kind: HurwitzKind,
    pub r: usize,
}

impl CurveSpec {
    pub fn new(kind: HurwitzKind, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("r must be positive".into()));
        }
        Ok(CurveSpec { kind, r })
    }

    pub fn defining_function(&self) -> String {
        let r = self.r;
        match self.kind {
            HurwitzKind::Monotone => format!("x = z(1 - z^{r})"),
            HurwitzKind::StrictlyMonotone => format!("x = z^{} + z^-1", r as i64 - 1),
            HurwitzKind::Usual => format!("x = log z - z^{r}"),
        }
    }

    /// Name of the formal variable used for expansions: `x`, `s = 1/x` or `q = e^x`.
    pub fn variable(&self) -> &'static str {
        match self.kind {
            HurwitzKind::Monotone => "x",
            HurwitzKind::StrictlyMonotone => "s",
            HurwitzKind::Usual => "q",
        }
    }

    /// The expansion variable as a series in `z`, exact below `order`.
    pub fn forward_series(&self, order: i64) -> TruncatedSeries {
        let r = self.r as i64;
        let terms: Vec<(i64, BigRational)> = match self.kind {
            HurwitzKind::Monotone => vec![(1, rat(1)), (r + 1, rat(-1))],
            // z/(1+z^r)
            HurwitzKind::StrictlyMonotone => (0..)
                .map(|k| (r * k + 1, if k % 2 == 0 { rat(1) } else { rat(-1) }))
                .take_while(|(e, _)| *e < order)
                .collect(),
            // z·exp(-z^r)
            HurwitzKind::Usual => (0..)
                .map(|k: i64| {
                    let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
                    (r * k + 1, sign / BigRational::from_integer(factorial(k as u64)))
                })
                .take_while(|(e, _)| *e < order)
                .collect(),
        };
        let terms: Vec<_> = terms.into_iter().filter(|(e, _)| *e < order).collect();
        TruncatedSeries::univariate("z", order, terms).expect("power series")
    }
}

/// `z` as a power series in the curve's expansion variable, exact below `order`.
pub fn curve_inverse_series(kind: HurwitzKind, r: usize, order: i64) -> Result<TruncatedSeries> {
    if order < 2 {
        return Err(Error::Invalid("order must be at least 2".into()));
    }
    let curve = CurveSpec::new(kind, r)?;
    let z = series_reversion(&curve.forward_series(order), order)?;
    Ok(z.rename(&[curve.variable()]))
}

/// `d/dx` written in the expansion variable: `d/dx`, `-s² d/ds` or `q d/dq`.
pub fn d_dx(kind: HurwitzKind, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let df = f.derivative(0)?;
    match kind {
        HurwitzKind::Monotone => Ok(df),
        HurwitzKind::StrictlyMonotone => Ok(df.shift(&[2])?.neg()),
        HurwitzKind::Usual => df.shift(&[1]),
    }
}

/// `ξ_i` expanded in the curve's variable, exact below `order`.
pub fn xi_series(kind: HurwitzKind, r: usize, i: usize, order: i64) -> Result<TruncatedSeries> {
    if i >= r {
        return Err(Error::Invalid(format!("basis index {i} must be below r = {r}")));
    }
    let work = order.max(2) + 3;
    let z = curve_inverse_series(kind, r, work)?;
    let zi = z.pow(i as i64)?;
    let dz = z.derivative(0)?;
    let xi = match kind {
        HurwitzKind::Monotone => zi.mul(&dz)?,
        // (s/z)² z^i dz/ds
        HurwitzKind::StrictlyMonotone => {
            let s_over_z = z.shift(&[-1])?.inverse()?;
            s_over_z.pow(2)?.mul(&zi)?.mul(&dz)?
        }
        // z^i/(1 - r z^r) = (q/z) z^i dz/dq
        HurwitzKind::Usual => z.shift(&[-1])?.inverse()?.mul(&zi)?.mul(&dz)?,
    };
    Ok(xi.truncate(&[order]))
}

/// Closed-form coefficient of `ξ_i` at exponent `μ`; zero off the residue class `i mod r`.
pub fn xi_closed_coefficient(kind: HurwitzKind, r: usize, i: usize, mu: i64) -> BigRational {
    if mu < 0 || mu.rem_euclid(r as i64) != i as i64 {
        return BigRational::zero();
    }
    prefactor(kind, r as i64, mu)
}

/// Coefficient of the expansion monomial with exponent `μ` in `(d/dx)^p ξ_i`.
pub fn xi_derivative_coefficient(kind: HurwitzKind, r: usize, i: usize, p: u32, mu: i64) -> BigRational {
    let p = p as i64;
    match kind {
        HurwitzKind::Monotone => {
            let rise: BigRational = (1..=p).map(|k| rat(mu + k)).product();
            rise * xi_closed_coefficient(kind, r, i, mu + p)
        }
        HurwitzKind::StrictlyMonotone => {
            let n = mu - p;
            if n < 0 {
                return BigRational::zero();
            }
            let fall: BigRational = (n..mu).map(rat).product();
            let sign = if p % 2 == 0 { rat(1) } else { rat(-1) };
            sign * fall * xi_closed_coefficient(kind, r, i, n)
        }
        HurwitzKind::Usual => num_traits::pow::pow(rat(mu), p as usize) * xi_closed_coefficient(kind, r, i, mu),
    }
}

fn ser_rat<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One compared coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientRow {
    pub exponent: i64,
    #[serde(serialize_with = "ser_rat")]
    pub expected: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub actual: BigRational,
}

impl CoefficientRow {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

fn first_mismatch(rows: &[CoefficientRow]) -> Option<i64> {
    rows.iter().find(|row| !row.matches()).map(|row| row.exponent)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XiReport {
    pub kind: HurwitzKind,
    pub r: usize,
    pub i: usize,
    pub order: i64,
    /// `expected` is the closed form, `actual` the series coefficient.
    pub rows: Vec<CoefficientRow>,
    pub first_mismatch: Option<i64>,
    pub status: Status,
}

/// Compares [`xi_series`] against [`xi_closed_coefficient`] below `order`.
pub fn check_xi(kind: HurwitzKind, r: usize, i: usize, order: i64) -> Result<XiReport> {
    let series = xi_series(kind, r, i, order)?;
    let rows: Vec<CoefficientRow> = (0..order)
        .map(|mu| {
            Ok(CoefficientRow {
                exponent: mu,
                expected: xi_closed_coefficient(kind, r, i, mu),
                actual: series.coeff1(mu)?,
            })
        })
        .collect::<Result<_>>()?;
    let first = first_mismatch(&rows);
    Ok(XiReport { kind, r, i, order, rows, first_mismatch: first, status: Status::from_bool(first.is_none()) })
}

/// Compares [`xi_derivative_coefficient`] against `d/dx` applied `p` times to
/// [`xi_series`], for exponents below `order`.
pub fn check_xi_derivative(kind: HurwitzKind, r: usize, i: usize, p: u32, order: i64) -> Result<XiReport> {
    let mut f = xi_series(kind, r, i, order + 2 * p as i64)?;
    for _ in 0..p {
        f = d_dx(kind, &f)?;
    }
    let rows: Vec<CoefficientRow> = (0..order)
        .map(|mu| {
            Ok(CoefficientRow {
                exponent: mu,
                expected: xi_derivative_coefficient(kind, r, i, p, mu),
                actual: f.coeff1(mu)?,
            })
        })
        .collect::<Result<_>>()?;
    let first = first_mismatch(&rows);
    Ok(XiReport { kind, r, i, order, rows, first_mismatch: first, status: Status::from_bool(first.is_none()) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivativeStructureReport {
    pub kind: HurwitzKind,
    pub r: usize,
    pub i: usize,
    pub p: u32,
    /// Residue class of the exponents sampled.
    pub residue: i64,
    /// `exponent` is `[μ]`; `expected` the interpolant's prediction, `actual`
    /// the coefficient divided by the prefactor.
    pub rows: Vec<CoefficientRow>,
    pub polynomial: MultiPolynomial,
    pub status: Status,
}

/// Divides `(d/dx)^p ξ_i` coefficients by the kind's prefactor on
/// `[μ] = p+1, …, 2p+2` and checks that a polynomial of degree `≤ p` in `[μ]`
/// through the first `p+1` samples predicts the rest.
pub fn check_derivative_structure(kind: HurwitzKind, r: usize, i: usize, p: u32) -> Result<DerivativeStructureReport> {
    if i >= r {
        return Err(Error::Invalid(format!("basis index {i} must be below r = {r}")));
    }
    let ri = r as i64;
    let pi = p as i64;
    let residue = match kind {
        HurwitzKind::Monotone => (i as i64 - pi).rem_euclid(ri),
        HurwitzKind::StrictlyMonotone => (i as i64 + pi).rem_euclid(ri),
        HurwitzKind::Usual => i as i64,
    };
    let ratio_at = |q: i64| -> Result<BigRational> {
        let mu = q * ri + residue;
        let c = xi_derivative_coefficient(kind, r, i, p, mu);
        let pre = prefactor(kind, ri, mu);
        if pre.is_zero() {
            // 0/0 counts as 0; a nonzero coefficient over a zero prefactor has no quotient
            return if c.is_zero() {
                Ok(BigRational::zero())
            } else {
                Err(Error::Singular(format!("prefactor vanishes at μ = {mu}")))
            };
        }
        Ok(c / pre)
    };
    let fit: Vec<(Vec<i64>, BigRational)> =
        (pi + 1..=2 * pi + 1).map(|q| Ok((vec![q], ratio_at(q)?))).collect::<Result<_>>()?;
    let polynomial = interpolate_on_grid(&fit, p as usize)?;
    let rows: Vec<CoefficientRow> = (pi + 1..=2 * pi + 2)
        .map(|q| Ok(CoefficientRow { exponent: q, expected: polynomial.eval_int(&[q]), actual: ratio_at(q)? }))
        .collect::<Result<_>>()?;
    let degree_ok = polynomial.total_degree().is_none_or(|d| d <= p);
    let ok = degree_ok && rows.iter().all(CoefficientRow::matches);
    Ok(DerivativeStructureReport { kind, r, i, p, residue, rows, polynomial, status: Status::from_bool(ok) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct F01Report {
    pub kind: HurwitzKind,
    pub r: usize,
    pub order: i64,
    /// `σ` in `dF = σ·y·dx`, with `y = -z^r/x` (monotone) or `y = z` (strictly monotone).
    pub sign: i64,
    /// Monotone: `[x^n] F` against `(1/n)[x^n] z^r`.
    /// Strictly monotone: `[x^{-n}]` of `-x·dF/dx` against `[s^{n+1}] z`.
    pub rows: Vec<CoefficientRow>,
    pub first_mismatch: Option<i64>,
    pub status: Status,
}

/// Genus-zero one-point free energy checked against the curve, below `order`.
///
/// Monotone: `F = Σ_{m≥1} (rm+m-2)!/((rm)! m!) x^{rm}` and `dF = -y dx` with
/// `y = -z^r/x`. Strictly monotone: `dF = -(1/x) Σ_{m≥0} (rm)!/(m!(rm-m+1)!) x^{-rm} dx`,
/// which as a formal series in `s = 1/x` equals `-z dx`.
pub fn check_f01(kind: HurwitzKind, r: usize, order: i64) -> Result<F01Report> {
    let ri = r as i64;
    if order < ri + 1 {
        return Err(Error::Invalid(format!("order must be at least r + 1 = {}", ri + 1)));
    }
    let z = curve_inverse_series(kind, r, order + 1)?;
    let rows: Vec<CoefficientRow> = match kind {
        HurwitzKind::Monotone => {
            let zr = z.pow(ri)?;
            (1..order)
                .map(|n| {
                    let expected = if n % ri == 0 {
                        let m = n / ri;
                        let num = factorial((ri * m + m - 2) as u64);
                        let den = factorial((ri * m) as u64) * factorial(m as u64);
                        BigRational::new(num, den)
                    } else {
                        BigRational::zero()
                    };
                    Ok(CoefficientRow { exponent: n, expected, actual: zr.coeff1(n)? / rat(n) })
                })
                .collect::<Result<_>>()?
        }
        HurwitzKind::StrictlyMonotone => (0..order)
            .map(|n| {
                let expected = if n % ri == 0 {
                    let m = n / ri;
                    let num = factorial((ri * m) as u64);
                    let den = factorial(m as u64) * factorial((ri * m - m + 1) as u64);
                    BigRational::new(num, den)
                } else {
                    BigRational::zero()
                };
                Ok(CoefficientRow { exponent: n, expected, actual: z.coeff1(n + 1)? })
            })
            .collect::<Result<_>>()?,
        HurwitzKind::Usual => return Err(Error::Invalid("the (0,1) check covers monotone and strict only".into())),
    };
    let first = first_mismatch(&rows);
    Ok(F01Report { kind, r, order, sign: -1, rows, first_mismatch: first, status: Status::from_bool(first.is_none()) })
}

/// Genus-zero connected monotone two-point number from the closed `t`-sum.
pub fn two_point_monotone(r: usize, mu1: i64, mu2: i64) -> BigRational {
    let ri = r as i64;
    if (mu1 + mu2) % ri != 0 {
        return BigRational::zero();
    }
    let (q1, e1) = euclid(mu1, ri);
    let (q2, _) = euclid(mu2, ri);
    if e1 != 0 {
        (1..=q2 + 1).map(|t| left_factor(mu1, q1, t) * rat(t * ri - e1) * right_factor(mu2, q2 + 1, t)).sum()
    } else {
        rat(ri) * case_two_sum(mu1, q1, mu2, q2)
    }
}

/// `(μ+[μ]+t-1)!/(μ!([μ]+t)!)`
fn left_factor(mu: i64, q: i64, t: i64) -> BigRational {
    BigRational::new(factorial((mu + q + t - 1) as u64), factorial(mu as u64) * factorial((q + t) as u64))
}

/// `(μ+Q-1-t)!/(μ!(Q-t)!)`
fn right_factor(mu: i64, big_q: i64, t: i64) -> BigRational {
    BigRational::new(factorial((mu + big_q - 1 - t) as u64), factorial(mu as u64) * factorial((big_q - t) as u64))
}

/// `Σ_{t=1}^{[μ₂]} left·t·right`, the divisible case without the factor `r`.
fn case_two_sum(mu1: i64, q1: i64, mu2: i64, q2: i64) -> BigRational {
    (1..=q2).map(|t| left_factor(mu1, q1, t) * rat(t) * right_factor(mu2, q2, t)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseIdentityReport {
    pub r: usize,
    pub mu1: i64,
    pub mu2: i64,
    /// `"I"` when `r ∤ μ₁`, `"II"` when `r | μ₁`.
    pub case: &'static str,
    #[serde(serialize_with = "ser_rat")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub rhs: BigRational,
    pub status: Status,
}

/// The two binomial identities behind the two-point Bergman check:
/// `(μ₁+μ₂)·h = r·B₁B₂` when `r ∤ μ₁`, and `(μ₁+μ₂)·h/r = B₁B₂/(r+1)` when
/// `r | μ₁`, with `B_i = binom(μ_i+[μ_i], μ_i)`.
pub fn check_case_identities(r: usize, mu1: i64, mu2: i64) -> Result<CaseIdentityReport> {
    let ri = r as i64;
    if r == 0 || mu1 < 1 || mu2 < 1 || (mu1 + mu2) % ri != 0 {
        return Err(Error::Invalid(format!("need μ₁, μ₂ ≥ 1 and r | μ₁+μ₂, got r={r}, μ=({mu1},{mu2})")));
    }
    let (q1, e1) = euclid(mu1, ri);
    let (q2, _) = euclid(mu2, ri);
    let b = binomial(mu1 + q1, mu1) * binomial(mu2 + q2, mu2);
    let total = rat(mu1 + mu2);
    let (case, lhs, rhs) = if e1 != 0 {
        ("I", total * two_point_monotone(r, mu1, mu2), rat(ri) * b)
    } else {
        ("II", total * case_two_sum(mu1, q1, mu2, q2), b / rat(ri + 1))
    };
    let status = Status::from_bool(lhs == rhs);
    Ok(CaseIdentityReport { r, mu1, mu2, case, lhs, rhs, status })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoPointRow {
    pub mu1: i64,
    pub mu2: i64,
    /// `[x₁^{μ₁} x₂^{μ₂}] log((z₁-z₂)/(x₁-x₂))`
    #[serde(serialize_with = "ser_rat")]
    pub series: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub closed: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BergmanReport {
    pub r: usize,
    pub order: i64,
    pub rows: Vec<TwoPointRow>,
    pub first_mismatch: Option<(i64, i64)>,
    pub status: Status,
}

/// `log((z(x₁)-z(x₂))/(x₁-x₂))` on the monotone curve, exact in total degree `≤ order`.
pub fn bergman_log_series(r: usize, order: i64) -> Result<TruncatedSeries> {
    if order < 2 {
        return Err(Error::Invalid("order must be at least 2".into()));
    }
    let z = curve_inverse_series(HurwitzKind::Monotone, r, order + 2)?;
    let vars = ["x1", "x2"];
    let orders = [order + 1, order + 1];
    // (x₁ⁿ - x₂ⁿ)/(x₁ - x₂) = Σ_j x₁^j x₂^{n-1-j}
    let mut terms = Vec::new();
    for (e, a) in z.terms() {
        let n = e[0];
        for j in 0..n {
            terms.push((vec![j, n - 1 - j], a.clone()));
        }
    }
    let quotient = TruncatedSeries::from_terms(&vars, &orders, terms)?;
    quotient.log()
}

/// Mixed coefficients of [`bergman_log_series`] against [`two_point_monotone`]
/// for `μ₁, μ₂ ≥ 1` and `μ₁ + μ₂ ≤ order`.
pub fn check_bergman02(r: usize, order: i64) -> Result<BergmanReport> {
    let log = bergman_log_series(r, order)?;
    let mut rows = Vec::new();
    for total in 2..=order {
        for mu1 in 1..total {
            let mu2 = total - mu1;
            rows.push(TwoPointRow {
                mu1,
                mu2,
                series: log.coeff(&[mu1, mu2])?,
                closed: two_point_monotone(r, mu1, mu2),
            });
        }
    }
    let first = rows.iter().find(|row| row.series != row.closed).map(|row| (row.mu1, row.mu2));
    Ok(BergmanReport { r, order, rows, first_mismatch: first, status: Status::from_bool(first.is_none()) })
}

/// `(exponent, coefficient)` pairs of a univariate series, nonzero terms only.
pub fn coefficient_table(series: &TruncatedSeries) -> Vec<(i64, BigRational)> {
    series.terms().map(|(e, c)| (e[0], c.clone())).collect()
}

/// Renders `(exponent, coefficient)` pairs as two-column CSV.
pub fn coefficient_csv(rows: &[(i64, BigRational)]) -> String {
    let mut out = String::from("exponent,coefficient\n");
    for (e, c) in rows {
        out.push_str(&format!("{e},{c}\n"));
    }
    out
}
