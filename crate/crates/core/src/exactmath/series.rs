use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{rat, BigRational};
use crate::{Error, Result};

/// Default per-variable pole bound: a simple pole at most.
pub const DEFAULT_FLOOR: i64 = -1;

/// Multivariate truncated Laurent series over `Q`.
///
/// A series is known modulo the monomial ideal generated by `xᵢ^{order[i]}`:
/// every stored coefficient whose exponent vector is componentwise below
/// `order` is exact, everything else is unknown. No exponent may go below the
/// per-variable `floor`.
#[derive(Clone)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    order: Vec<i64>,
    floor: Vec<i64>,
    coeffs: BTreeMap<Vec<i64>, BigRational>,
}

impl TruncatedSeries {
    pub fn zero<S: AsRef<str>>(vars: &[S], order: &[i64]) -> Self {
        assert_eq!(vars.len(), order.len(), "one order per variable");
        TruncatedSeries {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            order: order.to_vec(),
            floor: vec![DEFAULT_FLOOR; vars.len()],
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one<S: AsRef<str>>(vars: &[S], order: &[i64]) -> Self {
        let mut s = Self::zero(vars, order);
        let e = vec![0; vars.len()];
        if s.in_range(&e) {
            s.coeffs.insert(e, BigRational::one());
        }
        s
    }

    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        order: &[i64],
        terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>,
    ) -> Result<Self> {
        let mut s = Self::zero(vars, order);
        for (e, c) in terms {
            s.add_term(e, c)?;
        }
        Ok(s)
    }

    /// Univariate series `Σ c_k var^k` (terms at or beyond `order` dropped).
    pub fn univariate(var: &str, order: i64, terms: impl IntoIterator<Item = (i64, BigRational)>) -> Result<Self> {
        Self::from_terms(&[var], &[order], terms.into_iter().map(|(k, c)| (vec![k], c)))
    }

    pub fn monomial<S: AsRef<str>>(vars: &[S], order: &[i64], exponent: Vec<i64>, c: BigRational) -> Result<Self> {
        Self::from_terms(vars, order, [(exponent, c)])
    }

    /// Lowers (or raises) the pole bound of one variable.
    pub fn with_floor(mut self, var: usize, floor: i64) -> Result<Self> {
        self.floor[var] = floor;
        self.check_floor()?;
        Ok(self)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> &[i64] {
        &self.order
    }

    pub fn floor(&self) -> &[i64] {
        &self.floor
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn in_range(&self, e: &[i64]) -> bool {
        e.iter().zip(&self.order).all(|(a, n)| a < n)
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigRational) -> Result<()> {
        if e.len() != self.vars.len() {
            return Err(Error::Invalid(format!("exponent {e:?} has wrong arity")));
        }
        for (i, (&a, &f)) in e.iter().zip(&self.floor).enumerate() {
            if a < f {
                return Err(Error::PoleTooDeep { var: self.vars[i].clone(), exponent: a, floor: f });
            }
        }
        if c.is_zero() || !self.in_range(&e) {
            return Ok(());
        }
        match self.coeffs.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    fn check_floor(&self) -> Result<()> {
        for e in self.coeffs.keys() {
            for (i, (&a, &f)) in e.iter().zip(&self.floor).enumerate() {
                if a < f {
                    return Err(Error::PoleTooDeep { var: self.vars[i].clone(), exponent: a, floor: f });
                }
            }
        }
        Ok(())
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch { left: self.vars.clone(), right: other.vars.clone() });
        }
        Ok(())
    }

    /// Exact coefficient of `exponent`; errors if it lies beyond the truncation.
    pub fn coeff(&self, exponent: &[i64]) -> Result<BigRational> {
        if !self.in_range(exponent) {
            return Err(Error::BeyondOrder { exponent: exponent.to_vec(), order: self.order.clone() });
        }
        Ok(self.coeffs.get(exponent).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Univariate shorthand for [`coeff`](Self::coeff).
    pub fn coeff1(&self, k: i64) -> Result<BigRational> {
        self.coeff(&[k])
    }

    /// Smallest exponent of variable `var` present, or `order[var]` for zero.
    pub fn valuation(&self, var: usize) -> i64 {
        self.coeffs.keys().map(|e| e[var]).min().unwrap_or(self.order[var])
    }

    /// Componentwise minimum exponent, if it is itself a term.
    fn lowest_monomial(&self) -> Option<(Vec<i64>, BigRational)> {
        let n = self.nvars();
        let low: Vec<i64> = (0..n).map(|i| self.valuation(i)).collect();
        self.coeffs.get(&low).map(|c| (low, c.clone()))
    }

    pub fn truncate(&self, order: &[i64]) -> Self {
        let order: Vec<i64> = order.iter().zip(&self.order).map(|(a, b)| *a.min(b)).collect();
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| e.iter().zip(&order).all(|(a, n)| a < n))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        TruncatedSeries { vars: self.vars.clone(), order, floor: self.floor.clone(), coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let order: Vec<i64> = self.order.iter().zip(&other.order).map(|(a, b)| *a.min(b)).collect();
        let floor: Vec<i64> = self.floor.iter().zip(&other.floor).map(|(a, b)| *a.min(b)).collect();
        let mut out = TruncatedSeries { vars: self.vars.clone(), order, floor, coeffs: BTreeMap::new() };
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.coeffs.clear();
            return out;
        }
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    /// Multiplication by `x^shift` (exponent vector shift).
    pub fn shift(&self, shift: &[i64]) -> Result<Self> {
        let order: Vec<i64> = self.order.iter().zip(shift).map(|(n, s)| n + s).collect();
        let mut out =
            TruncatedSeries { vars: self.vars.clone(), order, floor: self.floor.clone(), coeffs: BTreeMap::new() };
        for (e, c) in &self.coeffs {
            let ne: Vec<i64> = e.iter().zip(shift).map(|(a, s)| a + s).collect();
            out.add_term(ne, c.clone())?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let n = self.nvars();
        let order: Vec<i64> =
            (0..n).map(|i| (self.order[i] + other.valuation(i)).min(other.order[i] + self.valuation(i))).collect();
        let floor: Vec<i64> = self.floor.iter().zip(&other.floor).map(|(a, b)| *a.min(b)).collect();
        let mut acc: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if !e.iter().zip(&order).all(|(a, n)| a < n) {
                    continue;
                }
                let slot = acc.entry(e).or_insert_with(BigRational::zero);
                *slot += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let out = TruncatedSeries { vars: self.vars.clone(), order, floor, coeffs: acc };
        out.check_floor()?;
        Ok(out)
    }

    /// Multiplicative inverse; requires the lowest term to be a monomial
    /// dividing every other term.
    pub fn inverse(&self) -> Result<Self> {
        let (low, c) =
            self.lowest_monomial().ok_or_else(|| Error::NotInvertible("lowest term is not a monomial".into()))?;
        let neg_low: Vec<i64> = low.iter().map(|a| -a).collect();
        // self = c·x^low·(1 + p)
        let unit = self.shift(&neg_low)?.scale(&c.recip());
        let p = unit.sub(&Self::one(&self.vars, &unit.order))?;
        let mut inv_unit = Self::one(&self.vars, &unit.order);
        let mut power = Self::one(&self.vars, &unit.order);
        let minus_p = p.neg();
        loop {
            power = power.mul(&minus_p)?.truncate(&unit.order);
            if power.is_zero() {
                break;
            }
            inv_unit = inv_unit.add(&power)?;
        }
        // order of a zero power is inflated; clamp back to the unit's order
        let inv_unit = inv_unit.truncate(&unit.order).with_floor_of(self);
        let out = inv_unit.shift(&neg_low)?.scale(&c.recip());
        out.check_floor()?;
        Ok(out)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut result = Self::one(&self.vars, &self.order).with_floor_of(self);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    fn with_floor_of(mut self, other: &Self) -> Self {
        self.floor = other.floor.clone();
        self
    }

    /// `d/d var`.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        let mut order = self.order.clone();
        order[var] -= 1;
        let mut out =
            TruncatedSeries { vars: self.vars.clone(), order, floor: self.floor.clone(), coeffs: BTreeMap::new() };
        for (e, c) in &self.coeffs {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(ne, c * rat(e[var]))?;
        }
        Ok(out)
    }

    /// Substitution `var → c·var`.
    pub fn scale_var(&self, var: usize, c: &BigRational) -> Self {
        let mut out = self.clone();
        for (e, v) in out.coeffs.iter_mut() {
            *v *= rational_pow(c, e[var]);
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    /// Renames variables (same arity).
    pub fn rename<S: AsRef<str>>(&self, vars: &[S]) -> Self {
        assert_eq!(vars.len(), self.vars.len());
        let mut out = self.clone();
        out.vars = vars.iter().map(|v| v.as_ref().to_string()).collect();
        out
    }

    /// Embeds a series into a larger variable set; `positions[i]` is the slot
    /// of this series' variable `i`. Other variables get exponent 0 and the
    /// given `order`.
    pub fn embed<S: AsRef<str>>(&self, vars: &[S], order: &[i64], positions: &[usize]) -> Result<Self> {
        let mut target_order = order.to_vec();
        for (i, &p) in positions.iter().enumerate() {
            target_order[p] = self.order[i];
        }
        let mut out = Self::zero(vars, &target_order);
        for (i, &p) in positions.iter().enumerate() {
            out.floor[p] = self.floor[i];
        }
        for (e, c) in &self.coeffs {
            let mut ne = vec![0; vars.len()];
            for (i, &p) in positions.iter().enumerate() {
                ne[p] = e[i];
            }
            out.add_term(ne, c.clone())?;
        }
        Ok(out)
    }

    /// Univariate composition `self(inner)`; `inner` must have positive
    /// valuation. Negative powers of `self` go through `inner⁻¹`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.nvars() != 1 || inner.nvars() != 1 {
            return Err(Error::Invalid("compose is univariate".into()));
        }
        let vg = inner.valuation(0);
        if vg < 1 {
            return Err(Error::Invalid("inner series must have positive valuation".into()));
        }
        // unknown terms of self start at degree order·vg
        let mut acc = Self::zero(&inner.vars, &[self.order[0].saturating_mul(vg)]);
        acc.floor = inner.floor.clone();
        for (e, c) in &self.coeffs {
            acc = acc.add(&inner.pow(e[0])?.scale(c))?;
        }
        Ok(acc)
    }

    /// `log(self)` for a series with constant term 1 and no negative exponents.
    pub fn log(&self) -> Result<Self> {
        let zero = vec![0; self.nvars()];
        if self.coeff(&zero)? != BigRational::one() || self.coeffs.keys().any(|e| e.iter().any(|&a| a < 0)) {
            return Err(Error::Invalid("log needs constant term 1 and a power series".into()));
        }
        let p = self.sub(&Self::one(&self.vars, &self.order))?;
        let mut out = Self::zero(&self.vars, &self.order);
        let mut power = Self::one(&self.vars, &self.order);
        let mut k = 1i64;
        loop {
            power = power.mul(&p)?.truncate(&self.order);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { rat(1) } else { rat(-1) };
            out = out.add(&power.scale(&(sign / rat(k))))?;
            k += 1;
        }
        Ok(out)
    }

    /// `exp(self)` for a power series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        let zero = vec![0; self.nvars()];
        if !self.coeff(&zero)?.is_zero() || self.coeffs.keys().any(|e| e.iter().any(|&a| a < 0)) {
            return Err(Error::Invalid("exp needs a power series without constant term".into()));
        }
        let mut out = Self::one(&self.vars, &self.order);
        let mut power = Self::one(&self.vars, &self.order);
        let mut k = 1i64;
        loop {
            power = power.mul(self)?.truncate(&self.order).scale(&rat(k).recip());
            if power.is_zero() {
                break;
            }
            out = out.add(&power)?;
            k += 1;
        }
        Ok(out)
    }
}

/// Pole floors are bookkeeping and do not take part in equality.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.order == other.order && self.coeffs == other.coeffs
    }
}

impl Eq for TruncatedSeries {}

pub(crate) fn rational_pow(c: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow::pow(c.clone(), e as usize)
    } else {
        num_traits::pow::pow(c.recip(), (-e) as usize)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, a) in self.vars.iter().zip(e) {
                if *a != 0 {
                    write!(f, "*{v}^{a}")?;
                }
            }
        }
        let big_o: Vec<String> = self.vars.iter().zip(&self.order).map(|(v, n)| format!("{v}^{n}")).collect();
        write!(f, " + O({})", big_o.join(", "))
    }
}
