use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactmath::{elementary_series, factorial, ratio, BigRational, ElementaryFn, TruncatedSeries};
use crate::partitions::Partition;
use crate::{Error, Result};

/// Charge-zero basis vector `v_λ`; its energy is `|λ|`.
pub type FockBasisState = Partition;

/// `𝓔_a` applied to the linear form `Σ coeff·z_var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EOpSpec {
    pub energy: i64,
    pub arg: Vec<(usize, i64)>,
}

impl EOpSpec {
    /// `𝓔_a(z_var)`.
    pub fn new(energy: i64, var: usize) -> Self {
        EOpSpec { energy, arg: vec![(var, 1)] }
    }

    pub fn with_arg(energy: i64, arg: Vec<(usize, i64)>) -> Self {
        EOpSpec { energy, arg }
    }
}

/// One monomial of an [`ExpSum`]: `Π_j e^{half[j]·z_j/2}` times `1/ζ(arg_i)`
/// for every operator index `i` set in `poles`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpKey {
    pub half: Vec<i64>,
    pub poles: u64,
}

/// Integer combination of exponentials and `1/ζ` factors.
pub type ExpSum = BTreeMap<ExpKey, BigInt>;

/// Finitely supported vector in the charge-zero sector.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StateVector {
    pub entries: BTreeMap<FockBasisState, ExpSum>,
}

impl StateVector {
    pub fn vacuum(nvars: usize) -> Self {
        let mut sum = ExpSum::new();
        sum.insert(ExpKey { half: vec![0; nvars], poles: 0 }, BigInt::one());
        let mut entries = BTreeMap::new();
        entries.insert(Partition::empty(), sum);
        StateVector { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_energy(&self) -> i64 {
        self.entries.keys().map(|p| p.size() as i64).max().unwrap_or(0)
    }

    fn add(&mut self, state: FockBasisState, key: ExpKey, c: BigInt) {
        let sum = self.entries.entry(state.clone()).or_default();
        let slot = sum.entry(key.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            sum.remove(&key);
            if sum.is_empty() {
                self.entries.remove(&state);
            }
        }
    }
}

/// Doubled positions `2λ_i - 2i + 1` for `i = 1..=window`.
fn positions(lambda: &[usize], window: usize) -> Vec<i64> {
    (1..=window).map(|i| 2 * lambda.get(i - 1).copied().unwrap_or(0) as i64 - 2 * i as i64 + 1).collect()
}

fn from_positions(mut pos: Vec<i64>) -> Partition {
    pos.sort_unstable_by(|a, b| b.cmp(a));
    let parts = pos.iter().enumerate().map(|(i, &p)| ((p + 2 * i as i64 + 1) / 2) as usize).collect();
    Partition::new(parts)
}

/// Off-diagonal moves of `𝓔_a` on `v_λ` (`a ≠ 0`): `(image, doubled exponent, sign)`.
pub(crate) fn e_moves(lambda: &Partition, a: i64) -> Vec<(Partition, i64, bool)> {
    let window = lambda.len() + a.unsigned_abs() as usize + 1;
    let pos = positions(lambda.parts(), window);
    let bottom = *pos.last().expect("window is nonempty");
    let mut out = Vec::new();
    for (idx, &k) in pos.iter().enumerate() {
        let target = k - 2 * a;
        if target <= bottom || pos.contains(&target) {
            continue;
        }
        let (lo, hi) = if target < k { (target, k) } else { (k, target) };
        let between = pos.iter().filter(|&&p| p > lo && p < hi).count();
        let mut next = pos.clone();
        next[idx] = target;
        out.push((from_positions(next), k - a, between % 2 == 1));
    }
    out
}

/// Diagonal terms of `𝓔̃₀` on `v_λ`: `(doubled exponent, negative)`.
pub(crate) fn e0_tilde_terms(lambda: &Partition) -> Vec<(i64, bool)> {
    let window = lambda.len() + 1;
    let pos = positions(lambda.parts(), window);
    let mut out: Vec<(i64, bool)> = pos.iter().filter(|&&p| p > 0).map(|&p| (p, false)).collect();
    let bottom = *pos.last().expect("window is nonempty");
    let mut k = -1;
    while k > bottom {
        if !pos.contains(&k) {
            out.push((k, true));
        }
        k -= 2;
    }
    out
}

/// Applies `𝓔_a(arg)` (operator number `slot`, for pole bookkeeping) to
/// `state`. For `a = 0` the scalar `1/ζ(arg)` is recorded in the pole mask.
/// Fails when an image exceeds `energy_cap`.
pub fn apply_e(op: &EOpSpec, slot: usize, state: &StateVector, energy_cap: i64) -> Result<StateVector> {
    let mut out = StateVector::default();
    let shift = |key: &ExpKey, half: i64| {
        let mut k = key.clone();
        for &(var, coeff) in &op.arg {
            k.half[var] += half * coeff;
        }
        k
    };
    for (lambda, sum) in &state.entries {
        if op.energy == 0 {
            for (half, negative) in e0_tilde_terms(lambda) {
                for (key, c) in sum {
                    out.add(lambda.clone(), shift(key, half), if negative { -c } else { c.clone() });
                }
            }
            for (key, c) in sum {
                let mut k = key.clone();
                k.poles |= 1 << slot;
                out.add(lambda.clone(), k, c.clone());
            }
            continue;
        }
        for (image, half, negative) in e_moves(lambda, op.energy) {
            let energy = image.size() as i64;
            if energy > energy_cap {
                return Err(Error::EnergyCap { energy, cap: energy_cap });
            }
            for (key, c) in sum {
                out.add(image.clone(), shift(key, half), if negative { -c } else { c.clone() });
            }
        }
    }
    Ok(out)
}

fn nvars_of(ops: &[EOpSpec]) -> usize {
    ops.iter().flat_map(|o| o.arg.iter().map(|&(v, _)| v + 1)).max().unwrap_or(0)
}

/// `⟨0| Π 𝓔 |0⟩` as an exponential sum, propagating from the right.
pub fn vacuum_expsum(ops: &[EOpSpec]) -> Result<ExpSum> {
    if ops.len() > 64 {
        return Err(Error::Invalid("at most 64 operators".into()));
    }
    if ops.iter().map(|o| o.energy).sum::<i64>() != 0 {
        return Ok(ExpSum::new());
    }
    let cap: i64 = ops.iter().map(|o| (-o.energy).max(0)).sum();
    let mut state = StateVector::vacuum(nvars_of(ops));
    for (slot, op) in ops.iter().enumerate().rev() {
        state = apply_e(op, slot, &state, cap)?;
        // the operators still to act can lower the energy by at most this much
        let reachable: i64 = ops[..slot].iter().map(|o| o.energy.max(0)).sum();
        state.entries.retain(|lambda, _| lambda.size() as i64 <= reachable);
        if state.is_zero() {
            break;
        }
    }
    Ok(state.entries.remove(&Partition::empty()).unwrap_or_default())
}

/// Expansion of `e^{(half/2)·scale·z}` below `order`.
pub(crate) fn exp_half(var: &str, half: i64, order: i64) -> TruncatedSeries {
    let c = ratio(half, 2);
    let terms = (0..order.max(0))
        .map(|k| (k, num_traits::pow::pow(c.clone(), k as usize) / BigRational::from_integer(factorial(k as u64))));
    TruncatedSeries::univariate(var, order, terms).expect("power series")
}

/// Expands an [`ExpSum`] into a Laurent series in `vars` (exact below
/// `orders`). Pole factors need single-variable arguments; two poles in the
/// same variable exceed the allowed floor and are rejected.
pub fn expsum_to_series<S: AsRef<str>>(
    ops: &[EOpSpec],
    sum: &ExpSum,
    vars: &[S],
    orders: &[i64],
) -> Result<TruncatedSeries> {
    let n = vars.len();
    let big: Vec<i64> = vec![i64::MAX / 4; n];
    let mut total = TruncatedSeries::zero(vars, orders);
    for (key, mult) in sum {
        let mut prod = TruncatedSeries::one(vars, &big);
        for j in 0..n {
            let name = vars[j].as_ref();
            let mut factor = exp_half(name, key.half[j], orders[j] + 1);
            for (i, op) in ops.iter().enumerate() {
                if key.poles & (1 << i) == 0 {
                    continue;
                }
                match op.arg.as_slice() {
                    [(v, a)] if *v == j => {
                        let inv = elementary_series(ElementaryFn::InvZeta, name, orders[j] + 1)
                            .scale_var(0, &crate::exactmath::rat(*a));
                        factor = factor.mul(&inv)?;
                    }
                    [(_, _)] => {}
                    _ => {
                        return Err(Error::Invalid(
                            "1/zeta of a multivariable argument has no Laurent expansion".into(),
                        ))
                    }
                }
            }
            let factor = factor.truncate(&[orders[j]]);
            let mut slots = big.clone();
            slots[j] = orders[j];
            prod = prod.mul(&factor.embed(vars, &slots, &[j])?)?;
        }
        total = total.add(&prod.truncate(orders).scale(&BigRational::from_integer(mult.clone())))?;
    }
    Ok(total)
}

/// `⟨0| Π 𝓔 |0⟩` as a truncated Laurent series in `vars`.
pub fn vacuum_expectation<S: AsRef<str>>(ops: &[EOpSpec], vars: &[S], orders: &[i64]) -> Result<TruncatedSeries> {
    if nvars_of(ops) > vars.len() {
        return Err(Error::Invalid("operator argument refers to an unnamed variable".into()));
    }
    let sum = vacuum_expsum(ops)?;
    expsum_to_series(ops, &sum, vars, orders)
}
