//! Exact scalars, symmetric polynomials, Stirling numbers, truncated series and
//! multivariate polynomials.

mod elementary;
mod poly;
mod series;

pub use elementary::{elementary_series, series_reversion, ElementaryFn};
pub use num_rational::BigRational;
pub use poly::MultiPolynomial;
pub use series::TruncatedSeries;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A rational number, or the formal value `∞` produced by a Pochhammer symbol
/// with negative index whose product contains a zero factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedRational {
    Finite(BigRational),
    Infinite,
}

impl ExtendedRational {
    /// `1/∞ = 0`; `1/0` is `∞`.
    pub fn recip(&self) -> ExtendedRational {
        match self {
            ExtendedRational::Infinite => ExtendedRational::Finite(BigRational::zero()),
            ExtendedRational::Finite(q) if q.is_zero() => ExtendedRational::Infinite,
            ExtendedRational::Finite(q) => ExtendedRational::Finite(q.recip()),
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedRational::Finite(q) => Some(q),
            ExtendedRational::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRational::Infinite)
    }
}

impl From<BigRational> for ExtendedRational {
    fn from(q: BigRational) -> Self {
        ExtendedRational::Finite(q)
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Generalised binomial coefficient `n(n-1)…(n-k+1)/k!`; zero for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigRational {
    if k < 0 {
        return BigRational::zero();
    }
    let mut num = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
    }
    BigRational::new(num, factorial(k as u64))
}

/// `(x+1)_n = (x+n)!/x!` with the two-sided convention: for `n ≥ 0` the rising
/// product `(x+1)(x+2)…(x+n)`, for `n < 0` the reciprocal of
/// `x(x-1)…(x+n+1)`, which is `∞` when that product vanishes.
pub fn pochhammer_shifted(x: &BigRational, n: i64) -> ExtendedRational {
    if n >= 0 {
        let mut acc = BigRational::one();
        for j in 1..=n {
            acc *= x + rat(j);
        }
        ExtendedRational::Finite(acc)
    } else {
        let mut acc = BigRational::one();
        for j in 0..(-n) {
            acc *= x - rat(j);
        }
        ExtendedRational::Finite(acc).recip()
    }
}

/// Integer-argument convenience wrapper around [`pochhammer_shifted`].
pub fn pochhammer_int(x: i64, n: i64) -> ExtendedRational {
    pochhammer_shifted(&rat(x), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymKind {
    Complete,
    Elementary,
}

/// `h_k` or `σ_k` evaluated at `values`.
pub fn sym_poly(kind: SymKind, k: usize, values: &[BigRational]) -> BigRational {
    sym_poly_table(kind, k, values).swap_remove(k)
}

/// All of `h_0..=h_k` (or `σ_0..=σ_k`) at once.
pub fn sym_poly_table(kind: SymKind, k: usize, values: &[BigRational]) -> Vec<BigRational> {
    let mut table = vec![BigRational::zero(); k + 1];
    table[0] = BigRational::one();
    for x in values {
        match kind {
            // h_j(X ∪ x) = h_j(X) + x·h_{j-1}(X ∪ x): ascending in place
            SymKind::Complete => {
                for j in 1..=k {
                    let add = x * &table[j - 1];
                    table[j] += add;
                }
            }
            // σ_j(X ∪ x) = σ_j(X) + x·σ_{j-1}(X): descending in place
            SymKind::Elementary => {
                for j in (1..=k).rev() {
                    let add = x * &table[j - 1];
                    table[j] += add;
                }
            }
        }
    }
    table
}

/// Integer specialisation used on the hot path of the character route.
pub fn sym_poly_table_int(kind: SymKind, k: usize, values: &[i64]) -> Vec<BigInt> {
    let mut table = vec![BigInt::zero(); k + 1];
    table[0] = BigInt::one();
    for &x in values {
        if x == 0 {
            continue;
        }
        match kind {
            SymKind::Complete => {
                for j in 1..=k {
                    let add = &table[j - 1] * x;
                    table[j] += add;
                }
            }
            SymKind::Elementary => {
                for j in (1..=k).rev() {
                    let add = &table[j - 1] * x;
                    table[j] += add;
                }
            }
        }
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StirlingKind {
    /// Unsigned, `T(T+1)…(T+j-1) = Σ_t c(j,t) T^t`.
    First,
    Second,
}

pub fn stirling(kind: StirlingKind, j: usize, t: usize) -> BigRational {
    if t > j {
        return BigRational::zero();
    }
    // row-by-row recurrence
    let mut row = vec![BigInt::one()];
    for n in 1..=j {
        let mut next = vec![BigInt::zero(); n + 1];
        for k in 1..=n {
            let carry = if k < n { row[k].clone() } else { BigInt::zero() };
            let mult = match kind {
                StirlingKind::First => BigInt::from(n - 1),
                StirlingKind::Second => BigInt::from(k),
            };
            next[k] = &row[k - 1] + mult * carry;
        }
        row = next;
    }
    BigRational::from_integer(row[t].clone())
}

/// Euclidean division by `r`: `(quotient, residue)` with `0 ≤ residue < r`.
pub fn euclid(mu: i64, r: i64) -> (i64, i64) {
    (mu.div_euclid(r), mu.rem_euclid(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn sym_poly_examples() {
        assert_eq!(sym_poly(SymKind::Complete, 2, &rats(&[1, 2])), rat(7));
        assert_eq!(sym_poly(SymKind::Elementary, 2, &rats(&[1, 2, 3])), rat(11));
        assert_eq!(sym_poly(SymKind::Elementary, 4, &rats(&[1, 2, 3])), rat(0));
        assert_eq!(sym_poly(SymKind::Complete, 0, &[]), rat(1));
        assert_eq!(sym_poly(SymKind::Elementary, 0, &rats(&[5])), rat(1));
    }

    #[test]
    fn sym_poly_matches_brute_force() {
        // direct expansion over index tuples: weakly increasing for h, strictly for σ
        let xs = rats(&[2, -1, 3, 5]);
        let n = xs.len();
        for k in 0..5usize {
            let mut h = BigRational::zero();
            let mut e = BigRational::zero();
            for code in 0..n.pow(k as u32) {
                let idx: Vec<usize> = (0..k).map(|p| (code / n.pow(p as u32)) % n).collect();
                if !idx.windows(2).all(|w| w[0] <= w[1]) {
                    continue;
                }
                let prod = idx.iter().fold(BigRational::one(), |a, &i| a * &xs[i]);
                if idx.windows(2).all(|w| w[0] < w[1]) {
                    e += &prod;
                }
                h += prod;
            }
            assert_eq!(sym_poly(SymKind::Complete, k, &xs), h, "h_{k}");
            assert_eq!(sym_poly(SymKind::Elementary, k, &xs), e, "e_{k}");
        }
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling(StirlingKind::First, 3, 2), rat(3));
        assert_eq!(stirling(StirlingKind::Second, 4, 2), rat(7));
        assert_eq!(stirling(StirlingKind::First, 2, 5), rat(0));
        assert_eq!(stirling(StirlingKind::Second, 0, 0), rat(1));
        assert_eq!(stirling(StirlingKind::First, 5, 0), rat(0));
    }

    #[test]
    fn stirling_first_is_rising_factorial_expansion() {
        // expand T(T+1)…(T+j-1) as integer polynomial
        for j in 0..8usize {
            let mut poly = vec![BigInt::one()];
            for a in 0..j {
                let mut next = vec![BigInt::zero(); poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] += c * BigInt::from(a);
                }
                poly = next;
            }
            for (t, c) in poly.iter().enumerate() {
                assert_eq!(stirling(StirlingKind::First, j, t), BigRational::from_integer(c.clone()));
            }
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_int(2, 3), ExtendedRational::Finite(rat(60)));
        assert_eq!(pochhammer_int(-2, 3), ExtendedRational::Finite(rat(0)));
        assert_eq!(pochhammer_int(3, -2), ExtendedRational::Finite(ratio(1, 6)));
        assert_eq!(pochhammer_int(0, -1), ExtendedRational::Infinite);
        assert_eq!(pochhammer_int(0, -1).recip(), ExtendedRational::Finite(rat(0)));
        assert_eq!(pochhammer_int(7, 0), ExtendedRational::Finite(rat(1)));
    }

    #[test]
    fn pochhammer_vanishing_ranges() {
        // (x+1)_n = 0 for integers -n ≤ x ≤ -1 (n > 0)
        for n in 1..6i64 {
            for x in -n..=-1 {
                assert_eq!(pochhammer_int(x, n), ExtendedRational::Finite(rat(0)));
            }
        }
        // 1/(x+1)_n = 0 for integers 0 ≤ x ≤ -(n+1) (n < 0)
        for n in -6..0i64 {
            for x in 0..=(-(n + 1)) {
                assert!(pochhammer_int(x, n).is_infinite(), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn binomial_generalised() {
        assert_eq!(binomial(5, 2), rat(10));
        assert_eq!(binomial(-1, 0), rat(1));
        assert_eq!(binomial(-1, 3), rat(-1));
        assert_eq!(binomial(3, 5), rat(0));
        assert_eq!(binomial(3, -1), rat(0));
    }
}
