use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::{factorial, rat, BigRational, TruncatedSeries};
use crate::{Error, Result};

/// The four elementary series every operator formula is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementaryFn {
    /// `ζ(z) = e^{z/2} - e^{-z/2}`
    Zeta,
    /// `S(z) = ζ(z)/z`
    S,
    InvZeta,
    InvS,
}

impl FromStr for ElementaryFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta" => Ok(ElementaryFn::Zeta),
            "S" => Ok(ElementaryFn::S),
            "inv_zeta" => Ok(ElementaryFn::InvZeta),
            "inv_S" => Ok(ElementaryFn::InvS),
            other => Err(Error::Invalid(format!("unknown elementary function `{other}`"))),
        }
    }
}

impl fmt::Display for ElementaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementaryFn::Zeta => "zeta",
            ElementaryFn::S => "S",
            ElementaryFn::InvZeta => "inv_zeta",
            ElementaryFn::InvS => "inv_S",
        })
    }
}

/// `[z^{2j}] S(z) = 1/(4^j (2j+1)!)`
fn s_coefficient(j: i64) -> BigRational {
    let four_j = num_traits::pow::pow(num_bigint::BigInt::from(4), j as usize);
    BigRational::new(num_bigint::BigInt::one(), four_j * factorial(2 * j as u64 + 1))
}

/// Expansion of `name` in `var`, exact for all exponents below `order`.
pub fn elementary_series(name: ElementaryFn, var: &str, order: i64) -> TruncatedSeries {
    let s_terms = |n: i64| (0..).map(|j| (2 * j, s_coefficient(j))).take_while(move |(k, _)| *k < n);
    let build = |terms: Vec<(i64, BigRational)>| -> TruncatedSeries {
        TruncatedSeries::univariate(var, order, terms).expect("elementary terms lie within the floor")
    };
    match name {
        ElementaryFn::S => build(s_terms(order).collect::<Vec<_>>()),
        ElementaryFn::Zeta => build(s_terms(order - 1).map(|(k, c)| (k + 1, c)).collect()),
        ElementaryFn::InvS => {
            let s = build(s_terms(order).collect::<Vec<_>>());
            s.inverse().expect("S has constant term 1")
        }
        ElementaryFn::InvZeta => {
            // 1/ζ = z⁻¹·(1/S); 1/S is needed below order + 1
            let s = TruncatedSeries::univariate(var, order + 1, s_terms(order + 1).collect::<Vec<_>>())
                .expect("S is a power series");
            s.inverse().expect("S has constant term 1").shift(&[-1]).expect("simple pole is allowed")
        }
    }
}

/// Compositional inverse `t(x)` of `s(z) = c₁z + O(z²)` by Lagrange inversion,
/// exact below `min(order, s.order)`.
pub fn series_reversion(s: &TruncatedSeries, order: i64) -> Result<TruncatedSeries> {
    if s.nvars() != 1 {
        return Err(Error::Invalid("reversion needs a univariate series".into()));
    }
    if s.valuation(0) != 1 {
        return Err(Error::NotInvertible("series must start with a nonzero linear term".into()));
    }
    let n_max = order.min(s.order()[0]);
    // [xⁿ] t = (1/n) [z^{n-1}] (z/s)ⁿ
    let q = s.shift(&[-1])?.inverse()?;
    let mut terms = Vec::new();
    let mut power = TruncatedSeries::one(s.vars(), q.order());
    for n in 1..n_max {
        power = power.mul(&q)?;
        let c = power.coeff1(n - 1)?;
        if !c.is_zero() {
            terms.push((n, c / rat(n)));
        }
    }
    TruncatedSeries::univariate(&s.vars()[0], n_max, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ratio;

    #[test]
    fn zeta_and_s_expansions() {
        let z = elementary_series(ElementaryFn::Zeta, "z", 6);
        let expected =
            TruncatedSeries::univariate("z", 6, [(1, rat(1)), (3, ratio(1, 24)), (5, ratio(1, 1920))]).unwrap();
        assert_eq!(z, expected);
        let s = elementary_series(ElementaryFn::S, "z", 5);
        let expected =
            TruncatedSeries::univariate("z", 5, [(0, rat(1)), (2, ratio(1, 24)), (4, ratio(1, 1920))]).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn inverse_zeta_has_simple_pole() {
        let iz = elementary_series(ElementaryFn::InvZeta, "z", 4);
        assert_eq!(iz.valuation(0), -1);
        assert_eq!(iz.coeff1(-1).unwrap(), rat(1));
        assert_eq!(iz.coeff1(1).unwrap(), ratio(-1, 24));
        assert_eq!(iz.coeff1(3).unwrap(), ratio(7, 5760));
        assert!(iz.coeff1(4).is_err());
    }

    #[test]
    fn inverses_multiply_to_one() {
        for f in [ElementaryFn::Zeta, ElementaryFn::S] {
            let a = elementary_series(f, "z", 9);
            let inv = elementary_series(
                if f == ElementaryFn::Zeta { ElementaryFn::InvZeta } else { ElementaryFn::InvS },
                "z",
                9,
            );
            let p = a.mul(&inv).unwrap();
            assert_eq!(p, TruncatedSeries::one(&["z"], p.order()), "{f}");
        }
    }

    #[test]
    fn names_roundtrip() {
        for f in [ElementaryFn::Zeta, ElementaryFn::S, ElementaryFn::InvZeta, ElementaryFn::InvS] {
            assert_eq!(f.to_string().parse::<ElementaryFn>().unwrap(), f);
        }
        assert!("cosh".parse::<ElementaryFn>().is_err());
    }

    #[test]
    fn reversion_examples() {
        let id = TruncatedSeries::univariate("z", 6, [(1, rat(1))]).unwrap();
        assert_eq!(series_reversion(&id, 6).unwrap(), id);
        // Catalan numbers
        let s = TruncatedSeries::univariate("z", 5, [(1, rat(1)), (2, rat(-1))]).unwrap();
        let t = series_reversion(&s, 5).unwrap();
        let got: Vec<_> = (1..5).map(|k| t.coeff1(k).unwrap()).collect();
        assert_eq!(got, vec![rat(1), rat(1), rat(2), rat(5)]);
        let s = TruncatedSeries::univariate("z", 6, [(1, rat(1)), (3, rat(-1))]).unwrap();
        let t = series_reversion(&s, 6).unwrap();
        assert_eq!(t.coeff1(3).unwrap(), rat(1));
        assert_eq!(t.coeff1(5).unwrap(), rat(3));
        assert_eq!(t.coeff1(4).unwrap(), rat(0));
    }

    #[test]
    fn reversion_rejects_missing_linear_term() {
        let s = TruncatedSeries::univariate("z", 6, [(2, rat(1))]).unwrap();
        assert!(series_reversion(&s, 6).is_err());
        let s = TruncatedSeries::univariate("z", 6, [(0, rat(1)), (1, rat(1))]).unwrap();
        assert!(series_reversion(&s, 6).is_err());
    }
}
