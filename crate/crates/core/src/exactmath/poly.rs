use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::series::rational_pow;
use super::BigRational;

/// Multivariate polynomial over `Q` in canonical form (no zero terms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPolynomial {
    variables: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPolynomial {
    pub fn zero<S: AsRef<str>>(variables: &[S]) -> Self {
        MultiPolynomial {
            variables: variables.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<S: AsRef<str>>(
        variables: &[S],
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(variables);
        for (e, c) in terms {
            assert_eq!(e.len(), p.variables.len(), "exponent arity");
            *p.terms.entry(e).or_insert_with(BigRational::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn coeff(&self, exponent: &[u32]) -> BigRational {
        self.terms.get(exponent).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.variables.len());
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * rational_pow(x, k as i64)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn eval_int(&self, point: &[i64]) -> BigRational {
        let p: Vec<BigRational> = point.iter().map(|&x| super::rat(x)).collect();
        self.eval(&p)
    }
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = self
                .variables
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Serialize for MultiPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<u32>, String)> = self.terms.iter().map(|(e, c)| (e.clone(), c.to_string())).collect();
        let mut st = serializer.serialize_struct("MultiPolynomial", 3)?;
        st.serialize_field("variables", &self.variables)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, ratio};

    #[test]
    fn canonical_and_degree() {
        let p = MultiPolynomial::from_terms(
            &["a", "b"],
            [(vec![1, 0], rat(2)), (vec![1, 0], rat(-2)), (vec![0, 0], rat(3))],
        );
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.total_degree(), Some(0));
        assert_eq!(MultiPolynomial::zero(&["a"]).total_degree(), None);
        let q = MultiPolynomial::from_terms(&["a", "b"], [(vec![2, 1], ratio(1, 2)), (vec![0, 1], rat(1))]);
        assert_eq!(q.total_degree(), Some(3));
        assert_eq!(q.eval_int(&[2, 3]), rat(9));
        assert_eq!(q.to_string(), "(1/2)*a^2*b + b");
    }
}
