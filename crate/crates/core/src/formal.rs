//! Sparse formal linear combinations with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_q, parse_q, Q};

/// A basis element of one of the observable algebras.
pub trait Basis: Ord + Clone + Display + FromStr {
    /// Grading degree: vertex count, permutation length or partition size.
    fn degree(&self) -> usize;
    /// Product in the algebra, expanded on the basis.
    fn product(&self, other: &Self) -> FormalSum<Self>;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K) -> Self {
        Self::term(key, Q::one())
    }

    pub fn term(key: K, coeff: Q) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    pub fn add_term(&mut self, key: K, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &Q) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn coeff(&self, key: &K) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_coefficient(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, c| a + c)
    }

    pub fn map_keys<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> FormalSum<L> {
        let mut out = FormalSum::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Linear extension of a scalar evaluation.
    pub fn evaluate<E>(&self, mut f: impl FnMut(&K) -> std::result::Result<Q, E>) -> std::result::Result<Q, E> {
        let mut acc = Q::zero();
        for (k, c) in &self.terms {
            acc += c * f(k)?;
        }
        Ok(acc)
    }
}

impl<K: Basis> FormalSum<K> {
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_scaled(&a.product(b), &(ca * cb));
            }
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Basis::degree).max().unwrap_or(0)
    }

    /// Restriction to basis elements of degree `d`.
    pub fn homogeneous(&self, d: usize) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            if k.degree() == d {
                out.add_term(k.clone(), c.clone());
            }
        }
        out
    }
}

impl<K: Ord + Clone> Add for &FormalSum<K> {
    type Output = FormalSum<K>;
    fn add(self, rhs: Self) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl<K: Ord + Clone> Sub for &FormalSum<K> {
    type Output = FormalSum<K>;
    fn sub(self, rhs: Self) -> FormalSum<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl<K: Ord + Clone> Neg for &FormalSum<K> {
    type Output = FormalSum<K>;
    fn neg(self) -> FormalSum<K> {
        self.scale(&-Q::one())
    }
}

impl<K: Ord + Clone + Display> Display for FormalSum<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})[{k}]")?;
        }
        Ok(())
    }
}

impl<K: Ord + Clone + Display> Serialize for FormalSum<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(k, c)| (k.to_string(), format_q(c)))
            .collect();
        m.serialize(s)
    }
}

impl<'de, K> Deserialize<'de> for FormalSum<K>
where
    K: Ord + Clone + FromStr,
    K::Err: Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = FormalSum::zero();
        for (k, c) in m {
            let key = k.parse::<K>().map_err(D::Error::custom)?;
            let coeff = parse_q(&c).map_err(D::Error::custom)?;
            out.add_term(key, coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut s = FormalSum::single(3u32);
        s.add_term(3, q(-1, 1));
        assert!(s.is_empty());
        s.add_term(1, q(0, 1));
        assert!(s.is_empty());
    }

    #[test]
    fn linear_ops() {
        let a = FormalSum::term(1u32, q(1, 2));
        let b = FormalSum::term(2u32, q(1, 3));
        let c = &(&a + &b) - &a;
        assert_eq!(c, b);
        assert_eq!((&a + &b).total_coefficient(), q(5, 6));
        assert_eq!((-&a).coeff(&1), q(-1, 2));
    }
}
