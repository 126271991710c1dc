use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::Junction3;
use crate::error::{check_index, invalid};
use crate::formal::{Basis, FormalSum};
use crate::rational::{factorial, q, Q};
use crate::{Error, Result};

/// Integer partition with weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

pub const DIMENSION_CAP: usize = 30;

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return invalid("partition parts must be positive");
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("parts {parts:?} are not weakly decreasing"));
        }
        Ok(Self { parts })
    }

    /// Sorts the parts; zeros are rejected.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Self { parts: vec![] }
    }

    /// (1^k)
    pub fn ones(k: usize) -> Self {
        Self { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// λ_i for 1-based `i`.
    pub fn part(&self, i: usize) -> usize {
        self.parts[i - 1]
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

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Length of the main diagonal.
    pub fn diagonal(&self) -> usize {
        self.parts
            .iter()
            .enumerate()
            .take_while(|(i, &p)| p > *i)
            .count()
    }

    /// a_i = λ_i − i + 1/2 and b_i = λ′_i − i + 1/2 for i ≤ d.
    pub fn frobenius_coords(&self) -> (Vec<Q>, Vec<Q>) {
        let d = self.diagonal();
        let conj = self.conjugate();
        let half = q(1, 2);
        let a = (0..d)
            .map(|i| Q::from_integer(BigInt::from(self.parts[i]) - BigInt::from(i + 1)) + &half)
            .collect();
        let b = (0..d)
            .map(|i| Q::from_integer(BigInt::from(conj.parts[i]) - BigInt::from(i + 1)) + &half)
            .collect();
        (a, b)
    }

    /// Multiset union of parts (the product of the algebra of partitions).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    fn without(&self, idx: &[usize]) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .filter(|(i, _)| !idx.contains(&(i + 1)))
            .map(|(_, &p)| p)
            .collect()
    }

    /// (ρ⋈μ)(a,b): parts ρ_a and μ_b replaced by the single part ρ_a+μ_b−1.
    pub fn join2(&self, other: &Partition, a: usize, b: usize) -> Result<Partition> {
        check_index("part", a, self.len())?;
        check_index("part", b, other.len())?;
        let mut parts = self.without(&[a]);
        parts.extend(other.without(&[b]));
        parts.push(self.part(a) + other.part(b) - 1);
        Partition::from_unsorted(parts)
    }

    pub fn join3(&self, mu: &Partition, nu: &Partition, mode: Junction3) -> Result<Partition> {
        match mode {
            Junction3::Point(a, b, c) => {
                check_index("part", a, self.len())?;
                check_index("part", b, mu.len())?;
                check_index("part", c, nu.len())?;
                let mut parts = self.without(&[a]);
                parts.extend(mu.without(&[b]));
                parts.extend(nu.without(&[c]));
                parts.push(self.part(a) + mu.part(b) + nu.part(c) - 2);
                Partition::from_unsorted(parts)
            }
            Junction3::Pair(a, b, c, d) => {
                check_index("part", a, self.len())?;
                check_index("part", b, mu.len())?;
                check_index("part", c, mu.len())?;
                check_index("part", d, nu.len())?;
                if b == c {
                    return invalid("pair join needs b ≠ c");
                }
                let mut parts = self.without(&[a]);
                parts.extend(mu.without(&[b, c]));
                parts.extend(nu.without(&[d]));
                parts.push(self.part(a) + mu.part(b) - 1);
                parts.push(mu.part(c) + nu.part(d) - 1);
                Partition::from_unsorted(parts)
            }
        }
    }

    /// Number of standard Young tableaux, by the hook-length formula.
    pub fn hook_dimension(&self) -> Result<BigInt> {
        let n = self.size();
        if n > DIMENSION_CAP {
            return Err(Error::SizeCap {
                what: "partition size for dimension",
                value: n,
                cap: DIMENSION_CAP,
            });
        }
        let conj = self.conjugate();
        let mut hooks = BigInt::from(1);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                hooks *= BigInt::from(row - j + conj.parts[j] - i - 1);
            }
        }
        Ok(factorial(n) / hooks)
    }
}

/// All partitions of n, in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

impl Basis for Partition {
    fn degree(&self) -> usize {
        self.size()
    }

    fn product(&self, other: &Self) -> FormalSum<Self> {
        FormalSum::single(self.union(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            write!(f, "()")
        } else {
            write!(f, "{}", self.parts.iter().join(","))
        }
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        if s.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
