use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::Junction3;
use crate::error::{check_index, invalid};
use crate::formal::{Basis, FormalSum};
use crate::rational::{binomial, factorial, Q};
use crate::{Error, Result};

/// Permutation of `1..=k` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

/// Largest pattern size for occurrence counting and two-way amalgamation.
pub const PATTERN_CAP: usize = 8;
/// Largest pattern size for three-way amalgamation (σ of size 3k−2 ≤ 7).
pub const AMALGAM3_CAP: usize = 3;

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let k = values.len();
        let mut seen = vec![false; k];
        for &v in &values {
            if v == 0 || v > k || seen[v - 1] {
                return invalid(format!("{values:?} is not a permutation of 1..={k}"));
            }
            seen[v - 1] = true;
        }
        Ok(Self { values })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            values: (1..=k).collect(),
        }
    }

    /// The pattern (relative order) of a sequence of distinct keys.
    pub fn standardize<T: Ord>(seq: &[T]) -> Self {
        let mut idx: Vec<usize> = (0..seq.len()).collect();
        idx.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
        let mut values = vec![0; seq.len()];
        for (rank, &i) in idx.iter().enumerate() {
            values[i] = rank + 1;
        }
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// σ(i) for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { values: inv }
    }

    /// Points (i, σ(i)) of the diagram.
    pub fn diagram(&self) -> Vec<(usize, usize)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i + 1, v))
            .collect()
    }

    pub fn inversions(&self) -> u64 {
        let mut inv = 0u64;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                inv += (self.values[i] > self.values[j]) as u64;
            }
        }
        inv
    }

    /// Pattern induced on the given increasing 0-based positions.
    pub fn pattern_at(&self, positions: &[usize]) -> Permutation {
        let vals: Vec<usize> = positions.iter().map(|&p| self.values[p]).collect();
        Permutation::standardize(&vals)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "()");
        }
        if self.len() <= 9 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.values.iter().join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(s);
        if s.is_empty() || s == "()" {
            return Ok(Self::identity(0));
        }
        let bad = || Error::Parse(format!("bad permutation {s:?}"));
        let values: Vec<usize> = if s.contains(',') || s.contains(' ') {
            s.split([',', ' '])
                .filter(|t| !t.is_empty())
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl Basis for Permutation {
    fn degree(&self) -> usize {
        self.len()
    }

    fn product(&self, other: &Self) -> FormalSum<Self> {
        graphical_shuffle(self, other)
    }
}

fn check_subset(s: &[usize], size: usize, n: usize) -> Result<Vec<usize>> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != size || s.len() != size {
        return invalid(format!("expected {size} distinct indices, got {s:?}"));
    }
    for &x in &v {
        check_index("position", x, n)?;
    }
    Ok(v)
}

/// The (A,B)-shuffle: the unique ρ of size m+n with ρ(A) = B, pattern σ on A
/// and pattern τ on the complement. A and B are 1-based m-subsets.
pub fn ab_shuffle(sigma: &Permutation, tau: &Permutation, a: &[usize], b: &[usize]) -> Result<Permutation> {
    let (m, n) = (sigma.len(), tau.len());
    let a = check_subset(a, m, m + n)?;
    let b = check_subset(b, m, m + n)?;
    let ac: Vec<usize> = (1..=m + n).filter(|x| a.binary_search(x).is_err()).collect();
    let bc: Vec<usize> = (1..=m + n).filter(|x| b.binary_search(x).is_err()).collect();
    let mut rho = vec![0; m + n];
    for (i, &pos) in a.iter().enumerate() {
        rho[pos - 1] = b[sigma.values[i] - 1];
    }
    for (j, &pos) in ac.iter().enumerate() {
        rho[pos - 1] = bc[tau.values[j] - 1];
    }
    Ok(Permutation { values: rho })
}

/// σ × τ = (m!n!/(m+n)!) Σ over all pairs (A,B) of the (A,B)-shuffles.
pub fn graphical_shuffle(sigma: &Permutation, tau: &Permutation) -> FormalSum<Permutation> {
    let (m, n) = (sigma.len(), tau.len());
    let coeff = Q::new(factorial(m) * factorial(n), factorial(m + n));
    let subsets: Vec<Vec<usize>> = (1..=m + n).combinations(m).collect();
    let mut counts: BTreeMap<Permutation, u64> = BTreeMap::new();
    for a in &subsets {
        for b in &subsets {
            let rho = ab_shuffle(sigma, tau, a, b).expect("valid subsets");
            *counts.entry(rho).or_default() += 1;
        }
    }
    scaled(counts, &coeff)
}

fn scaled(counts: BTreeMap<Permutation, u64>, coeff: &Q) -> FormalSum<Permutation> {
    let mut out = FormalSum::zero();
    for (p, c) in counts {
        out.add_term(p, coeff * Q::from_integer(BigInt::from(c)));
    }
    out
}

/// Abstract points of several patterns glued at some of their points.
/// Each pattern contributes a chain in x (index order) and a chain in y
/// (value order); every pair of linear extensions yields one permutation.
struct Glued {
    npoints: usize,
    xs: Vec<(usize, usize)>,
    ys: Vec<(usize, usize)>,
}

impl Glued {
    /// `ident`: pairs ((pattern, index0), (pattern, index0)) to identify.
    fn new(patterns: &[&Permutation], ident: &[((usize, usize), (usize, usize))]) -> Self {
        let mut id: Vec<Vec<usize>> = Vec::new();
        let mut next = 0;
        for p in patterns {
            id.push((next..next + p.len()).collect());
            next += p.len();
        }
        let mut rep: Vec<usize> = (0..next).collect();
        let root = |rep: &Vec<usize>, mut x: usize| {
            while rep[x] != x {
                x = rep[x];
            }
            x
        };
        for &((p, i), (q, j)) in ident {
            let (a, b) = (root(&rep, id[p][i]), root(&rep, id[q][j]));
            if a != b {
                rep[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; next];
        let mut count = 0;
        for v in 0..next {
            let r = root(&rep, v);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            label[v] = label[r];
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (p, pat) in patterns.iter().enumerate() {
            let g: Vec<usize> = id[p].iter().map(|&v| label[v]).collect();
            let inv = pat.inverse();
            for i in 1..pat.len() {
                xs.push((g[i - 1], g[i]));
                ys.push((g[inv.values[i - 1] - 1], g[inv.values[i] - 1]));
            }
        }
        Self {
            npoints: count,
            xs,
            ys,
        }
    }

    fn multiset(&self) -> BTreeMap<Permutation, u64> {
        let xe = linear_extensions(self.npoints, &self.xs);
        let ye = linear_extensions(self.npoints, &self.ys);
        let yrank: Vec<Vec<usize>> = ye
            .iter()
            .map(|order| {
                let mut r = vec![0; self.npoints];
                for (rank, &p) in order.iter().enumerate() {
                    r[p] = rank + 1;
                }
                r
            })
            .collect();
        let mut counts = BTreeMap::new();
        let mut vals = vec![0; self.npoints];
        for order in &xe {
            for r in &yrank {
                for (i, &p) in order.iter().enumerate() {
                    vals[i] = r[p];
                }
                *counts
                    .entry(Permutation {
                        values: vals.clone(),
                    })
                    .or_insert(0) += 1;
            }
        }
        counts
    }
}

fn linear_extensions(n: usize, before: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut preds = vec![0u32; n];
    for &(a, b) in before {
        preds[b] |= 1 << a;
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, preds: &[u32], placed: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if placed >> v & 1 == 0 && preds[v] & !placed == 0 {
                cur.push(v);
                rec(n, preds, placed | 1 << v, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &preds, 0, &mut cur, &mut out);
    out
}

fn same_size(a: &Permutation, b: &Permutation) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.len())
}

/// The multiset (τ⊠ρ)(a,b) as permutation → multiplicity.
pub fn amalgamated_multiset2(tau: &Permutation, rho: &Permutation, a: usize, b: usize) -> Result<BTreeMap<Permutation, u64>> {
    let k = same_size(tau, rho)?;
    if k > PATTERN_CAP {
        return Err(Error::SizeCap {
            what: "pattern size",
            value: k,
            cap: PATTERN_CAP,
        });
    }
    check_index("point", a, k)?;
    check_index("point", b, k)?;
    Ok(Glued::new(&[tau, rho], &[((0, a - 1), (1, b - 1))]).multiset())
}

/// (τ ⋈ ρ)(a,b) = (k!)²/(2k−1)! Σ_{σ ∈ (τ⊠ρ)(a,b)} σ, with multiplicities.
pub fn amalgamated_shuffle2(tau: &Permutation, rho: &Permutation, a: usize, b: usize) -> Result<FormalSum<Permutation>> {
    let counts = amalgamated_multiset2(tau, rho, a, b)?;
    let k = tau.len();
    let coeff = Q::new(factorial(k).pow(2), factorial(2 * k - 1));
    Ok(scaled(counts, &coeff))
}

pub fn amalgamated_multiset3(tau: &Permutation, rho: &Permutation, mu: &Permutation, mode: Junction3) -> Result<BTreeMap<Permutation, u64>> {
    let k = same_size(tau, rho)?;
    same_size(rho, mu)?;
    if k > AMALGAM3_CAP {
        return Err(Error::SizeCap {
            what: "three-way amalgamation pattern size",
            value: k,
            cap: AMALGAM3_CAP,
        });
    }
    let ident = match mode {
        Junction3::Point(a, b, c) => {
            for x in [a, b, c] {
                check_index("point", x, k)?;
            }
            vec![((0, a - 1), (1, b - 1)), ((1, b - 1), (2, c - 1))]
        }
        Junction3::Pair(a, b, c, d) => {
            for x in [a, b, c, d] {
                check_index("point", x, k)?;
            }
            if b == c {
                return invalid("pair amalgamation needs b ≠ c");
            }
            vec![((0, a - 1), (1, b - 1)), ((1, c - 1), (2, d - 1))]
        }
    };
    Ok(Glued::new(&[tau, rho, mu], &ident).multiset())
}

/// Three-way amalgamated shuffle scaled by (k!)³/(3k−2)!.
pub fn amalgamated_shuffle3(tau: &Permutation, rho: &Permutation, mu: &Permutation, mode: Junction3) -> Result<FormalSum<Permutation>> {
    let counts = amalgamated_multiset3(tau, rho, mu, mode)?;
    let k = tau.len();
    let coeff = Q::new(factorial(k).pow(3), factorial(3 * k - 2));
    Ok(scaled(counts, &coeff))
}

/// |(τ⊠ρ)(a,b)| by the four-binomial closed form.
pub fn amalgam_cardinality(tau: &Permutation, rho: &Permutation, a: usize, b: usize) -> Result<BigInt> {
    let k = same_size(tau, rho)?;
    check_index("point", a, k)?;
    check_index("point", b, k)?;
    let (ta, rb) = (tau.at(a), rho.at(b));
    Ok(binomial(a + b - 2, a - 1)
        * binomial(2 * k - a - b, k - a)
        * binomial(ta + rb - 2, ta - 1)
        * binomial(2 * k - ta - rb, k - ta))
}

/// Number of occurrences of the pattern τ in σ.
pub fn occ(tau: &Permutation, sigma: &Permutation) -> Result<u64> {
    let (k, n) = (tau.len(), sigma.len());
    if k > n {
        return invalid(format!("pattern size {k} exceeds permutation size {n}"));
    }
    if k > PATTERN_CAP {
        return Err(Error::SizeCap {
            what: "pattern size",
            value: k,
            cap: PATTERN_CAP,
        });
    }
    match k {
        0 => return Ok(1),
        1 => return Ok(n as u64),
        2 => {
            let inv = sigma.inversions();
            let pairs = (n * (n - 1) / 2) as u64;
            return Ok(if tau.values[0] == 2 { inv } else { pairs - inv });
        }
        3 => return Ok(occ3(&tau.values, &sigma.values)),
        _ => {}
    }
    // positions chosen left to right; the value of each new point must fall in
    // the slot its τ-rank dictates relative to the values already chosen
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut count = 0u64;
    fn rec(tau: &[usize], s: &[usize], start: usize, chosen: &mut Vec<usize>, count: &mut u64) {
        let d = chosen.len();
        if d == tau.len() {
            *count += 1;
            return;
        }
        let need = tau.len() - d;
        for p in start..=s.len() - need {
            let v = s[p];
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, &q)| (tau[j] < tau[d]) == (s[q] < v));
            if ok {
                chosen.push(p);
                rec(tau, s, p + 1, chosen, count);
                chosen.pop();
            }
        }
    }
    rec(&tau.values, &sigma.values, 0, &mut chosen, &mut count);
    Ok(count)
}

/// Size-3 patterns in O(n²): 123 and 321 through their middle point, the
/// others from the pair counts C(R>(i),2), C(L<(k),2), C(R<(i),2), C(L>(k),2).
fn occ3(tau: &[usize], s: &[usize]) -> u64 {
    let n = s.len();
    let c2 = |x: u64| x * x.saturating_sub(1) / 2;
    let (mut p123, mut p321) = (0u64, 0u64);
    let (mut first_low, mut last_high, mut first_high, mut last_low) = (0u64, 0u64, 0u64, 0u64);
    for j in 0..n {
        let (mut ls, mut lg, mut rs, mut rg) = (0u64, 0u64, 0u64, 0u64);
        for i in 0..j {
            if s[i] < s[j] { ls += 1 } else { lg += 1 }
        }
        for i in j + 1..n {
            if s[i] < s[j] { rs += 1 } else { rg += 1 }
        }
        p123 += ls * rg;
        p321 += lg * rs;
        first_low += c2(rg);
        last_high += c2(ls);
        first_high += c2(rs);
        last_low += c2(lg);
    }
    match tau {
        [1, 2, 3] => p123,
        [3, 2, 1] => p321,
        [1, 3, 2] => first_low - p123,
        [2, 1, 3] => last_high - p123,
        [3, 1, 2] => first_high - p321,
        [2, 3, 1] => last_low - p321,
        _ => unreachable!("not a permutation of size 3"),
    }
}

/// Occurrence counts of every pattern of size `b` in σ.
pub fn pattern_counts(sigma: &Permutation, b: usize) -> BTreeMap<Permutation, u64> {
    let mut counts = BTreeMap::new();
    if b > sigma.len() {
        return counts;
    }
    for pos in (0..sigma.len()).combinations(b) {
        *counts.entry(sigma.pattern_at(&pos)).or_insert(0) += 1;
    }
    counts
}

/// Configuration of points in general position: the permutation σ with
/// σ(rank of x_i) = rank of y_i.
pub fn conf<T: PartialOrd>(points: &[(T, T)]) -> Result<Permutation> {
    let n = points.len();
    let mut by_x: Vec<usize> = (0..n).collect();
    let mut by_y: Vec<usize> = (0..n).collect();
    let cmp = |a: &T, b: &T| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal);
    by_x.sort_by(|&i, &j| cmp(&points[i].0, &points[j].0));
    by_y.sort_by(|&i, &j| cmp(&points[i].1, &points[j].1));
    for w in by_x.windows(2) {
        if points[w[0]].0.partial_cmp(&points[w[1]].0) != Some(std::cmp::Ordering::Less) {
            return invalid("tied x-coordinates");
        }
    }
    for w in by_y.windows(2) {
        if points[w[0]].1.partial_cmp(&points[w[1]].1) != Some(std::cmp::Ordering::Less) {
            return invalid("tied y-coordinates");
        }
    }
    let mut yrank = vec![0; n];
    for (r, &i) in by_y.iter().enumerate() {
        yrank[i] = r + 1;
    }
    Ok(Permutation {
        values: by_x.iter().map(|&i| yrank[i]).collect(),
    })
}
