use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Junction3;
use crate::error::{check_index, invalid};
use crate::formal::{Basis, FormalSum};
use crate::{Error, Result};

/// Finite simple graph on vertices `1..=k`.
///
/// Edges are stored 0-based as sorted pairs `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    k: usize,
    edges: Vec<(usize, usize)>,
}

pub const CANONICAL_CAP: usize = 10;

impl Graph {
    /// Builds a graph from 1-based edge endpoints.
    pub fn new(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut e = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            check_index("vertex", a, k)?;
            check_index("vertex", b, k)?;
            if a == b {
                return invalid(format!("loop at vertex {a}"));
            }
            e.push((a.min(b) - 1, a.max(b) - 1));
        }
        e.sort_unstable();
        let before = e.len();
        e.dedup();
        if e.len() != before {
            return invalid("repeated edge");
        }
        Ok(Self { k, edges: e })
    }

    fn from_raw(k: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Self { k, edges }
    }

    pub fn empty(k: usize) -> Self {
        Self { k, edges: vec![] }
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        Self { k, edges }
    }

    pub fn path(k: usize) -> Self {
        Self {
            k,
            edges: (1..k).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 1-based edge list.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a + 1, b + 1))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == 0 || b == 0 || a == b {
            return false;
        }
        let e = (a.min(b) - 1, a.max(b) - 1);
        self.edges.binary_search(&e).is_ok()
    }

    /// Degrees indexed by 0-based vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.k];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Vertex sets (0-based) of the connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.k {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().push(v);
        }
        comps.into_values().collect()
    }

    /// Induced subgraph on the given 0-based vertices, relabeled in order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.k];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a], pos[b]))
            .collect();
        Graph::from_raw(vertices.len(), edges)
    }

    /// Quotient by a vertex map `v -> class` (classes `0..m`); edges inside a
    /// class are rejected with `None`, parallel edges merge.
    pub fn quotient(&self, class: &[usize], m: usize) -> Option<Graph> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            if class[a] == class[b] {
                return None;
            }
            edges.push((class[a], class[b]));
        }
        Some(Graph::from_raw(m, edges))
    }

    pub fn to_bits(&self) -> AdjacencyBits {
        AdjacencyBits::from_graph(self)
    }

    /// F ⊔ G, with the vertices of G shifted by |F|.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let s = self.k;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + s, b + s)));
        Graph::from_raw(self.k + other.k, edges)
    }

    /// (F ⋈ G)(a, b): vertex `a` of F identified with vertex `b` of G.
    pub fn junction2(&self, other: &Graph, a: usize, b: usize) -> Result<Graph> {
        check_index("vertex", a, self.k)?;
        check_index("vertex", b, other.k)?;
        Ok(glue(&[self, other], &[((0, a - 1), (1, b - 1))]))
    }

    pub fn junction3(&self, g: &Graph, h: &Graph, mode: Junction3) -> Result<Graph> {
        match mode {
            Junction3::Point(a, b, c) => {
                check_index("vertex", a, self.k)?;
                check_index("vertex", b, g.k)?;
                check_index("vertex", c, h.k)?;
                Ok(glue(
                    &[self, g, h],
                    &[((0, a - 1), (1, b - 1)), ((1, b - 1), (2, c - 1))],
                ))
            }
            Junction3::Pair(a, b, c, d) => {
                check_index("vertex", a, self.k)?;
                check_index("vertex", b, g.k)?;
                check_index("vertex", c, g.k)?;
                check_index("vertex", d, h.k)?;
                if b == c {
                    return invalid("pair junction needs b ≠ c");
                }
                Ok(glue(
                    &[self, g, h],
                    &[((0, a - 1), (1, b - 1)), ((1, c - 1), (2, d - 1))],
                ))
            }
        }
    }

    /// Representative of the isomorphism class: among all relabelings, the one
    /// whose adjacency bits read in colex pair order (12, 13, 23, 14, …) form
    /// the lexicographically largest string, i.e. the lexicographically
    /// smallest edge list under colex edge order.
    pub fn canonical(&self) -> Result<Graph> {
        if self.k > CANONICAL_CAP {
            return Err(Error::SizeCap {
                what: "canonicalized graph order",
                value: self.k,
                cap: CANONICAL_CAP,
            });
        }
        let m = self.edge_count();
        let full = self.k * self.k.saturating_sub(1) / 2;
        if m == 0 || m == full {
            return Ok(self.clone());
        }
        let mut adj = vec![0u16; self.k];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let mut search = Canon {
            k: self.k,
            adj,
            order: Vec::with_capacity(self.k),
            cols: Vec::with_capacity(self.k),
            best: None,
        };
        search.run(0);
        let best = search.best.expect("at least one labeling");
        let mut edges = Vec::with_capacity(m);
        for (pos, &col) in best.iter().enumerate() {
            for j in 0..pos {
                if col >> (pos - 1 - j) & 1 == 1 {
                    edges.push((j, pos));
                }
            }
        }
        Ok(Graph::from_raw(self.k, edges))
    }

    pub fn is_isomorphic(&self, other: &Graph) -> Result<bool> {
        if self.k != other.k || self.edge_count() != other.edge_count() {
            return Ok(false);
        }
        Ok(self.canonical()? == other.canonical()?)
    }
}

/// Disjoint union of `parts` followed by the given vertex identifications;
/// surviving vertices are numbered in order of first appearance.
fn glue(parts: &[&Graph], ident: &[((usize, usize), (usize, usize))]) -> Graph {
    let mut offset = Vec::with_capacity(parts.len());
    let mut total = 0;
    for p in parts {
        offset.push(total);
        total += p.k;
    }
    let mut rep: Vec<usize> = (0..total).collect();
    let root = |rep: &Vec<usize>, mut x: usize| {
        while rep[x] != x {
            x = rep[x];
        }
        x
    };
    for &((p, v), (q, w)) in ident {
        let a = root(&rep, offset[p] + v);
        let b = root(&rep, offset[q] + w);
        if a != b {
            rep[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; total];
    let mut next = 0;
    for v in 0..total {
        let r = root(&rep, v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        label[v] = label[r];
    }
    let mut edges = Vec::new();
    for (p, g) in parts.iter().enumerate() {
        for &(a, b) in &g.edges {
            edges.push((label[offset[p] + a], label[offset[p] + b]));
        }
    }
    Graph::from_raw(next, edges)
}

struct Canon {
    k: usize,
    adj: Vec<u16>,
    order: Vec<usize>,
    cols: Vec<u16>,
    best: Option<Vec<u16>>,
}

impl Canon {
    fn run(&mut self, pos: usize) {
        if pos == self.k {
            let better = match &self.best {
                None => true,
                Some(b) => self.cols.as_slice() > b.as_slice(),
            };
            if better {
                self.best = Some(self.cols.clone());
            }
            return;
        }
        for v in 0..self.k {
            if self.order.contains(&v) {
                continue;
            }
            let mut col = 0u16;
            for (j, &u) in self.order.iter().enumerate() {
                if self.adj[v] >> u & 1 == 1 {
                    col |= 1 << (pos - 1 - j);
                }
            }
            self.cols.push(col);
            // prune branches whose prefix already loses to the best labeling
            let losing = self
                .best
                .as_ref()
                .is_some_and(|b| self.cols.as_slice() < &b[..=pos]);
            if !losing {
                self.order.push(v);
                self.run(pos + 1);
                self.order.pop();
            }
            self.cols.pop();
        }
    }
}

impl Basis for Graph {
    fn degree(&self) -> usize {
        self.k
    }

    fn product(&self, other: &Self) -> FormalSum<Self> {
        let u = self.disjoint_union(other);
        FormalSum::single(u.canonical().unwrap_or(u))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};", self.k)?;
        for (i, (a, b)) in self.edges().enumerate() {
            write!(f, "{}{a}-{b}", if i == 0 { " " } else { "," })?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad graph {s:?}, expected \"k=5; 1-2,2-3\""));
        let (head, tail) = s.split_once(';').unwrap_or((s, ""));
        let k: usize = head
            .trim()
            .strip_prefix("k=")
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let mut edges = Vec::new();
        for tok in tail.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = tok.split_once('-').ok_or_else(bad)?;
            edges.push((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ));
        }
        Graph::new(k, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Adjacency rows as bitsets, for fast counting in large host graphs.
#[derive(Clone, Debug)]
pub struct AdjacencyBits {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl AdjacencyBits {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut b = Self::new(g.k);
        for &(i, j) in &g.edges {
            b.set_edge(i, j);
        }
        b
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// 0-based endpoints; `i ≠ j`.
    pub fn set_edge(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.row(i).iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.n).map(|i| self.degree(i)).sum::<u64>() / 2
    }

    /// Number of triangles (unordered vertex triples).
    pub fn triangles(&self) -> u64 {
        let mut t = 0u64;
        for i in 0..self.n {
            let ri = self.row(i);
            for j in i + 1..self.n {
                if !self.has_edge(i, j) {
                    continue;
                }
                let rj = self.row(j);
                // common neighbours above j
                let start = (j + 1) / 64;
                for w in start..self.words {
                    let mut x = ri[w] & rj[w];
                    if w == start {
                        let sh = (j + 1) % 64;
                        x &= if sh == 0 { !0 } else { !0u64 << sh };
                    }
                    t += x.count_ones() as u64;
                }
            }
        }
        t
    }

    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Graph { k: self.n, edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::complete(3)
    }

    #[test]
    fn parse_roundtrip() {
        let g: Graph = "k=5; 1-2,2-3".parse().unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.to_string(), "k=5; 1-2,2-3");
        assert_eq!("k=0;".parse::<Graph>().unwrap(), Graph::empty(0));
        assert!("k=2; 1-1".parse::<Graph>().is_err());
        assert!("k=2; 1-3".parse::<Graph>().is_err());
        assert!("k=3; 1-2,2-1".parse::<Graph>().is_err());
    }

    #[test]
    fn union_shifts() {
        let k2 = Graph::complete(2);
        let u = k2.disjoint_union(&k2);
        assert_eq!(u, Graph::new(4, &[(1, 2), (3, 4)]).unwrap());
        assert_eq!(k3().disjoint_union(&Graph::empty(0)), k3());
        let kk = k3().disjoint_union(&k3());
        assert_eq!((kk.order(), kk.edge_count()), (6, 6));
    }

    #[test]
    fn junctions() {
        let k2 = Graph::complete(2);
        let p = k2.junction2(&k2, 1, 1).unwrap();
        assert!(p.is_isomorphic(&Graph::path(3)).unwrap());
        let bow = k3().junction2(&k3(), 1, 1).unwrap();
        assert_eq!((bow.order(), bow.edge_count()), (5, 6));
        assert_eq!(*bow.degrees().iter().max().unwrap(), 4);
        let one = Graph::empty(1);
        assert_eq!(k3().junction2(&one, 2, 1).unwrap(), k3());
        assert!(k3().junction2(&k3(), 4, 1).is_err());

        let star = k2
            .junction3(&k2, &k2, Junction3::Point(1, 1, 1))
            .unwrap()
            .canonical()
            .unwrap();
        let s3 = Graph::new(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(star, s3.canonical().unwrap());
        let i = k3().junction3(&k3(), &k3(), Junction3::Point(1, 2, 3)).unwrap();
        assert_eq!((i.order(), *i.degrees().iter().max().unwrap()), (7, 6));
        let j = k3()
            .junction3(&k3(), &k3(), Junction3::Pair(1, 1, 2, 3))
            .unwrap();
        let mut d = j.degrees();
        d.sort();
        assert_eq!(d, vec![2, 2, 2, 2, 2, 4, 4]);
        assert!(k3()
            .junction3(&k3(), &k3(), Junction3::Pair(1, 2, 2, 3))
            .is_err());
    }

    #[test]
    fn canonical_forms() {
        let a = Graph::new(3, &[(1, 2), (2, 3)]).unwrap();
        let b = Graph::new(3, &[(1, 3), (3, 2)]).unwrap();
        assert_eq!(a.canonical().unwrap(), b.canonical().unwrap());
        let c = a.canonical().unwrap();
        assert_eq!(c.canonical().unwrap(), c);
        let mut bows = std::collections::BTreeSet::new();
        for x in 1..=3 {
            for y in 1..=3 {
                bows.insert(k3().junction2(&k3(), x, y).unwrap().canonical().unwrap());
            }
        }
        assert_eq!(bows.len(), 1);
        assert!(Graph::empty(11).canonical().is_err());
    }

    #[test]
    fn bits_counts() {
        let g = Graph::complete(5);
        let b = g.to_bits();
        assert_eq!(b.triangles(), 10);
        assert_eq!(b.edge_count(), 10);
        assert_eq!(b.to_graph(), g);
        let mut big = AdjacencyBits::new(130);
        big.set_edge(0, 65);
        big.set_edge(65, 129);
        big.set_edge(0, 129);
        assert_eq!(big.triangles(), 1);
    }
}
