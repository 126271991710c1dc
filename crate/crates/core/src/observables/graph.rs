use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::{AdjacencyBits, Graph};
use crate::error::Error;
use crate::models::GraphonSpec;
use crate::rational::{falling, Q};
use crate::Result;

use super::graphon::graphon_density;

/// Largest pattern graph accepted by the counting routines.
pub const HOM_CAP: usize = 8;
/// Largest host graph accepted by the counting routines.
pub const HOST_CAP: usize = 10_000;

fn check_sizes(f: &Graph, n: usize) -> Result<()> {
    if f.order() > HOM_CAP {
        return Err(Error::SizeCap {
            what: "pattern graph order",
            value: f.order(),
            cap: HOM_CAP,
        });
    }
    if n > HOST_CAP {
        return Err(Error::SizeCap {
            what: "host graph order",
            value: n,
            cap: HOST_CAP,
        });
    }
    Ok(())
}

/// Visiting order in which every vertex after the first of a component has an
/// earlier neighbour, with the earlier neighbours of each position.
fn search_order(f: &Graph) -> (Vec<usize>, Vec<Vec<usize>>) {
    let k = f.order();
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    for comp in f.components() {
        let start = *comp.iter().max_by_key(|&&v| f.degrees()[v]).unwrap();
        let mut queue = std::collections::VecDeque::from([start]);
        placed[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in 0..k {
                if !placed[w] && f.has_edge(v + 1, w + 1) {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut pos = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let back = order
        .iter()
        .map(|&v| {
            (0..k)
                .filter(|&w| f.has_edge(v + 1, w + 1) && pos[w] < pos[v])
                .map(|w| pos[w])
                .collect()
        })
        .collect();
    (order, back)
}

fn ones(n: usize, words: usize) -> Vec<u64> {
    let mut m = vec![!0u64; words];
    if n % 64 != 0 {
        m[words - 1] = (1u64 << (n % 64)) - 1;
    }
    if n == 0 {
        m.iter_mut().for_each(|w| *w = 0);
    }
    m
}

fn bits(mask: &[u64]) -> impl Iterator<Item = usize> + '_ {
    mask.iter().enumerate().flat_map(|(w, &x)| {
        let mut x = x;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

fn popcount(mask: &[u64]) -> u128 {
    mask.iter().map(|w| w.count_ones() as u128).sum()
}

/// Backtracking over images; `injective` excludes already used vertices.
fn count_maps(f: &Graph, host: &AdjacencyBits, injective: bool) -> u128 {
    let k = f.order();
    if k == 0 {
        return 1;
    }
    let (_, back) = search_order(f);
    let n = host.order();
    let words = host.words();
    let all = ones(n, words);
    let mut image = vec![0usize; k];
    let mut used = vec![0u64; words];

    #[allow(clippy::too_many_arguments)]
    fn rec(
        d: usize,
        back: &[Vec<usize>],
        host: &AdjacencyBits,
        all: &[u64],
        image: &mut [usize],
        used: &mut [u64],
        injective: bool,
    ) -> u128 {
        let mut cand = all.to_vec();
        for &b in &back[d] {
            for (c, r) in cand.iter_mut().zip(host.row(image[b])) {
                *c &= r;
            }
        }
        if injective {
            for (c, u) in cand.iter_mut().zip(used.iter()) {
                *c &= !u;
            }
        }
        if d + 1 == back.len() {
            return popcount(&cand);
        }
        let mut total = 0u128;
        for v in bits(&cand).collect::<Vec<_>>() {
            image[d] = v;
            used[v / 64] |= 1 << (v % 64);
            total += rec(d + 1, back, host, all, image, used, injective);
            used[v / 64] &= !(1 << (v % 64));
        }
        total
    }
    rec(0, &back, host, &all, &mut image, &mut used, injective)
}

/// hom(T, G) for a tree T by dynamic programming from the leaves.
fn tree_hom(t: &Graph, host: &AdjacencyBits) -> u128 {
    let (order, back) = search_order(t);
    let k = order.len();
    let n = host.order();
    // f[i][v]: homomorphisms of the subtree below position i sending it to v
    let mut f = vec![vec![1u128; n]; k];
    for i in (1..k).rev() {
        let parent = back[i][0];
        let child = std::mem::take(&mut f[i]);
        let mut lifted = vec![0u128; n];
        for (v, slot) in lifted.iter_mut().enumerate() {
            *slot = bits(host.row(v)).map(|w| child[w]).sum();
        }
        for (p, l) in f[parent].iter_mut().zip(lifted) {
            *p *= l;
        }
    }
    f[0].iter().sum()
}

fn component_hom(c: &Graph, host: &AdjacencyBits) -> u128 {
    let k = c.order();
    let e = c.edge_count();
    if k == 1 {
        return host.order() as u128;
    }
    if k == 3 && e == 3 {
        return 6 * host.triangles() as u128;
    }
    if e + 1 == k {
        return tree_hom(c, host);
    }
    count_maps(c, host, false)
}

/// |hom(F, G)|, multiplicative over the components of F.
pub fn hom_count(f: &Graph, host: &AdjacencyBits) -> Result<u128> {
    check_sizes(f, host.order())?;
    Ok(f.components()
        .iter()
        .map(|comp| component_hom(&f.induced(comp), host))
        .product())
}

/// |emb(F, G)|: injective homomorphisms.
pub fn emb_count(f: &Graph, host: &AdjacencyBits) -> Result<u128> {
    check_sizes(f, host.order())?;
    if f.order() > host.order() {
        return Ok(0);
    }
    if f.order() == 3 && f.edge_count() == 3 {
        return Ok(6 * host.triangles() as u128);
    }
    Ok(count_maps(f, host, true))
}

fn ratio(num: u128, den: BigInt) -> Q {
    Q::new(BigInt::from(num), den)
}

/// t(F, G) = |hom(F,G)| / |V_G|^|V_F|.
pub fn hom_density(f: &Graph, g: &Graph) -> Result<Q> {
    hom_density_bits(f, &g.to_bits())
}

pub fn hom_density_bits(f: &Graph, host: &AdjacencyBits) -> Result<Q> {
    let n = host.order();
    if n == 0 {
        return crate::error::invalid("density in the graph with no vertices");
    }
    let c = hom_count(f, host)?;
    Ok(ratio(c, BigInt::from(n).pow(f.order() as u32)))
}

/// t₀(F, G) = |emb(F,G)| / |V_G|↓|V_F|.
pub fn emb_density(f: &Graph, g: &Graph) -> Result<Q> {
    let host = g.to_bits();
    let (n, k) = (g.order(), f.order());
    if k > n {
        return Ok(Q::zero());
    }
    let c = emb_count(f, &host)?;
    Ok(ratio(c, falling(n, k)))
}

/// Set partitions of `0..k` as restricted growth strings.
pub(crate) fn set_partitions(k: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut a = vec![0usize; k];
    fn rec(i: usize, m: usize, a: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
        if i == a.len() {
            out.push((a.clone(), m));
            return;
        }
        for b in 0..=m {
            a[i] = b;
            rec(i + 1, m.max(b + 1), a, out);
        }
    }
    if k == 0 {
        return vec![(vec![], 0)];
    }
    rec(1, 1, &mut a, &mut out);
    out
}

/// E[t(F, G_n(γ))] = Σ_P n↓|P| t(F/P, γ) / n^k over the vertex partitions P
/// of F with no edge inside a block. Exact when every quotient density is.
pub fn expected_hom_density(f: &Graph, spec: &GraphonSpec, n: usize) -> Result<(f64, Option<Q>)> {
    check_sizes(f, n)?;
    let k = f.order();
    let nk = Q::from_integer(BigInt::from(n).pow(k as u32));
    let mut value = 0.0;
    let mut exact = Some(Q::zero());
    for (class, m) in set_partitions(k) {
        if m > n {
            continue;
        }
        let Some(quot) = f.quotient(&class, m) else {
            continue;
        };
        let d = graphon_density(&quot, spec)?;
        let w = Q::from_integer(falling(n, m)) / &nk;
        value += crate::rational::to_f64(&w) * d.value;
        exact = match (exact, d.exact) {
            (Some(acc), Some(x)) => Some(acc + w * x),
            _ => None,
        };
    }
    if let Some(x) = &exact {
        value = crate::rational::to_f64(x);
    }
    Ok((value, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use num_traits::One;
    use itertools::Itertools;

    fn g(s: &str) -> Graph {
        s.parse().unwrap()
    }

    /// Direct enumeration of all maps V_F → V_G.
    fn brute(f: &Graph, h: &Graph, injective: bool) -> u128 {
        let (k, n) = (f.order(), h.order());
        let mut count = 0;
        for img in (0..k).map(|_| 1..=n).multi_cartesian_product() {
            if injective && img.iter().unique().count() < k {
                continue;
            }
            if f.edges().all(|(a, b)| h.has_edge(img[a - 1], img[b - 1])) {
                count += 1;
            }
        }
        if k == 0 {
            1
        } else {
            count
        }
    }

    #[test]
    fn counts_match_enumeration() {
        let hosts = [g("k=6; 1-5,2-3,2-4,2-6,3-6"), g("k=5; 1-2,2-3,3-4,4-5,1-5,1-3"), Graph::complete(4)];
        let pats = [
            g("k=1"),
            Graph::complete(2),
            Graph::path(3),
            Graph::complete(3),
            g("k=4; 1-2,1-3,1-4"),
            g("k=4; 1-2,2-3,3-4,1-4"),
            g("k=5; 1-2,1-3,2-3,3-4,3-5,4-5"),
            g("k=4; 1-2,3-4"),
            g("k=3; 1-2"),
        ];
        for h in &hosts {
            let b = h.to_bits();
            for f in &pats {
                assert_eq!(hom_count(f, &b).unwrap(), brute(f, h, false), "hom {f} in {h}");
                assert_eq!(emb_count(f, &b).unwrap(), brute(f, h, true), "emb {f} in {h}");
            }
        }
    }

    #[test]
    fn simple_densities() {
        let h = g("k=6; 1-5,2-3,2-4,2-6,3-6");
        assert_eq!(hom_density(&g("k=1"), &h).unwrap(), Q::one());
        assert_eq!(hom_density(&Graph::complete(2), &h).unwrap(), q(10, 36));
        assert_eq!(emb_density(&Graph::complete(3), &h).unwrap(), q(1, 20));
    }

    #[test]
    fn set_partition_counts() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (k, b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(k).len(), *b);
        }
    }

    #[test]
    fn expected_density_of_constant() {
        // E[t(K2, G_n(p))] = (n−1)p/n
        let spec = GraphonSpec::Constant { p: q(1, 3) };
        let (_, e) = expected_hom_density(&Graph::complete(2), &spec, 5).unwrap();
        assert_eq!(e.unwrap(), q(4, 15));
    }
}
