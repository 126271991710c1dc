use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::combinatorics::{amalgamated_shuffle2, amalgamated_shuffle3, Graph, Junction3, Partition, Permutation};
use crate::error::Error;
use crate::formal::{Basis, FormalSum};
use crate::rational::{qi, Q};
use crate::Result;

/// Junction operations of one observable algebra. Indices are 1-based;
/// `weight` is the multiplicity attached to index `a` (1 for vertices and
/// points, the part length for partitions).
trait Junctions: Basis {
    fn size(&self) -> usize;
    fn indices(&self) -> usize;
    fn weight(&self, a: usize) -> Q;
    fn join2(&self, other: &Self, a: usize, b: usize) -> Result<FormalSum<Self>>;
    fn join3(&self, g: &Self, h: &Self, mode: Junction3) -> Result<FormalSum<Self>>;
}

impl Junctions for Graph {
    fn size(&self) -> usize {
        self.order()
    }
    fn indices(&self) -> usize {
        self.order()
    }
    fn weight(&self, _: usize) -> Q {
        Q::one()
    }
    fn join2(&self, other: &Self, a: usize, b: usize) -> Result<FormalSum<Self>> {
        Ok(FormalSum::single(self.junction2(other, a, b)?.canonical()?))
    }
    fn join3(&self, g: &Self, h: &Self, mode: Junction3) -> Result<FormalSum<Self>> {
        Ok(FormalSum::single(self.junction3(g, h, mode)?.canonical()?))
    }
}

impl Junctions for Permutation {
    fn size(&self) -> usize {
        self.len()
    }
    fn indices(&self) -> usize {
        self.len()
    }
    fn weight(&self, _: usize) -> Q {
        Q::one()
    }
    fn join2(&self, other: &Self, a: usize, b: usize) -> Result<FormalSum<Self>> {
        amalgamated_shuffle2(self, other, a, b)
    }
    fn join3(&self, g: &Self, h: &Self, mode: Junction3) -> Result<FormalSum<Self>> {
        amalgamated_shuffle3(self, g, h, mode)
    }
}

impl Junctions for Partition {
    fn size(&self) -> usize {
        Partition::size(self)
    }
    fn indices(&self) -> usize {
        self.len()
    }
    fn weight(&self, a: usize) -> Q {
        qi(self.part(a))
    }
    fn join2(&self, other: &Self, a: usize, b: usize) -> Result<FormalSum<Self>> {
        Ok(FormalSum::single(Partition::join2(self, other, a, b)?))
    }
    fn join3(&self, g: &Self, h: &Self, mode: Junction3) -> Result<FormalSum<Self>> {
        Ok(FormalSum::single(Partition::join3(self, g, h, mode)?))
    }
}

fn same_size<B: Junctions>(xs: &[&B]) -> Result<usize> {
    let k = xs[0].size();
    for x in xs {
        if x.size() != k {
            return Err(Error::SizeMismatch {
                left: k,
                right: x.size(),
            });
        }
    }
    if k == 0 {
        return Err(Error::Invalid("cumulant of the empty object".into()));
    }
    Ok(k)
}

fn times<B: Basis>(x: &B, s: &FormalSum<B>) -> FormalSum<B> {
    FormalSum::single(x.clone()).mul(s)
}

/// Σ_{a,b} w_a w_b ((x⋈y)(a,b) − x×y), unscaled.
fn junction_sum<B: Junctions>(x: &B, y: &B) -> Result<FormalSum<B>> {
    let xy = x.product(y);
    let mut out = FormalSum::zero();
    for a in 1..=x.indices() {
        for b in 1..=y.indices() {
            let w = x.weight(a) * y.weight(b);
            out.add_scaled(&x.join2(y, a, b)?, &w);
            out.add_scaled(&xy, &-w);
        }
    }
    Ok(out)
}

fn kappa2<B: Junctions>(x: &B, y: &B) -> Result<FormalSum<B>> {
    let k = same_size(&[x, y])?;
    Ok(junction_sum(x, y)?.scale(&Q::new(1.into(), (k * k).into())))
}

fn kappa3<B: Junctions>(x: &B, y: &B, z: &B) -> Result<FormalSum<B>> {
    let k = same_size(&[x, y, z])?;
    let args = [x, y, z];
    // The products f × (g⋈h) are bilinear, so the right factors are summed
    // per left factor first and multiplied once at the end.
    let mut right: [FormalSum<B>; 3] = [FormalSum::zero(), FormalSum::zero(), FormalSum::zero()];
    let mut xyz_coeff = Q::zero();
    let mut out = FormalSum::zero();
    let mut joins: BTreeMap<(usize, usize, usize, usize), FormalSum<B>> = BTreeMap::new();
    let mut join2 = |i: usize, j: usize, a: usize, b: usize| -> Result<FormalSum<B>> {
        if let Some(s) = joins.get(&(i, j, a, b)) {
            return Ok(s.clone());
        }
        let s = args[i].join2(args[j], a, b)?;
        joins.insert((i, j, a, b), s.clone());
        Ok(s)
    };
    // all three glued at one index
    for a in 1..=x.indices() {
        for b in 1..=y.indices() {
            for c in 1..=z.indices() {
                let w = x.weight(a) * y.weight(b) * z.weight(c);
                out.add_scaled(&x.join3(y, z, Junction3::Point(a, b, c))?, &w);
                xyz_coeff += &w * qi(2);
                right[0].add_scaled(&join2(1, 2, b, c)?, &w);
                right[1].add_scaled(&join2(0, 2, a, c)?, &w);
                right[2].add_scaled(&join2(0, 1, a, b)?, &w);
            }
        }
    }
    // chains P–Q–R, over the cyclic rotations of the arguments
    for (i, j, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let (p, q, r) = (args[i], args[j], args[l]);
        for a in 1..=p.indices() {
            for b in 1..=q.indices() {
                let wb = q.weight(b);
                // two distinct cells of the same part (partitions only)
                let w2 = p.weight(a) * &wb * (&wb - Q::one());
                for c in 1..=q.indices() {
                    for d in 1..=r.indices() {
                        let (w, joined, cd) = if b == c {
                            if w2.is_zero() {
                                continue;
                            }
                            (&w2 * r.weight(d), p.join3(q, r, Junction3::Point(a, b, d))?, b)
                        } else {
                            let w = p.weight(a) * &wb * q.weight(c) * r.weight(d);
                            (w, p.join3(q, r, Junction3::Pair(a, b, c, d))?, c)
                        };
                        out.add_scaled(&joined, &w);
                        xyz_coeff += &w;
                        right[l].add_scaled(&join2(i, j, a, b)?, &w);
                        right[i].add_scaled(&join2(j, l, cd, d)?, &w);
                    }
                }
            }
        }
    }
    out.add_scaled(&x.product(y).mul(&FormalSum::single(z.clone())), &xyz_coeff);
    for (f, s) in args.iter().zip(&right) {
        out.add_scaled(&times(*f, s), &-Q::one());
    }
    Ok(out.scale(&Q::new(1.into(), (k * k * k * k).into())))
}

/// κ₂(F, G) = (1/k²) Σ_{a,b} ((F⋈G)(a,b) − F×G).
pub fn kappa2_graphs(f: &Graph, g: &Graph) -> Result<FormalSum<Graph>> {
    kappa2(f, g)
}

pub fn kappa3_graphs(f: &Graph, g: &Graph, h: &Graph) -> Result<FormalSum<Graph>> {
    kappa3(f, g, h)
}

/// Σ_{a,b} ((F⋈G)(a,b) − F×G) for graphs of any sizes: the limit of
/// cov(S(F), S(G)) / n^{|F|+|G|−1}.
pub fn cross_covariance_graphs(f: &Graph, g: &Graph) -> Result<FormalSum<Graph>> {
    if f.order() == 0 || g.order() == 0 {
        return Err(Error::Invalid("covariance with the empty graph".into()));
    }
    junction_sum(f, g)
}

pub fn kappa2_perms(tau: &Permutation, rho: &Permutation) -> Result<FormalSum<Permutation>> {
    kappa2(tau, rho)
}

pub fn kappa3_perms(tau: &Permutation, rho: &Permutation, mu: &Permutation) -> Result<FormalSum<Permutation>> {
    kappa3(tau, rho, mu)
}

pub fn kappa2_parts(rho: &Partition, mu: &Partition) -> Result<FormalSum<Partition>> {
    kappa2(rho, mu)
}

pub fn kappa3_parts(rho: &Partition, mu: &Partition, nu: &Partition) -> Result<FormalSum<Partition>> {
    kappa3(rho, mu, nu)
}
