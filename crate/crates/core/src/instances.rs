//! Generators for the extremal barrier constructions and seeded random
//! instances. Everything emits the shared text format via `Hypergraph`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::lattice::IndexVector;
use crate::util::{for_each_combination, SplitMix64};
use crate::Rat;

/// Named barrier construction parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierSpec {
    pub n: usize,
    pub k: usize,
    pub part_sizes: Vec<usize>,
    pub kind: BarrierKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BarrierKind {
    Space,
    Cover,
    LatticeDefined,
}

/// Split of `0..n` used by [`space_barrier`]: X is the front block, Y the
/// back block, with |Y| the largest odd integer at most floor(n/2).
pub fn space_barrier_parts(n: usize) -> (Vec<usize>, Vec<usize>) {
    let mut y_size = n / 2;
    if y_size % 2 == 0 {
        y_size -= 1; // |Y| must be odd
    }
    let x: Vec<usize> = (0..n - y_size).collect();
    let y: Vec<usize> = (n - y_size..n).collect();
    (x, y)
}

/// The parity construction: a bipartition X, Y with |Y| odd, and all k-sets
/// meeting Y in an even number of vertices. Any matching covers an even
/// number of Y-vertices, so no perfect matching can cover the odd-sized Y.
pub fn space_barrier(n: usize, k: usize) -> Result<Hypergraph> {
    if n < k {
        return Err(Error::invalid(format!("space barrier needs n >= k ({} < {})", n, k)));
    }
    let (_, y) = space_barrier_parts(n);
    let y_start = n - y.len();
    let mut edges = Vec::new();
    for_each_combination(n, k, |idx| {
        let in_y = idx.iter().filter(|&&v| v >= y_start).count();
        if in_y % 2 == 0 {
            edges.push(idx.to_vec());
        }
        true
    });
    Hypergraph::new(n, k, edges)
}

/// The covering construction: a set W of n/k - 1 vertices and all k-sets
/// intersecting W. Every matching has at most |W| edges.
pub fn cover_barrier(n: usize, k: usize) -> Result<Hypergraph> {
    if n % k != 0 {
        return Err(Error::invalid(format!("cover barrier needs k | n ({} % {} != 0)", n, k)));
    }
    if n < 2 * k {
        return Err(Error::invalid(format!("cover barrier needs n >= 2k ({} < {})", n, 2 * k)));
    }
    let w_size = n / k - 1;
    let mut edges = Vec::new();
    for_each_combination(n, k, |idx| {
        if idx[0] < w_size {
            // idx is sorted, so idx[0] < w_size iff the k-set meets W
            edges.push(idx.to_vec());
        }
        true
    });
    Hypergraph::new(n, k, edges)
}

/// Consecutive blocks of the given sizes, starting at vertex 0.
pub fn consecutive_parts(part_sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut parts = Vec::with_capacity(part_sizes.len());
    let mut next = 0;
    for &sz in part_sizes {
        parts.push((next..next + sz).collect());
        next += sz;
    }
    parts
}

/// Partition-defined construction: vertices split into consecutive blocks of
/// the given sizes, edges are exactly the k-sets whose index vector over the
/// blocks lies in `allowed`.
pub fn lattice_barrier(part_sizes: &[usize], k: usize, allowed: &[IndexVector]) -> Result<Hypergraph> {
    let r = part_sizes.len();
    for v in allowed {
        if v.dim() != r {
            return Err(Error::invalid(format!(
                "allowed vector {:?} has {} coordinates, expected {}",
                v,
                v.dim(),
                r
            )));
        }
        if !v.is_k_vector(k) {
            return Err(Error::invalid(format!("allowed vector {:?} is not a {}-vector", v, k)));
        }
    }
    let n: usize = part_sizes.iter().sum();
    let mut part_of = vec![0usize; n];
    {
        let mut next = 0;
        for (i, &sz) in part_sizes.iter().enumerate() {
            for v in next..next + sz {
                part_of[v] = i;
            }
            next += sz;
        }
    }
    let allowed_set: std::collections::BTreeSet<&IndexVector> = allowed.iter().collect();
    let mut edges = Vec::new();
    for_each_combination(n, k, |idx| {
        let mut coords = vec![0i64; r];
        for &v in idx {
            coords[part_of[v]] += 1;
        }
        if allowed_set.contains(&IndexVector::new(coords)) {
            edges.push(idx.to_vec());
        }
        true
    });
    Hypergraph::new(n, k, edges)
}

/// Each k-set is kept independently with probability `p`, driven by a
/// splitmix64 stream seeded with `seed`. Identical `(n, k, p, seed)` always
/// produce identical edge sets.
pub fn random_kgraph(n: usize, k: usize, p: &Rat, seed: u64) -> Result<Hypergraph> {
    if p < &Rat::from_integer(0.into()) || p > &Rat::from_integer(1.into()) {
        return Err(Error::invalid(format!("probability {} outside [0,1]", p)));
    }
    // include iff draw < floor(p * 2^64); p = 1 keeps everything
    let threshold: u128 = {
        let scaled = p * Rat::from_integer(crate::Int::from(1u128 << 64));
        let floor = scaled.floor().to_integer();
        use num_traits::ToPrimitive;
        floor.to_u128().unwrap_or(u128::MAX)
    };
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for_each_combination(n, k, |idx| {
        let draw = rng.next_u64() as u128;
        if draw < threshold {
            edges.push(idx.to_vec());
        }
        true
    });
    Hypergraph::new(n, k, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::util::binomial;

    #[test]
    fn space_barrier_shape() {
        let h = space_barrier(6, 3).unwrap();
        let (x, y) = space_barrier_parts(6);
        assert_eq!(x, vec![0, 1, 2]);
        assert_eq!(y, vec![3, 4, 5]);
        // 1 all-X edge plus 3 * 3 with two Y-vertices
        assert_eq!(h.num_edges(), 10);
        assert!(h.perfect_matching_oracle().is_none());
    }

    #[test]
    fn space_barrier_y_is_odd() {
        for n in 3..=16 {
            let (_, y) = space_barrier_parts(n);
            assert_eq!(y.len() % 2, 1, "n={}", n);
            assert!(y.len() <= n / 2);
        }
    }

    /// Exhaustive over all matchings: each covers an even number of
    /// Y-vertices, which with |Y| odd rules out a perfect matching.
    #[test]
    fn space_barrier_matchings_cover_even_y() {
        for n in [6usize, 9, 12] {
            let h = space_barrier(n, 3).unwrap();
            let y_start = n - space_barrier_parts(n).1.len();
            let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
            let mut checked = 0usize;
            while let Some(chosen) = stack.pop() {
                let covered: std::collections::HashSet<usize> =
                    chosen.iter().flat_map(|&i| h.edges()[i].clone()).collect();
                let in_y = covered.iter().filter(|&&v| v >= y_start).count();
                assert_eq!(in_y % 2, 0, "matching {:?} covers odd Y count", chosen);
                checked += 1;
                let start = chosen.last().map_or(0, |&i| i + 1);
                for i in start..h.num_edges() {
                    if h.edges()[i].iter().all(|v| !covered.contains(v)) {
                        let mut next = chosen.clone();
                        next.push(i);
                        stack.push(next);
                    }
                }
            }
            assert!(checked > 1, "n={} enumerated {}", n, checked);
        }
    }

    #[test]
    fn cover_barrier_examples() {
        let h = cover_barrier(9, 3).unwrap();
        let w_size = 2;
        assert!(h.edges().iter().all(|e| e[0] < w_size));
        assert!(h.perfect_matching_oracle().is_none());
        assert!(h.max_matching().len() <= w_size);

        // 2-sets disjoint from W see only edges through W
        let h6 = cover_barrier(6, 3).unwrap();
        assert_eq!(h6.min_l_degree(2).unwrap(), 1);

        assert!(cover_barrier(8, 3).is_err());
        assert!(cover_barrier(3, 3).is_err());
    }

    #[test]
    fn lattice_barrier_examples() {
        let iv = |c: &[i64]| IndexVector::new(c.to_vec());
        // edges inside part 1 plus mixed 1+2 edges only
        let h = lattice_barrier(&[3, 3], 3, &[iv(&[3, 0]), iv(&[1, 2])]).unwrap();
        assert_eq!(h.num_edges(), 1 + 3 * 3);

        // all k-vectors gives the complete graph
        let all: Vec<IndexVector> = (0..=3)
            .map(|a| iv(&[a, 3 - a]))
            .collect();
        let complete = lattice_barrier(&[3, 3], 3, &all).unwrap();
        assert_eq!(complete, Hypergraph::complete(6, 3).unwrap());

        // two disjoint cliques have a perfect matching
        let split = lattice_barrier(&[3, 3], 3, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        assert!(split.perfect_matching_oracle().is_some());

        // non-k-vector rejected
        assert!(lattice_barrier(&[3, 3], 3, &[iv(&[2, 0])]).is_err());
        assert!(lattice_barrier(&[3, 3], 3, &[iv(&[3])]).is_err());
    }

    #[test]
    fn lattice_barrier_vectors_all_allowed() {
        let iv = |c: &[i64]| IndexVector::new(c.to_vec());
        let allowed = [iv(&[3, 0]), iv(&[1, 2])];
        let h = lattice_barrier(&[4, 4], 3, &allowed).unwrap();
        for e in h.edges() {
            let a = e.iter().filter(|&&v| v < 4).count() as i64;
            let v = iv(&[a, 3 - a]);
            assert!(allowed.contains(&v), "edge {:?} has vector {:?}", e, v);
        }
    }

    #[test]
    fn random_kgraph_extremes_and_determinism() {
        let full = random_kgraph(7, 3, &rat(1, 1), 3).unwrap();
        assert_eq!(full.num_edges(), binomial(7, 3));
        let none = random_kgraph(7, 3, &rat(0, 1), 3).unwrap();
        assert_eq!(none.num_edges(), 0);

        let a = random_kgraph(9, 3, &rat(1, 2), 7).unwrap();
        let b = random_kgraph(9, 3, &rat(1, 2), 7).unwrap();
        assert_eq!(a, b);
        let c = random_kgraph(9, 3, &rat(1, 2), 8).unwrap();
        assert_ne!(a, c);

        assert!(random_kgraph(9, 3, &rat(3, 2), 7).is_err());
    }
}
