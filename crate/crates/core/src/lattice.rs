//! Index vectors, robust-vector extraction, integer edge-lattices, coset
//! groups, transferrals, the coefficient bound, and solubility search.
//!
//! All membership and residue decisions run in exact big-integer arithmetic
//! on Hermite/Smith normal forms; the solubility search enumerates matchings
//! exhaustively in increasing size so the first hit is the smallest
//! certificate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Matching, VertexSet};
use crate::linalg::{hermite_normal_form, hnf_contains, smith_normal_form};
use crate::partition::{Partition, PipelineParams};
use crate::util::{count_meets_threshold, pow_big};
use crate::{Int, Rat};

/// Integer vector of per-part intersection sizes (the exceptional part V0 is
/// never counted).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndexVector(Vec<i64>);

impl IndexVector {
    pub fn new(coords: Vec<i64>) -> Self {
        IndexVector(coords)
    }

    pub fn zero(dim: usize) -> Self {
        IndexVector(vec![0; dim])
    }

    /// i-th unit vector (0-based) in dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut c = vec![0; dim];
        c[i] = 1;
        IndexVector(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Nonnegative coordinates summing to exactly k.
    pub fn is_k_vector(&self, k: usize) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.sum() == k as i64
    }

    pub fn add(&self, other: &IndexVector) -> IndexVector {
        IndexVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IndexVector) -> IndexVector {
        IndexVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn to_big(&self) -> Vec<Int> {
        self.0.iter().map(|&c| Int::from(c)).collect()
    }
}

impl std::fmt::Display for IndexVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Index vector of a vertex set with respect to a partition.
pub fn index_vector(p: &Partition, a: &[usize]) -> IndexVector {
    p.index_vector(a)
}

/// An integer lattice (additive subgroup of Z^dim) in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<Int>>,
}

impl Lattice {
    /// Lattice generated by the given vectors.
    pub fn generate(dim: usize, gens: &[IndexVector]) -> Result<Self> {
        let rows: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| {
                if g.dim() != dim {
                    Err(Error::invalid(format!(
                        "generator {} has dimension {}, expected {}",
                        g,
                        g.dim(),
                        dim
                    )))
                } else {
                    Ok(g.to_big())
                }
            })
            .collect::<Result<_>>()?;
        Ok(Lattice {
            dim,
            basis: hermite_normal_form(&rows, dim),
        })
    }

    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Canonical HNF basis rows.
    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<IndexVector> {
        use num_traits::ToPrimitive;
        self.basis
            .iter()
            .map(|r| IndexVector::new(r.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()))
            .collect()
    }

    pub fn contains(&self, v: &IndexVector) -> bool {
        if v.dim() != self.dim {
            return false;
        }
        hnf_contains(&self.basis, &v.to_big())
    }

    pub fn contains_big(&self, v: &[Int]) -> bool {
        v.len() == self.dim && hnf_contains(&self.basis, v)
    }

    /// Index [Z^dim : L] as the product of HNF pivots; `None` when the rank
    /// is deficient.
    pub fn index_in_ambient(&self) -> Option<Int> {
        if self.rank() != self.dim {
            return None;
        }
        let mut idx = Int::from(1);
        for row in &self.basis {
            let pivot = row.iter().find(|x| !num_traits::Zero::is_zero(*x)).unwrap();
            idx *= pivot.clone();
        }
        Some(idx)
    }
}

/// The lattice of all integer vectors whose coordinate sum is divisible by k,
/// realized by the basis {u_i - u_(i+1)} plus k*u_r.
pub fn lmax(r: usize, k: usize) -> Result<Lattice> {
    if r < 1 {
        return Err(Error::invalid("lmax needs at least one coordinate"));
    }
    let mut gens = Vec::new();
    for i in 0..r - 1 {
        let mut c = vec![0i64; r];
        c[i] = 1;
        c[i + 1] = -1;
        gens.push(IndexVector::new(c));
    }
    let mut last = vec![0i64; r];
    last[r - 1] = k as i64;
    gens.push(IndexVector::new(last));
    Lattice::generate(r, &gens)
}

fn in_lmax(v: &IndexVector, k: usize) -> bool {
    v.sum().rem_euclid(k as i64) == 0
}

/// Canonical coordinates of a coset in the quotient group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Residue(Vec<Int>);

impl Residue {
    pub fn coords(&self) -> &[Int] {
        &self.0
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The finite (or flagged-infinite) quotient of the k-divisible lattice by
/// an edge-lattice, with an exact residue projection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CosetGroup {
    r: usize,
    k: usize,
    /// Smith divisors d_1 | d_2 | ... of the sublattice inside the ambient
    /// k-divisible lattice; zeros mark free factors (infinite quotient).
    divisors: Vec<Int>,
    /// Column transform carrying sublattice coordinates onto the divisors.
    col_transform: Vec<Vec<Int>>,
    order: Option<Int>,
}

impl CosetGroup {
    /// Quotient of lmax(r, k) by `l`. Fails when `l` is not contained in the
    /// ambient k-divisible lattice. Rank-deficient `l` yields an infinite
    /// group, flagged rather than rejected.
    pub fn new(l: &Lattice, r: usize, k: usize) -> Result<Self> {
        if l.dim() != r {
            return Err(Error::invalid(format!("lattice dimension {} != r={}", l.dim(), r)));
        }
        if r == 0 {
            return Ok(CosetGroup {
                r,
                k,
                divisors: Vec::new(),
                col_transform: Vec::new(),
                order: Some(Int::from(1)),
            });
        }
        // L <= L_max iff every basis row has k-divisible sum
        for row in l.basis() {
            let sum: Int = row.iter().cloned().sum();
            if !num_integer::Integer::mod_floor(&sum, &Int::from(k)).eq(&Int::from(0)) {
                return Err(Error::invalid(format!(
                    "lattice is not contained in the k-divisible ambient (row sum {})",
                    sum
                )));
            }
        }
        // express each basis row in lmax coordinates: prefix sums, then total/k
        let rows: Vec<Vec<Int>> = l.basis().iter().map(|row| lmax_coords(row, r, k)).collect();
        let (divisors, col_transform) = smith_normal_form(&rows, r);
        let order = if divisors.iter().any(|d| num_traits::Zero::is_zero(d)) {
            None
        } else {
            Some(divisors.iter().cloned().product())
        };
        Ok(CosetGroup {
            r,
            k,
            divisors,
            col_transform,
            order,
        })
    }

    pub fn order(&self) -> Option<&Int> {
        self.order.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.order.is_some()
    }

    pub fn order_usize(&self) -> Option<usize> {
        use num_traits::ToPrimitive;
        self.order.as_ref().and_then(|o| o.to_usize())
    }

    /// Nontrivial invariant factors d_i > 1.
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.divisors
            .iter()
            .filter(|d| **d > Int::from(1) || num_traits::Zero::is_zero(*d))
            .cloned()
            .collect()
    }

    pub fn identity(&self) -> Residue {
        Residue(vec![Int::from(0); self.r])
    }

    /// Canonical coordinates of v + L. The vector must lie in the ambient
    /// k-divisible lattice.
    pub fn residue(&self, v: &IndexVector) -> Result<Residue> {
        if v.dim() != self.r {
            return Err(Error::invalid(format!("vector dimension {} != r={}", v.dim(), self.r)));
        }
        if self.r == 0 {
            return Ok(Residue(Vec::new()));
        }
        if !in_lmax(v, self.k) {
            return Err(Error::invalid(format!(
                "vector {} has sum {} not divisible by k={}",
                v,
                v.sum(),
                self.k
            )));
        }
        let x = lmax_coords(&v.to_big(), self.r, self.k);
        Ok(self.canonicalize(&x))
    }

    fn canonicalize(&self, x: &[Int]) -> Residue {
        let mut out = Vec::with_capacity(self.r);
        for j in 0..self.r {
            let mut acc = Int::from(0);
            for i in 0..self.r {
                acc += &(x[i].clone() * self.col_transform[i][j].clone());
            }
            if !num_traits::Zero::is_zero(&self.divisors[j]) {
                acc = num_integer::Integer::mod_floor(&acc, &self.divisors[j]);
            }
            out.push(acc);
        }
        Residue(out)
    }

    pub fn add(&self, a: &Residue, b: &Residue) -> Residue {
        let raw: Vec<Int> = a.0.iter().zip(&b.0).map(|(x, y)| x.clone() + y.clone()).collect();
        Residue(
            raw.into_iter()
                .zip(&self.divisors)
                .map(|(x, d)| {
                    if num_traits::Zero::is_zero(d) {
                        x
                    } else {
                        num_integer::Integer::mod_floor(&x, d)
                    }
                })
                .collect(),
        )
    }

    pub fn neg(&self, a: &Residue) -> Residue {
        let raw: Vec<Int> = a.0.iter().map(|x| -x.clone()).collect();
        Residue(
            raw.into_iter()
                .zip(&self.divisors)
                .map(|(x, d)| {
                    if num_traits::Zero::is_zero(d) {
                        x
                    } else {
                        num_integer::Integer::mod_floor(&x, d)
                    }
                })
                .collect(),
        )
    }
}

/// Coordinates of a k-divisible vector in the lmax basis: prefix sums on the
/// difference vectors, total/k on the scaled last unit vector.
fn lmax_coords(v: &[Int], r: usize, k: usize) -> Vec<Int> {
    let mut x = Vec::with_capacity(r);
    let mut prefix = Int::from(0);
    for item in v.iter().take(r - 1) {
        prefix += item;
        x.push(prefix.clone());
    }
    let total: Int = v.iter().cloned().sum();
    let (q, rem) = num_integer::Integer::div_rem(&total, &Int::from(k));
    debug_assert!(num_traits::Zero::is_zero(&rem));
    x.push(q);
    x
}

/// The robust index vectors of a partitioned hypergraph: type-1 vectors are
/// supported on the closed parts and need a global edge count, type-2
/// vectors touch one small part in one vertex and need the per-vertex count
/// for every vertex of that part.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RobustVectors {
    pub type1: Vec<IndexVector>,
    pub type2: Vec<IndexVector>,
}

impl RobustVectors {
    /// Union, sorted and deduplicated (the two classes are disjoint by
    /// construction).
    pub fn all(&self) -> Vec<IndexVector> {
        let mut v: Vec<IndexVector> = self.type1.iter().chain(self.type2.iter()).cloned().collect();
        v.sort();
        v
    }

    pub fn is_empty(&self) -> bool {
        self.type1.is_empty() && self.type2.is_empty()
    }
}

pub fn robust_vectors(h: &Hypergraph, p: &Partition, mu: &Rat) -> RobustVectors {
    let k = h.k();
    let n = h.n();
    let r = p.r();
    let s = p.s();
    let scale_global = pow_big(n, k);
    let scale_vertex = pow_big(n, k - 1);

    let mut global_counts: BTreeMap<IndexVector, usize> = BTreeMap::new();
    // per candidate type-2 vector: counts per vertex of the unit part
    let mut vertex_counts: BTreeMap<IndexVector, BTreeMap<usize, usize>> = BTreeMap::new();

    for e in h.edges() {
        let iv = p.index_vector(e);
        if iv.sum() != k as i64 {
            continue; // edge touches V0
        }
        let small_support: Vec<usize> = (0..s).filter(|&i| iv.coords()[i] != 0).collect();
        match small_support.len() {
            0 => {
                *global_counts.entry(iv).or_insert(0) += 1;
            }
            1 => {
                let i = small_support[0];
                if iv.coords()[i] == 1 {
                    let v = *e
                        .iter()
                        .find(|&&w| p.parts()[i].contains(w))
                        .expect("edge meets the small part");
                    *vertex_counts.entry(iv).or_default().entry(v).or_insert(0) += 1;
                }
            }
            _ => {}
        }
    }

    let type1: Vec<IndexVector> = global_counts
        .into_iter()
        .filter(|(_, c)| count_meets_threshold(*c, mu, &scale_global))
        .map(|(iv, _)| iv)
        .collect();

    let mut type2 = Vec::new();
    for (iv, per_vertex) in vertex_counts {
        let i = (0..s).find(|&i| iv.coords()[i] == 1).unwrap();
        let ok = p.parts()[i].iter().all(|v| {
            per_vertex
                .get(v)
                .map(|&c| count_meets_threshold(c, mu, &scale_vertex))
                .unwrap_or(false)
        });
        if ok {
            type2.push(iv);
        }
    }
    type2.sort();
    debug_assert!(type1.iter().chain(&type2).all(|v| v.dim() == r));
    RobustVectors { type1, type2 }
}

/// Exact membership test of the transferral u_i - u_j (0-based part indices).
pub fn has_transferral(l: &Lattice, i: usize, j: usize) -> bool {
    if i == j || i >= l.dim() || j >= l.dim() {
        return false;
    }
    let v = IndexVector::unit(l.dim(), i).sub(&IndexVector::unit(l.dim(), j));
    l.contains(&v)
}

/// Report of one transferral-merge pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MergeOutcome {
    pub partition: Partition,
    /// Merged part pairs in the coordinates current at merge time (0-based).
    pub merges: Vec<(usize, usize)>,
    /// Closedness of each merged part, re-verified at the configured depth.
    pub merged_closedness: Vec<bool>,
}

/// Greedily merges closed parts joined by a transferral in the robust
/// edge-lattice, recomputing the robust vectors after every merge. Smallest
/// index pair first; deterministic.
pub fn merge_transferral_parts(h: &Hypergraph, p: &Partition, params: &PipelineParams) -> MergeOutcome {
    let mut current = p.clone();
    let mut merges = Vec::new();
    let mut merged_closedness = Vec::new();
    'outer: loop {
        let robust = robust_vectors(h, &current, &params.mu);
        let l = Lattice::generate(current.r(), &robust.all()).expect("robust vectors have the right dimension");
        for i in current.s()..current.r() {
            for j in i + 1..current.r() {
                if has_transferral(&l, i, j) {
                    current = current.merged(i, j).expect("valid merge indices");
                    merges.push((i, j));
                    let ambient = current.closed_union();
                    let closed = crate::reachability::is_closed(
                        h,
                        &current.parts()[i],
                        &params.reach_beta(),
                        &ambient,
                    );
                    merged_closedness.push(closed);
                    continue 'outer;
                }
            }
        }
        break;
    }
    MergeOutcome {
        partition: current,
        merges,
        merged_closedness,
    }
}

/// Minimal infinity-norm of an integer representation of `v` over the
/// vectors `basis`, bounded by `cap`. All basis vectors have nonnegative
/// coordinates, which the pruning relies on.
fn minimal_representation_norm(v: &IndexVector, basis: &[IndexVector], cap: usize) -> Result<usize> {
    let dim = v.dim();
    // suffix movement bounds per coordinate
    let mut suffix = vec![vec![0i64; dim]; basis.len() + 1];
    for i in (0..basis.len()).rev() {
        for d in 0..dim {
            suffix[i][d] = suffix[i + 1][d] + basis[i].coords()[d];
        }
    }

    fn feasible(
        residual: &mut Vec<i64>,
        basis: &[IndexVector],
        suffix: &[Vec<i64>],
        j: usize,
        bound: i64,
    ) -> bool {
        if j == basis.len() {
            return residual.iter().all(|&x| x == 0);
        }
        for d in 0..residual.len() {
            if residual[d].abs() > bound * suffix[j][d] {
                return false;
            }
        }
        // try coefficients by increasing magnitude
        for mag in 0..=bound {
            let candidates = if mag == 0 { vec![0i64] } else { vec![mag, -mag] };
            for a in candidates {
                for d in 0..residual.len() {
                    residual[d] -= a * basis[j].coords()[d];
                }
                if feasible(residual, basis, suffix, j + 1, bound) {
                    for d in 0..residual.len() {
                        residual[d] += a * basis[j].coords()[d];
                    }
                    return true;
                }
                for d in 0..residual.len() {
                    residual[d] += a * basis[j].coords()[d];
                }
            }
        }
        false
    }

    for bound in 0..=cap {
        let mut residual: Vec<i64> = v.coords().to_vec();
        if feasible(&mut residual, basis, &suffix, 0, bound as i64) {
            return Ok(bound);
        }
    }
    Err(Error::CoefficientCapExceeded {
        cap,
        vector: v.to_string(),
    })
}

/// The coefficient bound: over all nonnegative vectors of total at most `m`
/// lying in the lattice generated by `vectors`, the largest minimal
/// infinity-norm of an integer representation. The bounded search is capped;
/// hitting the cap is an explicit error, never a silent truncation.
pub fn coefficient_bound(
    r: usize,
    k: usize,
    vectors: &[IndexVector],
    m: usize,
    cap: usize,
) -> Result<usize> {
    if vectors.is_empty() {
        return Err(Error::invalid("coefficient bound needs a non-empty vector family"));
    }
    for v in vectors {
        if v.dim() != r || !v.is_k_vector(k) {
            return Err(Error::invalid(format!("{} is not a {}-vector of dimension {}", v, k, r)));
        }
    }
    let l = Lattice::generate(r, vectors)?;
    let mut best = 0usize;
    // enumerate nonnegative candidates coordinate-recursively, total <= m
    let mut coords = vec![0i64; r];
    fn walk(
        coords: &mut Vec<i64>,
        d: usize,
        remaining: i64,
        k: usize,
        l: &Lattice,
        vectors: &[IndexVector],
        cap: usize,
        best: &mut usize,
    ) -> Result<()> {
        if d == coords.len() {
            let total: i64 = coords.iter().sum();
            if total % k as i64 != 0 {
                return Ok(());
            }
            let v = IndexVector::new(coords.clone());
            if !l.contains(&v) {
                return Ok(());
            }
            let norm = minimal_representation_norm(&v, vectors, cap)?;
            if norm > *best {
                *best = norm;
            }
            return Ok(());
        }
        for c in 0..=remaining {
            coords[d] = c;
            walk(coords, d + 1, remaining - c, k, l, vectors, cap, best)?;
        }
        coords[d] = 0;
        Ok(())
    }
    walk(&mut coords, 0, m as i64, k, &l, vectors, cap, &mut best)?;
    Ok(best)
}

/// Searches for a matching of size at most |U| + q that covers U and leaves
/// an index vector inside `l`. Matchings are enumerated in increasing size,
/// then deterministic DFS order (edges covering the least uncovered U-vertex
/// first, free edges ascending), so the first hit is the smallest solution.
pub fn is_soluble(
    h: &Hypergraph,
    p: &Partition,
    l: &Lattice,
    u: &VertexSet,
    q: usize,
) -> Option<Matching> {
    let cap = (u.len() + q).min(h.n() / h.k());
    for size in 0..=cap {
        if let Some(edges) = search_solution(h, p, l, u, size) {
            let m = Matching::new(h, edges).expect("search yields a valid matching");
            return Some(m);
        }
    }
    None
}

fn search_solution(
    h: &Hypergraph,
    p: &Partition,
    l: &Lattice,
    u: &VertexSet,
    size: usize,
) -> Option<Vec<Vec<usize>>> {
    fn dfs(
        h: &Hypergraph,
        p: &Partition,
        l: &Lattice,
        u: &VertexSet,
        size: usize,
        chosen: &mut Vec<usize>,
        covered: &mut Vec<bool>,
        next_free: usize,
    ) -> bool {
        if chosen.len() == size {
            if u.iter().any(|&v| !covered[v]) {
                return false;
            }
            let leftover: Vec<usize> = (0..h.n()).filter(|&v| !covered[v]).collect();
            return l.contains(&p.index_vector(&leftover));
        }
        // first cover U, branching on its least uncovered vertex
        if let Some(&target) = u.iter().find(|&&v| !covered[v]) {
            for (ei, e) in h.edges().iter().enumerate() {
                if !e.contains(&target) || e.iter().any(|&w| covered[w]) {
                    continue;
                }
                chosen.push(ei);
                for &w in e {
                    covered[w] = true;
                }
                if dfs(h, p, l, u, size, chosen, covered, next_free) {
                    return true;
                }
                for &w in e {
                    covered[w] = false;
                }
                chosen.pop();
            }
            return false;
        }
        // free edges in ascending canonical order
        for ei in next_free..h.num_edges() {
            let e = &h.edges()[ei];
            if e.iter().any(|&w| covered[w]) {
                continue;
            }
            chosen.push(ei);
            for &w in e {
                covered[w] = true;
            }
            if dfs(h, p, l, u, size, chosen, covered, ei + 1) {
                return true;
            }
            for &w in e {
                covered[w] = false;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = Vec::new();
    let mut covered = vec![false; h.n()];
    if dfs(h, p, l, u, size, &mut chosen, &mut covered, 0) {
        Some(chosen.into_iter().map(|ei| h.edges()[ei].clone()).collect())
    } else {
        None
    }
}

/// Finds a sub-multiset of the given edge vectors whose residue sum hits the
/// target, shrunk by the partial-sum pigeonhole to fewer than |Q| elements
/// whenever the group is finite. Returns indices into `vectors`.
pub fn residue_submultiset(
    group: &CosetGroup,
    vectors: &[IndexVector],
    target: &Residue,
) -> Result<Option<Vec<usize>>> {
    let residues: Vec<Residue> = vectors
        .iter()
        .map(|v| group.residue(v))
        .collect::<Result<_>>()?;
    // subset DP over the group, first-found per residue
    let mut reach: BTreeMap<Residue, Vec<usize>> = BTreeMap::new();
    reach.insert(group.identity(), Vec::new());
    for (i, rho) in residues.iter().enumerate() {
        let snapshot: Vec<(Residue, Vec<usize>)> =
            reach.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (res, subset) in snapshot {
            let next = group.add(&res, rho);
            reach.entry(next).or_insert_with(|| {
                let mut s = subset.clone();
                s.push(i);
                s
            });
        }
    }
    let Some(subset) = reach.get(target) else {
        return Ok(None);
    };
    let mut subset = subset.clone();

    // excise blocks with identity partial sums until the pigeonhole bound holds
    loop {
        let mut seen: BTreeMap<Residue, usize> = BTreeMap::new();
        let mut partial = group.identity();
        seen.insert(partial.clone(), 0);
        let mut cut: Option<(usize, usize)> = None;
        for (pos, &i) in subset.iter().enumerate() {
            partial = group.add(&partial, &residues[i]);
            if let Some(&start) = seen.get(&partial) {
                cut = Some((start, pos + 1));
                break;
            }
            seen.insert(partial.clone(), pos + 1);
        }
        match cut {
            Some((a, b)) => {
                subset.drain(a..b);
            }
            None => break,
        }
    }
    Ok(Some(subset))
}

/// First pair (i, j), i <= j, with i_P(U) - u_i - u_j in the lattice.
pub fn absorb_pair_query(l: &Lattice, u_vec: &IndexVector) -> Option<(usize, usize)> {
    let r = l.dim();
    for i in 0..r {
        for j in i..r {
            let v = u_vec
                .sub(&IndexVector::unit(r, i))
                .sub(&IndexVector::unit(r, j));
            if l.contains(&v) {
                return Some((i, j));
            }
        }
    }
    None
}

/// First index i with i_P(U) - u_i in the lattice.
pub fn cover_single_query(l: &Lattice, u_vec: &IndexVector) -> Option<usize> {
    let r = l.dim();
    (0..r).find(|&i| l.contains(&u_vec.sub(&IndexVector::unit(r, i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{lattice_barrier, space_barrier};
    use crate::linalg::determinant_bareiss;
    use crate::rat;

    fn iv(c: &[i64]) -> IndexVector {
        IndexVector::new(c.to_vec())
    }

    #[test]
    fn index_vector_of_sets() {
        let p = Partition::new(
            6,
            VertexSet::new(vec![0]),
            vec![VertexSet::new(vec![1, 2]), VertexSet::new(vec![3, 4, 5])],
            0,
        )
        .unwrap();
        assert_eq!(p.index_vector(&[0, 1, 3]), iv(&[1, 1]));
        assert_eq!(p.index_vector(&[]), iv(&[0, 0]));
        assert_eq!(p.index_vector(&[0, 1, 2, 3, 4, 5]), iv(&[2, 3]));
    }

    #[test]
    fn lattice_generation_and_membership() {
        let l = Lattice::generate(2, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        assert!(l.contains(&iv(&[3, 3])));
        assert!(!l.contains(&iv(&[1, 2])));

        let l2 = Lattice::generate(2, &[iv(&[1, 2]), iv(&[2, 1])]).unwrap();
        assert!(l2.contains(&iv(&[-1, 1])));

        let zero = Lattice::generate(2, &[]).unwrap();
        assert!(zero.contains(&iv(&[0, 0])));
        assert!(!zero.contains(&iv(&[1, 0])));
    }

    #[test]
    fn lmax_membership_and_index() {
        let l1 = lmax(1, 3).unwrap();
        assert!(l1.contains(&iv(&[3])));
        assert!(l1.contains(&iv(&[-6])));
        assert!(!l1.contains(&iv(&[2])));

        let l2 = lmax(2, 3).unwrap();
        assert!(l2.contains(&iv(&[1, 2])));
        assert!(!l2.contains(&iv(&[1, 1])));

        for r in 1..=5 {
            for k in 2..=5 {
                let l = lmax(r, k).unwrap();
                assert_eq!(l.index_in_ambient(), Some(Int::from(k)), "r={} k={}", r, k);
                // second route: determinant of the defining basis
                let mut rows: Vec<Vec<Int>> = Vec::new();
                for i in 0..r - 1 {
                    let mut row = vec![Int::from(0); r];
                    row[i] = Int::from(1);
                    row[i + 1] = Int::from(-1);
                    rows.push(row);
                }
                let mut last = vec![Int::from(0); r];
                last[r - 1] = Int::from(k);
                rows.push(last);
                let det = determinant_bareiss(&rows);
                assert_eq!(num_traits::Signed::abs(&det), Int::from(k));
            }
        }
    }

    #[test]
    fn coset_group_orders() {
        let k = 3;
        let r = 2;
        let trivial = CosetGroup::new(&lmax(r, k).unwrap(), r, k).unwrap();
        assert_eq!(trivial.order_usize(), Some(1));

        let l = Lattice::generate(2, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        let q = CosetGroup::new(&l, 2, 3).unwrap();
        assert_eq!(q.order_usize(), Some(3));

        let deficient = Lattice::generate(2, &[iv(&[3, 0])]).unwrap();
        let qi = CosetGroup::new(&deficient, 2, 3).unwrap();
        assert!(!qi.is_finite());

        // a lattice escaping the ambient is rejected
        let escape = Lattice::generate(2, &[iv(&[1, 0])]).unwrap();
        assert!(CosetGroup::new(&escape, 2, 3).is_err());
    }

    #[test]
    fn residue_behavior() {
        let l = Lattice::generate(2, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        let q = CosetGroup::new(&l, 2, 3).unwrap();

        // lattice members map to the identity
        assert_eq!(q.residue(&iv(&[3, 0])).unwrap(), q.identity());
        assert_eq!(q.residue(&iv(&[3, 3])).unwrap(), q.identity());

        // the three k-vector classes are distinct
        let r0 = q.residue(&iv(&[0, 0])).unwrap();
        let r1 = q.residue(&iv(&[1, 2])).unwrap();
        let r2 = q.residue(&iv(&[2, 1])).unwrap();
        assert_ne!(r1, r2);
        assert_ne!(r1, r0);
        assert_ne!(r2, r0);

        // homomorphism: (1,2) + (2,1) = (3,3) in L
        assert_eq!(q.add(&r1, &r2), q.identity());

        // out-of-ambient vectors are rejected
        assert!(q.residue(&iv(&[1, 1])).is_err());
    }

    #[test]
    fn residue_is_homomorphism_on_random_vectors() {
        let l = Lattice::generate(3, &[iv(&[1, 2, 0]), iv(&[0, 1, 2]), iv(&[3, 0, 0])]).unwrap();
        let q = CosetGroup::new(&l, 3, 3).unwrap();
        let mut rng = crate::util::SplitMix64::new(5);
        for _ in 0..40 {
            let mut a: Vec<i64> = (0..3).map(|_| rng.next_below(9) as i64 - 4).collect();
            let mut b: Vec<i64> = (0..3).map(|_| rng.next_below(9) as i64 - 4).collect();
            // pad sums to multiples of k
            a[2] += (3 - (a.iter().sum::<i64>() % 3 + 3) % 3) % 3;
            b[2] += (3 - (b.iter().sum::<i64>() % 3 + 3) % 3) % 3;
            let (va, vb) = (iv(&a), iv(&b));
            let lhs = q.residue(&va.add(&vb)).unwrap();
            let rhs = q.add(&q.residue(&va).unwrap(), &q.residue(&vb).unwrap());
            assert_eq!(lhs, rhs, "a={:?} b={:?}", a, b);
        }
    }

    #[test]
    fn distinct_residues_bounded_by_group_order() {
        let l = Lattice::generate(2, &[iv(&[3, 0]), iv(&[1, 2])]).unwrap();
        let q = CosetGroup::new(&l, 2, 3).unwrap();
        let order = q.order_usize().unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..=3i64 {
            let v = iv(&[a, 3 - a]);
            seen.insert(q.residue(&v).unwrap());
        }
        assert!(seen.len() <= order);
    }

    #[test]
    fn transferral_examples() {
        let l = Lattice::generate(2, &[iv(&[1, 2]), iv(&[2, 1])]).unwrap();
        assert!(has_transferral(&l, 0, 1));

        let split = Lattice::generate(2, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        assert!(!has_transferral(&split, 0, 1));

        let zero = Lattice::zero(2);
        assert!(!has_transferral(&zero, 0, 1));
    }

    #[test]
    fn merge_transferral_examples() {
        let params = PipelineParams::default();

        // one clique split in half merges back into a single part
        let h = Hypergraph::complete(12, 3).unwrap();
        let p = Partition::new(
            12,
            VertexSet::empty(),
            vec![VertexSet::new((0..6).collect()), VertexSet::new((6..12).collect())],
            0,
        )
        .unwrap();
        let out = merge_transferral_parts(&h, &p, &params);
        assert_eq!(out.partition.r(), 1);
        assert_eq!(out.merges, vec![(0, 1)]);
        assert_eq!(out.merged_closedness, vec![true]);

        // two disjoint cliques stay apart
        let two = lattice_barrier(&[6, 6], 3, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        let p2 = Partition::new(
            12,
            VertexSet::empty(),
            vec![VertexSet::new((0..6).collect()), VertexSet::new((6..12).collect())],
            0,
        )
        .unwrap();
        let out = merge_transferral_parts(&two, &p2, &params);
        assert_eq!(out.partition.r(), 2);
        assert!(out.merges.is_empty());

        // single part untouched
        let out = merge_transferral_parts(&h, &Partition::trivial(12), &params);
        assert_eq!(out.partition.r(), 1);
        assert!(out.merges.is_empty());
    }

    #[test]
    fn robust_vector_examples() {
        let h = Hypergraph::complete(6, 3).unwrap();
        let p = Partition::trivial(6);
        let r = robust_vectors(&h, &p, &rat(1, 1000));
        assert_eq!(r.type1, vec![iv(&[3])]);
        assert!(r.type2.is_empty());

        // mu = 1 demands 216 edges; only 20 exist
        let r = robust_vectors(&h, &p, &rat(1, 1));
        assert!(r.is_empty());

        // space barrier over its natural split: (3,0) and (1,2) only
        let sb = space_barrier(6, 3).unwrap();
        let p2 = Partition::new(
            6,
            VertexSet::empty(),
            vec![VertexSet::new(vec![0, 1, 2]), VertexSet::new(vec![3, 4, 5])],
            0,
        )
        .unwrap();
        let r = robust_vectors(&sb, &p2, &rat(1, 1000));
        assert_eq!(r.type1, vec![iv(&[1, 2]), iv(&[3, 0])]);
        assert!(r.type2.is_empty());
    }

    #[test]
    fn coefficient_bound_examples() {
        // (6) = 2 * (3)
        assert_eq!(coefficient_bound(1, 3, &[iv(&[3])], 6, 8).unwrap(), 2);

        // all k-vectors: anything of weight k is itself a generator
        let all: Vec<IndexVector> = (0..=3).map(|a| iv(&[a, 3 - a])).collect();
        assert_eq!(coefficient_bound(2, 3, &all, 3, 8).unwrap(), 1);

        // (0,3) = 2*(1,2) - (2,1) forces a coefficient of 2
        assert_eq!(coefficient_bound(2, 3, &[iv(&[1, 2]), iv(&[2, 1])], 3, 8).unwrap(), 2);

        assert!(coefficient_bound(1, 3, &[], 3, 8).is_err());
        assert!(coefficient_bound(2, 3, &[iv(&[1, 1])], 3, 8).is_err());
    }

    #[test]
    fn coefficient_bound_cap_binds_explicitly() {
        match coefficient_bound(1, 3, &[iv(&[3])], 9, 2) {
            Err(Error::CoefficientCapExceeded { cap, .. }) => assert_eq!(cap, 2),
            other => panic!("expected cap error, got {:?}", other),
        }
    }

    #[test]
    fn solubility_examples() {
        // trivial partition, L = <(k)>, k | n: the empty matching solves
        let h = Hypergraph::complete(6, 3).unwrap();
        let p = Partition::trivial(6);
        let l = Lattice::generate(1, &[iv(&[3])]).unwrap();
        let m = is_soluble(&h, &p, &l, &VertexSet::empty(), 0).unwrap();
        assert!(m.is_empty());

        // space barrier: the Y-parity makes every budget insoluble
        let sb = space_barrier(6, 3).unwrap();
        let p2 = Partition::new(
            6,
            VertexSet::empty(),
            vec![VertexSet::new(vec![0, 1, 2]), VertexSet::new(vec![3, 4, 5])],
            0,
        )
        .unwrap();
        let robust = robust_vectors(&sb, &p2, &rat(1, 1000));
        let l2 = Lattice::generate(2, &robust.all()).unwrap();
        for q in 0..=3 {
            assert!(is_soluble(&sb, &p2, &l2, &VertexSet::empty(), q).is_none(), "q={}", q);
        }

        // covering one edge with budget zero
        let u = VertexSet::new(vec![0, 1, 2]);
        let m = is_soluble(&h, &p, &l, &u, 0).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.edges()[0], vec![0, 1, 2]);
    }

    #[test]
    fn solubility_returns_smallest() {
        let h = Hypergraph::complete(9, 3).unwrap();
        let p = Partition::trivial(9);
        // only multiples of 9 in the lattice: leftover must be empty or full
        let l = Lattice::generate(1, &[iv(&[9])]).unwrap();
        let m = is_soluble(&h, &p, &l, &VertexSet::empty(), 9).unwrap();
        assert!(m.is_empty()); // leftover (9) = 1*(9) works at size 0
    }

    #[test]
    fn residue_submultiset_matches_exhaustive_search() {
        let l = Lattice::generate(2, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        let q = CosetGroup::new(&l, 2, 3).unwrap();
        let order = q.order_usize().unwrap();
        let vectors = vec![iv(&[1, 2]), iv(&[2, 1]), iv(&[1, 2]), iv(&[3, 0]), iv(&[2, 1])];

        // exhaustive: which residues are achievable by subsets?
        let mut achievable: BTreeMap<Residue, usize> = BTreeMap::new();
        for mask in 0u32..(1 << vectors.len()) {
            let mut acc = q.identity();
            for (i, v) in vectors.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    acc = q.add(&acc, &q.residue(v).unwrap());
                }
            }
            let count = mask.count_ones() as usize;
            achievable
                .entry(acc)
                .and_modify(|c| *c = (*c).min(count))
                .or_insert(count);
        }

        for (target, _) in achievable.iter() {
            let subset = residue_submultiset(&q, &vectors, target).unwrap().unwrap();
            // verify the sum and the pigeonhole bound |subset| <= |Q| - 1
            let mut acc = q.identity();
            for &i in &subset {
                acc = q.add(&acc, &q.residue(&vectors[i]).unwrap());
            }
            assert_eq!(&acc, target);
            assert!(
                subset.len() < order,
                "subset {:?} for target {} too large (|Q|={})",
                subset,
                target,
                order
            );
        }
        // with these generators every residue is achievable
        assert_eq!(achievable.len(), order);
    }

    #[test]
    fn appendix_queries() {
        let l = Lattice::generate(2, &[iv(&[1, 2]), iv(&[2, 1])]).unwrap();
        // i_P(U) for |U| = k+2 = 5, say (2,3): (2,3)-u_i-u_j in L?
        assert_eq!(absorb_pair_query(&l, &iv(&[2, 3])), Some((0, 0)));
        // |U| = k+1 = 4: (2,2) - u_i in L?
        assert_eq!(cover_single_query(&l, &iv(&[2, 2])), Some(0));

        let split = Lattice::generate(2, &[iv(&[3, 0]), iv(&[0, 3])]).unwrap();
        assert_eq!(cover_single_query(&split, &iv(&[2, 2])), None);
    }

    #[test]
    fn robust_generators_stay_inside_lmax() {
        for seed in 0..8 {
            let h = crate::instances::random_kgraph(9, 3, &rat(1, 2), seed).unwrap();
            let Ok((p, _)) = crate::partition::build_partition(&h, &PipelineParams::default()) else {
                continue; // uncertified partitions are a legal desk-scale outcome
            };
            if p.r() == 0 {
                continue;
            }
            let robust = robust_vectors(&h, &p, &rat(1, 1000));
            let ambient = lmax(p.r(), 3).unwrap();
            for v in robust.all() {
                assert!(ambient.contains(&v), "{} escapes lmax", v);
            }
        }
    }
}
