//! Exact representation of k-uniform hypergraphs plus the brute-force
//! matching oracles that serve as ground truth for every other module.
//!
//! Everything here is canonical and deterministic: edges are strictly sorted
//! k-element lists, the edge list is sorted lexicographically, and the
//! backtracking searches branch on the least uncovered vertex so that
//! identical inputs always produce identical outputs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::{binomial, for_each_combination, sorted_contains};

/// Sorted list of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Canonicalizes: sorts and deduplicates.
    pub fn new(mut vs: Vec<usize>) -> Self {
        vs.sort_unstable();
        vs.dedup();
        VertexSet(vs)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        sorted_contains(&self.0, v)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    /// Elements of `self` not in `other`.
    pub fn minus(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn intersects(&self, other: &[usize]) -> bool {
        other.iter().any(|&v| self.contains(v))
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(vs: Vec<usize>) -> Self {
        VertexSet::new(vs)
    }
}

impl std::ops::Deref for VertexSet {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A k-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored as strictly sorted k-element lists, deduplicated and
/// globally sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, canonicalizing the edge list. Rejects edges with
    /// repeated or out-of-range vertices and k < 2.
    pub fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("uniformity k={} must be >= 2", k)));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != k {
                return Err(Error::invalid(format!(
                    "edge {:?} has {} vertices, expected {}",
                    e,
                    e.len(),
                    k
                )));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {:?} has repeated vertices", e)));
            }
            if *e.last().unwrap() >= n {
                return Err(Error::invalid(format!("edge {:?} out of range for n={}", e, n)));
            }
            canon.push(e);
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Hypergraph { n, k, edges: canon })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Hypergraph::new(n, k, Vec::new())
    }

    /// Complete k-graph on n vertices.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(binomial(n, k));
        for_each_combination(n, k, |idx| {
            edges.push(idx.to_vec());
            true
        });
        Hypergraph::new(n, k, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical-order lookup.
    pub fn has_edge(&self, e: &[usize]) -> bool {
        let mut s = e.to_vec();
        s.sort_unstable();
        self.edges.binary_search(&s).is_ok()
    }

    /// Number of edges containing every vertex of `s`. `|s|` must be at most k.
    pub fn degree(&self, s: &VertexSet) -> Result<usize> {
        if s.len() > self.k {
            return Err(Error::invalid(format!(
                "degree set has {} vertices but k={}",
                s.len(),
                self.k
            )));
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| s.iter().all(|&v| sorted_contains(e, v)))
            .count())
    }

    /// Minimum degree over all `l`-subsets of the vertex set. `l = 0` returns
    /// the edge count.
    pub fn min_l_degree(&self, l: usize) -> Result<usize> {
        if l >= self.k {
            return Err(Error::invalid(format!("l={} must satisfy 0 <= l <= k-1={}", l, self.k - 1)));
        }
        if l == 0 {
            return Ok(self.edges.len());
        }
        let mut min = usize::MAX;
        for_each_combination(self.n, l, |idx| {
            let d = self
                .edges
                .iter()
                .filter(|e| idx.iter().all(|&v| sorted_contains(e, v)))
                .count();
            if d < min {
                min = d;
            }
            min > 0 // zero is already the global minimum
        });
        if min == usize::MAX {
            min = 0; // no l-subsets (n < l)
        }
        Ok(min)
    }

    /// Bitmasks of the edges; requires n <= 128 (the desk-scale searches all
    /// go through masks).
    fn edge_masks(&self) -> Vec<u128> {
        assert!(self.n <= 128, "mask-based search supports n <= 128 (n={})", self.n);
        self.edges
            .iter()
            .map(|e| e.iter().fold(0u128, |m, &v| m | (1u128 << v)))
            .collect()
    }

    fn edges_by_vertex(&self) -> Vec<Vec<usize>> {
        let mut by_v = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                by_v[v].push(i);
            }
        }
        by_v
    }

    /// A perfect matching if one exists, found by exhaustive backtracking on
    /// the least uncovered vertex; `None` otherwise. `k` not dividing `n`
    /// short-circuits to `None`.
    pub fn perfect_matching_oracle(&self) -> Option<Matching> {
        if self.n % self.k != 0 {
            return None;
        }
        if self.n == 0 {
            return Some(Matching { edges: Vec::new() });
        }
        let masks = self.edge_masks();
        let by_v = self.edges_by_vertex();
        let full: u128 = if self.n == 128 { !0 } else { (1u128 << self.n) - 1 };
        let mut chosen: Vec<usize> = Vec::new();
        let mut dead: std::collections::HashSet<u128> = std::collections::HashSet::new();

        fn go(
            covered: u128,
            full: u128,
            masks: &[u128],
            by_v: &[Vec<usize>],
            chosen: &mut Vec<usize>,
            dead: &mut std::collections::HashSet<u128>,
        ) -> bool {
            if covered == full {
                return true;
            }
            if dead.contains(&covered) {
                return false;
            }
            let v = (!covered).trailing_zeros() as usize;
            for &ei in &by_v[v] {
                if masks[ei] & covered == 0 {
                    chosen.push(ei);
                    if go(covered | masks[ei], full, masks, by_v, chosen, dead) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            dead.insert(covered);
            false
        }

        if go(0, full, &masks, &by_v, &mut chosen, &mut dead) {
            let m = Matching {
                edges: chosen.iter().map(|&i| self.edges[i].clone()).collect(),
            };
            debug_assert!(m.is_valid(self) && m.is_perfect(self));
            Some(m)
        } else {
            None
        }
    }

    /// A maximum-cardinality matching, deterministic via branch-and-bound on
    /// the least unprocessed vertex with memoized state values.
    pub fn max_matching(&self) -> Matching {
        if self.n == 0 || self.edges.is_empty() {
            return Matching { edges: Vec::new() };
        }
        let masks = self.edge_masks();
        let by_v = self.edges_by_vertex();
        let full: u128 = if self.n == 128 { !0 } else { (1u128 << self.n) - 1 };
        let mut memo: HashMap<u128, usize> = HashMap::new();

        // best(state) = max number of edges placeable when `state` marks
        // vertices that are covered or given up on
        fn best(
            state: u128,
            full: u128,
            masks: &[u128],
            by_v: &[Vec<usize>],
            memo: &mut HashMap<u128, usize>,
        ) -> usize {
            if state == full {
                return 0;
            }
            if let Some(&b) = memo.get(&state) {
                return b;
            }
            let v = (!state).trailing_zeros() as usize;
            // skipping v means no edge through v is ever used
            let mut b = best(state | (1u128 << v), full, masks, by_v, memo);
            for &ei in &by_v[v] {
                if masks[ei] & state == 0 {
                    let cand = 1 + best(state | masks[ei], full, masks, by_v, memo);
                    if cand > b {
                        b = cand;
                    }
                }
            }
            memo.insert(state, b);
            b
        }

        let target = best(0, full, &masks, &by_v, &mut memo);
        // replay: prefer the first edge in canonical order attaining the
        // optimum, skip only when no edge does
        let mut state: u128 = 0;
        let mut picked = Vec::new();
        while state != full && picked.len() < target {
            let v = (!state).trailing_zeros() as usize;
            let remaining = target - picked.len();
            let mut advanced = false;
            for &ei in &by_v[v] {
                if masks[ei] & state == 0
                    && 1 + best(state | masks[ei], full, &masks, &by_v, &mut memo) == remaining
                {
                    picked.push(ei);
                    state |= masks[ei];
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                state |= 1u128 << v;
            }
        }
        let m = Matching {
            edges: picked.iter().map(|&i| self.edges[i].clone()).collect(),
        };
        debug_assert!(m.is_valid(self));
        debug_assert_eq!(m.edges.len(), target);
        m
    }

    /// Sub-hypergraph induced on `u`, relabeled to `0..|u|`. The second
    /// component maps new ids back to original vertex ids.
    pub fn induced(&self, u: &VertexSet) -> (Hypergraph, Vec<usize>) {
        debug_assert!(u.iter().all(|&v| v < self.n));
        let map: HashMap<usize, usize> = u.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|v| map.contains_key(v)))
            .map(|e| e.iter().map(|v| map[v]).collect())
            .collect();
        let h = Hypergraph::new(u.len(), self.k, edges).expect("induced edges are valid");
        (h, u.as_slice().to_vec())
    }

    /// Shared repo-wide text format: first line `k n m`, then `m` lines of
    /// `k` space-separated vertex ids.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.n, self.edges.len());
        for e in &self.edges {
            let words: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| Error::Parse(format!("bad header token {:?}", w))))
            .collect::<Result<_>>()?;
        if head.len() != 3 {
            return Err(Error::Parse(format!("header must be `k n m`, got {:?}", header)));
        }
        let (k, n, m) = (head[0], head[1], head[2]);
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let line = lines.next().ok_or_else(|| Error::Parse("missing edge line".into()))?;
            let e: Vec<usize> = line
                .split_whitespace()
                .map(|w| w.parse().map_err(|_| Error::Parse(format!("bad vertex {:?}", w))))
                .collect::<Result<_>>()?;
            edges.push(e);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after edge list".into()));
        }
        let h = Hypergraph::new(n, k, edges).map_err(|e| Error::Parse(e.to_string()))?;
        if h.num_edges() != m {
            return Err(Error::Parse(format!(
                "edge list contains duplicates: {} declared, {} distinct",
                m,
                h.num_edges()
            )));
        }
        Ok(h)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// A set of pairwise vertex-disjoint edges of a host hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    edges: Vec<Vec<usize>>,
}

impl Matching {
    /// Canonicalizes (sorts edges) and checks disjointness and membership in
    /// the host.
    pub fn new(host: &Hypergraph, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut canon: Vec<Vec<usize>> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        canon.sort_unstable();
        let m = Matching { edges: canon };
        if !m.is_valid(host) {
            return Err(Error::invalid("edges are not a matching in the host"));
        }
        Ok(m)
    }

    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Pairwise disjoint and every edge present in the host.
    pub fn is_valid(&self, host: &Hypergraph) -> bool {
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            if !host.has_edge(e) {
                return false;
            }
            for &v in e {
                if !seen.insert(v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn covered_vertices(&self) -> VertexSet {
        VertexSet::new(self.edges.iter().flatten().copied().collect())
    }

    pub fn is_perfect(&self, host: &Hypergraph) -> bool {
        self.covered_vertices().len() == host.n()
    }
}
