//! Exact-rational LP feasibility for perfect fractional matchings, the dual
//! vertex-cover LP, and the conjectured degree threshold formula.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::simplex::{solve_max, LpOutcome};
use crate::{Int, Rat};

/// Edge weights of a fractional matching, aligned with the host's canonical
/// edge order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FractionalMatching {
    weights: Vec<Rat>,
}

impl FractionalMatching {
    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn size(&self) -> Rat {
        self.weights.iter().cloned().sum()
    }

    pub fn as_map(&self, host: &Hypergraph) -> BTreeMap<Vec<usize>, Rat> {
        host.edges()
            .iter()
            .cloned()
            .zip(self.weights.iter().cloned())
            .filter(|(_, w)| w != &Rat::from_integer(0.into()))
            .collect()
    }

    /// Exact constraint check: weights in [0,1] and per-vertex sums at most 1.
    pub fn verify(&self, host: &Hypergraph) -> bool {
        let zero = Rat::from_integer(0.into());
        let one = Rat::from_integer(1.into());
        if self.weights.len() != host.num_edges() {
            return false;
        }
        if self.weights.iter().any(|w| w < &zero || w > &one) {
            return false;
        }
        let mut per_vertex = vec![zero.clone(); host.n()];
        for (e, w) in host.edges().iter().zip(&self.weights) {
            for &v in e {
                per_vertex[v] = per_vertex[v].clone() + w.clone();
            }
        }
        per_vertex.iter().all(|s| s <= &one)
    }

    pub fn is_perfect(&self, host: &Hypergraph) -> bool {
        self.size() == Rat::new(Int::from(host.n()), Int::from(host.k()))
    }
}

/// Exact optimum of the fractional matching LP together with a verified
/// witness. The explicit edge caps w(e) <= 1 are implied by the vertex
/// constraints (every edge has a vertex), so the LP solves without them and
/// the witness is re-checked against all three constraint families.
pub fn max_fractional_matching(h: &Hypergraph) -> (Rat, FractionalMatching) {
    let n_edges = h.num_edges();
    if n_edges == 0 {
        return (
            Rat::from_integer(0.into()),
            FractionalMatching { weights: Vec::new() },
        );
    }
    let zero = Rat::from_integer(0.into());
    let one = Rat::from_integer(1.into());
    // rows: per-vertex sums <= 1
    let mut a = vec![vec![zero.clone(); n_edges]; h.n()];
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e {
            a[v][j] = one.clone();
        }
    }
    let b = vec![one.clone(); h.n()];
    let c = vec![one.clone(); n_edges];
    match solve_max(&a, &b, &c) {
        LpOutcome::Optimal { value, solution } => {
            let fm = FractionalMatching { weights: solution };
            assert!(fm.verify(h), "LP witness failed exact verification");
            assert_eq!(fm.size(), value, "LP value disagrees with re-summed witness");
            (value, fm)
        }
        other => unreachable!("matching LP is feasible and bounded, got {:?}", other),
    }
}

pub fn has_perfect_fractional_matching(h: &Hypergraph) -> bool {
    let (value, _) = max_fractional_matching(h);
    value == Rat::new(Int::from(h.n()), Int::from(h.k()))
}

/// Exact optimum of the dual LP: minimum fractional vertex cover. An
/// independent route to the same optimum for duality spot-checks.
pub fn min_fractional_vertex_cover(h: &Hypergraph) -> Rat {
    if h.num_edges() == 0 {
        return Rat::from_integer(0.into());
    }
    let zero = Rat::from_integer(0.into());
    let one = Rat::from_integer(1.into());
    // min sum(y) st for each edge: sum_{v in e} y_v >= 1, y >= 0
    // as max -sum(y) st -sum_{v in e} y_v <= -1
    let mut a = vec![vec![zero.clone(); h.n()]; h.num_edges()];
    for (i, e) in h.edges().iter().enumerate() {
        for &v in e {
            a[i][v] = -one.clone();
        }
    }
    let b = vec![-one.clone(); h.num_edges()];
    let c = vec![-one.clone(); h.n()];
    match solve_max(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => -value,
        other => unreachable!("cover LP is feasible and bounded, got {:?}", other),
    }
}

/// The conjectured fractional-threshold coefficient 1 - ((k-1)/k)^(k-l),
/// exact. Requires 1 <= l <= k-1.
pub fn conjectured_cstar(k: usize, l: usize) -> Result<Rat> {
    if l < 1 || l >= k {
        return Err(Error::invalid(format!("need 1 <= l <= k-1, got l={} k={}", l, k)));
    }
    let frac = Rat::new(Int::from(k as i64 - 1), Int::from(k as i64));
    let mut pow = Rat::from_integer(1.into());
    for _ in 0..k - l {
        pow = pow * frac.clone();
    }
    Ok(Rat::from_integer(1.into()) - pow)
}
