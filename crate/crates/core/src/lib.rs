//! Exact, desk-scale machinery for deciding the existence of perfect matchings
//! in dense k-uniform hypergraphs.
//!
//! The library is organized around one pipeline: partition the vertex set by
//! reachability, extract the robust edge vectors and the integer lattice they
//! generate, test solubility of the leftover residue in the coset group, and
//! either construct a perfect matching by absorption or emit an insolubility
//! certificate. Exhaustive backtracking oracles and an exact-rational LP act
//! as ground truth for everything else.
//!
//! All decisions (lattice membership, LP optimality, thresholds) are made in
//! exact arithmetic. The numeric kernels in [`simplex`] and [`linalg`] are
//! generic over the scalar type via `num-traits`; the concrete instantiations
//! used throughout are the crate-root aliases [`Int`] and [`Rat`].

pub mod absorption;
pub mod error;
pub mod fractional;
pub mod hypergraph;
pub mod instances;
pub mod lattice;
pub mod linalg;
pub mod partition;
pub mod pipeline;
pub mod reachability;
pub mod scalar;
pub mod simplex;
pub mod util;

/// Arbitrary-precision integer used for all lattice arithmetic.
pub type Int = num_bigint::BigInt;

/// Exact big-integer rational used for all thresholds and LP arithmetic.
pub type Rat = num_rational::Ratio<Int>;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, Matching, VertexSet};
pub use partition::{Partition, PipelineParams};

/// Convenience constructor for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}
