//! Scalar trait bounds for the generic numeric kernels.
//!
//! The simplex and integer-lattice kernels do not care which concrete scalar
//! they run on, only that it behaves like an ordered field or a Euclidean
//! integer ring. The crate-root aliases `Int` and `Rat` are the
//! instantiations used by the rest of the library; `f64` also satisfies
//! [`LpScalar`] for quick-and-dirty experiments, but nothing in the decision
//! pipeline uses it.

use num_traits::{Num, Signed};

/// Ordered-field scalar for the LP kernel.
pub trait LpScalar: Num + Signed + PartialOrd + Clone + std::fmt::Debug {}

impl<T> LpScalar for T where T: Num + Signed + PartialOrd + Clone + std::fmt::Debug {}

/// Euclidean integer scalar for the lattice kernel (HNF/SNF).
pub trait RingInt:
    num_integer::Integer + Signed + Clone + std::fmt::Debug + for<'a> std::ops::AddAssign<&'a Self>
{
}

impl<T> RingInt for T where
    T: num_integer::Integer + Signed + Clone + std::fmt::Debug + for<'a> std::ops::AddAssign<&'a T>
{
}
