//! Small combinatorial helpers shared across modules.

use crate::{Int, Rat};

/// Visit every `r`-subset of `0..n` in lexicographic order.
///
/// The visitor receives the current index tuple as a slice; returning `false`
/// aborts the enumeration early.
pub fn for_each_combination<F: FnMut(&[usize]) -> bool>(n: usize, r: usize, mut visit: F) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        // advance to the next lexicographic tuple
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Collect every `r`-subset of the given pool, in lexicographic order of
/// pool positions.
pub fn combinations_of<T: Copy>(pool: &[T], r: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for_each_combination(pool.len(), r, |idx| {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        true
    });
    out
}

/// Binomial coefficient as a `usize`; saturates on overflow only in debug
/// terms we never reach at desk scale.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Binomial coefficient as an arbitrary-precision integer.
pub fn binomial_big(n: usize, k: usize) -> Int {
    if k > n {
        return Int::from(0);
    }
    let k = k.min(n - k);
    let mut acc = Int::from(1);
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// `base^exp` as a big integer.
pub fn pow_big(base: usize, exp: usize) -> Int {
    num_traits::pow::pow(Int::from(base), exp)
}

/// Exact comparison `count >= threshold * scale` with `count`, `scale`
/// integers and `threshold` rational.
pub fn count_meets_threshold(count: usize, threshold: &Rat, scale: &Int) -> bool {
    Rat::from_integer(Int::from(count)) >= threshold * Rat::from_integer(scale.clone())
}

/// splitmix64: the documented PRNG contract for every seeded generator in
/// this crate. Same seed, same stream, on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` by rejection; `bound` must be nonzero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

/// Sorted-slice membership test.
pub fn sorted_contains(sorted: &[usize], v: usize) -> bool {
    sorted.binary_search(&v).is_ok()
}

/// Merge of two sorted, disjoint vertex lists.
pub fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
