//! Integer linear algebra over a generic Euclidean ring scalar: Hermite
//! normal form for lattice membership, Smith normal form for quotient
//! structure, and a fraction-free determinant as an independent route for
//! index computations.

use crate::scalar::RingInt;

/// Row-style Hermite normal form of the span of `rows` in `Z^dim`.
///
/// The result is the canonical basis: echelon rows with positive pivots,
/// entries above each pivot reduced into `[0, pivot)`. Zero input rows are
/// dropped.
pub fn hermite_normal_form<T: RingInt>(rows: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    let mut work: Vec<Vec<T>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    for r in &work {
        assert_eq!(r.len(), dim, "generator has wrong dimension");
    }
    let mut basis: Vec<Vec<T>> = Vec::new();
    for col in 0..dim {
        loop {
            // row with minimal nonzero |entry| in this column
            let mut min_i: Option<usize> = None;
            for (i, r) in work.iter().enumerate() {
                if !r[col].is_zero() {
                    min_i = match min_i {
                        None => Some(i),
                        Some(j) if r[col].abs() < work[j][col].abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(mi) = min_i else { break };
            let pivot = work[mi].clone();
            let mut all_cleared = true;
            for i in 0..work.len() {
                if i == mi || work[i][col].is_zero() {
                    continue;
                }
                let q = work[i][col].div_floor(&pivot[col]);
                for c in 0..dim {
                    let sub = q.clone() * pivot[c].clone();
                    work[i][c] = work[i][c].clone() - sub;
                }
                if !work[i][col].is_zero() {
                    all_cleared = false;
                }
            }
            if all_cleared {
                let mut piv = work.swap_remove(mi);
                if piv[col].is_negative() {
                    for c in 0..dim {
                        piv[c] = T::zero() - piv[c].clone();
                    }
                }
                basis.push(piv);
                work.retain(|r| r.iter().any(|x| !x.is_zero()));
                break;
            }
        }
    }
    // reduce entries above each pivot into [0, pivot)
    for j in 0..basis.len() {
        let c = basis[j].iter().position(|x| !x.is_zero()).unwrap();
        for i in 0..j {
            if basis[i][c].is_zero() {
                continue;
            }
            let q = basis[i][c].div_floor(&basis[j][c]);
            if q.is_zero() {
                continue;
            }
            for cc in 0..basis[j].len() {
                let sub = q.clone() * basis[j][cc].clone();
                basis[i][cc] = basis[i][cc].clone() - sub;
            }
        }
    }
    basis
}

/// Reduces `v` against an HNF basis. Returns the residual vector; the zero
/// residual means `v` lies in the spanned lattice.
pub fn reduce_by_hnf<T: RingInt>(basis: &[Vec<T>], v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    for row in basis {
        let c = row.iter().position(|x| !x.is_zero()).unwrap();
        if v[c].is_zero() {
            continue;
        }
        let (q, rem) = v[c].div_rem(&row[c]);
        if rem.is_zero() {
            for cc in 0..v.len() {
                let sub = q.clone() * row[cc].clone();
                v[cc] = v[cc].clone() - sub;
            }
        }
        // a nonzero remainder leaves v[c] standing; the caller sees a
        // nonzero residual
    }
    v
}

pub fn hnf_contains<T: RingInt>(basis: &[Vec<T>], v: &[T]) -> bool {
    reduce_by_hnf(basis, v).iter().all(|x| x.is_zero())
}

/// Smith normal form of the subgroup spanned by `rows` in `Z^dim`.
///
/// Returns `(divisors, col_transform)`: `divisors` has length `dim` with
/// `d_1 | d_2 | ...` followed by zeros for the co-rank, and `col_transform`
/// is the unimodular `V` such that the map `x -> x V` carries the subgroup
/// onto `⊕ d_i Z`. Quotient coordinates of `x` are `(x V) mod d` entrywise.
pub fn smith_normal_form<T: RingInt>(rows: &[Vec<T>], dim: usize) -> (Vec<T>, Vec<Vec<T>>) {
    let mut a: Vec<Vec<T>> = rows.to_vec();
    for r in &a {
        assert_eq!(r.len(), dim);
    }
    let nrows = a.len();
    // V starts as the identity and accumulates every column operation
    let mut v: Vec<Vec<T>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();

    let mut t = 0usize;
    while t < nrows.min(dim) {
        // locate minimal nonzero |entry| in the trailing submatrix
        let mut min_pos: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..dim {
                if !a[i][j].is_zero() {
                    min_pos = match min_pos {
                        None => Some((i, j)),
                        Some((pi, pj)) if a[i][j].abs() < a[pi][pj].abs() => Some((i, j)),
                        keep => keep,
                    };
                }
            }
        }
        let Some((pi, pj)) = min_pos else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }

        'reduce: loop {
            // clear column t with row operations
            for i in 0..nrows {
                if i == t || a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for c in 0..dim {
                    let sub = q.clone() * a[t][c].clone();
                    a[i][c] = a[i][c].clone() - sub;
                }
                if !a[i][t].is_zero() {
                    // remainder is strictly smaller: swap it into the pivot
                    a.swap(t, i);
                    continue 'reduce;
                }
            }
            // clear row t with column operations, mirrored on V
            for j in 0..dim {
                if j == t || a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in 0..nrows {
                    let sub = q.clone() * a[i][t].clone();
                    a[i][j] = a[i][j].clone() - sub;
                }
                for i in 0..dim {
                    let sub = q.clone() * v[i][t].clone();
                    v[i][j] = v[i][j].clone() - sub;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    continue 'reduce;
                }
            }
            // divisibility: the pivot must divide everything that remains
            let mut fixed = true;
            'scan: for i in t + 1..nrows {
                for j in t + 1..dim {
                    if !a[i][j].mod_floor(&a[t][t]).is_zero() {
                        // fold that row in and restart the reduction
                        for c in 0..dim {
                            let add = a[i][c].clone();
                            a[t][c] = a[t][c].clone() + add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t].is_negative() {
            for c in 0..dim {
                a[t][c] = T::zero() - a[t][c].clone();
            }
        }
        t += 1;
    }

    let mut divisors = Vec::with_capacity(dim);
    for i in 0..dim {
        if i < t {
            divisors.push(a[i][i].clone());
        } else {
            divisors.push(T::zero());
        }
    }
    (divisors, v)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix. Used as a
/// second route for lattice index checks, independent of the normal forms.
pub fn determinant_bareiss<T: RingInt>(m: &[Vec<T>]) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut sign = T::one();
    let mut prev = T::one();
    for t in 0..n - 1 {
        if a[t][t].is_zero() {
            let Some(swap) = (t + 1..n).find(|&i| !a[i][t].is_zero()) else {
                return T::zero();
            };
            a.swap(t, swap);
            sign = T::zero() - sign;
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let num = a[i][j].clone() * a[t][t].clone() - a[i][t].clone() * a[t][j].clone();
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][t] = T::zero();
        }
        prev = a[t][t].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
