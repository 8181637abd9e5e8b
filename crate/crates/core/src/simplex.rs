//! Dense two-phase primal simplex over a generic ordered-field scalar, with
//! Bland's rule throughout. Instantiated with big rationals everywhere in
//! this crate, which makes every optimum exact; the kernel itself has no
//! opinion about the scalar.

use crate::scalar::LpScalar;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, solution: Vec<T> },
    Infeasible,
    Unbounded,
}

/// Maximizes `c . x` subject to `A x <= b`, `x >= 0`.
///
/// Rows with negative right-hand sides get artificial variables and a
/// phase-1 feasibility pass. Variable order is the input order, and Bland's
/// rule picks the lowest admissible index, so the run is deterministic.
pub fn solve_max<T: LpScalar>(a: &[Vec<T>], b: &[T], c: &[T]) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    for row in a {
        assert_eq!(row.len(), n, "constraint row arity mismatch");
    }
    assert_eq!(b.len(), m);

    if n == 0 {
        return if b.iter().all(|bi| *bi >= T::zero()) {
            LpOutcome::Optimal { value: T::zero(), solution: Vec::new() }
        } else {
            LpOutcome::Infeasible
        };
    }

    // columns: structural 0..n, slack n..n+m, artificial n+m..
    let neg_rows: Vec<usize> = (0..m).filter(|&i| b[i] < T::zero()).collect();
    let n_art = neg_rows.len();
    let total = n + m + n_art;

    // tableau rows: equality system with slacks (and artificials on negated rows)
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut art_seen = 0usize;
    for i in 0..m {
        let negate = b[i] < T::zero();
        let mut row: Vec<T> = vec![T::zero(); total];
        for j in 0..n {
            row[j] = if negate { T::zero() - a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = if negate { T::zero() - T::one() } else { T::one() };
        if negate {
            row[n + m + art_seen] = T::one();
            basis.push(n + m + art_seen);
            art_seen += 1;
            rhs.push(T::zero() - b[i].clone());
        } else {
            basis.push(n + i);
            rhs.push(b[i].clone());
        }
        t.push(row);
    }

    fn pivot<T: LpScalar>(
        t: &mut [Vec<T>],
        rhs: &mut [T],
        basis: &mut [usize],
        obj_row: &mut [T],
        r: usize,
        col: usize,
    ) {
        let p = t[r][col].clone();
        for x in t[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        rhs[r] = rhs[r].clone() / p;
        for i in 0..t.len() {
            if i == r {
                continue;
            }
            let f = t[i][col].clone();
            if f == T::zero() {
                continue;
            }
            for j in 0..t[i].len() {
                if t[r][j] != T::zero() {
                    let delta = f.clone() * t[r][j].clone();
                    t[i][j] = t[i][j].clone() - delta;
                }
            }
            let delta = f * rhs[r].clone();
            rhs[i] = rhs[i].clone() - delta;
        }
        let f = obj_row[col].clone();
        if f != T::zero() {
            for j in 0..obj_row.len() {
                if t[r][j] != T::zero() {
                    let delta = f.clone() * t[r][j].clone();
                    obj_row[j] = obj_row[j].clone() - delta;
                }
            }
        }
        basis[r] = col;
    }

    // reduced-cost row priced out against the current basis
    fn build_obj_row<T: LpScalar>(
        t: &[Vec<T>],
        basis: &[usize],
        obj: &dyn Fn(usize) -> T,
        ncols: usize,
    ) -> Vec<T> {
        let mut row: Vec<T> = (0..ncols).map(|j| obj(j)).collect();
        for (i, trow) in t.iter().enumerate() {
            let coef = obj(basis[i]);
            if coef != T::zero() {
                for j in 0..ncols {
                    if trow[j] != T::zero() {
                        let delta = coef.clone() * trow[j].clone();
                        row[j] = row[j].clone() - delta;
                    }
                }
            }
        }
        row
    }

    // Bland: entering = lowest index with positive reduced cost; leaving =
    // min ratio, ties by lowest basis variable index. Returns false on
    // unboundedness.
    fn run<T: LpScalar>(
        t: &mut [Vec<T>],
        rhs: &mut [T],
        basis: &mut [usize],
        obj_row: &mut [T],
    ) -> bool {
        loop {
            let Some(col) = (0..obj_row.len()).find(|&j| obj_row[j] > T::zero()) else {
                return true;
            };
            let mut leave: Option<usize> = None;
            for i in 0..t.len() {
                if t[i][col] > T::zero() {
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            let lhs = rhs[i].clone() * t[l][col].clone();
                            let rhs_v = rhs[l].clone() * t[i][col].clone();
                            lhs < rhs_v || (lhs == rhs_v && basis[i] < basis[l])
                        }
                    };
                    if better {
                        leave = Some(i);
                    }
                }
            }
            let Some(row) = leave else { return false };
            pivot(t, rhs, basis, obj_row, row, col);
        }
    }

    if n_art > 0 {
        // phase 1: maximize -(sum of artificials)
        let phase1 = |j: usize| -> T {
            if j >= n + m {
                T::zero() - T::one()
            } else {
                T::zero()
            }
        };
        let mut obj_row = build_obj_row(&t, &basis, &phase1, total);
        run(&mut t, &mut rhs, &mut basis, &mut obj_row);
        let mut infeas = T::zero();
        for (i, &bv) in basis.iter().enumerate() {
            if bv >= n + m {
                infeas = infeas + rhs[i].clone();
            }
        }
        if infeas != T::zero() {
            return LpOutcome::Infeasible;
        }
        // drive leftover artificials out of the basis
        for i in 0..m {
            if basis[i] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| t[i][j] != T::zero()) {
                    pivot(&mut t, &mut rhs, &mut basis, &mut obj_row, i, col);
                }
                // an all-zero row is redundant; its artificial stays basic at 0
            }
        }
        // artificial columns are dead from here on
        for row in t.iter_mut() {
            row.truncate(n + m);
        }
    }

    // phase 2 over structural + slack columns only
    let phase2 = |j: usize| -> T {
        if j < n {
            c[j].clone()
        } else {
            T::zero()
        }
    };
    let mut obj_row = build_obj_row(&t, &basis, &phase2, n + m);
    if !run(&mut t, &mut rhs, &mut basis, &mut obj_row) {
        return LpOutcome::Unbounded;
    }

    let mut solution = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            solution[bv] = rhs[i].clone();
        }
    }
    let mut value = T::zero();
    for j in 0..n {
        value = value + c[j].clone() * solution[j].clone();
    }
    LpOutcome::Optimal { value, solution }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, Rat};

    fn r(n: i64, d: i64) -> Rat {
        rat(n, d)
    }

    #[test]
    fn simple_maximization() {
        // max x + y st x <= 2, y <= 3, x + y <= 4
        let a = vec![
            vec![r(1, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 1), r(1, 1)],
        ];
        let b = vec![r(2, 1), r(3, 1), r(4, 1)];
        let c = vec![r(1, 1), r(1, 1)];
        match solve_max(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(4, 1)),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn phase_one_feasibility() {
        // min y1 + y2 st y1 + y2 >= 1, y >= 0, as max -(y1+y2) with -y1-y2 <= -1
        let a = vec![vec![r(-1, 1), r(-1, 1)]];
        let b = vec![r(-1, 1)];
        let c = vec![r(-1, 1), r(-1, 1)];
        match solve_max(&a, &b, &c) {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, r(-1, 1));
                assert_eq!(solution.iter().cloned().fold(r(0, 1), |s, x| s + x), r(1, 1));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x <= 1 and -x <= -2 (x >= 2)
        let a = vec![vec![r(1, 1)], vec![r(-1, 1)]];
        let b = vec![r(1, 1), r(-2, 1)];
        let c = vec![r(0, 1)];
        assert_eq!(solve_max(&a, &b, &c), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // max x with only -x <= 0
        let a = vec![vec![r(-1, 1)]];
        let b = vec![r(0, 1)];
        let c = vec![r(1, 1)];
        assert_eq!(solve_max(&a, &b, &c), LpOutcome::Unbounded);
    }

    #[test]
    fn kernel_is_scalar_generic() {
        // same LP over f64: the kernel only needs an ordered field
        let a: Vec<Vec<f64>> = vec![vec![1.0, 1.0]];
        let b = vec![1.0];
        let c = vec![1.0, 2.0];
        match solve_max(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert!((value - 2.0).abs() < 1e-12),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn empty_lp() {
        let out: LpOutcome<Rat> = solve_max(&[], &[], &[]);
        assert_eq!(
            out,
            LpOutcome::Optimal { value: r(0, 1), solution: vec![] }
        );
    }
}
