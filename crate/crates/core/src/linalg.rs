//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rat::Rat;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rat::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Rat>], ncols: usize) -> usize {
    let mut work = m.to_vec();
    rref(&mut work, ncols).len()
}

/// Basis of `{x : Mx = 0}`, itself in reduced echelon form (the first
/// nonzero coordinate of each vector is 1, leading positions increase).
pub fn kernel(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[r][free].clone();
        }
        basis.push(v);
    }
    let k = rref(&mut basis, ncols).len();
    basis.truncate(k);
    for v in &basis {
        debug_assert!(mat_vec(m, v).iter().all(Zero::is_zero));
    }
    basis
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Whether `v` lies in the row span of `basis`.
pub fn in_span(basis: &[Vec<Rat>], v: &[Rat], ncols: usize) -> bool {
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    rank(&with, ncols) == rank(basis, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let z = m(&[&[0, 0, 0]]);
        assert_eq!(kernel(&z, 3).len(), 3);
        assert_eq!(kernel(&[], 2).len(), 2);
    }

    #[test]
    fn bidiagonal_nonzero_diagonal_has_line_kernel() {
        let a = m(&[&[2, 3, 0], &[0, 5, -1]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![int(1), rat(-2, 3), rat(-10, 3)]);
    }

    #[test]
    fn kernel_is_echelon() {
        let a = m(&[&[0, 1, 1, 0]]);
        let k = kernel(&a, 4);
        assert_eq!(k.len(), 3);
        assert_eq!(k[0][0], int(1));
        assert_eq!(k[1][0], int(0));
        assert_eq!(k[1][1], int(1));
        assert_eq!(k[1][2], int(-1));
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 12), ncols in 1usize..5) {
            let nrows = 12 / ncols;
            let a: Vec<Vec<Rat>> = (0..nrows)
                .map(|r| (0..ncols).map(|c| int(entries[r * ncols + c])).collect())
                .collect();
            let k = kernel(&a, ncols);
            prop_assert_eq!(k.len() + rank(&a, ncols), ncols);
            for v in &k {
                prop_assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
            }
        }
    }
}
