//! Symmetric permutation that turns the `[[A, B], [C, D]]` Jacobian with
//! diagonal blocks into a block-diagonal matrix of 2x2 blocks.
//!
//! Columns `2q−1` and `2q` of `U` pick rows `{i, P+i}` for some `i`, so
//! `Uᵀ M U` collects each `(i, P+i)` coupling into one diagonal block.
//! The construction follows the odd/even case split; for odd `P` the
//! pairing entry `(p, 2P−p)` is mirrored to `(2P−p, p)`, and for even `P`
//! the off-diagonal pairing sits at `(P+p, p+1)` and `(p+1, P+p)`. Both
//! choices reproduce the reference 6x6 and 8x8 instances exactly.

use nalgebra::DMatrix;

use crate::{Error, Result};

pub fn permutation_matrix(p_dim: usize) -> Result<DMatrix<f64>> {
    if p_dim == 0 {
        return Err(Error::invalid("permutation size P must be at least 1"));
    }
    let n = 2 * p_dim;
    let big_p = p_dim;
    let mut u = DMatrix::zeros(n, n);
    // 1-indexed setter
    let mut set = |row: usize, col: usize, on: bool| {
        if on {
            u[(row - 1, col - 1)] = 1.0;
        }
    };
    for p in 1..=big_p {
        let odd = p % 2 == 1;
        if big_p % 2 == 1 {
            set(big_p - p + 1, p, !odd);
            set(big_p + p, 2 * big_p - p + 1, odd);
            set(p, 2 * big_p - p, odd);
            set(2 * big_p - p, p, odd);
        } else {
            set(p, p, odd);
            set(big_p + p, big_p + p, !odd);
            set(big_p + p, p + 1, odd);
            set(p + 1, big_p + p, odd);
        }
    }
    Ok(u)
}

/// Exactly one unit entry per row and per column, zeros elsewhere.
pub fn is_permutation_matrix(u: &DMatrix<f64>) -> bool {
    if !u.is_square() {
        return false;
    }
    if u.iter().any(|&x| x != 0.0 && x != 1.0) {
        return false;
    }
    let rows_ok = (0..u.nrows()).all(|i| u.row(i).iter().filter(|&&x| x == 1.0).count() == 1);
    let cols_ok = (0..u.ncols()).all(|j| u.column(j).iter().filter(|&&x| x == 1.0).count() == 1);
    rows_ok && cols_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Builds a matrix from the 1-indexed column of the unit entry in each row.
    fn from_row_ones(cols: &[usize]) -> DMatrix<f64> {
        let n = cols.len();
        let mut m = DMatrix::zeros(n, n);
        for (r, &c) in cols.iter().enumerate() {
            m[(r, c - 1)] = 1.0;
        }
        m
    }

    #[test]
    fn reproduces_reference_p3() {
        let expected = from_row_ones(&[5, 2, 3, 6, 1, 4]);
        assert_eq!(permutation_matrix(3).unwrap(), expected);
    }

    #[test]
    fn reproduces_reference_p4() {
        let expected = from_row_ones(&[1, 5, 3, 7, 2, 6, 4, 8]);
        assert_eq!(permutation_matrix(4).unwrap(), expected);
    }

    #[test]
    fn p1_is_a_permutation() {
        let u = permutation_matrix(1).unwrap();
        assert!(is_permutation_matrix(&u));
        assert_eq!(u, DMatrix::identity(2, 2));
    }

    #[test]
    fn every_size_pairs_coordinates() {
        for p in 1..=16 {
            let u = permutation_matrix(p).unwrap();
            assert!(is_permutation_matrix(&u), "P = {p}");
            assert_eq!(u, u.transpose(), "P = {p} not symmetric");
            for q in 0..p {
                let row_of = |col: usize| (0..2 * p).find(|&r| u[(r, col)] == 1.0).unwrap();
                let (a, b) = (row_of(2 * q), row_of(2 * q + 1));
                let (lo, hi) = (a.min(b), a.max(b));
                assert_eq!(hi, lo + p, "P = {p}, block {q}: rows {a}, {b}");
            }
        }
    }

    #[test]
    fn rejects_zero() {
        assert!(permutation_matrix(0).is_err());
    }

    #[test]
    fn permutation_check_rejects_non_permutations() {
        assert!(!is_permutation_matrix(&DMatrix::from_element(2, 2, 1.0)));
        assert!(!is_permutation_matrix(&DMatrix::zeros(2, 3)));
        assert!(!is_permutation_matrix(&(DMatrix::identity(3, 3) * 2.0)));
    }
}
