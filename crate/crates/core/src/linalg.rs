//! Exact Gaussian elimination over a field (rationals or Gaussian rationals).

use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Num, Signed, Zero};

use crate::rational::Q;

pub type C = Complex<Q>;

pub trait Field: Clone + PartialEq + Num + Neg<Output = Self> {}
impl<T: Clone + PartialEq + Num + Neg<Output = T>> Field for T {}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: Field>(mat: &mut [Vec<T>]) -> Vec<usize> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = T::one() / mat[r][c].clone();
        for x in mat[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let v = mat[r][j].clone();
                    mat[i][j] = mat[i][j].clone() - f.clone() * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Field>(mat: &[Vec<T>]) -> usize {
    let mut m = mat.to_vec();
    rref(&mut m).len()
}

pub fn rank_rational(mat: &[Vec<Q>]) -> usize {
    rank(mat)
}

/// Basis of `{v : mat · v = 0}` for a matrix with `cols` columns.
pub fn nullspace<T: Field>(mat: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let mut m = mat.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Positive semidefiniteness of a Hermitian matrix by exact LDL† elimination.
pub fn is_psd_hermitian(mat: &[Vec<C>]) -> bool {
    let n = mat.len();
    let mut a = mat.to_vec();
    for k in 0..n {
        let d = a[k][k].clone();
        if !d.im.is_zero() || d.re.is_negative() {
            return false;
        }
        if d.re.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero() || !a[j][k].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone() / d.clone();
            for j in k + 1..n {
                let v = a[k][j].clone();
                a[i][j] = a[i][j].clone() - f.clone() * v;
            }
        }
    }
    true
}

pub fn is_hermitian(mat: &[Vec<C>]) -> bool {
    mat.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == mat[j][i].conj()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn c(re: i64, im: i64) -> C {
        C::new(q(re), q(im))
    }

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m), 2);
        let ker = nullspace(&m, 3);
        assert_eq!(ker.len(), 1);
        for row in &m {
            let s: Q = row.iter().zip(&ker[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn psd_detection() {
        let good = vec![vec![c(2, 0), c(1, 1)], vec![c(1, -1), c(1, 0)]];
        assert!(is_hermitian(&good));
        assert!(is_psd_hermitian(&good));
        let bad = vec![vec![c(1, 0), c(2, 0)], vec![c(2, 0), c(1, 0)]];
        assert!(!is_psd_hermitian(&bad));
        let singular = vec![vec![c(0, 0), c(0, 0)], vec![c(0, 0), c(3, 0)]];
        assert!(is_psd_hermitian(&singular));
        let off = vec![vec![c(0, 0), c(1, 0)], vec![c(1, 0), c(3, 0)]];
        assert!(!is_psd_hermitian(&off));
    }
}
