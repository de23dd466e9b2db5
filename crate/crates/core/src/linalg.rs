//! Exact linear algebra over ℚ.

use num_traits::{One, Zero};

use crate::lattice::Rational;
use crate::poly::ParamPolynomial;

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place, pivoting on the leftmost available column. Zero rows are dropped.
/// Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Solution set of affine equations `c_0 + Σ c_i x_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    /// Indices of the variables left free, increasing.
    pub free: Vec<usize>,
    /// Each original variable as a polynomial in the free ones.
    pub substitution: Vec<ParamPolynomial>,
}

/// Solves affine equations given as rows `[c_0, c_1, …, c_n]`. Pivots are taken
/// on the earliest variables, so later variables stay free. `None` when the
/// system is inconsistent.
pub fn solve_affine(nvars: usize, equations: &[Vec<Rational>]) -> Option<AffineSolution> {
    // Column layout: variables first, constant last, so pivots never land on it.
    let mut rows: Vec<Vec<Rational>> = equations
        .iter()
        .map(|e| {
            let mut r: Vec<Rational> = e[1..].to_vec();
            r.push(e[0].clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, nvars + 1);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let k = free.len();
    let mut substitution: Vec<ParamPolynomial> =
        (0..nvars).map(|_| ParamPolynomial::zero(k)).collect();
    for (j, &c) in free.iter().enumerate() {
        substitution[c] = ParamPolynomial::var(k, j);
    }
    for (row, &c) in rows.iter().zip(&pivots) {
        let mut affine = vec![-row[nvars].clone()];
        for &fc in &free {
            affine.push(-row[fc].clone());
        }
        substitution[c] = ParamPolynomial::from_affine(&affine);
    }
    Some(AffineSolution { free, substitution })
}

/// Unique solution of a square or overdetermined system `A x = b`, if any.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, n + 1);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some(rows.iter().map(|r| r[n].clone()).collect())
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(sel) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if sel != c {
            a.swap(sel, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let factor = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &factor * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}
