//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::Rational;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(matrix: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot) = (r..rows).find(|&i| !matrix[i][col].is_zero()) else {
            continue;
        };
        matrix.swap(r, pivot);
        let inv = matrix[r][col].recip();
        for entry in matrix[r].iter_mut().skip(col) {
            *entry *= &inv;
        }
        for i in 0..rows {
            if i == r || matrix[i][col].is_zero() {
                continue;
            }
            let factor = matrix[i][col].clone();
            for j in col..cols {
                let delta = &factor * &matrix[r][j];
                matrix[i][j] -= delta;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Rank by forward elimination.
pub fn rank(matrix: &[Vec<Rational>]) -> usize {
    let mut m = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    debug_assert!(m.iter().all(|row| row.len() == cols), "matrix must be rectangular");
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        for i in r + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = &m[i][col] / &m[r][col];
            for j in col..cols {
                let delta = &factor * &m[r][j];
                m[i][j] -= delta;
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{ c : matrix * c = 0 }`, one vector per free column, each with
/// a `1` in its free slot. `cols` fixes the width when `matrix` has no rows.
pub fn nullspace(matrix: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = matrix.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `matrix * c = rhs`, if any.
pub fn solve(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut solution = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        solution[pc] = aug[row][cols].clone();
    }
    Some(solution)
}
