//! Dense Gaussian elimination for small square-or-not systems.

use crate::scalar::{NumericMode, Scalar};

/// Solution of `A x = b` with every free variable set to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticularSolution<T> {
    pub x: Vec<T>,
    pub rank: usize,
}

impl<T> ParticularSolution<T> {
    pub fn is_unique(&self) -> bool {
        self.rank == self.x.len()
    }
}

/// Reduces `[A | b]` to row echelon form and back-substitutes. Returns
/// `None` when the system is inconsistent. Exact mode pivots on the first
/// nonzero entry; float mode on the largest, treating anything at or below
/// the pivot tolerance as zero.
pub fn solve_particular<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<ParticularSolution<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let tol = T::pivot_tolerance();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let candidates = (row..rows).filter(|&i| m[i][col].abs() > tol);
        let chosen = if T::MODE == NumericMode::Float {
            candidates.max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
        } else {
            candidates.min()
        };
        let Some(p) = chosen else { continue };
        m.swap(row, p);
        let lead = m[row][col].clone();
        for v in m[row].iter_mut() {
            *v = v.clone() / lead.clone();
        }
        let pivot_row = m[row].clone();
        for (i, target) in m.iter_mut().enumerate() {
            if i == row || target[col].is_zero() {
                continue;
            }
            let factor = target[col].clone();
            for (t, p) in target.iter_mut().zip(&pivot_row).skip(col) {
                *t = t.clone() - factor.clone() * p.clone();
            }
        }
        pivots.push(col);
        row += 1;
    }
    // Rows below the rank must read 0 = 0.
    if m[row..].iter().any(|r| r[cols].abs() > T::feasibility_tolerance()) {
        return None;
    }
    let mut x = vec![T::zero(); cols];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][cols].clone();
    }
    Some(ParticularSolution { x, rank: pivots.len() })
}
