//! Linear feasibility programs of the conditional best-response form.
//!
//! A [`FeasibilityProblem`] asks for `p` with
//!
//! ```text
//!   Σ_j p_j = 1,   p ≥ 0,   D p ≥ 0
//! ```
//!
//! where each row of `D` holds `u(s, ·) − u(s', ·)` for one competitor `s'`.
//! It is decided with a phase-one simplex. Exact mode uses Bland's rule
//! throughout; float mode uses the largest-coefficient rule and falls back
//! to Bland after a run of degenerate pivots.

use log::trace;

use crate::error::{CurbError, Result};
use crate::scalar::{NumericMode, Scalar};

/// Consecutive degenerate pivots tolerated before float mode switches to Bland.
const STALL_LIMIT: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem<T> {
    pub var_count: usize,
    pub difference_rows: Vec<Vec<T>>,
}

impl<T: Scalar> FeasibilityProblem<T> {
    pub fn new(var_count: usize, difference_rows: Vec<Vec<T>>) -> Result<Self> {
        if var_count == 0 {
            return Err(CurbError::InvalidParameter("feasibility problem needs at least one variable".into()));
        }
        if let Some(row) = difference_rows.iter().find(|r| r.len() != var_count) {
            return Err(CurbError::DimensionMismatch(format!(
                "difference row has {} coefficients, expected {var_count}",
                row.len()
            )));
        }
        Ok(FeasibilityProblem { var_count, difference_rows })
    }

    /// True when `p` satisfies every constraint, exactly in rational mode and
    /// up to the feasibility tolerance in float mode.
    pub fn is_satisfied_by(&self, p: &[T]) -> bool {
        let tol = T::feasibility_tolerance();
        if p.len() != self.var_count || p.iter().any(|x| *x < -tol.clone()) {
            return false;
        }
        let total = p.iter().fold(T::zero(), |a, x| a + x.clone());
        if (total - T::one()).abs() > tol {
            return false;
        }
        self.difference_rows.iter().all(|row| {
            let lhs = row.iter().zip(p).fold(T::zero(), |a, (d, x)| a + d.clone() * x.clone());
            lhs >= -tol.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityOutcome<T> {
    /// A point of the feasible region, one probability per variable.
    pub witness: Option<Vec<T>>,
}

impl<T> FeasibilityOutcome<T> {
    pub fn is_feasible(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn solve_feasibility<T: Scalar>(problem: &FeasibilityProblem<T>) -> Result<FeasibilityOutcome<T>> {
    let m = problem.var_count;
    let k = problem.difference_rows.len();
    // Columns: p_0..p_{m-1}, then one slack per difference row.
    // Row i < k:  -D_i p + s_i = 0   (s_i starts basic at zero)
    // Row k:      Σ p = 1            (needs an artificial)
    let width = m + k;
    let mut a = Vec::with_capacity(k + 1);
    let mut hint = Vec::with_capacity(k + 1);
    for (i, row) in problem.difference_rows.iter().enumerate() {
        let mut r: Vec<T> = row.iter().map(|d| -d.clone()).collect();
        r.resize(width, T::zero());
        r[m + i] = T::one();
        a.push(r);
        hint.push(Some(m + i));
    }
    let mut sum = vec![T::one(); m];
    sum.resize(width, T::zero());
    a.push(sum);
    hint.push(None);
    let mut b = vec![T::zero(); k];
    b.push(T::one());

    let witness = phase_one(a, b, &hint)?.map(|x| {
        let mut p: Vec<T> = x.into_iter().take(m).collect();
        if T::MODE == NumericMode::Float {
            for v in p.iter_mut() {
                if v.is_negative() {
                    *v = T::zero();
                }
            }
            let total = p.iter().fold(T::zero(), |acc, v| acc + v.clone());
            if total.is_positive() {
                for v in p.iter_mut() {
                    *v = v.clone() / total.clone();
                }
            }
        }
        p
    });
    Ok(FeasibilityOutcome { witness })
}

/// Finds `x ≥ 0` with `A x = b` by minimising the sum of artificial variables.
///
/// `basis_hint[i] = Some(j)` promises that column `j` is the unit vector of
/// row `i`, so it can start in the basis without an artificial. Returns the
/// values of the original columns when the phase-one optimum is zero (at
/// most the feasibility tolerance in float mode).
pub(crate) fn phase_one<T: Scalar>(a: Vec<Vec<T>>, b: Vec<T>, basis_hint: &[Option<usize>]) -> Result<Option<Vec<T>>> {
    let rows = a.len();
    debug_assert_eq!(b.len(), rows);
    debug_assert_eq!(basis_hint.len(), rows);
    let width = a.first().map_or(0, |r| r.len());

    // Normalise to b ≥ 0; a hinted row can only be flipped if its rhs is zero.
    let mut a = a;
    let mut b = b;
    let mut hint: Vec<Option<usize>> = basis_hint.to_vec();
    for i in 0..rows {
        if b[i].is_negative() {
            for v in a[i].iter_mut() {
                *v = -v.clone();
            }
            b[i] = -b[i].clone();
            hint[i] = None;
        }
    }

    let artificial_rows: Vec<usize> = (0..rows).filter(|&i| hint[i].is_none()).collect();
    let total_cols = width + artificial_rows.len();
    let mut tableau: Vec<Vec<T>> = Vec::with_capacity(rows);
    let mut basis = vec![0usize; rows];
    for i in 0..rows {
        let mut r = a[i].clone();
        r.resize(total_cols, T::zero());
        r.push(b[i].clone());
        tableau.push(r);
    }
    for (k, &i) in artificial_rows.iter().enumerate() {
        tableau[i][width + k] = T::one();
        basis[i] = width + k;
    }
    for i in 0..rows {
        if let Some(j) = hint[i] {
            basis[i] = j;
        }
    }

    // Reduced costs of the phase-one objective; the last entry is -w.
    let mut cost = vec![T::zero(); total_cols + 1];
    for &i in &artificial_rows {
        for j in 0..=total_cols {
            if j >= width && j < total_cols {
                continue;
            }
            cost[j] = cost[j].clone() - tableau[i][j].clone();
        }
    }

    let tol = T::pivot_tolerance();
    let mut bland = T::MODE == NumericMode::Rational;
    let mut stalled = 0usize;
    let max_pivots = 50 * (rows + total_cols) + 1000;
    let mut pivots = 0usize;

    loop {
        let entering = if bland {
            (0..total_cols).find(|&j| cost[j] < -tol.clone())
        } else {
            let mut best: Option<usize> = None;
            for j in 0..total_cols {
                if cost[j] < -tol.clone() && best.is_none_or(|bj| cost[j] < cost[bj]) {
                    best = Some(j);
                }
            }
            best
        };
        let Some(enter) = entering else { break };

        let mut leave: Option<(usize, T)> = None;
        for i in 0..rows {
            let coef = &tableau[i][enter];
            if *coef <= tol {
                continue;
            }
            let ratio = tableau[i][total_cols].clone() / coef.clone();
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        // The phase-one objective is bounded below, so a column with a
        // negative reduced cost always has a positive entry in exact mode.
        let Some((pivot_row, step)) = leave else {
            trace!("no leaving row for column {enter}; stopping");
            break;
        };

        if step.abs() <= T::feasibility_tolerance() {
            stalled += 1;
            if !bland && stalled >= STALL_LIMIT {
                bland = true;
            }
        } else {
            stalled = 0;
        }

        pivot(&mut tableau, &mut cost, pivot_row, enter, &tol);
        basis[pivot_row] = enter;
        pivots += 1;
        if pivots > max_pivots {
            return Err(CurbError::PivotLimit(max_pivots));
        }
    }

    let objective = -cost[total_cols].clone();
    if objective > T::feasibility_tolerance() {
        return Ok(None);
    }
    let mut x = vec![T::zero(); width];
    for i in 0..rows {
        if basis[i] < width {
            x[basis[i]] = tableau[i][total_cols].clone();
        }
    }
    Ok(Some(x))
}

fn pivot<T: Scalar>(tableau: &mut [Vec<T>], cost: &mut [T], row: usize, col: usize, tol: &T) {
    let width = tableau[row].len();
    let p = tableau[row][col].clone();
    for v in tableau[row].iter_mut() {
        if !v.is_zero() {
            *v = v.clone() / p.clone();
        }
    }
    tableau[row][col] = T::one();
    let pivot_row = tableau[row].clone();
    let eliminate = |target: &mut [T]| {
        let factor = target[col].clone();
        if factor.is_zero() {
            return;
        }
        for j in 0..width {
            if pivot_row[j].is_zero() {
                continue;
            }
            let v = target[j].clone() - factor.clone() * pivot_row[j].clone();
            // Flush float noise so sign tests stay stable.
            target[j] = if T::MODE == NumericMode::Float && v.abs() <= *tol { T::zero() } else { v };
        }
        target[col] = T::zero();
    };
    for (i, r) in tableau.iter_mut().enumerate() {
        if i != row {
            eliminate(r);
        }
    }
    eliminate(cost);
}
