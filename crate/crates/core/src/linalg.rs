//! Gaussian elimination over exact fields.

use crate::scalar::FieldScalar;

/// Reduced row echelon form in place; returns the pivot columns.
fn row_reduce<S: FieldScalar>(rows: &mut [Vec<S>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        if next_row == rows.len() {
            break;
        }
        let Some(found) = (next_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, found);
        let inv = S::one() / rows[next_row][col].clone();
        for x in rows[next_row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[next_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next_row || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    pivots
}

pub fn rank<S: FieldScalar>(rows: &[Vec<S>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut work = rows.to_vec();
    row_reduce(&mut work, cols).len()
}

/// Basis of `{x : rows * x = 0}` in a space of dimension `cols`.
pub fn kernel<S: FieldScalar>(rows: &[Vec<S>], cols: usize) -> Vec<Vec<S>> {
    let mut work = rows.to_vec();
    let pivots = row_reduce(&mut work, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -work[row][free].clone();
            }
            v
        })
        .collect()
}
