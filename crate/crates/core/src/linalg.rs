//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form of `rows` (each of length `cols`). Returns the
/// reduced nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v /= &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..cols {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
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
    (rows, pivots)
}

/// Basis of `{x : A x = 0}`, one vector per free column, with a 1 in that
/// free column.
pub fn null_space(rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(rows, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}
