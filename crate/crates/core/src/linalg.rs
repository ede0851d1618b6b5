//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::exactpoly::Rational;

/// Outcome of [`solve_exact`].
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// Consistent but underdetermined; one particular solution with free
    /// variables set to zero.
    Underdetermined(Vec<Rational>),
    Inconsistent,
}

/// Solves `A x = b` for a dense `rows × cols` system by reduction to
/// row-echelon form.
pub fn solve_exact(matrix: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> Solution {
    let rows = matrix.len();
    assert_eq!(rows, rhs.len());
    let mut aug: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = Rational::one() / &aug[r][c];
        for v in aug[r][c..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }

    if aug[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    if pivots.len() == cols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{int, rat};

    #[test]
    fn square_system() {
        // x + 2y = 5, 3x - y = 1 -> x = 1, y = 2
        let a = vec![vec![int(1), int(2)], vec![int(3), int(-1)]];
        let b = vec![int(5), int(1)];
        assert_eq!(
            solve_exact(&a, &b, 2),
            Solution::Unique(vec![int(1), int(2)])
        );
    }

    #[test]
    fn overdetermined_consistent_and_not() {
        let a = vec![vec![int(2)], vec![int(4)], vec![int(0)]];
        assert_eq!(
            solve_exact(&a, &[int(1), int(2), int(0)], 1),
            Solution::Unique(vec![rat(1, 2)])
        );
        assert_eq!(
            solve_exact(&a, &[int(1), int(3), int(0)], 1),
            Solution::Inconsistent
        );
    }

    #[test]
    fn underdetermined() {
        let a = vec![vec![int(1), int(1)]];
        assert_eq!(
            solve_exact(&a, &[int(3)], 2),
            Solution::Underdetermined(vec![int(3), int(0)])
        );
    }
}
