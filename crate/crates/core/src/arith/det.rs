use super::{interpolate, rat_int, Rat, RatPoly};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Exact determinant of a square rational matrix by Gaussian elimination.
pub fn det_rat(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &m[r][c] - &m[col][c] * &f;
                m[r][c] = v;
            }
        }
    }
    det
}

/// Exact determinant of a square matrix over ℚ[u], computed by evaluation at
/// the integer sample points u = 0, 1, …, `degree_bound` followed by
/// interpolation. `degree_bound` must dominate the true degree; the sum over
/// rows of the maximal entry degree always works.
pub fn det_poly_matrix(m: &[Vec<RatPoly>], degree_bound: usize) -> Result<RatPoly> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::NonSquare {
                rows: n,
                cols: row.len(),
            });
        }
    }
    if n == 0 {
        return Ok(RatPoly::one());
    }
    let true_bound: usize = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.degree().unwrap_or(0))
                .max()
                .unwrap_or(0)
        })
        .sum();
    if degree_bound < true_bound {
        return Err(Error::Invalid(format!(
            "degree bound {degree_bound} is below the row-degree sum {true_bound}"
        )));
    }
    let points: Vec<(Rat, Rat)> = (0..=degree_bound as i64)
        .into_par_iter()
        .map(|x| {
            let xr = rat_int(x);
            let eval: Vec<Vec<Rat>> = m
                .iter()
                .map(|row| row.iter().map(|e| e.eval(&xr)).collect())
                .collect();
            (xr, det_rat(eval))
        })
        .collect();
    Ok(interpolate(&points))
}
