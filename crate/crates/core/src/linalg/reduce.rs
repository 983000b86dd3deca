use num_traits::Zero;

use super::DenseMatrix;
use crate::scalar::{Complex, Rational, Scalar};

/// A reduced row echelon form: row `i < rank` has a 1 in column `pivots[i]`
/// and zeros in every other pivot column; rows from `rank` on are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduced<T> {
    pub matrix: DenseMatrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Scalar> Reduced<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Exact Gauss–Jordan elimination over the rationals. Pivot columns are
/// chosen greedily in `column_order`; columns absent from it are never pivots.
pub fn rational_rref(a: &DenseMatrix<Rational>, column_order: &[usize]) -> Reduced<Rational> {
    let mut m = a.clone();
    let rows = m.rows();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in column_order {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        let inv = m[(r, c)].recip();
        for j in 0..cols {
            if !m[(r, j)].is_zero() {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
        }
        let pivot_row = m.row(r).to_vec();
        let nz: Vec<usize> = (0..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for &j in &nz {
                let v = &m[(i, j)] - &f * &pivot_row[j];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Reduced { matrix: m, pivots }
}

/// Row reduction over the complex numbers by Householder QR with column
/// pivoting. Columns are consumed tier by tier; within a tier the column with
/// the largest remaining norm is chosen next. A column whose remaining norm
/// is at most `rel_tol * ‖A‖_F` is treated as dependent.
pub fn pivoted_qr_reduce(a: &DenseMatrix<Complex>, tiers: &[Vec<usize>], rel_tol: f64) -> Reduced<Complex> {
    let rows = a.rows();
    let cols = a.cols();
    let scale = a.frobenius_norm();
    let mut w = a.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut used = vec![false; cols];
    let mut k = 0;
    'tiers: for tier in tiers {
        loop {
            if k == rows {
                break 'tiers;
            }
            let best = tier
                .iter()
                .filter(|&&j| !used[j])
                .map(|&j| (j, (k..rows).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt()))
                .fold(None, |acc: Option<(usize, f64)>, x| match acc {
                    Some(a) if a.1 >= x.1 => Some(a),
                    _ => Some(x),
                });
            let Some((j, norm)) = best else { break };
            if norm <= rel_tol * scale || norm == 0.0 {
                break;
            }
            let x0 = w[(k, j)];
            let phase = if x0.norm() == 0.0 { Complex::new(1.0, 0.0) } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            let mut v: Vec<Complex> = (k..rows).map(|i| w[(i, j)]).collect();
            v[0] -= alpha;
            let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vn > 0.0 {
                for z in v.iter_mut() {
                    *z /= vn;
                }
                for c in 0..cols {
                    let s: Complex = v.iter().enumerate().map(|(t, vi)| vi.conj() * w[(k + t, c)]).sum();
                    if s.is_zero() {
                        continue;
                    }
                    for (t, vi) in v.iter().enumerate() {
                        w[(k + t, c)] -= vi * s * 2.0;
                    }
                }
            }
            for i in k + 1..rows {
                w[(i, j)] = Complex::zero();
            }
            used[j] = true;
            pivots.push(j);
            k += 1;
        }
    }
    // Back substitution against the triangular pivot block.
    let r = pivots.len();
    let mut out = DenseMatrix::<Complex>::zeros(rows, cols);
    for i in (0..r).rev() {
        let d = w[(i, pivots[i])];
        for c in 0..cols {
            let mut v = w[(i, c)];
            for (t, &pc) in pivots.iter().enumerate().skip(i + 1) {
                v -= w[(i, pc)] * out[(t, c)];
            }
            out[(i, c)] = v / d;
        }
        for (t, &pc) in pivots.iter().enumerate() {
            out[(i, pc)] = if t == i { Complex::new(1.0, 0.0) } else { Complex::zero() };
        }
    }
    Reduced { matrix: out, pivots }
}
