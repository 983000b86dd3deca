use num_traits::Zero;

use super::{DenseMatrix, LinalgError};
use crate::scalar::Complex;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: DenseMatrix<Complex>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Fails when a pivot falls below `rel_tol * max|a_ij|`.
    pub fn factor(a: &DenseMatrix<Complex>, rel_tol: f64) -> Result<Lu, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let scale = a.max_abs();
        if !scale.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= rel_tol * scale || best == 0.0 {
                return Err(LinalgError::Singular);
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        Ok(Lu { lu, perm, sign })
    }

    pub fn solve(&self, b: &[Complex]) -> Result<Vec<Complex>, LinalgError> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, got: b.len() });
        }
        let mut x: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = self.lu[(i, j)] * x[j];
                x[i] -= v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = self.lu[(i, j)] * x[j];
                x[i] -= v;
            }
            x[i] /= self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn determinant(&self) -> Complex {
        (0..self.lu.rows()).fold(Complex::new(self.sign, 0.0), |acc, i| acc * self.lu[(i, i)])
    }
}

/// Solves `A x = b` by partial pivoting.
pub fn lu_solve(a: &DenseMatrix<Complex>, b: &[Complex]) -> Result<Vec<Complex>, LinalgError> {
    Lu::factor(a, 1e-14)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn small_systems() {
        let id = DenseMatrix::<Complex>::identity(3);
        let b = vec![c(1.0), c(-2.0), Complex::new(0.5, 3.0)];
        assert_eq!(lu_solve(&id, &b).unwrap(), b);
        let d = DenseMatrix::from_rows(vec![vec![c(2.0), c(0.0)], vec![c(0.0), c(3.0)]]).unwrap();
        let x = lu_solve(&d, &[c(2.0), c(3.0)]).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-15 && (x[1] - c(1.0)).norm() < 1e-15);
        let sing = DenseMatrix::from_rows(vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]).unwrap();
        assert_eq!(lu_solve(&sing, &[c(1.0), c(1.0)]), Err(LinalgError::Singular));
    }

    #[test]
    fn random_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let n = 20;
            let a = DenseMatrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let b: Vec<Complex> = (0..n).map(|_| Complex::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
            let x = lu_solve(&a, &b).unwrap();
            let ax = a.mul_vec(&x).unwrap();
            let res = ax.iter().zip(&b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
            let xn = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let bn = b.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!(res <= 1e-12 * (a.frobenius_norm() * xn + bn));
        }
    }
}
