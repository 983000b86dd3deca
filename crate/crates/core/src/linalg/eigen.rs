//! Eigenvalues by balancing, Hessenberg reduction and complex single-shift QR
//! iteration; eigenvectors by inverse iteration on the original matrix.

use num_traits::Zero;

use super::{DenseMatrix, LinalgError, Lu};
use crate::scalar::Complex;

const DEFLATION_TOL: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<Complex>,
    /// Unit-norm eigenvectors, one column per eigenvalue.
    pub vectors: DenseMatrix<Complex>,
    /// `‖A v - λ v‖ / ‖A‖_F` per pair.
    pub residuals: Vec<f64>,
}

/// Diagonal similarity scaling by powers of two so rows and columns have
/// comparable norms.
fn balance(a: &mut DenseMatrix<Complex>) {
    let n = a.rows();
    let radix = 2.0f64;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form (similarity).
fn hessenberg(a: &mut DenseMatrix<Complex>) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex::new(1.0, 0.0) } else { x0 / x0.norm() };
        let mut v: Vec<Complex> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * norm;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // A <- (I - 2vv*) A
        for c in 0..n {
            let s: Complex = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(k + 1 + t, c)]).sum();
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, c)] -= vi * s * 2.0;
            }
        }
        // A <- A (I - 2vv*)
        for r in 0..n {
            let s: Complex = v.iter().enumerate().map(|(t, vi)| a[(r, k + 1 + t)] * vi).sum();
            for (t, vi) in v.iter().enumerate() {
                a[(r, k + 1 + t)] -= s * vi.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex::zero();
        }
    }
}

/// Rotation `[[c, s], [-s̄, c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex, b: Complex) -> (f64, Complex) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex::zero());
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// Eigenvalues of a square complex matrix.
pub fn eigenvalues(a: &DenseMatrix<Complex>) -> Result<Vec<Complex>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if a.max_abs().is_nan() || !a.max_abs().is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let norm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut values = vec![Complex::zero(); n];
    let max_sweeps = 100 * n;
    let mut sweeps = 0;
    let mut hi = n - 1;
    let mut since_deflation = 0;
    loop {
        if hi == 0 {
            values[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].norm() <= DEFLATION_TOL * s {
                h[(l, l - 1)] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            values[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(LinalgError::NoConvergence { sweeps: max_sweeps });
        }
        let mu = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex::new(0.75 * h[(hi, hi - 1)].norm(), 0.5 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + s.conj() * y;
                h[(i, k + 1)] = -s * x + y * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(values)
}

/// Eigenvalues and unit eigenvectors.
pub fn eigen(a: &DenseMatrix<Complex>) -> Result<EigenDecomposition, LinalgError> {
    let values = eigenvalues(a)?;
    let n = a.rows();
    let anorm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut vectors = DenseMatrix::<Complex>::zeros(n, n);
    let mut residuals = Vec::with_capacity(n);
    for (k, &lambda) in values.iter().enumerate() {
        let (v, res) = inverse_iteration(a, lambda, anorm);
        for i in 0..n {
            vectors[(i, k)] = v[i];
        }
        residuals.push(res);
    }
    Ok(EigenDecomposition { values, vectors, residuals })
}

fn residual(a: &DenseMatrix<Complex>, lambda: Complex, v: &[Complex], anorm: f64) -> f64 {
    let av = a.mul_vec(v).expect("square");
    av.iter().zip(v).map(|(x, y)| (x - lambda * y).norm_sqr()).sum::<f64>().sqrt() / anorm
}

fn normalize(v: &mut [Complex]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

fn inverse_iteration(a: &DenseMatrix<Complex>, lambda: Complex, anorm: f64) -> (Vec<Complex>, f64) {
    let n = a.rows();
    let mut best: Option<(Vec<Complex>, f64)> = None;
    for attempt in 0..3 {
        let delta = 1e-12 * anorm * 10f64.powi(attempt);
        let sigma = lambda + Complex::new(delta, 0.0);
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= sigma;
        }
        let Ok(lu) = Lu::factor(&shifted, 0.0) else { continue };
        // Deterministic start vector with no special structure.
        let mut v: Vec<Complex> = (0..n).map(|i| Complex::new(1.0, 0.37 * (i as f64 + 1.0).sqrt())).collect();
        normalize(&mut v);
        for _ in 0..2 {
            match lu.solve(&v) {
                Ok(w) if w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
                    v = w;
                    normalize(&mut v);
                }
                _ => break,
            }
        }
        let res = residual(a, lambda, &v, anorm);
        if best.as_ref().is_none_or(|b| res < b.1) {
            best = Some((v, res));
        }
        if res <= 1e-12 {
            break;
        }
    }
    best.unwrap_or_else(|| {
        let mut e = vec![Complex::zero(); n];
        e[0] = Complex::new(1.0, 0.0);
        let r = residual(a, lambda, &e, anorm);
        (e, r)
    })
}
