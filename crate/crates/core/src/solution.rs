//! Compiled complex evaluation of systems, Newton refinement, and solution sets.

use num_traits::Zero;

use crate::linalg::{DenseMatrix, Lu};
use crate::poly::{PolySystem, Polynomial};
use crate::scalar::{Complex, Scalar};

/// A polynomial system prepared for repeated complex evaluation of values
/// and Jacobians through per-variable power tables.
#[derive(Clone, Debug)]
pub struct CompiledSystem {
    nvars: usize,
    polys: Vec<Vec<(Vec<u32>, Complex)>>,
    max_exp: Vec<u32>,
}

impl CompiledSystem {
    pub fn new<C: Scalar>(system: &PolySystem<C>) -> Self {
        Self::from_polys(system.nvars(), system.polys())
    }

    pub fn from_polys<C: Scalar>(nvars: usize, polys: &[Polynomial<C>]) -> Self {
        let mut max_exp = vec![0u32; nvars];
        let polys = polys
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(m, c)| {
                        for (mx, &e) in max_exp.iter_mut().zip(m.exponents()) {
                            *mx = (*mx).max(e);
                        }
                        (m.exponents().to_vec(), c.to_complex())
                    })
                    .collect()
            })
            .collect();
        CompiledSystem { nvars, polys, max_exp }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn powers(&self, x: &[Complex]) -> Vec<Vec<Complex>> {
        x.iter()
            .zip(&self.max_exp)
            .map(|(&xi, &m)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                row.push(Complex::new(1.0, 0.0));
                for k in 1..=m as usize {
                    let prev = row[k - 1];
                    row.push(prev * xi);
                }
                row
            })
            .collect()
    }

    pub fn evaluate(&self, x: &[Complex]) -> Vec<Complex> {
        let pw = self.powers(x);
        self.polys
            .iter()
            .map(|terms| {
                terms.iter().fold(Complex::zero(), |acc, (e, c)| {
                    acc + e.iter().enumerate().fold(*c, |t, (i, &k)| t * pw[i][k as usize])
                })
            })
            .collect()
    }

    /// Values and the `s x n` Jacobian.
    pub fn evaluate_with_jacobian(&self, x: &[Complex]) -> (Vec<Complex>, DenseMatrix<Complex>) {
        let pw = self.powers(x);
        let n = self.nvars;
        let mut jac = DenseMatrix::<Complex>::zeros(self.polys.len(), n);
        let mut vals = Vec::with_capacity(self.polys.len());
        for (r, terms) in self.polys.iter().enumerate() {
            let mut v = Complex::zero();
            for (e, c) in terms {
                v += e.iter().enumerate().fold(*c, |t, (i, &k)| t * pw[i][k as usize]);
                for j in 0..n {
                    if e[j] == 0 {
                        continue;
                    }
                    let mut t = *c * e[j] as f64;
                    for (i, &k) in e.iter().enumerate() {
                        let k = if i == j { k - 1 } else { k };
                        t *= pw[i][k as usize];
                    }
                    jac[(r, j)] += t;
                }
            }
            vals.push(v);
        }
        (vals, jac)
    }

    /// `max_i |f_i(x)|`.
    pub fn residual(&self, x: &[Complex]) -> f64 {
        self.evaluate(x).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max_i Σ_α |c_α| |x^α|`: the size of the terms that cancel in `f_i(x)`.
    pub fn residual_scale(&self, x: &[Complex]) -> f64 {
        let abs: Vec<f64> = x.iter().map(|v| v.norm()).collect();
        self.polys
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|(e, c)| e.iter().enumerate().fold(c.norm(), |t, (i, &k)| t * abs[i].powi(k as i32)))
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// One Newton (square) or Gauss–Newton (overdetermined) step `Δx`.
pub(crate) fn newton_step(vals: &[Complex], jac: &DenseMatrix<Complex>) -> Option<Vec<Complex>> {
    let rhs: Vec<Complex> = vals.iter().map(|v| -v).collect();
    if jac.is_square() {
        return Lu::factor(jac, 1e-15).ok()?.solve(&rhs).ok();
    }
    // Normal equations J^H J Δx = -J^H F.
    let n = jac.cols();
    let jh = DenseMatrix::from_fn(n, jac.rows(), |i, j| jac[(j, i)].conj());
    let a = jh.matmul(jac).ok()?;
    let b = jh.mul_vec(&rhs).ok()?;
    Lu::factor(&a, 1e-15).ok()?.solve(&b).ok()
}

/// Newton refinement keeping the iterate with the smallest residual.
pub fn newton_refine(sys: &CompiledSystem, x0: &[Complex], max_iter: usize) -> (Vec<Complex>, f64) {
    let mut best = (x0.to_vec(), sys.residual(x0));
    let mut x = x0.to_vec();
    for _ in 0..max_iter {
        let (vals, jac) = sys.evaluate_with_jacobian(&x);
        let Some(dx) = newton_step(&vals, &jac) else { break };
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        if x.iter().any(|v| !v.is_finite()) {
            break;
        }
        let r = sys.residual(&x);
        if r < best.1 {
            best = (x.clone(), r);
        }
        if norm(&dx) <= 1e-15 * (1.0 + norm(&x)) {
            break;
        }
    }
    best
}

/// Where a solution came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Index of the eigenvector of the random multiplication matrix.
    Eigen(usize),
    /// Index of the homotopy path.
    Path(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub coordinates: Vec<Complex>,
    /// `max_i |f_i(z)|`.
    pub residual: f64,
    pub is_real: bool,
    pub provenance: Provenance,
}

impl Solution {
    pub fn new(coordinates: Vec<Complex>, residual: f64, real_tol: f64, provenance: Provenance) -> Self {
        let is_real = coordinates.iter().all(|z| z.im.abs() <= real_tol);
        Solution { coordinates, residual, is_real, provenance }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolutionSet {
    pub solutions: Vec<Solution>,
    pub warnings: Vec<String>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn points(&self) -> Vec<Vec<Complex>> {
        self.solutions.iter().map(|s| s.coordinates.clone()).collect()
    }

    /// Sorts by real parts, then imaginary parts, coordinate by coordinate.
    pub fn sort(&mut self) {
        self.solutions.sort_by(|a, b| {
            for (x, y) in a.coordinates.iter().zip(&b.coordinates) {
                let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        });
    }
}

/// Maximum over a greedy matching of the distance between two point
/// multisets, or `None` when their sizes differ.
pub fn matching_distance(a: &[Vec<Complex>], b: &[Vec<Complex>]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for p in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, p.iter().zip(q).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system;

    #[test]
    fn refine_to_circle_intersection() {
        let sf = parse_system("vars: x, y\nx^2 + y^2 - 1\n(1 - x)^2 + (1 - y)^2 - 1\n").unwrap();
        let cs = CompiledSystem::new(&sf.system);
        let (x, r) = newton_refine(&cs, &[Complex::new(0.1, 0.01), Complex::new(0.95, 0.0)], 20);
        assert!(r < 1e-14);
        assert!(x[0].norm() < 1e-12 && (x[1] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn jacobian_of_known_system() {
        let sf = parse_system("vars: x, y\nx^2*y + 3*y\nx - y^3\n").unwrap();
        let cs = CompiledSystem::new(&sf.system);
        let p = [Complex::new(2.0, 0.0), Complex::new(-1.0, 1.0)];
        let (v, j) = cs.evaluate_with_jacobian(&p);
        assert_eq!(v, cs.evaluate(&p));
        // d/dx (x^2 y + 3y) = 2xy, d/dy = x^2 + 3
        assert!((j[(0, 0)] - p[0] * p[1] * 2.0).norm() < 1e-14);
        assert!((j[(0, 1)] - (p[0] * p[0] + 3.0)).norm() < 1e-14);
        assert!((j[(1, 1)] + p[1] * p[1] * 3.0).norm() < 1e-14);
    }

    #[test]
    fn matching() {
        let a = vec![vec![Complex::new(1.0, 0.0)], vec![Complex::new(2.0, 0.0)]];
        let b = vec![vec![Complex::new(2.0, 1e-9)], vec![Complex::new(1.0, 0.0)]];
        assert!(matching_distance(&a, &b).unwrap() < 1e-8);
        assert_eq!(matching_distance(&a, &b[..1]), None);
    }
}
