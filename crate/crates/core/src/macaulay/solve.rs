use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{multiplication_matrix, quotient_basis, MacaulayError, NormalFormField, QuotientBasis};
use crate::linalg::{eigen, DenseMatrix};
use crate::poly::{Monomial, PolySystem, Polynomial};
use crate::scalar::Complex;
use crate::solution::{newton_refine, CompiledSystem, Provenance, Solution, SolutionSet};

#[derive(Clone, Debug, PartialEq)]
pub struct EigenConfig {
    /// Seed for the random linear form `h = Σ λ_j x_j`.
    pub seed: u64,
    /// A point is real when every `|Im z_j|` is at most this.
    pub real_tol: f64,
    /// Accept a refined point when `max_i |f_i(z)| ≤ residual_tol · max(1, scale)`,
    /// where `scale` is the size of the largest cancelling term.
    pub residual_tol: f64,
    pub newton_iters: usize,
    /// How many times the truncation degree may be raised.
    pub max_extra_degree: u32,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig { seed: 0x5eed, real_tol: 1e-6, residual_tol: 1e-8, newton_iters: 5, max_extra_degree: 3 }
    }
}

/// All solutions of a zero-dimensional radical system from the eigenvectors
/// of a random multiplication matrix.
///
/// When no truncation degree yields a basis, exact systems fall back to the
/// standard monomials of a grevlex Gröbner basis.
pub fn solve_eigen<C: NormalFormField>(system: &PolySystem<C>, config: &EigenConfig) -> Result<SolutionSet, MacaulayError> {
    match quotient_basis(system, config.max_extra_degree) {
        Ok(r) => solve_with_basis(system, &r.basis, config),
        Err(MacaulayError::Inconsistent) => Ok(SolutionSet::default()),
        Err(e @ MacaulayError::NotZeroDimensional { .. }) => match C::fallback_basis(system) {
            Some(basis) => solve_with_basis(system, &basis, config),
            None => Err(e),
        },
        Err(e) => Err(e),
    }
}

fn cos_angle(a: &[Complex], b: &[Complex]) -> f64 {
    let dot: Complex = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    dot.norm() / (na * nb)
}

/// Root extraction from an already computed quotient basis.
pub fn solve_with_basis<C: NormalFormField>(
    system: &PolySystem<C>,
    basis: &QuotientBasis<C>,
    config: &EigenConfig,
) -> Result<SolutionSet, MacaulayError> {
    let n = system.nvars();
    let delta = basis.len();
    if delta == 0 {
        return Ok(SolutionSet::default());
    }
    let idx1 = basis.index_of(&Monomial::one(n)).ok_or(MacaulayError::BasisLacksOne)?;
    let coordinate: Vec<DenseMatrix<Complex>> = (0..n)
        .map(|k| multiplication_matrix(basis, &Polynomial::var(n, k)).map(|m| m.to_complex()))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mut mh = DenseMatrix::<Complex>::zeros(delta, delta);
    for (m, &l) in coordinate.iter().zip(&lambda) {
        mh = mh.add(&m.scale(&Complex::new(l, 0.0)));
    }
    let dec = eigen(&mh.transpose())?;
    let vectors: Vec<Vec<Complex>> = (0..delta).map(|i| dec.vectors.column(i)).collect();
    let spread = dec.values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    for i in 0..delta {
        for j in i + 1..delta {
            let gap = (dec.values[i] - dec.values[j]).norm();
            if gap <= 1e-6 * spread && cos_angle(&vectors[i], &vectors[j]) > 1.0 - 1e-6 {
                return Err(MacaulayError::SuspectedMultiplicity(gap));
            }
        }
    }
    let compiled = CompiledSystem::new(system);
    let mut out = SolutionSet::default();
    for (i, w) in vectors.iter().enumerate() {
        let w1 = w[idx1];
        if w1.norm() <= 1e-12 {
            return Err(MacaulayError::BasisLacksOne);
        }
        let w: Vec<Complex> = w.iter().map(|v| v / w1).collect();
        // x_j(z) = NF(x_j) · w, the entry at 1 of M_{x_j}^T w.
        let z: Vec<Complex> = coordinate.iter().map(|m| (0..delta).map(|r| m[(r, idx1)] * w[r]).sum()).collect();
        let (z, residual) = newton_refine(&compiled, &z, config.newton_iters);
        let scale = compiled.residual_scale(&z).max(1.0);
        if !residual.is_finite() || residual > config.residual_tol * scale {
            return Err(MacaulayError::ResidualTooLarge { index: i, residual });
        }
        out.solutions.push(Solution::new(z, residual, config.real_tol, Provenance::Eigen(i)));
    }
    out.sort();
    Ok(out)
}
