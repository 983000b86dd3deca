//! Total-degree homotopy continuation with an Euler predictor, a Newton
//! corrector and adaptive step control.
//!
//! `H(x; t) = t F(x) + (1 - t) γ G(x)` is followed from the roots of unity of
//! `G = (x_1^d_1 - 1, …, x_n^d_n - 1)` at `t = 0` to the roots of `F` at `t = 1`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{DenseMatrix, Lu};
use crate::poly::{Monomial, PolyError, PolySystem, Polynomial};
use crate::scalar::{Complex, Scalar};
use crate::solution::{norm, CompiledSystem, Provenance, Solution, SolutionSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomotopyError {
    #[error("homotopy needs a square system, got {equations} equations in {vars} unknowns")]
    NotSquare { equations: usize, vars: usize },
    #[error("equation {0} has degree below 1")]
    DegreeTooSmall(usize),
    #[error("{paths} paths exceed the limit of {limit}")]
    TooManyPaths { paths: u128, limit: u128 },
    #[error("start and target systems differ in size")]
    Mismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    /// Corrector stops once `‖Δx‖ ≤ newton_tol · (1 + ‖x‖)`.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub divergence_bound: f64,
    pub endpoint_tol: f64,
    pub max_steps: usize,
    /// Seed for `γ`.
    pub seed: u64,
    /// Endpoints closer than this are treated as the same solution.
    pub dedup_tol: f64,
    /// Largest step allowed when re-tracking paths that met another path.
    pub rerun_max_step: f64,
    pub max_paths: u128,
    pub real_tol: f64,
    /// Accept an endpoint when `max_i |f_i(z)| ≤ residual_tol · max(1, scale)`.
    pub residual_tol: f64,
    pub record_trace: bool,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.1,
            min_step: 1e-14,
            newton_tol: 1e-10,
            max_newton_iters: 3,
            divergence_bound: 1e8,
            endpoint_tol: 1e-12,
            max_steps: 100_000,
            seed: 0x5eed,
            dedup_tol: 1e-6,
            rerun_max_step: 1e-3,
            max_paths: 1_000_000,
            real_tol: 1e-6,
            residual_tol: 1e-8,
            record_trace: false,
        }
    }
}

/// `γ = exp(iθ)` with `θ` uniform in `[0, 2π)`.
pub fn gamma_from_seed(seed: u64) -> Complex {
    let theta: f64 = ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..TAU);
    Complex::from_polar(1.0, theta)
}

/// `G = (x_1^d_1 - 1, …, x_n^d_n - 1)` and its `d_1 ⋯ d_n` roots.
pub fn total_degree_start(degrees: &[u32]) -> Result<(PolySystem<Complex>, Vec<Vec<Complex>>), HomotopyError> {
    total_degree_start_with_limit(degrees, TrackerConfig::default().max_paths)
}

fn total_degree_start_with_limit(
    degrees: &[u32],
    limit: u128,
) -> Result<(PolySystem<Complex>, Vec<Vec<Complex>>), HomotopyError> {
    let n = degrees.len();
    if let Some(i) = degrees.iter().position(|&d| d == 0) {
        return Err(HomotopyError::DegreeTooSmall(i));
    }
    let paths = degrees.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128)).unwrap_or(u128::MAX);
    if paths > limit {
        return Err(HomotopyError::TooManyPaths { paths, limit });
    }
    let polys = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0; n];
            e[i] = d;
            Polynomial::from_terms(n, [(Monomial::new(e), Complex::new(1.0, 0.0)), (Monomial::one(n), Complex::new(-1.0, 0.0))])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let roots: Vec<Vec<Complex>> =
        degrees.iter().map(|&d| (0..d).map(|k| Complex::from_polar(1.0, TAU * k as f64 / d as f64)).collect()).collect();
    let mut points = vec![Vec::with_capacity(n)];
    for r in &roots {
        points = points
            .into_iter()
            .flat_map(|p| {
                r.iter().map(move |z| {
                    let mut q = p.clone();
                    q.push(*z);
                    q
                })
            })
            .collect();
    }
    Ok((PolySystem::unnamed(polys)?, points))
}

/// `H(x; t) = t F(x) + (1 - t) γ G(x)`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    target: CompiledSystem,
    start: CompiledSystem,
    gamma: Complex,
}

impl Homotopy {
    pub fn new<C: Scalar, D: Scalar>(target: &PolySystem<C>, start: &PolySystem<D>, gamma: Complex) -> Result<Self, HomotopyError> {
        for sys in [(target.len(), target.nvars()), (start.len(), start.nvars())] {
            if sys.0 != sys.1 {
                return Err(HomotopyError::NotSquare { equations: sys.0, vars: sys.1 });
            }
        }
        if target.nvars() != start.nvars() {
            return Err(HomotopyError::Mismatch);
        }
        Ok(Homotopy { target: CompiledSystem::new(target), start: CompiledSystem::new(start), gamma })
    }

    pub fn gamma(&self) -> Complex {
        self.gamma
    }

    pub fn nvars(&self) -> usize {
        self.target.nvars()
    }

    pub fn target(&self) -> &CompiledSystem {
        &self.target
    }

    pub fn evaluate(&self, x: &[Complex], t: f64) -> Vec<Complex> {
        let f = self.target.evaluate(x);
        let g = self.start.evaluate(x);
        f.iter().zip(&g).map(|(a, b)| a * t + b * self.gamma * (1.0 - t)).collect()
    }

    /// `J_x = (∂h_j / ∂x_i)`.
    pub fn jacobian(&self, x: &[Complex], t: f64) -> DenseMatrix<Complex> {
        self.all(x, t).1
    }

    /// `∂H/∂t = F(x) - γ G(x)`.
    pub fn time_derivative(&self, x: &[Complex]) -> Vec<Complex> {
        let f = self.target.evaluate(x);
        let g = self.start.evaluate(x);
        f.iter().zip(&g).map(|(a, b)| a - b * self.gamma).collect()
    }

    /// Size of the largest cancelling term in `H(x; t)`.
    pub fn residual_scale(&self, x: &[Complex], t: f64) -> f64 {
        t * self.target.residual_scale(x) + (1.0 - t) * self.start.residual_scale(x)
    }

    /// `H`, `J_x` and `∂H/∂t` from one evaluation of each system.
    fn all(&self, x: &[Complex], t: f64) -> (Vec<Complex>, DenseMatrix<Complex>, Vec<Complex>) {
        let (f, jf) = self.target.evaluate_with_jacobian(x);
        let (g, jg) = self.start.evaluate_with_jacobian(x);
        let s = self.gamma * (1.0 - t);
        let h = f.iter().zip(&g).map(|(a, b)| a * t + b * s).collect();
        let ht = f.iter().zip(&g).map(|(a, b)| a - b * self.gamma).collect();
        let jac = DenseMatrix::from_fn(jf.rows(), jf.cols(), |i, j| jf[(i, j)] * t + jg[(i, j)] * s);
        (h, jac, ht)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStatus {
    Tracking,
    Converged,
    Diverged,
    Failed,
}

/// One accepted step: `t`, the point after correction, and the step taken.
#[derive(Clone, Debug, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    pub x: Vec<Complex>,
    pub dt: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathState {
    pub t: f64,
    pub x: Vec<Complex>,
    pub dt: f64,
    pub status: PathStatus,
    pub steps: usize,
    pub newton_iterations: usize,
    pub rejections: usize,
    /// Residual of the refined endpoint for converged paths.
    pub residual: Option<f64>,
    pub trace: Vec<TracePoint>,
}

fn solve(jac: &DenseMatrix<Complex>, rhs: &[Complex]) -> Option<Vec<Complex>> {
    Lu::factor(jac, 1e-14).ok()?.solve(rhs).ok()
}

/// Relative size of `H` below which further Newton steps only chase rounding.
const ROUNDOFF: f64 = 1e3 * f64::EPSILON;

/// Newton on `H(·; t)` from `x`; false when the corrector does not settle.
/// The corrector has settled once the step is below `newton_tol` or `H`
/// vanishes to working precision.
fn correct(h: &Homotopy, x: &mut [Complex], t: f64, cfg: &TrackerConfig, iterations: &mut usize) -> bool {
    let scale = 1.0 + norm(x);
    for k in 0..cfg.max_newton_iters {
        *iterations += 1;
        let (vals, jac, _) = h.all(x, t);
        if k > 0 && at_roundoff(h, &vals, x, t) {
            return true;
        }
        let rhs: Vec<Complex> = vals.iter().map(|v| -v).collect();
        let Some(dx) = solve(&jac, &rhs) else { return false };
        let step = norm(&dx);
        if !step.is_finite() || (k == 0 && step > 0.1 * scale) {
            return false;
        }
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        if step <= cfg.newton_tol * (1.0 + norm(x)) {
            return true;
        }
    }
    at_roundoff(h, &h.evaluate(x, t), x, t)
}

fn at_roundoff(h: &Homotopy, vals: &[Complex], x: &[Complex], t: f64) -> bool {
    let size = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    size <= ROUNDOFF * h.residual_scale(x, t)
}

/// Follows one path from `x0` at `t = 0` to `t = 1`.
pub fn track_path(h: &Homotopy, x0: &[Complex], cfg: &TrackerConfig) -> PathState {
    let mut s = PathState {
        t: 0.0,
        x: x0.to_vec(),
        dt: cfg.initial_step,
        status: PathStatus::Tracking,
        steps: 0,
        newton_iterations: 0,
        rejections: 0,
        residual: None,
        trace: Vec::new(),
    };
    if cfg.record_trace {
        s.trace.push(TracePoint { t: 0.0, x: s.x.clone(), dt: 0.0 });
    }
    let mut successes = 0;
    while s.status == PathStatus::Tracking {
        if s.steps + s.rejections >= cfg.max_steps {
            s.status = PathStatus::Failed;
            break;
        }
        if s.dt < cfg.min_step {
            s.status = PathStatus::Diverged;
            break;
        }
        let step = s.dt.min(1.0 - s.t);
        let t1 = if step == 1.0 - s.t { 1.0 } else { s.t + step };
        let (_, jac, ht) = h.all(&s.x, s.t);
        let rhs: Vec<Complex> = ht.iter().map(|v| -v).collect();
        let accepted = match solve(&jac, &rhs) {
            Some(xdot) => {
                let mut x: Vec<Complex> = s.x.iter().zip(&xdot).map(|(a, v)| a + v * (t1 - s.t)).collect();
                if correct(h, &mut x, t1, cfg, &mut s.newton_iterations) {
                    Some(x)
                } else {
                    None
                }
            }
            None => None,
        };
        match accepted {
            Some(x) => {
                s.steps += 1;
                s.x = x;
                s.t = t1;
                if cfg.record_trace {
                    s.trace.push(TracePoint { t: s.t, x: s.x.clone(), dt: step });
                }
                if norm(&s.x) > cfg.divergence_bound {
                    s.status = PathStatus::Diverged;
                } else if s.t >= 1.0 {
                    s.status = PathStatus::Converged;
                } else {
                    successes += 1;
                    if successes == 3 {
                        successes = 0;
                        s.dt = (s.dt * 2.0).min(cfg.initial_step);
                    }
                }
            }
            None => {
                s.rejections += 1;
                successes = 0;
                s.dt /= 2.0;
            }
        }
    }
    if s.status == PathStatus::Converged {
        finish(h, &mut s, cfg);
    }
    s
}

/// Newton on `F` until `‖Δx‖ ≤ endpoint_tol · (1 + ‖x‖)`, keeping the
/// iterate with the smallest residual. A singular Jacobian fails the path.
fn finish(h: &Homotopy, s: &mut PathState, cfg: &TrackerConfig) {
    let f = h.target();
    let mut best = (s.x.clone(), f.residual(&s.x));
    let mut x = s.x.clone();
    for _ in 0..8 {
        let (vals, jac) = f.evaluate_with_jacobian(&x);
        let rhs: Vec<Complex> = vals.iter().map(|v| -v).collect();
        let Some(dx) = solve(&jac, &rhs) else {
            s.status = PathStatus::Failed;
            break;
        };
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        let r = f.residual(&x);
        if r < best.1 {
            best = (x.clone(), r);
        }
        if norm(&dx) <= cfg.endpoint_tol * (1.0 + norm(&x)) {
            break;
        }
    }
    s.residual = Some(best.1);
    s.x = best.0;
}

/// Solutions and per-path records of a total-degree homotopy run.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyRun {
    pub solutions: SolutionSet,
    pub paths: Vec<PathState>,
    pub gamma: Complex,
}

impl HomotopyRun {
    pub fn count(&self, status: PathStatus) -> usize {
        self.paths.iter().filter(|p| p.status == status).count()
    }
}

fn distance(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Indices of converged paths whose endpoint lies within `tol` of another.
fn clashing(paths: &[PathState], tol: f64) -> Vec<usize> {
    let conv: Vec<usize> = (0..paths.len()).filter(|&i| paths[i].status == PathStatus::Converged).collect();
    let mut out = Vec::new();
    for &i in &conv {
        if conv.iter().any(|&j| j != i && distance(&paths[i].x, &paths[j].x) < tol) {
            out.push(i);
        }
    }
    out
}

/// Tracks all total-degree paths of a square system and collects the
/// distinct, refined endpoints.
pub fn solve_homotopy<C: Scalar>(system: &PolySystem<C>, cfg: &TrackerConfig) -> Result<HomotopyRun, HomotopyError> {
    let n = system.nvars();
    if system.len() != n {
        return Err(HomotopyError::NotSquare { equations: system.len(), vars: n });
    }
    let degrees: Vec<u32> = system.degrees().iter().map(|&d| d.max(0) as u32).collect();
    let (start, points) = total_degree_start_with_limit(&degrees, cfg.max_paths)?;
    let h = Homotopy::new(system, &start, gamma_from_seed(cfg.seed))?;
    let mut paths: Vec<PathState> = points.par_iter().map(|x0| track_path(&h, x0, cfg)).collect();

    let mut warnings = Vec::new();
    let offenders = clashing(&paths, cfg.dedup_tol);
    if !offenders.is_empty() {
        warnings.push(format!("{} paths met another path; re-tracked with smaller steps", offenders.len()));
        let careful = TrackerConfig { initial_step: cfg.initial_step.min(cfg.rerun_max_step), ..cfg.clone() };
        let redone: Vec<(usize, PathState)> =
            offenders.par_iter().map(|&i| (i, track_path(&h, &points[i], &careful))).collect();
        for (i, p) in redone {
            paths[i] = p;
        }
        let left = clashing(&paths, cfg.dedup_tol);
        if !left.is_empty() {
            warnings.push(format!("suspected multiplicity: {} paths still end at a shared point", left.len()));
        }
    }

    let mut solutions: Vec<Solution> = Vec::new();
    for (i, p) in paths.iter_mut().enumerate() {
        let Some(residual) = p.residual.filter(|_| p.status == PathStatus::Converged) else { continue };
        let scale = h.target().residual_scale(&p.x);
        if residual > cfg.residual_tol * scale.max(1.0) {
            p.status = PathStatus::Failed;
            continue;
        }
        if solutions.iter().any(|s| distance(&s.coordinates, &p.x) < cfg.dedup_tol) {
            continue;
        }
        solutions.push(Solution::new(p.x.clone(), residual, cfg.real_tol, Provenance::Path(i)));
    }
    let failed = paths.iter().filter(|p| p.status == PathStatus::Failed).count();
    if failed > 0 {
        warnings.push(format!("{failed} paths failed"));
    }
    Ok(HomotopyRun { solutions: SolutionSet { solutions, warnings }, paths, gamma: h.gamma() })
}

/// Per-step records as CSV: `path,t,re_<v>,im_<v>,…,dt`.
pub fn trace_csv(paths: &[PathState], vars: &[String]) -> String {
    let mut out = String::from("path,t");
    for v in vars {
        out.push_str(&format!(",re_{v},im_{v}"));
    }
    out.push_str(",dt\n");
    for (i, p) in paths.iter().enumerate() {
        for tp in &p.trace {
            out.push_str(&format!("{i},{}", tp.t));
            for z in &tp.x {
                out.push_str(&format!(",{},{}", z.re, z.im));
            }
            out.push_str(&format!(",{}\n", tp.dt));
        }
    }
    out
}
