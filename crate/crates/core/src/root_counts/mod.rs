//! Newton polytopes and the Bézout, Kushnirenko and Bernstein (BKK) root counts.

mod hull;

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::poly::{PolyError, PolySystem, Polynomial};
use crate::scalar::{Rational, Scalar};

/// Largest ambient dimension accepted by [`convex_hull`].
pub const HULL_DIMENSION_CAP: usize = 6;
/// Largest `n` accepted by [`mixed_volume`]; the cost is `2^n - 1` hulls.
pub const MIXED_VOLUME_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootCountError {
    #[error("dimension {n} exceeds the hull cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("mixed volume needs {expected} supports, got {got}")]
    SupportCount { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty support")]
    EmptySupport,
    #[error("integer overflow in exact geometry")]
    Overflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A finite set of lattice points in `Z^n`, stored sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    n: usize,
    points: Vec<Vec<i64>>,
}

impl Support {
    pub fn new(n: usize, points: Vec<Vec<i64>>) -> Result<Self, RootCountError> {
        if points.is_empty() {
            return Err(RootCountError::EmptySupport);
        }
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(RootCountError::DimensionMismatch { expected: n, got: p.len() });
        }
        let set: BTreeSet<Vec<i64>> = points.into_iter().collect();
        Ok(Support { n, points: set.into_iter().collect() })
    }

    pub fn from_polynomial<C: Scalar>(f: &Polynomial<C>) -> Result<Self, RootCountError> {
        let pts = f
            .support()?
            .into_iter()
            .map(|m| m.exponents().iter().map(|&e| e as i64).collect())
            .collect();
        Support::new(f.nvars(), pts)
    }

    /// Full support of a dense polynomial of degree `d` in `n` variables.
    pub fn simplex(n: usize, d: u32) -> Self {
        let pts = crate::poly::Monomial::up_to_degree(n, d)
            .into_iter()
            .map(|m| m.exponents().iter().map(|&e| e as i64).collect())
            .collect();
        Support::new(n, pts).expect("nonempty")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn translate(&self, v: &[i64]) -> Self {
        let pts = self.points.iter().map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect()).collect();
        Support::new(self.n, pts).expect("translation keeps support valid")
    }

    /// The set of pairwise sums.
    pub fn minkowski_sum(&self, other: &Support) -> Result<Self, RootCountError> {
        if self.n != other.n {
            return Err(RootCountError::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut pts = BTreeSet::new();
        for a in &self.points {
            for b in &other.points {
                pts.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>());
            }
        }
        Support::new(self.n, pts.into_iter().collect())
    }
}

/// The convex hull of a support with vertex set and a triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolytope {
    n: usize,
    affine_dim: usize,
    vertices: Vec<Vec<i64>>,
    triangulation: Vec<Vec<usize>>,
    normalized_volume: u128,
}

impl NewtonPolytope {
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.n
    }

    /// Vertices in ascending lexicographic order.
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Full-dimensional simplices, as indices into [`Self::vertices`].
    /// Empty for lower-dimensional polytopes.
    pub fn triangulation(&self) -> &[Vec<usize>] {
        &self.triangulation
    }

    /// `n! * Vol`, an integer for lattice polytopes.
    pub fn normalized_volume(&self) -> u128 {
        self.normalized_volume
    }

    /// Euclidean volume.
    pub fn volume(&self) -> Rational {
        BigRational::new(BigInt::from(self.normalized_volume), factorial(self.n))
    }

    /// `|det|` of each simplex in the triangulation.
    pub fn simplex_volumes(&self) -> Vec<u128> {
        self.triangulation
            .iter()
            .map(|s| {
                let base = &self.vertices[s[0]];
                let m = s[1..]
                    .iter()
                    .map(|&i| self.vertices[i].iter().zip(base).map(|(a, b)| (a - b) as i128).collect())
                    .collect();
                hull::det(m).expect("simplex determinant").unsigned_abs()
            })
            .collect()
    }

    pub fn minkowski_sum(&self, other: &NewtonPolytope) -> Result<NewtonPolytope, RootCountError> {
        if self.n != other.n {
            return Err(RootCountError::DimensionMismatch { expected: self.n, got: other.n });
        }
        let a = Support::new(self.n, self.vertices.clone())?;
        let b = Support::new(other.n, other.vertices.clone())?;
        convex_hull(&a.minkowski_sum(&b)?)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

fn check_cap(n: usize) -> Result<(), RootCountError> {
    if n > HULL_DIMENSION_CAP {
        return Err(RootCountError::DimensionCap { n, cap: HULL_DIMENSION_CAP });
    }
    Ok(())
}

pub fn convex_hull(a: &Support) -> Result<NewtonPolytope, RootCountError> {
    check_cap(a.n)?;
    let first = hull::hull(&a.points)?;
    let vertices: Vec<Vec<i64>> = first.vertices.iter().map(|&i| a.points[i].clone()).collect();
    // Re-triangulate using vertices only.
    let triangulation = if first.dim == a.n {
        hull::hull(&vertices)?.simplices
    } else {
        Vec::new()
    };
    Ok(NewtonPolytope {
        n: a.n,
        affine_dim: first.dim,
        vertices,
        triangulation,
        normalized_volume: first.normalized_volume,
    })
}

/// `n! * Vol(Conv(A))`.
pub fn normalized_volume(a: &Support) -> Result<u128, RootCountError> {
    check_cap(a.n)?;
    Ok(hull::hull(&a.points)?.normalized_volume)
}

pub fn minkowski_sum(p: &NewtonPolytope, q: &NewtonPolytope) -> Result<NewtonPolytope, RootCountError> {
    p.minkowski_sum(q)
}

/// Vertex set and normalized volume of a hull, without the triangulation pass.
fn hull_vertices(a: &Support) -> Result<(Support, u128), RootCountError> {
    let h = hull::hull(&a.points)?;
    let v = h.vertices.iter().map(|&i| a.points[i].clone()).collect();
    Ok((Support::new(a.n, v)?, h.normalized_volume))
}

/// Mixed volume `MV(A1, …, An)`, normalized so that `MV(A, …, A) = vol(A)`.
///
/// Inclusion–exclusion over the `2^n - 1` Minkowski sums of subfamilies:
/// `n! MV = Σ_S (-1)^(n-|S|) vol(Σ_{i∈S} A_i)` with `vol` the normalized volume.
pub fn mixed_volume(supports: &[Support]) -> Result<u128, RootCountError> {
    let n = supports.first().ok_or(RootCountError::EmptySupport)?.n;
    if supports.len() != n {
        return Err(RootCountError::SupportCount { expected: n, got: supports.len() });
    }
    if let Some(s) = supports.iter().find(|s| s.n != n) {
        return Err(RootCountError::DimensionMismatch { expected: n, got: s.n });
    }
    if n > MIXED_VOLUME_CAP {
        return Err(RootCountError::DimensionCap { n, cap: MIXED_VOLUME_CAP });
    }
    // Vertex sets of the subfamily sums, built up by subset size.
    let full = (1usize << n) - 1;
    let mut by_mask: HashMap<usize, (Support, u128)> = HashMap::new();
    for size in 1..=n {
        let masks: Vec<usize> = (1..=full).filter(|m: &usize| m.count_ones() as usize == size).collect();
        let layer: Vec<(usize, (Support, u128))> = masks
            .par_iter()
            .map(|&mask| {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & !(1 << low);
                let sum = if rest == 0 {
                    supports[low].clone()
                } else {
                    by_mask[&rest].0.minkowski_sum(&supports[low])?
                };
                Ok((mask, hull_vertices(&sum)?))
            })
            .collect::<Result<_, RootCountError>>()?;
        by_mask.extend(layer);
    }
    let mut total: i128 = 0;
    for (mask, (_, vol)) in &by_mask {
        let sign = if (n - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
        total += sign * (*vol as i128);
    }
    let nf: i128 = (1..=n as i128).product();
    debug_assert_eq!(total % nf, 0, "mixed volume must be integral");
    Ok((total / nf).max(0) as u128)
}

/// The Bézout bound `d1 ⋯ dn`.
pub fn bezout_bound(degrees: &[u32]) -> Result<u128, RootCountError> {
    degrees
        .iter()
        .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128).ok_or(RootCountError::Overflow))
}

/// All applicable root counts of a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCountReport {
    pub bezout: u128,
    /// `vol(A)`, present only when all polynomials share one support.
    pub kushnirenko: Option<u128>,
    /// Mixed volume; absent for non-square systems or beyond the dimension cap.
    pub bkk: Option<u128>,
    pub notes: Vec<String>,
}

pub fn count_report<C: Scalar>(system: &PolySystem<C>) -> Result<RootCountReport, RootCountError> {
    let n = system.nvars();
    let s = system.len();
    let mut degrees: Vec<u32> = Vec::with_capacity(s);
    for p in system.polys() {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial.into());
        }
        degrees.push(p.degree() as u32);
    }
    let mut notes = Vec::new();
    if s != n {
        let bezout = if s > n {
            let mut d = degrees.clone();
            d.sort_unstable_by(|a, b| b.cmp(a));
            notes.push(format!("{s} equations in {n} unknowns: Bézout bound uses the {n} largest degrees"));
            bezout_bound(&d[..n])?
        } else {
            notes.push(format!("{s} equations in {n} unknowns: no isolated solutions are expected"));
            bezout_bound(&degrees)?
        };
        return Ok(RootCountReport { bezout, kushnirenko: None, bkk: None, notes });
    }
    let bezout = bezout_bound(&degrees)?;
    let supports = system
        .polys()
        .iter()
        .map(Support::from_polynomial)
        .collect::<Result<Vec<_>, _>>()?;
    let shared = supports.windows(2).all(|w| w[0] == w[1]);
    let kushnirenko = if shared && n <= HULL_DIMENSION_CAP {
        Some(normalized_volume(&supports[0])?)
    } else {
        None
    };
    let bkk = if n <= MIXED_VOLUME_CAP {
        Some(mixed_volume(&supports)?)
    } else {
        notes.push(format!("mixed volume skipped: n = {n} exceeds {MIXED_VOLUME_CAP}"));
        None
    };
    if kushnirenko.is_some() || bkk.is_some() {
        let origin = vec![0i64; n];
        if supports.iter().all(|a| a.points.contains(&origin)) {
            notes.push("every support contains 0: polytope bounds also apply to solutions in K^n".into());
        } else {
            notes.push("polytope bounds count solutions with all coordinates nonzero".into());
        }
    }
    Ok(RootCountReport { bezout, kushnirenko, bkk, notes })
}
