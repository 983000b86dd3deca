//! Macaulay matrices, truncated normal forms, quotient bases and
//! multiplication matrices, and the eigenvalue method built on them.

mod dump;
mod solve;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::linalg::{pivoted_qr_reduce, rational_rref, DenseMatrix, LinalgError, Reduced};
use crate::poly::{Monomial, MonomialOrder, PolyError, PolySystem, Polynomial};
use crate::scalar::{Complex, Rational, Scalar};

pub use dump::dump_csv;
pub use solve::{solve_eigen, solve_with_basis, EigenConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MacaulayError {
    #[error("truncation degree {degree} is below the largest equation degree {max}")]
    DegreeTooLow { degree: u32, max: u32 },
    #[error("the system has no solutions (1 lies in the ideal)")]
    Inconsistent,
    #[error("{equations} equations in {unknowns} unknowns cannot have finitely many solutions")]
    Underdetermined { equations: usize, unknowns: usize },
    #[error("no finite quotient basis up to truncation degree {max_degree}")]
    NotZeroDimensional { max_degree: u32 },
    #[error("normal form of {0} is not determined at this truncation degree")]
    Unreadable(String),
    #[error("multiplication matrices do not commute at this truncation degree")]
    NonCommuting,
    #[error("truncation too small: no normal form for {0}")]
    TruncationTooSmall(String),
    #[error("companion matrix needs a univariate polynomial of degree at least 1")]
    NotUnivariate,
    #[error("quotient basis does not contain the monomial 1")]
    BasisLacksOne,
    #[error("eigenvalues {0:.3e} apart: suspected solution with multiplicity > 1")]
    SuspectedMultiplicity(f64),
    #[error("solution {index} has residual {residual:.3e} after refinement")]
    ResidualTooLarge { index: usize, residual: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Coefficient fields for which a Macaulay matrix can be reduced.
pub trait NormalFormField: Scalar {
    /// Row reduction with pivot columns chosen tier by tier.
    fn reduce(m: &DenseMatrix<Self>, tiers: &[Vec<usize>]) -> Reduced<Self>;

    /// Whether an entry of a reduced row counts as zero.
    fn negligible(v: &Self) -> bool;

    fn commute(a: &DenseMatrix<Self>, b: &DenseMatrix<Self>) -> bool;

    fn entry_text(v: &Self) -> String;

    /// A quotient basis by other means, for systems whose Macaulay matrices
    /// never certify one (typically because of solutions at infinity).
    fn fallback_basis(_system: &PolySystem<Self>) -> Option<QuotientBasis<Self>> {
        None
    }
}

impl NormalFormField for Rational {
    fn reduce(m: &DenseMatrix<Self>, tiers: &[Vec<usize>]) -> Reduced<Self> {
        let order: Vec<usize> = tiers.concat();
        rational_rref(m, &order)
    }

    fn negligible(v: &Self) -> bool {
        num_traits::Zero::is_zero(v)
    }

    fn commute(a: &DenseMatrix<Self>, b: &DenseMatrix<Self>) -> bool {
        a.matmul(b).ok() == b.matmul(a).ok()
    }

    fn entry_text(v: &Self) -> String {
        let (neg, abs) = v.sign_and_abs_text();
        if neg {
            format!("-{abs}")
        } else {
            abs
        }
    }

    fn fallback_basis(system: &PolySystem<Self>) -> Option<QuotientBasis<Self>> {
        let gb = crate::groebner::buchberger(system, &MonomialOrder::grevlex(system.nvars())).ok()?;
        gb.quotient_basis().ok()
    }
}

/// Relative rank threshold of the column-pivoted QR reduction.
const COMPLEX_RANK_TOL: f64 = 1e-10;

impl NormalFormField for Complex {
    fn reduce(m: &DenseMatrix<Self>, tiers: &[Vec<usize>]) -> Reduced<Self> {
        pivoted_qr_reduce(m, tiers, COMPLEX_RANK_TOL)
    }

    fn negligible(v: &Self) -> bool {
        v.norm() <= 1e-8
    }

    fn commute(a: &DenseMatrix<Self>, b: &DenseMatrix<Self>) -> bool {
        let (Ok(ab), Ok(ba)) = (a.matmul(b), b.matmul(a)) else {
            return false;
        };
        ab.sub(&ba).frobenius_norm() <= 1e-8 * (1.0 + a.frobenius_norm() * b.frobenius_norm())
    }

    fn entry_text(v: &Self) -> String {
        if v.im == 0.0 {
            format!("{}", v.re)
        } else {
            format!("{}{:+}i", v.re, v.im)
        }
    }
}

/// Rows are shifts `x^β f_i`, columns are all monomials of degree at most
/// `degree`, in grlex-descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct MacaulayMatrix<C> {
    pub vars: Vec<String>,
    pub degree: u32,
    /// `(i, β)`: the row holds the coefficients of `x^β f_i` (0-based `i`).
    pub rows: Vec<(usize, Monomial)>,
    pub columns: Vec<Monomial>,
    pub matrix: DenseMatrix<C>,
}

impl<C: Scalar> MacaulayMatrix<C> {
    /// `f1`, `x*f1`, `y^2*f2`, …
    pub fn row_labels(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|(i, b)| {
                if b.is_one() {
                    format!("f{}", i + 1)
                } else {
                    format!("{}*f{}", b.to_text(&self.vars), i + 1)
                }
            })
            .collect()
    }

    pub fn column_labels(&self) -> Vec<String> {
        self.columns.iter().map(|m| m.to_text(&self.vars)).collect()
    }

    /// The same matrix with columns permuted to `order` (indices into the current columns).
    pub fn with_column_order(&self, order: &[usize]) -> Self {
        MacaulayMatrix {
            vars: self.vars.clone(),
            degree: self.degree,
            rows: self.rows.clone(),
            columns: order.iter().map(|&j| self.columns[j].clone()).collect(),
            matrix: DenseMatrix::from_fn(self.matrix.rows(), order.len(), |i, j| self.matrix[(i, order[j])].clone()),
        }
    }
}

/// `Σ (d_i - 1) + 1` over the `n` largest degrees.
pub fn macaulay_degree(degrees: &[i64], nvars: usize) -> u32 {
    let mut d: Vec<i64> = degrees.iter().map(|&x| x.max(0)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let s: i64 = d.iter().take(nvars).map(|&x| (x - 1).max(0)).sum();
    (s + 1).max(d.first().copied().unwrap_or(0)) as u32
}

/// Monomials of degree at most `d`, grlex descending.
fn columns_for_degree(n: usize, d: u32) -> Vec<Monomial> {
    let all = Monomial::up_to_degree(n, d);
    let mut out = Vec::with_capacity(all.len());
    for deg in (0..=d).rev() {
        out.extend(all.iter().filter(|m| m.degree() == deg).cloned());
    }
    out
}

pub fn build_macaulay<C: Scalar>(system: &PolySystem<C>, degree: u32) -> Result<MacaulayMatrix<C>, MacaulayError> {
    let max = system.degrees().into_iter().max().unwrap_or(0).max(0) as u32;
    if degree < max {
        return Err(MacaulayError::DegreeTooLow { degree, max });
    }
    let n = system.nvars();
    let columns = columns_for_degree(n, degree);
    let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    let mut entries: Vec<Vec<C>> = Vec::new();
    for (i, f) in system.polys().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let shift_deg = degree - f.degree() as u32;
        for beta in Monomial::up_to_degree(n, shift_deg) {
            let mut row = vec![C::zero(); columns.len()];
            for (m, c) in f.terms() {
                row[index[&m.mul(&beta)]] = c.clone();
            }
            rows.push((i, beta));
            entries.push(row);
        }
    }
    let matrix = if entries.is_empty() {
        DenseMatrix::zeros(0, columns.len())
    } else {
        DenseMatrix::from_rows(entries)?
    };
    Ok(MacaulayMatrix { vars: system.vars().to_vec(), degree, rows, columns, matrix })
}

/// A monomial basis `b_1, …, b_δ` of `R/I` with normal forms of `b_i` and `x_k b_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientBasis<C> {
    vars: Vec<String>,
    monomials: Vec<Monomial>,
    normal_forms: BTreeMap<Monomial, Vec<C>>,
}

impl<C: NormalFormField> QuotientBasis<C> {
    /// Assembles a basis from known normal forms; each basis monomial maps to its unit vector.
    pub fn new(vars: Vec<String>, monomials: Vec<Monomial>, mut normal_forms: BTreeMap<Monomial, Vec<C>>) -> Self {
        for (i, b) in monomials.iter().enumerate() {
            let mut e = vec![C::zero(); monomials.len()];
            e[i] = C::one();
            normal_forms.insert(b.clone(), e);
        }
        QuotientBasis { vars, monomials, normal_forms }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// `δ = dim R/I`.
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.monomials.iter().position(|b| b == m)
    }

    /// Normal-form coefficients of a monomial, if known at this truncation.
    pub fn normal_form_of(&self, m: &Monomial) -> Option<&[C]> {
        self.normal_forms.get(m).map(|v| v.as_slice())
    }

    /// Normal form of a polynomial whose monomials all have known normal forms.
    pub fn normal_form(&self, g: &Polynomial<C>) -> Result<Vec<C>, MacaulayError> {
        let mut out = vec![C::zero(); self.len()];
        for (m, c) in g.terms() {
            let nf = self
                .normal_forms
                .get(m)
                .ok_or_else(|| MacaulayError::TruncationTooSmall(m.to_text(&self.vars)))?;
            for (o, v) in out.iter_mut().zip(nf) {
                *o = o.clone() + c.clone() * v.clone();
            }
        }
        Ok(out)
    }

    pub fn to_polynomial(&self, coeffs: &[C]) -> Polynomial<C> {
        let n = self.vars.len();
        Polynomial::from_terms(n, self.monomials.iter().cloned().zip(coeffs.iter().cloned())).expect("finite coefficients")
    }
}

/// The matrix of multiplication by `g` on `R/I`: column `i` holds the
/// normal-form coefficients of `g b_i`.
pub fn multiplication_matrix<C: NormalFormField>(
    basis: &QuotientBasis<C>,
    g: &Polynomial<C>,
) -> Result<DenseMatrix<C>, MacaulayError> {
    let n = basis.vars.len();
    if g.nvars() != n {
        return Err(PolyError::DimensionMismatch { expected: n, got: g.nvars() }.into());
    }
    let d = basis.len();
    let mut m = DenseMatrix::zeros(d, d);
    for (i, b) in basis.monomials.iter().enumerate() {
        let col = basis.normal_form(&g.shift(b)?)?;
        for (r, v) in col.into_iter().enumerate() {
            m[(r, i)] = v;
        }
    }
    Ok(m)
}

/// Companion matrix of a univariate polynomial: subdiagonal ones and last
/// column `-c_i / c_d`. It equals `M_x` in the basis `1, x, …, x^(d-1)`.
pub fn companion_matrix<C: Scalar>(f: &Polynomial<C>) -> Result<DenseMatrix<C>, MacaulayError> {
    if f.nvars() != 1 || f.degree() < 1 {
        return Err(MacaulayError::NotUnivariate);
    }
    let d = f.degree() as usize;
    let lead = f.coefficient(&Monomial::new(vec![d as u32]));
    let mut m = DenseMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = C::one();
    }
    for i in 0..d {
        m[(i, d - 1)] = -(f.coefficient(&Monomial::new(vec![i as u32])) / lead.clone());
    }
    Ok(m)
}

/// The reduced Macaulay matrix with columns ordered pivots first, then the
/// non-basis columns of top degree, then the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedMacaulay<C: Scalar> {
    pub vars: Vec<String>,
    pub columns: Vec<Monomial>,
    pub matrix: DenseMatrix<C>,
    /// Polynomial in the ideal represented by each row.
    pub row_polys: Vec<Polynomial<C>>,
}

impl<C: Scalar> ReducedMacaulay<C> {
    pub fn column_labels(&self) -> Vec<String> {
        self.columns.iter().map(|m| m.to_text(&self.vars)).collect()
    }

    pub fn row_labels(&self) -> Vec<String> {
        self.row_polys.iter().map(|p| p.display(&self.vars).to_string()).collect()
    }
}

/// Everything produced by a successful normal-form computation.
#[derive(Clone, Debug)]
pub struct MacaulayReduction<C: Scalar> {
    /// The Macaulay matrix with columns in the final (reduced) order.
    pub macaulay: MacaulayMatrix<C>,
    pub reduced: ReducedMacaulay<C>,
    pub basis: QuotientBasis<C>,
    /// `M_{x_j}` for every variable.
    pub coordinate_matrices: Vec<DenseMatrix<C>>,
}

/// Row-reduces `m`, picks the quotient basis among non-pivot columns of
/// degree below the truncation, and reads normal forms of `x_k b_i`.
pub fn reduce_and_select_basis<C: NormalFormField>(
    m: &MacaulayMatrix<C>,
) -> Result<MacaulayReduction<C>, MacaulayError> {
    let n = m.vars.len();
    let d = m.degree;
    let ncols = m.columns.len();
    let mut tiers: Vec<Vec<usize>> = Vec::new();
    for (j, c) in m.columns.iter().enumerate() {
        match tiers.last_mut() {
            Some(t) if m.columns[t[0]].degree() == c.degree() => t.push(j),
            _ => tiers.push(vec![j]),
        }
    }
    let red = C::reduce(&m.matrix, &tiers);
    let mut is_pivot = vec![None; ncols];
    for (r, &c) in red.pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let one = Monomial::one(n);
    let one_col = m.columns.iter().position(|c| *c == one).expect("constant column");
    if is_pivot[one_col].is_some() {
        return Err(MacaulayError::Inconsistent);
    }
    let mut basis_cols: Vec<usize> = (0..ncols).filter(|&j| is_pivot[j].is_none() && m.columns[j].degree() < d).collect();
    let infinity_cols: Vec<usize> = (0..ncols).filter(|&j| is_pivot[j].is_none() && m.columns[j].degree() == d).collect();
    basis_cols.sort_by(|&a, &b| {
        let (ma, mb) = (&m.columns[a], &m.columns[b]);
        ma.degree().cmp(&mb.degree()).then_with(|| mb.cmp(ma))
    });
    let monomials: Vec<Monomial> = basis_cols.iter().map(|&j| m.columns[j].clone()).collect();
    let col_index: HashMap<&Monomial, usize> = m.columns.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut nfs: BTreeMap<Monomial, Vec<C>> = BTreeMap::new();
    for b in &monomials {
        for k in 0..n {
            let xb = b.mul(&Monomial::var(n, k));
            if monomials.contains(&xb) || nfs.contains_key(&xb) {
                continue;
            }
            let Some(&col) = col_index.get(&xb) else {
                return Err(MacaulayError::Unreadable(xb.to_text(&m.vars)));
            };
            let Some(r) = is_pivot[col] else {
                return Err(MacaulayError::Unreadable(xb.to_text(&m.vars)));
            };
            let row = red.matrix.row(r);
            if infinity_cols.iter().any(|&c| !C::negligible(&row[c])) {
                return Err(MacaulayError::Unreadable(xb.to_text(&m.vars)));
            }
            nfs.insert(xb, basis_cols.iter().map(|&c| -row[c].clone()).collect());
        }
    }
    for (r, &col) in red.pivots.iter().enumerate() {
        let row = red.matrix.row(r);
        if !nfs.contains_key(&m.columns[col]) && infinity_cols.iter().all(|&c| C::negligible(&row[c])) {
            nfs.insert(m.columns[col].clone(), basis_cols.iter().map(|&c| -row[c].clone()).collect());
        }
    }
    let basis = QuotientBasis::new(m.vars.clone(), monomials, nfs);
    let coordinate_matrices = (0..n)
        .map(|k| multiplication_matrix(&basis, &Polynomial::var(n, k)))
        .collect::<Result<Vec<_>, _>>()?;
    for a in 0..n {
        for b in a + 1..n {
            if !C::commute(&coordinate_matrices[a], &coordinate_matrices[b]) {
                return Err(MacaulayError::NonCommuting);
            }
        }
    }
    let order: Vec<usize> = red.pivots.iter().copied().chain(infinity_cols).chain(basis_cols).collect();
    let rank = red.rank();
    let rmat = DenseMatrix::from_fn(rank, ncols, |i, j| red.matrix[(i, order[j])].clone());
    let row_polys = (0..rank)
        .map(|i| {
            Polynomial::from_terms(n, m.columns.iter().cloned().zip(red.matrix.row(i).iter().cloned()))
                .expect("finite entries")
        })
        .collect();
    let reduced = ReducedMacaulay {
        vars: m.vars.clone(),
        columns: order.iter().map(|&j| m.columns[j].clone()).collect(),
        matrix: rmat,
        row_polys,
    };
    Ok(MacaulayReduction { macaulay: m.with_column_order(&order), reduced, basis, coordinate_matrices })
}

/// Normal-form data at the default truncation degree, raised by one up to
/// `max_extra` times while the basis cannot be certified.
pub fn quotient_basis<C: NormalFormField>(
    system: &PolySystem<C>,
    max_extra: u32,
) -> Result<MacaulayReduction<C>, MacaulayError> {
    let n = system.nvars();
    let nonzero = system.polys().iter().filter(|p| !p.is_zero()).count();
    if system.polys().iter().any(|p| p.degree() == 0) {
        return Err(MacaulayError::Inconsistent);
    }
    if nonzero < n {
        return Err(MacaulayError::Underdetermined { equations: nonzero, unknowns: n });
    }
    let d0 = macaulay_degree(&system.degrees(), n);
    for d in d0..=d0 + max_extra {
        let m = build_macaulay(system, d)?;
        match reduce_and_select_basis(&m) {
            Ok(r) => return Ok(r),
            Err(MacaulayError::Unreadable(_)) | Err(MacaulayError::NonCommuting) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(MacaulayError::NotZeroDimensional { max_degree: d0 + max_extra })
}
