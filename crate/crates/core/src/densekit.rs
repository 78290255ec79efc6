//! Dense real linear algebra: the matrix carrier, Jacobi SVD, Jacobi
//! symmetric eigendecomposition, numerical rank, pseudoinverse and
//! orthonormal range / null-space bases.
//!
//! Everything here is deterministic. Rank decisions are always made relative
//! to the largest singular value (see [`TolerancePolicy::rank_rel_tol`]), so
//! scaling an operator never changes its numerical rank.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// Sweep cap for both Jacobi iterations. Well-scaled problems converge in
/// fewer than 15 sweeps.
const MAX_SWEEPS: usize = 100;

/// Tolerances shared by every rank decision and identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Singular values at or below `rank_rel_tol · s₀` count as zero.
    pub rank_rel_tol: f64,
    /// Absolute tolerance for residual and identity checks.
    pub identity_tol: f64,
    /// Multiplicative slack applied to the right side of inequality checks.
    pub bound_slack: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-12,
            identity_tol: 1e-8,
            bound_slack: 1.0 + 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rank_rel_tol: f64, identity_tol: f64, bound_slack: f64) -> Result<Self> {
        let policy = Self {
            rank_rel_tol,
            identity_tol,
            bound_slack,
        };
        policy.validate()?;
        Ok(policy)
    }

    /// Default policy with a different identity tolerance.
    pub fn with_identity_tol(identity_tol: f64) -> Result<Self> {
        let base = Self::default();
        Self::new(base.rank_rel_tol, identity_tol, base.bound_slack)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(self.rank_rel_tol) || self.rank_rel_tol >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "rank_rel_tol must lie in (0, 1), got {}",
                self.rank_rel_tol
            )));
        }
        if !ok(self.identity_tol) {
            return Err(Error::InvalidInput(format!(
                "identity_tol must be positive, got {}",
                self.identity_tol
            )));
        }
        if !ok(self.bound_slack) {
            return Err(Error::InvalidInput(format!(
                "bound_slack must be positive, got {}",
                self.bound_slack
            )));
        }
        Ok(())
    }
}

/// Real matrix stored row-major.
///
/// Zero columns are allowed: an `n × 0` matrix is the basis of the trivial
/// subspace of `Rⁿ`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting non-finite entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "entry ({}, {}) is not finite",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    /// Builds an `n × k` matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[f64]>>(n: usize, columns: &[C]) -> Result<Self> {
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {n}",
                    c.len()
                )));
            }
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        if !m.is_finite() {
            return Err(Error::InvalidInput("non-finite column entry".into()));
        }
        Ok(m)
    }

    pub fn column_vector(v: &[f64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · rhs` without materializing the transpose.
    pub fn t_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply ({}×{})ᵀ by {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let lrow = self.row(k);
            let rrow = rhs.row(k);
            for (i, &a) in lrow.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}×{} matrix to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| vecops::dot(self.row(i), x))
            .collect())
    }

    /// `selfᵀ · x`.
    pub fn t_matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if self.rows != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply transpose of {}×{} matrix to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            vecops::axpy(xi, self.row(i), &mut out);
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, op: &str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot {op} {}×{} and {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "subtract", |a, b| a - b)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| alpha * x).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        vecops::norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Spectral norm (largest singular value).
    pub fn norm2(&self) -> Result<f64> {
        Ok(svd(self)?.s.first().copied().unwrap_or(0.0))
    }

    /// `(S + Sᵀ) / 2`.
    pub fn symmetric_part(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "symmetric part needs a square matrix, got {}×{}",
                self.rows, self.cols
            )));
        }
        let mut s = self.clone();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }
        Ok(s)
    }

    /// `‖S − Sᵀ‖_F`.
    pub fn asymmetry(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows.min(self.cols) {
            for j in (i + 1)..self.cols.min(self.rows) {
                let d = self[(i, j)] - self[(j, i)];
                acc += 2.0 * d * d;
            }
        }
        acc.sqrt()
    }

    /// Columns `range` as a new matrix.
    pub fn select_columns(&self, range: std::ops::Range<usize>) -> Self {
        let k = range.len();
        let mut out = Self::zeros(self.rows, k);
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    /// `[self | rhs]`.
    pub fn hcat(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot concatenate {}×{} and {}×{} side by side",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            let row = &mut out.data[i * (self.cols + rhs.cols)..(i + 1) * (self.cols + rhs.cols)];
            row[..self.cols].copy_from_slice(self.row(i));
            row[self.cols..].copy_from_slice(rhs.row(i));
        }
        Ok(out)
    }

    /// Stacks `self` on top of `rhs`.
    pub fn vcat(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {}×{} on {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Self {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for x in self.row(i) {
                write!(f, "{x:>12.5e} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Small helpers on `&[f64]` vectors.
pub mod vecops {
    #[inline]
    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Euclidean norm, scaled to avoid overflow.
    pub fn norm(a: &[f64]) -> f64 {
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let ss: f64 = a.iter().map(|x| (x / scale) * (x / scale)).sum();
        scale * ss.sqrt()
    }

    /// `y ← y + alpha·x`.
    #[inline]
    pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += alpha * xi;
        }
    }

    pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn scale(alpha: f64, a: &[f64]) -> Vec<f64> {
        a.iter().map(|x| alpha * x).collect()
    }
}

/// Thin singular value decomposition `M = U · diag(s) · Vᵀ`.
///
/// For an `m × n` input, `U` is `m × k`, `V` is `n × k` with `k = min(m, n)`,
/// and `s` is sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Columns are rotated pairwise until every pair is orthogonal relative to
/// its own norms, which gives singular values with small relative error and
/// orthonormal singular vectors even for tiny singular values.
pub fn svd(m: &DenseMatrix) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::InvalidInput(
            "svd input has non-finite entries".into(),
        ));
    }
    if m.rows() < m.cols() {
        let t = svd_tall(&m.transpose())?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    svd_tall(m)
}

fn svd_tall(m: &DenseMatrix) -> Result<Svd> {
    let (rows, cols) = m.shape();
    debug_assert!(rows >= cols);
    if cols == 0 {
        return Ok(Svd {
            u: DenseMatrix::zeros(rows, 0),
            s: Vec::new(),
            v: DenseMatrix::zeros(0, 0),
        });
    }

    // Work column-major: each column of `w` and `v` is contiguous.
    let mut w: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            let mut e = vec![0.0; cols];
            e[j] = 1.0;
            e
        })
        .collect();
    let mut sq: Vec<f64> = w.iter().map(|c| vecops::dot(c, c)).collect();

    // Pairs count as orthogonal once |γ| ≤ rows·ε·√(αβ); a bare ε threshold
    // can cycle forever on columns that are pure rounding noise.
    let eps = f64::EPSILON * rows as f64;
    // Columns below ε‖M‖_F are rounding residue of a rank deficiency; rotating
    // them only shrinks them geometrically without ever converging.
    let negligible = {
        let fro = m.frobenius_norm();
        let t = f64::EPSILON * fro;
        t * t
    };
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha = sq[p];
                let beta = sq[q];
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = vecops::dot(&w[p], &w[q]);
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s);
                rotate_pair(&mut v, p, q, c, s);
                sq[p] = vecops::dot(&w[p], &w[p]);
                sq[q] = vecops::dot(&w[q], &w[q]);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps ({rows}×{cols})"
        )));
    }

    let norms: Vec<f64> = w.iter().map(|c| vecops::norm(c)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut pending = Vec::new();
    for (jj, &j) in order.iter().enumerate() {
        if norms[j] * norms[j] > negligible && norms[j] > f64::MIN_POSITIVE {
            ucols.push(vecops::scale(1.0 / norms[j], &w[j]));
        } else {
            ucols.push(vec![0.0; rows]);
            pending.push(jj);
        }
    }
    complete_orthonormal(&mut ucols, &pending);

    let mut u = DenseMatrix::zeros(rows, cols);
    let mut vm = DenseMatrix::zeros(cols, cols);
    for (jj, &j) in order.iter().enumerate() {
        for i in 0..rows {
            u[(i, jj)] = ucols[jj][i];
        }
        for i in 0..cols {
            vm[(i, jj)] = v[j][i];
        }
    }
    Ok(Svd { u, s, v: vm })
}

#[inline]
fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *x;
        let b = *y;
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Replaces the columns listed in `pending` with unit vectors orthogonal to
/// every other column, drawing candidates from the standard basis.
fn complete_orthonormal(cols: &mut [Vec<f64>], pending: &[usize]) {
    if pending.is_empty() {
        return;
    }
    let n = cols[0].len();
    for &slot in pending {
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = -1.0;
        for e in 0..n {
            let mut cand = vec![0.0; n];
            cand[e] = 1.0;
            // Two passes of Gram-Schmidt.
            for _ in 0..2 {
                for (k, c) in cols.iter().enumerate() {
                    if k == slot {
                        continue;
                    }
                    let d = vecops::dot(c, &cand);
                    vecops::axpy(-d, c, &mut cand);
                }
            }
            let nn = vecops::norm(&cand);
            if nn > best_norm {
                best_norm = nn;
                best = Some(vecops::scale(1.0 / nn, &cand));
            }
            if nn > 0.7 {
                break;
            }
        }
        if let Some(b) = best {
            cols[slot] = b;
        }
    }
}

/// Number of singular values strictly above `rank_rel_tol · s₀`.
pub fn numerical_rank(s: &[f64], tol: &TolerancePolicy) -> usize {
    match s.first() {
        None => 0,
        Some(&s0) if s0 <= 0.0 => 0,
        Some(&s0) => {
            let cutoff = tol.rank_rel_tol * s0;
            s.iter().take_while(|&&x| x > cutoff).count()
        }
    }
}

/// Number of singular values strictly above `rank_rel_tol · scale`.
///
/// For products such as `P⊥A` whose exact value may be zero, a cutoff
/// relative to the product's own largest singular value would count
/// rounding noise as rank; `scale` supplies the reference magnitude
/// instead (`‖A‖`, or 1 for projected orthonormal bases).
pub fn numerical_rank_scaled(s: &[f64], scale: f64, tol: &TolerancePolicy) -> usize {
    let cutoff = tol.rank_rel_tol * scale;
    s.iter().take_while(|&&x| x > cutoff).count()
}

/// Moore–Penrose pseudoinverse through the SVD, truncated at the numerical
/// rank.
pub fn pinv(m: &DenseMatrix, tol: &TolerancePolicy) -> Result<DenseMatrix> {
    let Svd { u, s, v } = svd(m)?;
    let r = numerical_rank(&s, tol);
    let mut out = DenseMatrix::zeros(m.cols(), m.rows());
    for k in 0..r {
        let inv = 1.0 / s[k];
        for i in 0..m.cols() {
            let vik = v[(i, k)] * inv;
            if vik == 0.0 {
                continue;
            }
            for j in 0..m.rows() {
                out[(i, j)] += vik * u[(j, k)];
            }
        }
    }
    Ok(out)
}

/// Orthonormal basis of the column space `R(M)`.
pub fn orth_range(m: &DenseMatrix, tol: &TolerancePolicy) -> Result<Subspace> {
    let Svd { u, s, .. } = svd(m)?;
    let r = numerical_rank(&s, tol);
    Ok(Subspace::from_orthonormal_unchecked(u.select_columns(0..r)))
}

/// [`orth_range`] with the rank cutoff taken relative to `scale`.
pub fn orth_range_scaled(m: &DenseMatrix, scale: f64, tol: &TolerancePolicy) -> Result<Subspace> {
    let Svd { u, s, .. } = svd(m)?;
    let r = numerical_rank_scaled(&s, scale, tol);
    Ok(Subspace::from_orthonormal_unchecked(u.select_columns(0..r)))
}

/// Orthonormal basis of the null-space `N(M)`.
pub fn null_space(m: &DenseMatrix, tol: &TolerancePolicy) -> Result<Subspace> {
    null_space_impl(m, None, tol)
}

/// [`null_space`] with the rank cutoff taken relative to `scale`.
pub fn null_space_scaled(m: &DenseMatrix, scale: f64, tol: &TolerancePolicy) -> Result<Subspace> {
    null_space_impl(m, Some(scale), tol)
}

fn null_space_impl(m: &DenseMatrix, scale: Option<f64>, tol: &TolerancePolicy) -> Result<Subspace> {
    let n = m.cols();
    // Pad wide matrices with zero rows so the Jacobi sweep returns a full
    // n × n right factor.
    let padded;
    let work = if m.rows() < n {
        padded = m.vcat(&DenseMatrix::zeros(n - m.rows(), n))?;
        &padded
    } else {
        m
    };
    let Svd { s, v, .. } = svd(work)?;
    let r = match scale {
        Some(scale) => numerical_rank_scaled(&s, scale, tol),
        None => numerical_rank(&s, tol),
    };
    Ok(Subspace::from_orthonormal_unchecked(v.select_columns(r..n)))
}

/// Symmetric eigendecomposition `S = Q · diag(λ) · Qᵀ`.
#[derive(Debug, Clone)]
pub struct SymEig {
    /// Eigenvalues in nondecreasing order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column `i` pairs with `values[i]`.
    pub vectors: DenseMatrix,
}

/// Cyclic Jacobi eigenvalue iteration.
///
/// Inputs within `identity_tol · (1 + ‖S‖_F)` of symmetric are symmetrized
/// first; anything further off is rejected with [`Error::NotSymmetric`].
pub fn sym_eig(s: &DenseMatrix, tol: &TolerancePolicy) -> Result<SymEig> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}×{}",
            s.rows(),
            s.cols()
        )));
    }
    if !s.is_finite() {
        return Err(Error::InvalidInput(
            "eigendecomposition input has non-finite entries".into(),
        ));
    }
    let asym = s.asymmetry();
    let allowed = tol.identity_tol * (1.0 + s.frobenius_norm());
    if asym > allowed {
        return Err(Error::NotSymmetric {
            asymmetry: asym,
            allowed,
        });
    }
    let mut a = s.symmetric_part()?;
    let n = a.rows();
    let mut q = DenseMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n <= 1 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0;
        for p in 0..n {
            for r in (p + 1)..n {
                off += a[(p, r)] * a[(p, r)];
            }
        }
        if off.sqrt() <= 0.5 * f64::EPSILON * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a[(p, r)];
                if apr == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let arr = a[(r, r)];
                // Skip rotations that can no longer change the diagonal.
                if apr.abs() < 1e-3 * f64::EPSILON * (app.abs() + arr.abs())
                    && apr.abs() < f64::EPSILON * f64::EPSILON * scale
                {
                    a[(p, r)] = 0.0;
                    a[(r, p)] = 0.0;
                    continue;
                }
                let theta = (arr - app) / (2.0 * apr);
                let t = if theta.is_infinite() {
                    0.0
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akr = a[(k, r)];
                    a[(k, p)] = c * akp - sn * akr;
                    a[(k, r)] = sn * akp + c * akr;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let ark = a[(r, k)];
                    a[(p, k)] = c * apk - sn * ark;
                    a[(r, k)] = sn * apk + c * ark;
                }
                a[(p, r)] = 0.0;
                a[(r, p)] = 0.0;
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - sn * qkr;
                    q[(k, r)] = sn * qkp + c * qkr;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi eigenvalue iteration did not converge in {MAX_SWEEPS} sweeps ({n}×{n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].total_cmp(&a[(y, y)]).then(x.cmp(&y)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (jj, &j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, jj)] = q[(i, j)];
        }
    }
    Ok(SymEig { values, vectors })
}
