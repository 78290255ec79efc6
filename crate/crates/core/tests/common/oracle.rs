//! Reference computations that share no code with the library: nalgebra's
//! symmetric eigensolver and Householder QR, and textbook full-pivot
//! Gaussian elimination. nalgebra's SVD is avoided: on rank-deficient
//! input it can return factors that do not reproduce the matrix.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use saddlegap_core::{DenseMatrix, SaddleProblem};

pub fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn vec_na(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

/// Relative cutoff on eigenvalues of Gram matrices `MᵀM`, i.e. `1e-6` on
/// singular values. Every generated operator has its nonzero spectrum far
/// above this.
pub const GRAM_CUTOFF: f64 = 1e-12;

/// Eigenpairs of a symmetric matrix, eigenvalues descending.
fn eig_desc(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let e = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &e.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Eigenvalues ascending.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v = eig_desc(m).0;
    v.reverse();
    v
}

/// Singular values, descending, as square roots of the eigenvalues of `MᵀM`.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let gram = if m.nrows() >= m.ncols() {
        m.transpose() * m
    } else {
        m * m.transpose()
    };
    eig_desc(&gram)
        .0
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

/// Orthonormal basis of `R(M)` from the eigenvectors of `MMᵀ` whose
/// eigenvalues exceed `cutoff(λ_max)`.
fn range_basis_with(m: &DMatrix<f64>, cutoff: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let rows = m.nrows();
    if rows == 0 || m.ncols() == 0 {
        return DMatrix::zeros(rows, 0);
    }
    let (values, vectors) = eig_desc(&(m * m.transpose()));
    let top = values[0];
    let r = if top <= 0.0 {
        0
    } else {
        values.iter().filter(|&&l| l > cutoff(top)).count()
    };
    vectors.columns(0, r).into_owned()
}

/// Orthonormal basis of `R(M)`, rank relative to the largest singular value.
pub fn range_basis(m: &DMatrix<f64>) -> DMatrix<f64> {
    range_basis_with(m, |top| GRAM_CUTOFF * top)
}

/// Orthonormal basis of `R(M)` for products of orthonormal bases and
/// projectors, whose nonzero singular values are O(1).
pub fn range_basis_abs(m: &DMatrix<f64>) -> DMatrix<f64> {
    range_basis_with(m, |_| GRAM_CUTOFF)
}

pub fn rank(m: &DMatrix<f64>) -> usize {
    range_basis(m).ncols()
}

/// Orthogonal projector onto `R(Mᵀ) = N(M)⊥`.
pub fn row_space_projector(m: &DMatrix<f64>) -> DMatrix<f64> {
    let q = range_basis(&m.transpose());
    &q * q.transpose()
}

/// Minimum-norm least-squares solution of `M x = b`.
///
/// The row space comes from the eigenvectors of `MᵀM`; the reduced problem
/// `(M V_r) y = b` has full column rank and is solved by Householder QR, so
/// the conditioning is not squared in the solve itself.
pub fn min_norm_solve(m: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let v = range_basis(&m.transpose());
    if v.ncols() == 0 {
        return DVector::zeros(m.ncols());
    }
    let qr = (m * &v).qr();
    let rhs = qr.q().transpose() * b;
    let y = qr
        .r()
        .solve_upper_triangular(&rhs)
        .expect("full column rank");
    v * y
}

/// Minimum-norm least-squares σ of the stacked system
/// `[P⊥A; P] σ = [P⊥g; Pf]`, with `P` from the row space of `B`.
pub fn stacked_sigma(p: &SaddleProblem) -> DVector<f64> {
    let n = p.n();
    let a = to_na(p.a());
    let proj = row_space_projector(&to_na(p.b()));
    let pp = DMatrix::identity(n, n) - &proj;
    let mut stacked = DMatrix::zeros(2 * n, n);
    stacked.rows_mut(0, n).copy_from(&(&pp * &a));
    stacked.rows_mut(n, n).copy_from(&proj);
    let mut rhs = DVector::zeros(2 * n);
    rhs.rows_mut(0, n).copy_from(&(&pp * vec_na(p.g())));
    rhs.rows_mut(n, n).copy_from(&(&proj * vec_na(p.f())));
    min_norm_solve(&stacked, &rhs)
}

/// Minimum-norm `u` with `Bᵀu = P(g − Aσ)`.
pub fn multiplier(p: &SaddleProblem, sigma: &DVector<f64>) -> DVector<f64> {
    let b = to_na(p.b());
    let proj = row_space_projector(&b);
    let rhs = proj * (vec_na(p.g()) - to_na(p.a()) * sigma);
    min_norm_solve(&b.transpose(), &rhs)
}

/// Orthonormal basis of `N(M)`: eigenvectors of `MᵀM` below the rank cutoff.
pub fn null_basis(m: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = m.ncols();
    let r = rank(m);
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    let (_, vectors) = eig_desc(&(m.transpose() * m));
    vectors.columns(r, cols - r).into_owned()
}

/// Orthonormal basis of the orthogonal complement of `R(q)`, `q` orthonormal.
pub fn complement_basis(q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.nrows();
    let (values, vectors) = eig_desc(&(DMatrix::identity(n, n) - q * q.transpose()));
    let k = values.iter().filter(|&&l| l > 0.5).count();
    vectors.columns(0, k).into_owned()
}

pub fn from_na(m: &DMatrix<f64>) -> DenseMatrix {
    let data = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)]))
        .collect();
    DenseMatrix::from_row_major(m.nrows(), m.ncols(), data).unwrap()
}

/// Smallest eigenvalue above `rel · reference`.
pub fn smallest_nonzero(values: &[f64], rel: f64, reference: f64) -> Option<f64> {
    values
        .iter()
        .copied()
        .filter(|&v| reference > 0.0 && v > rel * reference)
        .reduce(f64::min)
}

fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// `ρ = 1/λ_min⁺(QᵀAQ)` with `Q` a basis of `N(B)`.
pub fn rho(p: &SaddleProblem, rel: f64) -> Option<f64> {
    let n = p.n();
    let pp = DMatrix::identity(n, n) - row_space_projector(&to_na(p.b()));
    let q = range_basis_abs(&pp);
    if q.ncols() == 0 {
        return None;
    }
    let a = to_na(p.a());
    let k = q.transpose() * &a * &q;
    smallest_nonzero(&sym_eigenvalues(&k), rel, spectral_norm(&a)).map(|l| 1.0 / l)
}

/// `ρ_D = 1/λ_min⁺(A)`.
pub fn rho_d(a: &DMatrix<f64>, rel: f64) -> Option<f64> {
    smallest_nonzero(&sym_eigenvalues(a), rel, spectral_norm(a)).map(|l| 1.0 / l)
}

/// `κ` from orthonormal bases of `D` and `P`; 1 when `P⊥D` is trivial.
pub fn kappa_bases(qd: &DMatrix<f64>, qp: &DMatrix<f64>) -> f64 {
    let n = qd.nrows();
    let proj_d = qd * qd.transpose();
    let pp = DMatrix::identity(n, n) - qp * qp.transpose();
    let w = range_basis_abs(&(&pp * qd));
    if w.ncols() == 0 {
        return 1.0;
    }
    // ‖Dw‖² = wᵀDw for the orthogonal projector D.
    let lam = sym_eigenvalues(&(w.transpose() * proj_d * &w))[0];
    lam.max(0.0).sqrt().min(1.0)
}

/// `κ = inf_{ψ ∈ P⊥D} ‖Dψ‖/‖ψ‖` for spanning sets `d`, `p` of the two
/// subspaces.
pub fn kappa(d: &DMatrix<f64>, p: &DMatrix<f64>) -> f64 {
    kappa_bases(&range_basis(d), &range_basis(p))
}

/// `κ` for `D = R(A)`, `P = N(B)⊥`, with `R(A)` from the eigenvectors of
/// `A` itself so that small eigenvalues are resolved at full precision.
pub fn kappa_problem(p: &SaddleProblem) -> f64 {
    let a = to_na(p.a());
    let qd = sym_range_basis(&a, spectral_norm(&a));
    kappa_bases(&qd, &range_basis(&to_na(p.b()).transpose()))
}

/// Eigenvectors of a symmetric matrix with `|λ| > rel_cutoff · reference`,
/// where `rel_cutoff = 1e-12`. Unlike the Gram-based bases this does not
/// square the conditioning.
pub fn sym_range_basis(s: &DMatrix<f64>, reference: f64) -> DMatrix<f64> {
    let (values, vectors) = eig_desc(s);
    let keep: Vec<usize> = (0..values.len())
        .filter(|&i| reference > 0.0 && values[i].abs() > 1e-12 * reference)
        .collect();
    DMatrix::from_fn(s.nrows(), keep.len(), |i, j| vectors[(i, keep[j])])
}

/// Complement of [`sym_range_basis`].
pub fn sym_null_basis(s: &DMatrix<f64>, reference: f64) -> DMatrix<f64> {
    let (values, vectors) = eig_desc(s);
    let keep: Vec<usize> = (0..values.len())
        .filter(|&i| !(reference > 0.0 && values[i].abs() > 1e-12 * reference))
        .collect();
    DMatrix::from_fn(s.nrows(), keep.len(), |i, j| vectors[(i, keep[j])])
}

pub fn norm2(m: &DMatrix<f64>) -> f64 {
    spectral_norm(m)
}

/// Full-pivot Gaussian elimination of `M x = rhs`.
pub struct Elimination {
    pub rank: usize,
    /// A solution with free variables zero, when consistent.
    pub particular: Option<Vec<f64>>,
    /// Columns spanning `N(M)`.
    pub null_basis: Vec<Vec<f64>>,
}

/// Pivots below `rel · max|M|` count as zero.
#[allow(clippy::needless_range_loop)]
pub fn eliminate(m: &DenseMatrix, rhs: &[f64], rel: f64) -> Elimination {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<f64>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut b = rhs.to_vec();
    let mut perm: Vec<usize> = (0..cols).collect();
    let scale = m.max_abs();
    let mut r = 0;
    while r < rows.min(cols) {
        let (mut pi, mut pj, mut best) = (r, r, 0.0);
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, &x) in row.iter().enumerate().skip(r) {
                if x.abs() > best {
                    best = x.abs();
                    pi = i;
                    pj = j;
                }
            }
        }
        if best <= rel * scale || best == 0.0 {
            break;
        }
        a.swap(r, pi);
        b.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(r, pj);
        }
        perm.swap(r, pj);
        for i in (r + 1)..rows {
            let factor = a[i][r] / a[r][r];
            if factor == 0.0 {
                continue;
            }
            for j in r..cols {
                a[i][j] -= factor * a[r][j];
            }
            b[i] -= factor * b[r];
        }
        r += 1;
    }
    let bscale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(scale);
    let consistent = b[r..]
        .iter()
        .all(|x| x.abs() <= 1e3 * rel * bscale.max(1.0));

    let back = |rhs_top: &[f64], free: &[f64]| -> Vec<f64> {
        // Solves the leading r×r triangle with the free variables fixed.
        let mut y = vec![0.0; cols];
        y[r..cols].copy_from_slice(free);
        for i in (0..r).rev() {
            let mut acc = rhs_top[i];
            for j in (i + 1)..cols {
                acc -= a[i][j] * y[j];
            }
            y[i] = acc / a[i][i];
        }
        let mut x = vec![0.0; cols];
        for (k, &p) in perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    };

    let particular = consistent.then(|| back(&b[..r], &vec![0.0; cols - r]));
    let zero_top = vec![0.0; r];
    let null_basis = (0..cols - r)
        .map(|k| {
            let mut free = vec![0.0; cols - r];
            free[k] = 1.0;
            back(&zero_top, &free)
        })
        .collect();
    Elimination {
        rank: r,
        particular,
        null_basis,
    }
}

pub fn elimination_rank(m: &DenseMatrix, rel: f64) -> usize {
    eliminate(m, &vec![0.0; m.rows()], rel).rank
}

/// Minimum-norm least-squares solution through the normal equations,
/// solved by elimination and then orthogonalized against the null-space.
/// Intended for small, well-conditioned hand examples.
pub fn min_norm_by_elimination(m: &DenseMatrix, rhs: &[f64], rel: f64) -> Vec<f64> {
    let mtm = m.t_matmul(m).unwrap();
    let mtb = m.t_matvec(rhs).unwrap();
    let e = eliminate(&mtm, &mtb, rel);
    let mut x = e.particular.expect("normal equations are consistent");
    let z = &e.null_basis;
    if z.is_empty() {
        return x;
    }
    // x ← x − Z (ZᵀZ)⁻¹ Zᵀ x
    let k = z.len();
    let gram = DenseMatrix::from_rows(
        &(0..k)
            .map(|i| (0..k).map(|j| dot(&z[i], &z[j])).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let ztx: Vec<f64> = z.iter().map(|zi| dot(zi, &x)).collect();
    let c = eliminate(&gram, &ztx, 1e-14).particular.unwrap();
    for (zi, ci) in z.iter().zip(c) {
        for (xv, zv) in x.iter_mut().zip(zi) {
            *xv -= ci * zv;
        }
    }
    x
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
