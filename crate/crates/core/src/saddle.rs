//! The symmetric saddle point problem
//!
//! ```text
//!     A σ + Bᵀ u = g
//!     B (σ − f)  = 0
//! ```
//!
//! with `A` symmetric positive semidefinite, its null-space splitting, and the
//! minimum-norm solver for `σ`.
//!
//! With `N = N(B)`, `P` the orthogonal projector onto `N⊥` and `P⊥ = I − P`,
//! the σ-part of the system is the single equation
//! `(P⊥A + P) σ = P⊥g + Pf`. Its pseudoinverse solution is the minimum-norm
//! ("normal") solution because `N(P⊥A + P) = N(A) ∩ N`.

use crate::densekit::{
    null_space, orth_range, pinv, sym_eig, vecops, DenseMatrix, TolerancePolicy,
};
use crate::error::{Error, Result};
use crate::subspace::{complement, intersect, projector, sum, Subspace};

/// `(A, B, g, f)` with `A` symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleProblem {
    a: DenseMatrix,
    b: DenseMatrix,
    g: Vec<f64>,
    f: Vec<f64>,
}

impl SaddleProblem {
    /// Validates shapes, symmetry and semidefiniteness of `A`.
    ///
    /// `A` is stored symmetrized.
    pub fn new(
        a: DenseMatrix,
        b: DenseMatrix,
        g: Vec<f64>,
        f: Vec<f64>,
        tol: &TolerancePolicy,
    ) -> Result<Self> {
        let n = a.rows();
        if n == 0 || !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "A must be square and nonempty, got {}×{}",
                a.rows(),
                a.cols()
            )));
        }
        if b.cols() != n || b.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "B must be m×{n} with m ≥ 1, got {}×{}",
                b.rows(),
                b.cols()
            )));
        }
        if g.len() != n || f.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "g and f must have length {n}, got {} and {}",
                g.len(),
                f.len()
            )));
        }
        if !a.is_finite() || !b.is_finite() || !g.iter().chain(&f).all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("problem data must be finite".into()));
        }
        let eig = sym_eig(&a, tol)?;
        let norm_a = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let allowed = -tol.identity_tol * norm_a;
        let min_eig = eig.values.first().copied().unwrap_or(0.0);
        if min_eig < allowed {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
                allowed,
            });
        }
        Ok(Self {
            a: a.symmetric_part()?,
            b,
            g,
            f,
        })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    /// Dimension of the primary space.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Dimension of the multiplier space.
    pub fn m(&self) -> usize {
        self.b.rows()
    }
}

/// The decomposition `H = N ⊕ N⊥` induced by `B`, and the reduced operator
/// `K = P⊥A` restricted to `N`.
#[derive(Debug, Clone)]
pub struct SplitSystem {
    /// `N = N(B)`.
    pub null: Subspace,
    /// `N⊥`, the range of `P`.
    pub range_p: Subspace,
    /// Orthogonal projector onto `N⊥`.
    pub p: DenseMatrix,
    /// `I − P`, the projector onto `N`.
    pub p_perp: DenseMatrix,
    /// `QᵀAQ` for the orthonormal basis `Q` of `N` (`dim N × dim N`).
    pub k: DenseMatrix,
    /// `‖Bᵀ(BBᵀ)⁺B − P‖_F`: the range-formula route to `P` against the
    /// null-space route.
    pub formula_p_discrepancy: f64,
}

impl SplitSystem {
    pub fn dim_null(&self) -> usize {
        self.null.dim()
    }
}

pub fn build_split(p: &SaddleProblem, tol: &TolerancePolicy) -> Result<SplitSystem> {
    let n = p.n();
    let b = p.b();
    let null = null_space(b, tol)?;
    let range_p = complement(&null, tol)?;
    let p_perp = projector(&null);
    let proj = DenseMatrix::identity(n).sub(&p_perp)?;

    let bbt = b.matmul(&b.transpose())?;
    let via_formula = b.t_matmul(&pinv(&bbt, tol)?.matmul(b)?)?;
    let formula_p_discrepancy = via_formula.sub(&proj)?.frobenius_norm();

    let q = null.basis();
    let k = q.t_matmul(&p.a().matmul(q)?)?.symmetric_part()?;
    Ok(SplitSystem {
        null,
        range_p,
        p: proj,
        p_perp,
        k,
        formula_p_discrepancy,
    })
}

/// Solvability of the σ-equations: `g ∈ R(A) + N⊥`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `‖g − Proj_{R(A)+N⊥} g‖`.
    pub residual: f64,
}

pub fn admissible(
    p: &SaddleProblem,
    split: &SplitSystem,
    tol: &TolerancePolicy,
) -> Result<Admissibility> {
    let space = sum(&orth_range(p.a(), tol)?, &split.range_p, tol)?;
    let proj_g = space.project(p.g())?;
    let residual = vecops::norm(&vecops::sub(p.g(), &proj_g));
    Ok(Admissibility {
        admissible: residual <= tol.identity_tol * (1.0 + vecops::norm(p.g())),
        residual,
    })
}

/// Result of the σ solve, optionally with the recovered multiplier.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Normal solution (least-squares solution when inadmissible).
    pub sigma: Vec<f64>,
    pub u: Option<Vec<f64>>,
    pub admissible: bool,
    /// `‖g − Proj_{R(A)+N⊥} g‖`.
    pub admissibility_residual: f64,
    /// `‖P⊥(Aσ − g)‖`.
    pub residual_first_eq: f64,
    /// `‖P(σ − f)‖`.
    pub residual_constraint: f64,
    /// `‖Bᵀu − P(g − Aσ)‖`.
    pub residual_u: Option<f64>,
    /// `N(A) ∩ N`; every solution is `sigma` plus an element of it.
    pub kernel: Subspace,
    pub kernel_overlap_dim: usize,
}

/// Minimum-norm σ from `(P⊥A + P) σ = P⊥g + Pf`.
///
/// Inadmissible data is not an error: the minimum-norm least-squares σ is
/// returned with `admissible = false`.
pub fn solve_sigma(
    p: &SaddleProblem,
    split: &SplitSystem,
    tol: &TolerancePolicy,
) -> Result<SolveReport> {
    let adm = admissible(p, split, tol)?;
    let op = split.p_perp.matmul(p.a())?.add(&split.p)?;
    let rhs = vecops::add(&split.p_perp.matvec(p.g())?, &split.p.matvec(p.f())?);
    let sigma = pinv(&op, tol)?.matvec(&rhs)?;

    let a_sigma = p.a().matvec(&sigma)?;
    let residual_first_eq = vecops::norm(&split.p_perp.matvec(&vecops::sub(&a_sigma, p.g()))?);
    let residual_constraint = vecops::norm(&split.p.matvec(&vecops::sub(&sigma, p.f()))?);
    let kernel = intersect(&null_space(p.a(), tol)?, &split.null, tol)?;

    Ok(SolveReport {
        sigma,
        u: None,
        admissible: adm.admissible,
        admissibility_residual: adm.residual,
        residual_first_eq,
        residual_constraint,
        residual_u: None,
        kernel_overlap_dim: kernel.dim(),
        kernel,
    })
}

/// Minimum-norm multiplier from the projected equation `Bᵀu = P(g − Aσ)`.
///
/// Returns `(u, ‖Bᵀu − P(g − Aσ)‖)`. The result is orthogonal to `N(Bᵀ)`.
pub fn recover_u(
    p: &SaddleProblem,
    split: &SplitSystem,
    sigma: &[f64],
    tol: &TolerancePolicy,
) -> Result<(Vec<f64>, f64)> {
    if sigma.len() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "sigma has length {}, expected {}",
            sigma.len(),
            p.n()
        )));
    }
    let rhs = split.p.matvec(&vecops::sub(p.g(), &p.a().matvec(sigma)?))?;
    let bt = p.b().transpose();
    let u = pinv(&bt, tol)?.matvec(&rhs)?;
    let residual = vecops::norm(&vecops::sub(&bt.matvec(&u)?, &rhs));
    Ok((u, residual))
}

/// [`solve_sigma`] followed by [`recover_u`].
pub fn solve(p: &SaddleProblem, split: &SplitSystem, tol: &TolerancePolicy) -> Result<SolveReport> {
    let mut report = solve_sigma(p, split, tol)?;
    let (u, res) = recover_u(p, split, &report.sigma, tol)?;
    report.u = Some(u);
    report.residual_u = Some(res);
    Ok(report)
}

/// `σᵀAσ + 2uᵀB(σ − f) − 2gᵀσ`.
pub fn lagrangian(p: &SaddleProblem, sigma: &[f64], u: &[f64]) -> Result<f64> {
    if sigma.len() != p.n() || u.len() != p.m() {
        return Err(Error::DimensionMismatch(format!(
            "expected σ of length {} and u of length {}, got {} and {}",
            p.n(),
            p.m(),
            sigma.len(),
            u.len()
        )));
    }
    let energy = vecops::dot(sigma, &p.a().matvec(sigma)?);
    let coupling = vecops::dot(u, &p.b().matvec(&vecops::sub(sigma, p.f()))?);
    Ok(energy + 2.0 * coupling - 2.0 * vecops::dot(p.g(), sigma))
}

/// The affine solution set `sigma_normal + kernel`.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub sigma_normal: Vec<f64>,
    pub kernel: Subspace,
}

pub fn solution_set(
    p: &SaddleProblem,
    split: &SplitSystem,
    tol: &TolerancePolicy,
) -> Result<SolutionSet> {
    let r = solve_sigma(p, split, tol)?;
    Ok(SolutionSet {
        sigma_normal: r.sigma,
        kernel: r.kernel,
    })
}
