//! Wellposedness constants of the saddle problem and the numerical checks
//! of the identities and bounds that connect them.
//!
//! Constants:
//! - `c_b`: inf-sup constant, smallest nonzero singular value of `B`;
//! - `c_a`: standard coercivity constant, `λ_min(QᵀAQ)` on `N = N(B)`;
//! - `ρ`: generalized coercivity constant, `1/ρ = min (Aw, w)/‖w‖²` over
//!   `w ∈ P⊥R(A)`, computed a second time as `1/λ_min⁺(K)`;
//! - `ρ_D`: closed-range constant, `1/λ_min⁺(A)`;
//! - `κ`: minimum gap between `R(A)` and `N⊥`.
//!
//! In finite dimensions every range is closed, so the qualitative
//! closedness statements are rendered as subspace and dimension identities
//! and the quantitative ones as inequalities between computed constants.

use std::fmt;

use crate::densekit::{
    null_space, null_space_scaled, numerical_rank, numerical_rank_scaled, orth_range,
    orth_range_scaled, pinv, svd, sym_eig, vecops, DenseMatrix, TolerancePolicy,
};
use crate::error::Result;
use crate::saddle::{build_split, solve, SaddleProblem, SolveReport, SplitSystem};
use crate::subspace::{complement, intersect, min_gap, subspace_equal, sum, GapReport, Subspace};

/// A constant that may be undefined for the given operator (zero operator,
/// trivial subspace). Never coerced to `0` or `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constant {
    Value(f64),
    NotApplicable,
}

impl Constant {
    pub fn value(self) -> Option<f64> {
        match self {
            Constant::Value(v) => Some(v),
            Constant::NotApplicable => None,
        }
    }

    pub fn is_applicable(self) -> bool {
        matches!(self, Constant::Value(_))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Value(v) => write!(f, "{v:.16e}"),
            Constant::NotApplicable => f.write_str("not_applicable"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "not_applicable",
        }
    }
}

/// One named verification.
///
/// `residual` is the measured discrepancy for identities and
/// `max(0, lhs − rhs)` for inequalities; `None` when not applicable.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub status: CheckStatus,
    pub residual: Option<f64>,
}

impl CheckRecord {
    fn new(name: &'static str, pass: bool, residual: f64) -> Self {
        Self {
            name,
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            residual: Some(residual),
        }
    }

    fn not_applicable(name: &'static str) -> Self {
        Self {
            name,
            status: CheckStatus::NotApplicable,
            residual: None,
        }
    }

    /// `lhs ≤ bound_slack · rhs + floor`.
    fn bound(name: &'static str, lhs: f64, rhs: f64, floor: f64, tol: &TolerancePolicy) -> Self {
        let ok = lhs <= tol.bound_slack * rhs + floor;
        Self::new(name, ok, (lhs - rhs).max(0.0))
    }
}

/// Names of all checks, in report order.
pub const CHECK_NAMES: [&str; 21] = [
    "infsup_adjoint_symmetry",
    "bbt_range",
    "bbt_pinv_norm",
    "projector_formula",
    "kernel_identity",
    "complement_identity",
    "null_space_decomposition",
    "normal_solution",
    "range_identity",
    "sum_dimension_identities",
    "sqrt_k_range",
    "sqrt_k_infsup",
    "rho_two_routes",
    "sigma_stability_bound",
    "psi_stability_bound",
    "multiplier_bound",
    "closed_range_constant",
    "gap_bound",
    "gap_sum_identities",
    "gap_expressions_agree",
    "classical_coercivity_regime",
];

#[derive(Debug, Clone)]
pub struct WellposednessReport {
    pub c_b: Constant,
    /// `c_b` computed from `Bᵀ`.
    pub c_b_adjoint: Constant,
    pub c_a: Constant,
    pub rho: Constant,
    pub rho_via_k: Constant,
    pub rho_d: Constant,
    pub kappa: f64,
    pub gap: GapReport,
    pub checks: Vec<CheckRecord>,
}

impl WellposednessReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

/// Smallest eigenvalue above `rank_rel_tol · scale`, if any. Without a
/// scale the largest `|λ|` is the reference.
fn smallest_nonzero(values: &[f64], scale: Option<f64>, tol: &TolerancePolicy) -> Option<f64> {
    let top = scale.unwrap_or_else(|| values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    if top == 0.0 {
        return None;
    }
    let cutoff = tol.rank_rel_tol * top;
    values
        .iter()
        .copied()
        .filter(|&v| v > cutoff)
        .reduce(f64::min)
}

fn smallest_singular_above_cutoff(
    m: &DenseMatrix,
    scale: Option<f64>,
    tol: &TolerancePolicy,
) -> Result<Constant> {
    let s = svd(m)?.s;
    let r = match scale {
        Some(scale) => numerical_rank_scaled(&s, scale, tol),
        None => numerical_rank(&s, tol),
    };
    Ok(if r == 0 {
        Constant::NotApplicable
    } else {
        Constant::Value(s[r - 1])
    })
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

/// `c_b`: smallest nonzero singular value of `B`; not applicable for `B = 0`.
pub fn infsup_constant(b: &DenseMatrix, tol: &TolerancePolicy) -> Result<Constant> {
    smallest_singular_above_cutoff(b, None, tol)
}

/// Range of `BBᵀ` against range of `B`, and `‖(BBᵀ)⁺‖ = 1/c_b²`, plus the
/// agreement of the inf-sup constants of `B` and `Bᵀ`.
pub fn lbb_lemma_checks(b: &DenseMatrix, tol: &TolerancePolicy) -> Result<Vec<CheckRecord>> {
    let c_b = infsup_constant(b, tol)?;
    let c_bt = infsup_constant(&b.transpose(), tol)?;
    let adjoint = match (c_b, c_bt) {
        (Constant::Value(x), Constant::Value(y)) => {
            let r = relative_gap(x, y);
            CheckRecord::new("infsup_adjoint_symmetry", r <= tol.identity_tol, r)
        }
        (Constant::NotApplicable, Constant::NotApplicable) => {
            CheckRecord::not_applicable("infsup_adjoint_symmetry")
        }
        _ => CheckRecord::new("infsup_adjoint_symmetry", false, f64::INFINITY),
    };

    let bbt = b.matmul(&b.transpose())?;
    let eq = subspace_equal(&orth_range(&bbt, tol)?, &orth_range(b, tol)?, tol)?;
    let range = CheckRecord::new("bbt_range", eq.equal, eq.max_angle);

    let pinv_norm = match c_b {
        Constant::Value(c) => {
            let norm = pinv(&bbt, tol)?.norm2()?;
            let r = (norm * c * c - 1.0).abs();
            CheckRecord::new("bbt_pinv_norm", r <= tol.identity_tol, r)
        }
        Constant::NotApplicable => CheckRecord::not_applicable("bbt_pinv_norm"),
    };
    Ok(vec![adjoint, range, pinv_norm])
}

/// `c_a = λ_min(QᵀAQ)` for the basis `Q` of `n`; eigenvalues within the rank
/// cutoff of `‖A‖` count as zero.
pub fn coercivity_standard(
    a: &DenseMatrix,
    n: &Subspace,
    tol: &TolerancePolicy,
) -> Result<Constant> {
    if n.is_trivial() {
        return Ok(Constant::NotApplicable);
    }
    let q = n.basis();
    let k = q.t_matmul(&a.matmul(q)?)?;
    let values = sym_eig(&k, tol)?.values;
    let norm_a = sym_eig(a, tol)?
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let min = values.first().copied().unwrap_or(0.0);
    Ok(Constant::Value(if min <= tol.rank_rel_tol * norm_a {
        0.0
    } else {
        min
    }))
}

/// Both routes to `ρ` and the checks on `√K`.
#[derive(Debug, Clone)]
pub struct GeneralizedCoercivity {
    /// `1 / λ_min(WᵀAW)`, `W` an orthonormal basis of `P⊥R(A)`.
    pub rho: Constant,
    /// `1 / λ_min⁺(K)`.
    pub rho_via_k: Constant,
    /// `R(√K) = R(K)`.
    pub sqrt_k_range: CheckRecord,
    /// Smallest nonzero singular value of `√K` equals `1/√ρ`.
    pub sqrt_k_infsup: CheckRecord,
}

pub fn generalized_coercivity(
    a: &DenseMatrix,
    split: &SplitSystem,
    tol: &TolerancePolicy,
) -> Result<GeneralizedCoercivity> {
    // Products with P⊥ can be exactly zero; rank cutoffs are taken relative
    // to ‖A‖ so rounding noise is not mistaken for a direction.
    let norm_a = a.norm2()?;

    // Route 1: the quadratic form of A on P⊥R(A).
    let w = orth_range_scaled(&split.p_perp.matmul(a)?, norm_a, tol)?;
    let rho = if w.is_trivial() {
        Constant::NotApplicable
    } else {
        let wb = w.basis();
        let lam = sym_eig(&wb.t_matmul(&a.matmul(wb)?)?, tol)?.values[0];
        Constant::Value(if lam > 0.0 { 1.0 / lam } else { f64::INFINITY })
    };

    // Route 2: the reduced operator K on N.
    if split.dim_null() == 0 {
        return Ok(GeneralizedCoercivity {
            rho,
            rho_via_k: Constant::NotApplicable,
            sqrt_k_range: CheckRecord::not_applicable("sqrt_k_range"),
            sqrt_k_infsup: CheckRecord::not_applicable("sqrt_k_infsup"),
        });
    }
    let eig = sym_eig(&split.k, tol)?;
    let lam_nz = smallest_nonzero(&eig.values, Some(norm_a), tol);
    let rho_via_k = match lam_nz {
        Some(l) => Constant::Value(1.0 / l),
        None => Constant::NotApplicable,
    };

    let cutoff = tol.rank_rel_tol * norm_a;
    let d = eig.vectors.cols();
    let mut sqrt_k = DenseMatrix::zeros(d, d);
    for (idx, &l) in eig.values.iter().enumerate() {
        if l <= cutoff {
            continue;
        }
        let r = l.sqrt();
        for i in 0..d {
            let vi = eig.vectors[(i, idx)] * r;
            for j in 0..d {
                sqrt_k[(i, j)] += vi * eig.vectors[(j, idx)];
            }
        }
    }
    let eq = subspace_equal(
        &orth_range_scaled(&sqrt_k, norm_a.sqrt(), tol)?,
        &orth_range_scaled(&split.k, norm_a, tol)?,
        tol,
    )?;
    let sqrt_k_range = CheckRecord::new("sqrt_k_range", eq.equal, eq.max_angle);

    let sqrt_k_infsup = match (
        rho,
        smallest_singular_above_cutoff(&sqrt_k, Some(norm_a.sqrt()), tol)?,
    ) {
        (Constant::Value(r), Constant::Value(s)) => {
            let gap = relative_gap(s, 1.0 / r.sqrt());
            CheckRecord::new("sqrt_k_infsup", gap <= tol.identity_tol, gap)
        }
        (Constant::NotApplicable, Constant::NotApplicable) => {
            CheckRecord::not_applicable("sqrt_k_infsup")
        }
        _ => CheckRecord::new("sqrt_k_infsup", false, f64::INFINITY),
    };

    Ok(GeneralizedCoercivity {
        rho,
        rho_via_k,
        sqrt_k_range,
        sqrt_k_infsup,
    })
}

/// `ρ_D = 1/λ_min⁺(A)`; not applicable for `A = 0`.
pub fn closed_range_constant(a: &DenseMatrix, tol: &TolerancePolicy) -> Result<Constant> {
    let values = sym_eig(a, tol)?.values;
    Ok(match smallest_nonzero(&values, None, tol) {
        Some(l) => Constant::Value(1.0 / l),
        None => Constant::NotApplicable,
    })
}

/// Everything [`theorem_checks`] needs besides the problem and the split.
#[derive(Debug, Clone)]
pub struct ConstantSet {
    pub c_b: Constant,
    pub c_a: Constant,
    pub rho: Constant,
    pub rho_via_k: Constant,
    pub rho_d: Constant,
    pub gap: GapReport,
}

/// Subspace identities of the splitting, the stability bounds replayed at
/// the solved `(σ, u)`, the gap bound on `ρ` and the gap-expression checks.
///
/// Returns the records from `kernel_identity` onward, excluding the `√K`
/// records which [`generalized_coercivity`] produces.
pub fn theorem_checks(
    p: &SaddleProblem,
    split: &SplitSystem,
    sol: &SolveReport,
    c: &ConstantSet,
    tol: &TolerancePolicy,
) -> Result<TheoremChecks> {
    let a = p.a();
    let n = p.n();
    let norm_a = a.norm2()?;
    let range_a = orth_range(a, tol)?;
    let null_a = null_space(a, tol)?;
    let p_perp_a = split.p_perp.matmul(a)?;
    let pperp_d = if range_a.is_trivial() {
        Subspace::zero(n)
    } else {
        orth_range_scaled(&split.p_perp.matmul(range_a.basis())?, 1.0, tol)?
    };

    // N(P⊥A) ∩ N = N(A) ∩ N.
    let kernel = &sol.kernel;
    let left = intersect(
        &null_space_scaled(&p_perp_a, norm_a, tol)?,
        &split.null,
        tol,
    )?;
    let eq = subspace_equal(&left, &intersect(&null_a, &split.null, tol)?, tol)?;
    let kernel_identity = CheckRecord::new("kernel_identity", eq.equal, eq.max_angle);

    // (N(A) ∩ N)⊥ = R(A) + N⊥.
    let range_sum = sum(&range_a, &split.range_p, tol)?;
    let eq = subspace_equal(&complement(kernel, tol)?, &range_sum, tol)?;
    let complement_identity = CheckRecord::new("complement_identity", eq.equal, eq.max_angle);

    // N = (N(A) ∩ N) ⊕ R(P⊥AP⊥).
    let reduced_range = orth_range_scaled(&p_perp_a.matmul(&split.p_perp)?, norm_a, tol)?;
    let null_space_decomposition = {
        let cross = kernel.basis().t_matmul(reduced_range.basis())?.max_abs();
        let whole = sum(kernel, &reduced_range, tol)?;
        let eq = subspace_equal(&whole, &split.null, tol)?;
        let dims_ok = kernel.dim() + reduced_range.dim() == split.dim_null();
        let residual = cross.max(eq.max_angle);
        CheckRecord::new(
            "null_space_decomposition",
            dims_ok && eq.equal && cross <= tol.identity_tol,
            residual,
        )
    };

    // Normal solution: residuals of both equations and σ ⊥ N(A) ∩ N.
    let sigma_norm = vecops::norm(&sol.sigma);
    let normal_solution = {
        let orth = kernel.basis().t_matvec(&sol.sigma)?;
        let orth = vecops::norm(&orth);
        let mut ok = orth <= tol.identity_tol * (1.0 + sigma_norm);
        let mut residual = orth;
        if sol.admissible {
            let g = vecops::norm(p.g());
            let f = vecops::norm(p.f());
            ok &= sol.residual_first_eq <= tol.identity_tol * (1.0 + g + norm_a * f);
            ok &= sol.residual_constraint <= tol.identity_tol * (1.0 + f);
            residual = residual
                .max(sol.residual_first_eq)
                .max(sol.residual_constraint);
        }
        CheckRecord::new("normal_solution", ok, residual)
    };

    // R(A) + N⊥ = A·N + N⊥ = R(P⊥A + P).
    let an = orth_range_scaled(&a.matmul(split.null.basis())?, norm_a, tol)?;
    let an_sum = sum(&an, &split.range_p, tol)?;
    let single = orth_range(&p_perp_a.add(&split.p)?, tol)?;
    let range_identity = {
        let e1 = subspace_equal(&range_sum, &an_sum, tol)?;
        let e2 = subspace_equal(&range_sum, &single, tol)?;
        CheckRecord::new(
            "range_identity",
            e1.equal && e2.equal,
            e1.max_angle.max(e2.max_angle),
        )
    };

    // dim(R(A)+N⊥) = dim P⊥R(A) + dim N⊥ and dim(A·N+N⊥) = dim P⊥A·N + dim N⊥.
    let sum_dimension_identities = {
        let p_dim = split.range_p.dim();
        let pr = orth_range_scaled(&p_perp_a, norm_a, tol)?.dim();
        let pan = orth_range_scaled(&p_perp_a.matmul(split.null.basis())?, norm_a, tol)?.dim();
        let mismatch = (range_sum.dim() as i64 - (pr + p_dim) as i64).unsigned_abs()
            + (an_sum.dim() as i64 - (pan + p_dim) as i64).unsigned_abs()
            + (pr as i64 - pan as i64).unsigned_abs();
        CheckRecord::new("sum_dimension_identities", mismatch == 0, mismatch as f64)
    };

    let rho_two_routes = match (c.rho, c.rho_via_k) {
        (Constant::Value(x), Constant::Value(y)) => {
            let r = relative_gap(x, y);
            CheckRecord::new("rho_two_routes", r <= tol.identity_tol, r)
        }
        (Constant::NotApplicable, Constant::NotApplicable) => {
            CheckRecord::not_applicable("rho_two_routes")
        }
        _ => CheckRecord::new("rho_two_routes", false, f64::INFINITY),
    };

    // Stability bounds at the solved σ; ψ = P⊥σ is the N-component.
    let pf = split.p.matvec(p.f())?;
    let phi = vecops::norm(&vecops::sub(p.g(), &a.matvec(&pf)?));
    let f_norm = vecops::norm(p.f());
    let psi = vecops::norm(&split.p_perp.matvec(&sol.sigma)?);
    let floor = tol.rank_rel_tol * (1.0 + f_norm + vecops::norm(p.g()));
    let (sigma_stability_bound, psi_stability_bound) = match (sol.admissible, c.rho) {
        (true, Constant::Value(rho)) => (
            CheckRecord::bound(
                "sigma_stability_bound",
                sigma_norm * sigma_norm,
                f_norm * f_norm + rho * rho * phi * phi,
                2.0 * floor * (1.0 + sigma_norm),
                tol,
            ),
            CheckRecord::bound("psi_stability_bound", psi, rho * phi, floor, tol),
        ),
        _ => (
            CheckRecord::not_applicable("sigma_stability_bound"),
            CheckRecord::not_applicable("psi_stability_bound"),
        ),
    };

    let multiplier_bound = match (&sol.u, c.c_b, sol.admissible) {
        (Some(u), Constant::Value(cb), true) => {
            let rhs = (norm_a * sigma_norm + vecops::norm(p.g())) / cb;
            CheckRecord::bound("multiplier_bound", vecops::norm(u), rhs, floor / cb, tol)
        }
        _ => CheckRecord::not_applicable("multiplier_bound"),
    };

    // (Aw, w) ≥ ‖w‖²/ρ_D on R(A), with equality attained: the minimum of the
    // quadratic form on an SVD basis of R(A) against the eigenvalue route.
    let closed_range = match c.rho_d {
        Constant::Value(rho_d) => {
            let q = range_a.basis();
            let lam = sym_eig(&q.t_matmul(&a.matmul(q)?)?, tol)?.values[0];
            let r = (lam * rho_d - 1.0).abs();
            CheckRecord::new("closed_range_constant", r <= tol.identity_tol, r)
        }
        Constant::NotApplicable => CheckRecord::not_applicable("closed_range_constant"),
    };

    let gap_bound = match (c.rho, c.rho_d) {
        (Constant::Value(rho), Constant::Value(rho_d)) => {
            let k2 = c.gap.kappa * c.gap.kappa;
            let rhs = if k2 > 0.0 { rho_d / k2 } else { f64::INFINITY };
            CheckRecord::bound("gap_bound", rho, rhs, 0.0, tol)
        }
        _ => CheckRecord::not_applicable("gap_bound"),
    };

    // D + P = P⊥D ⊕ P and D⊥ + P⊥ = P⊥ ⊕ PD⊥, with D = R(A), P = N⊥.
    let gap_sum_identities = {
        let d_perp = complement(&range_a, tol)?;
        let p_dperp = if d_perp.is_trivial() {
            Subspace::zero(n)
        } else {
            orth_range_scaled(&split.p.matmul(d_perp.basis())?, 1.0, tol)?
        };
        let e1 = subspace_equal(&range_sum, &sum(&pperp_d, &split.range_p, tol)?, tol)?;
        let e2 = subspace_equal(
            &sum(&d_perp, &split.null, tol)?,
            &sum(&split.null, &p_dperp, tol)?,
            tol,
        )?;
        let cross = pperp_d
            .basis()
            .t_matmul(split.range_p.basis())?
            .max_abs()
            .max(split.null.basis().t_matmul(p_dperp.basis())?.max_abs());
        CheckRecord::new(
            "gap_sum_identities",
            e1.equal && e2.equal && cross <= tol.identity_tol,
            e1.max_angle.max(e2.max_angle).max(cross),
        )
    };

    let gap_expressions_agree = CheckRecord::new(
        "gap_expressions_agree",
        c.gap.consistent(tol),
        c.gap.max_spread,
    );

    let classical = match c.c_a {
        Constant::Value(ca) if ca > tol.rank_rel_tol * norm_a && ca > 0.0 => {
            let ok_kernel = sol.kernel_overlap_dim == 0;
            match c.rho {
                Constant::Value(rho) => {
                    let mut rec =
                        CheckRecord::bound("classical_coercivity_regime", rho, 1.0 / ca, 0.0, tol);
                    if !ok_kernel {
                        rec.status = CheckStatus::Fail;
                    }
                    rec
                }
                // c_a > 0 with ρ undefined means A vanishes on P⊥R(A) = {0}:
                // only the kernel statement remains.
                Constant::NotApplicable => CheckRecord::new(
                    "classical_coercivity_regime",
                    ok_kernel,
                    sol.kernel_overlap_dim as f64,
                ),
            }
        }
        _ => CheckRecord::not_applicable("classical_coercivity_regime"),
    };

    Ok(TheoremChecks {
        kernel_identity,
        complement_identity,
        null_space_decomposition,
        normal_solution,
        range_identity,
        sum_dimension_identities,
        rho_two_routes,
        sigma_stability_bound,
        psi_stability_bound,
        multiplier_bound,
        closed_range,
        gap_bound,
        gap_sum_identities,
        gap_expressions_agree,
        classical,
    })
}

/// Output of [`theorem_checks`], one field per record.
#[derive(Debug, Clone)]
pub struct TheoremChecks {
    pub kernel_identity: CheckRecord,
    pub complement_identity: CheckRecord,
    pub null_space_decomposition: CheckRecord,
    pub normal_solution: CheckRecord,
    pub range_identity: CheckRecord,
    pub sum_dimension_identities: CheckRecord,
    pub rho_two_routes: CheckRecord,
    pub sigma_stability_bound: CheckRecord,
    pub psi_stability_bound: CheckRecord,
    pub multiplier_bound: CheckRecord,
    pub closed_range: CheckRecord,
    pub gap_bound: CheckRecord,
    pub gap_sum_identities: CheckRecord,
    pub gap_expressions_agree: CheckRecord,
    pub classical: CheckRecord,
}

/// Split, solve and wellposedness report for one problem.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub split: SplitSystem,
    pub solution: SolveReport,
    pub report: WellposednessReport,
}

/// Runs the whole pipeline: split, solve for `(σ, u)`, compute every
/// constant and every check, in the order of [`CHECK_NAMES`].
pub fn analyze(p: &SaddleProblem, tol: &TolerancePolicy) -> Result<Analysis> {
    tol.validate()?;
    let split = build_split(p, tol)?;
    let solution = solve(p, &split, tol)?;

    let c_b = infsup_constant(p.b(), tol)?;
    let c_b_adjoint = infsup_constant(&p.b().transpose(), tol)?;
    let lbb = lbb_lemma_checks(p.b(), tol)?;
    let c_a = coercivity_standard(p.a(), &split.null, tol)?;
    let gen = generalized_coercivity(p.a(), &split, tol)?;
    let rho_d = closed_range_constant(p.a(), tol)?;
    let gap = min_gap(&orth_range(p.a(), tol)?, &split.range_p, tol)?;

    let constants = ConstantSet {
        c_b,
        c_a,
        rho: gen.rho,
        rho_via_k: gen.rho_via_k,
        rho_d,
        gap,
    };
    let t = theorem_checks(p, &split, &solution, &constants, tol)?;

    let projector_formula = CheckRecord::new(
        "projector_formula",
        split.formula_p_discrepancy <= tol.identity_tol,
        split.formula_p_discrepancy,
    );

    let mut checks = lbb;
    checks.extend([
        projector_formula,
        t.kernel_identity,
        t.complement_identity,
        t.null_space_decomposition,
        t.normal_solution,
        t.range_identity,
        t.sum_dimension_identities,
        gen.sqrt_k_range,
        gen.sqrt_k_infsup,
        t.rho_two_routes,
        t.sigma_stability_bound,
        t.psi_stability_bound,
        t.multiplier_bound,
        t.closed_range,
        t.gap_bound,
        t.gap_sum_identities,
        t.gap_expressions_agree,
        t.classical,
    ]);
    debug_assert!(checks.iter().map(|c| c.name).eq(CHECK_NAMES));

    let kappa = constants.gap.kappa;
    Ok(Analysis {
        split,
        solution,
        report: WellposednessReport {
            c_b,
            c_b_adjoint,
            c_a,
            rho: constants.rho,
            rho_via_k: constants.rho_via_k,
            rho_d,
            kappa,
            gap: constants.gap,
            checks,
        },
    })
}
