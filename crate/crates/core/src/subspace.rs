//! Subspace geometry on orthonormal bases: projectors, complements, sums,
//! intersections, principal angles and the minimum gap between two
//! subspaces.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::densekit::{
    null_space, orth_range, orth_range_scaled, svd, DenseMatrix, TolerancePolicy,
};
use crate::error::{Error, Result};

/// A linear subspace of `Rⁿ` carried by an orthonormal basis (`n × k`).
#[derive(Clone, PartialEq)]
pub struct Subspace {
    basis: DenseMatrix,
}

impl Subspace {
    /// Wraps a basis after checking `QᵀQ = I` within `identity_tol`.
    pub fn new(basis: DenseMatrix, tol: &TolerancePolicy) -> Result<Self> {
        if basis.rows() == 0 {
            return Err(Error::InvalidInput(
                "subspace ambient dimension must be ≥ 1".into(),
            ));
        }
        let gram = basis.t_matmul(&basis)?;
        let dev = gram.sub(&DenseMatrix::identity(basis.cols()))?.max_abs();
        if dev > tol.identity_tol {
            return Err(Error::InvalidInput(format!(
                "basis columns are not orthonormal (max |QᵀQ − I| = {dev:e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Orthonormal basis for the span of the columns of `vectors`.
    pub fn span(vectors: &DenseMatrix, tol: &TolerancePolicy) -> Result<Self> {
        orth_range(vectors, tol)
    }

    pub(crate) fn from_orthonormal_unchecked(basis: DenseMatrix) -> Self {
        Self { basis }
    }

    /// The trivial subspace `{0}` of `Rⁿ`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: DenseMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: DenseMatrix::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let coeffs = self.basis.t_matvec(x)?;
        self.basis.matvec(&coeffs)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in R^{})",
            self.dim(),
            self.ambient_dim()
        )
    }
}

fn check_same_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspaces live in R^{} and R^{}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    Ok(())
}

/// `Q·Qᵀ`.
pub fn projector(s: &Subspace) -> DenseMatrix {
    let q = s.basis();
    let n = q.rows();
    let mut p = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = crate::densekit::vecops::dot(q.row(i), q.row(j));
            p[(i, j)] = v;
            p[(j, i)] = v;
        }
    }
    p
}

/// Orthogonal complement `S⊥`.
pub fn complement(s: &Subspace, tol: &TolerancePolicy) -> Result<Subspace> {
    if s.is_trivial() {
        return Ok(Subspace::full(s.ambient_dim()));
    }
    null_space(&s.basis().transpose(), tol)
}

/// `S₁ + S₂`.
pub fn sum(s1: &Subspace, s2: &Subspace, tol: &TolerancePolicy) -> Result<Subspace> {
    check_same_ambient(s1, s2)?;
    orth_range(&s1.basis().hcat(s2.basis())?, tol)
}

/// `S₁ ∩ S₂`, computed as `(S₁⊥ + S₂⊥)⊥`.
pub fn intersect(s1: &Subspace, s2: &Subspace, tol: &TolerancePolicy) -> Result<Subspace> {
    check_same_ambient(s1, s2)?;
    let c = sum(&complement(s1, tol)?, &complement(s2, tol)?, tol)?;
    complement(&c, tol)
}

/// Principal angles in nondecreasing order, `min(dim S₁, dim S₂)` of them.
///
/// Cosines come from the singular values of `Q₁ᵀQ₂` and sines from those of
/// `Q₂ − Q₁(Q₁ᵀQ₂)`; angles below π/4 are taken from the sines so that
/// nearly coincident directions resolve to full precision.
pub fn principal_angles(s1: &Subspace, s2: &Subspace) -> Result<Vec<f64>> {
    check_same_ambient(s1, s2)?;
    if s1.is_trivial() || s2.is_trivial() {
        return Err(Error::EmptySubspace);
    }
    // Keep the larger subspace first so the sine matrix has the right count.
    let (big, small) = if s1.dim() >= s2.dim() {
        (s1, s2)
    } else {
        (s2, s1)
    };
    let q1 = big.basis();
    let q2 = small.basis();
    let c = q1.t_matmul(q2)?;
    let cos = svd(&c)?.s;
    let residual = q2.sub(&q1.matmul(&c)?)?;
    let mut sin = svd(&residual)?.s;
    sin.reverse();

    let k = small.dim();
    let angles = (0..k)
        .map(|i| {
            let ci = cos[i].clamp(0.0, 1.0);
            let si = sin[i].clamp(0.0, 1.0);
            if si * si < 0.5 {
                si.asin()
            } else {
                ci.acos()
            }
        })
        .collect();
    Ok(angles)
}

/// Outcome of [`subspace_equal`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceEquality {
    pub equal: bool,
    pub dims: (usize, usize),
    /// Largest principal angle; 0 when both subspaces are trivial and π/2
    /// when exactly one is.
    pub max_angle: f64,
}

/// Equal dimensions and largest principal angle within `identity_tol`.
pub fn subspace_equal(
    s1: &Subspace,
    s2: &Subspace,
    tol: &TolerancePolicy,
) -> Result<SubspaceEquality> {
    check_same_ambient(s1, s2)?;
    let dims = (s1.dim(), s2.dim());
    let max_angle = match (s1.is_trivial(), s2.is_trivial()) {
        (true, true) => 0.0,
        (true, false) | (false, true) => FRAC_PI_2,
        (false, false) => principal_angles(s1, s2)?.last().copied().unwrap_or(0.0),
    };
    Ok(SubspaceEquality {
        equal: dims.0 == dims.1 && max_angle <= tol.identity_tol,
        dims,
        max_angle,
    })
}

/// The eight equivalent characterizations of the minimum gap between `D`
/// and `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapExpression {
    /// inf over ψ ∈ P \ D of dist(ψ, D) / dist(ψ, D ∩ P).
    DistPToD,
    /// inf over ψ ∈ D \ P of dist(ψ, P) / dist(ψ, P ∩ D).
    DistDToP,
    /// inf over ψ ∈ D⊥ \ P⊥ of dist(ψ, P⊥) / dist(ψ, P⊥ ∩ D⊥).
    DistDperpToPperp,
    /// inf over ψ ∈ P⊥ \ D⊥ of dist(ψ, D⊥) / dist(ψ, D⊥ ∩ P⊥).
    DistPperpToDperp,
    /// inf over ψ ∈ P⊥D of ‖Dψ‖ / ‖ψ‖.
    ProjDOnPperpD,
    /// inf over ψ ∈ D⊥P of ‖Pψ‖ / ‖ψ‖.
    ProjPOnDperpP,
    /// inf over ψ ∈ PD⊥ of ‖D⊥ψ‖ / ‖ψ‖.
    ProjDperpOnPDperp,
    /// inf over ψ ∈ DP⊥ of ‖P⊥ψ‖ / ‖ψ‖.
    ProjPperpOnDPperp,
}

impl GapExpression {
    pub const ALL: [GapExpression; 8] = [
        GapExpression::DistPToD,
        GapExpression::DistDToP,
        GapExpression::DistDperpToPperp,
        GapExpression::DistPperpToDperp,
        GapExpression::ProjDOnPperpD,
        GapExpression::ProjPOnDperpP,
        GapExpression::ProjDperpOnPDperp,
        GapExpression::ProjPperpOnDPperp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            GapExpression::DistPToD => "dist_P_to_D",
            GapExpression::DistDToP => "dist_D_to_P",
            GapExpression::DistDperpToPperp => "dist_Dperp_to_Pperp",
            GapExpression::DistPperpToDperp => "dist_Pperp_to_Dperp",
            GapExpression::ProjDOnPperpD => "proj_D_on_PperpD",
            GapExpression::ProjPOnDperpP => "proj_P_on_DperpP",
            GapExpression::ProjDperpOnPDperp => "proj_Dperp_on_PDperp",
            GapExpression::ProjPperpOnDPperp => "proj_Pperp_on_DPperp",
        }
    }
}

/// Minimum gap `κ` between `D` and `P` together with all eight expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub kappa: f64,
    pub expressions: [(GapExpression, f64); 8],
    /// `max |expressionᵢ − κ|`.
    pub max_spread: f64,
    /// True when `P⊥D = {0}` (D ⊆ P) and `κ = 1` by convention.
    pub vacuous: bool,
}

impl GapReport {
    pub fn value(&self, which: GapExpression) -> f64 {
        self.expressions
            .iter()
            .find(|(e, _)| *e == which)
            .map(|&(_, v)| v)
            .unwrap_or(f64::NAN)
    }

    /// `max_spread ≤ identity_tol · (1 + κ)`.
    pub fn consistent(&self, tol: &TolerancePolicy) -> bool {
        self.max_spread <= tol.identity_tol * (1.0 + self.kappa)
    }
}

/// Smallest singular value of `target · basis(s)`, i.e. the infimum of
/// `‖target·ψ‖ / ‖ψ‖` over nonzero ψ ∈ s. An empty index set gives 1.
fn projected_infimum(target: &DenseMatrix, s: &Subspace) -> Result<f64> {
    if s.is_trivial() {
        return Ok(1.0);
    }
    let m = target.matmul(s.basis())?;
    let sv = svd(&m)?.s;
    Ok(sv.last().copied().unwrap_or(1.0).clamp(0.0, 1.0))
}

/// Image of a subspace under a projector, re-orthonormalized.
fn project_subspace(proj: &DenseMatrix, s: &Subspace, tol: &TolerancePolicy) -> Result<Subspace> {
    if s.is_trivial() {
        return Ok(Subspace::zero(s.ambient_dim()));
    }
    // Singular values here are cosines, so the cutoff is absolute.
    orth_range_scaled(&proj.matmul(s.basis())?, 1.0, tol)
}

/// `inf_{ψ ∈ X, ψ ∉ Y} dist(ψ, Y) / dist(ψ, X ∩ Y)`.
///
/// Restricting ψ to `X ∩ (X ∩ Y)⊥` turns the denominator into `‖ψ‖` and the
/// numerator into `‖Proj_{Y⊥} ψ‖` without changing the infimum.
fn distance_ratio_infimum(x: &Subspace, y: &Subspace, tol: &TolerancePolicy) -> Result<f64> {
    let xy = intersect(x, y, tol)?;
    let w = intersect(x, &complement(&xy, tol)?, tol)?;
    let y_perp = projector(&complement(y, tol)?);
    projected_infimum(&y_perp, &w)
}

/// Computes all eight minimum-gap expressions independently.
///
/// The four projected-norm forms project one basis and re-orthonormalize;
/// the four distance-ratio forms go through intersections and complements
/// instead, so the two families share no intermediate subspace. `κ` is the
/// `‖Dψ‖/‖ψ‖` form over `P⊥D`, and equals 1 when `D ⊆ P`.
pub fn min_gap(d: &Subspace, p: &Subspace, tol: &TolerancePolicy) -> Result<GapReport> {
    check_same_ambient(d, p)?;
    let d_perp = complement(d, tol)?;
    let p_perp = complement(p, tol)?;
    let proj_d = projector(d);
    let proj_p = projector(p);
    let proj_d_perp = projector(&d_perp);
    let proj_p_perp = projector(&p_perp);

    let pperp_d = project_subspace(&proj_p_perp, d, tol)?;
    let dperp_p = project_subspace(&proj_d_perp, p, tol)?;
    let p_dperp = project_subspace(&proj_p, &d_perp, tol)?;
    let d_pperp = project_subspace(&proj_d, &p_perp, tol)?;

    let values = [
        distance_ratio_infimum(p, d, tol)?,
        distance_ratio_infimum(d, p, tol)?,
        distance_ratio_infimum(&d_perp, &p_perp, tol)?,
        distance_ratio_infimum(&p_perp, &d_perp, tol)?,
        projected_infimum(&proj_d, &pperp_d)?,
        projected_infimum(&proj_p, &dperp_p)?,
        projected_infimum(&proj_d_perp, &p_dperp)?,
        projected_infimum(&proj_p_perp, &d_pperp)?,
    ];
    let kappa = values[4];
    let max_spread = values.iter().map(|v| (v - kappa).abs()).fold(0.0, f64::max);
    let mut expressions = [(GapExpression::DistPToD, 0.0); 8];
    for (slot, (e, v)) in expressions
        .iter_mut()
        .zip(GapExpression::ALL.iter().zip(values))
    {
        *slot = (*e, v);
    }
    Ok(GapReport {
        kappa,
        expressions,
        max_spread,
        vacuous: pperp_d.is_trivial(),
    })
}
