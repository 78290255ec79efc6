//! Seeded problem generators: random problems with prescribed rank
//! structure, and a high-contrast mixed diffusion family whose compliance
//! vanishes on an inclusion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::densekit::{orth_range, vecops, DenseMatrix, TolerancePolicy};
use crate::error::{Error, Result};
use crate::saddle::SaddleProblem;
use crate::subspace::Subspace;
use crate::wellposed::{analyze, Constant};

/// Parameters of [`random_problem`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub m: usize,
    pub rank_b: usize,
    pub rank_a: usize,
    /// Target `dim(N(A) ∩ N(B))`.
    pub overlap_dim: usize,
    pub seed: u64,
    /// Magnitude of the nonzero spectra of `A` and `B`.
    pub scale: f64,
    /// Draw `g ∈ R(A) + N(B)⊥`; otherwise add a component in `N(A) ∩ N(B)`,
    /// which needs `overlap_dim ≥ 1`.
    pub admissible_rhs: bool,
}

impl RandomSpec {
    pub fn new(
        n: usize,
        m: usize,
        rank_b: usize,
        rank_a: usize,
        overlap_dim: usize,
        seed: u64,
    ) -> Self {
        Self {
            n,
            m,
            rank_b,
            rank_a,
            overlap_dim,
            seed,
            scale: 1.0,
            admissible_rhs: true,
        }
    }

    /// Rejects rank structures no pair `(A, B)` can realize.
    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleSpec(msg));
        if self.n == 0 || self.m == 0 {
            return bad(format!(
                "n and m must be positive (n = {}, m = {})",
                self.n, self.m
            ));
        }
        if self.rank_b > self.m.min(self.n) {
            return bad(format!(
                "rank_B = {} exceeds min(m, n) = {}",
                self.rank_b,
                self.m.min(self.n)
            ));
        }
        if self.rank_a > self.n {
            return bad(format!("rank_A = {} exceeds n = {}", self.rank_a, self.n));
        }
        let null_b = self.n - self.rank_b;
        let null_a = self.n - self.rank_a;
        if self.overlap_dim > null_b.min(null_a) {
            return bad(format!(
                "overlap_dim = {} exceeds min(dim N(B), dim N(A)) = {}",
                self.overlap_dim,
                null_b.min(null_a)
            ));
        }
        let forced = (null_b + null_a).saturating_sub(self.n);
        if self.overlap_dim < forced {
            return bad(format!(
                "N(A) and N(B) have dimensions {null_a} and {null_b} in R^{}, so they \
                 share at least {forced} dimensions; overlap_dim = {} is too small",
                self.n, self.overlap_dim
            ));
        }
        if !self.admissible_rhs && self.overlap_dim == 0 {
            return bad("an inadmissible right-hand side needs overlap_dim ≥ 1".into());
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return bad(format!(
                "scale must be positive and finite, got {}",
                self.scale
            ));
        }
        Ok(())
    }
}

fn gaussian_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix
/// (modified Gram–Schmidt with sign fix).
fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = gaussian_vec(rng, n);
        for _ in 0..2 {
            for q in &cols {
                let d = vecops::dot(q, &v);
                vecops::axpy(-d, q, &mut v);
            }
        }
        let nv = vecops::norm(&v);
        if nv > 1e-8 {
            cols.push(vecops::scale(1.0 / nv, &v));
        }
    }
    DenseMatrix::from_columns(n, &cols).expect("columns have length n")
}

/// Spectrum values in `scale · [0.5, 2]`.
fn spectrum(rng: &mut ChaCha8Rng, k: usize, scale: f64) -> Vec<f64> {
    (0..k).map(|_| scale * rng.random_range(0.5..2.0)).collect()
}

/// `Σ_k w_k · x_k x_kᵀ`.
fn weighted_gram(cols: &[Vec<f64>], weights: &[f64], n: usize) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(n, n);
    for (x, &w) in cols.iter().zip(weights) {
        for i in 0..n {
            let wi = w * x[i];
            for j in 0..n {
                out[(i, j)] += wi * x[j];
            }
        }
    }
    out
}

/// Random `(A, B, g, f)` with `rank B`, `rank A` and `dim(N(A) ∩ N(B))`
/// exactly as requested.
///
/// A random orthogonal frame `e₁ … eₙ` is split into `N(B)` (the first
/// `n − rank_B` vectors) and `N(B)⊥`. The shared kernel is
/// `e₁ … e_overlap`; `N(A)` extends it with vectors taken from `N(B)⊥`
/// first and from the rest of `N(B)` only when `N(B)⊥` is exhausted, which
/// keeps the intersection at exactly `overlap_dim`. `A` is a positive
/// combination of projectors onto a rotated basis of `N(A)⊥`, and `B`
/// maps `N(B)⊥` onto a random `rank_B`-dimensional subspace of `Rᵐ`.
pub fn random_problem(spec: &RandomSpec) -> Result<SaddleProblem> {
    spec.check()?;
    let RandomSpec {
        n,
        m,
        rank_b,
        rank_a,
        overlap_dim: ov,
        scale,
        ..
    } = *spec;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let frame = random_orthogonal(&mut rng, n);
    let e: Vec<Vec<f64>> = (0..n).map(|j| frame.column(j)).collect();
    let null_b = n - rank_b;
    let null_a = n - rank_a;

    // N(A): e[0..ov], then N(B)⊥ = e[null_b..n], then the rest of N(B).
    let mut kernel_a: Vec<usize> = (0..ov).collect();
    let from_range = (null_a - ov).min(rank_b);
    kernel_a.extend(null_b..null_b + from_range);
    kernel_a.extend(ov..ov + (null_a - ov - from_range));
    let range_a: Vec<usize> = (0..n).filter(|j| !kernel_a.contains(j)).collect();

    // Mix the basis of N(A)⊥ so A is not diagonal in the frame.
    let range_basis: Vec<Vec<f64>> = range_a.iter().map(|&j| e[j].clone()).collect();
    let mix = random_orthogonal(&mut rng, rank_a.max(1));
    let mut mixed = Vec::with_capacity(rank_a);
    for c in 0..rank_a {
        let mut v = vec![0.0; n];
        for (r, b) in range_basis.iter().enumerate() {
            vecops::axpy(mix[(r, c)], b, &mut v);
        }
        mixed.push(v);
    }
    let a = weighted_gram(&mixed, &spectrum(&mut rng, rank_a, scale), n).symmetric_part()?;

    // B = U Σ Vᵀ with V spanning N(B)⊥ and U orthonormal in Rᵐ.
    let u_frame = random_orthogonal(&mut rng, m);
    let sv = spectrum(&mut rng, rank_b, scale);
    let mut b = DenseMatrix::zeros(m, n);
    for k in 0..rank_b {
        let v = &e[null_b + k];
        for i in 0..m {
            let ui = u_frame[(i, k)] * sv[k];
            for j in 0..n {
                b[(i, j)] += ui * v[j];
            }
        }
    }

    // g ∈ R(A) + N(B)⊥ = (N(A) ∩ N(B))⊥ = span(e[ov..n]).
    let coeffs = gaussian_vec(&mut rng, n);
    let mut g = vec![0.0; n];
    for j in ov..n {
        vecops::axpy(coeffs[j], &e[j], &mut g);
    }
    if !spec.admissible_rhs {
        vecops::axpy(1.0 + coeffs[0].abs(), &e[0], &mut g);
    }
    let f = gaussian_vec(&mut rng, n);
    let tol = TolerancePolicy::default();
    SaddleProblem::new(a, b, g, f, &tol)
}

/// Preset loads of the diffusion model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Load {
    /// `q ≡ 1`.
    #[default]
    Uniform,
    /// Indicator of the inclusion.
    Inclusion,
    /// `q = π² sin πx`.
    Sine,
}

impl Load {
    pub fn label(self) -> &'static str {
        match self {
            Load::Uniform => "uniform",
            Load::Inclusion => "inclusion",
            Load::Sine => "sine",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "uniform" => Some(Load::Uniform),
            "inclusion" => Some(Load::Inclusion),
            "sine" => Some(Load::Sine),
            _ => None,
        }
    }
}

/// Parameters of [`jump_problem`].
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSpec {
    /// Mesh cells on the unit interval, at least 4.
    pub cells: usize,
    /// Inclusion cells `a..b` (0-based, half-open), with `1 ≤ a < b ≤ cells − 1`.
    pub inclusion: std::ops::Range<usize>,
    /// Coefficient inside the inclusion; `f64::INFINITY` gives exact zero
    /// compliance there.
    pub contrast_t: f64,
    pub load: Load,
    /// Ignore `contrast_t` and use `a ≡ 1` everywhere.
    pub uniform: bool,
}

impl JumpSpec {
    /// Inclusion from `cells/4` to `cells/2`.
    pub fn new(cells: usize, contrast_t: f64) -> Self {
        Self {
            cells,
            inclusion: Self::default_inclusion(cells),
            contrast_t,
            load: Load::Uniform,
            uniform: false,
        }
    }

    /// Left of center on purpose: every preset load is symmetric about the
    /// midpoint, and a centered inclusion would make `σ` independent of `t`.
    pub fn default_inclusion(cells: usize) -> std::ops::Range<usize> {
        (cells / 4).max(1)..(cells / 2).max(2)
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleSpec(msg));
        if self.cells < 4 {
            return bad(format!("need at least 4 cells, got {}", self.cells));
        }
        let r = &self.inclusion;
        if r.start < 1 || r.start >= r.end || r.end > self.cells - 1 {
            return bad(format!(
                "inclusion {}..{} must satisfy 1 ≤ a < b ≤ {}",
                r.start,
                r.end,
                self.cells - 1
            ));
        }
        if self.contrast_t.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return bad(format!(
                "contrast must be positive, got {}",
                self.contrast_t
            ));
        }
        Ok(())
    }
}

/// Antiderivative `Q(x) = ∫₀ˣ q` of the load.
fn load_primitive(spec: &JumpSpec, x: f64) -> f64 {
    let h = 1.0 / spec.cells as f64;
    match spec.load {
        Load::Uniform => x,
        Load::Inclusion => {
            let a = spec.inclusion.start as f64 * h;
            let b = spec.inclusion.end as f64 * h;
            (x - a).clamp(0.0, b - a)
        }
        Load::Sine => std::f64::consts::PI * (1.0 - (std::f64::consts::PI * x).cos()),
    }
}

/// Two-component mixed diffusion on a strip of `cells` cells, unknowns
/// ordered `(σ_x per cell, σ_y per cell)`.
///
/// - `A = diag(h/a_j)` on both components, `a = t` inside the inclusion and
///   1 outside; `t = ∞` gives exact zeros.
/// - `B` is the interface jump of `σ_x` at the `cells − 1` interior nodes;
///   the transverse flux is unconstrained.
/// - `f_x = −Q(x_mid)` with `Q` the load primitive, `f_y = 0`; `g = 0`.
///
/// At `t = ∞` the transverse inclusion fluxes lie in `N(A) ∩ N(B)`, so `A`
/// is degenerate on `N(B)` while the problem stays solvable.
pub fn jump_problem(spec: &JumpSpec) -> Result<SaddleProblem> {
    spec.check()?;
    let c = spec.cells;
    let h = 1.0 / c as f64;
    let n = 2 * c;
    let mut diag = vec![h; n];
    if !spec.uniform {
        for j in spec.inclusion.clone() {
            let comp = if spec.contrast_t.is_infinite() {
                0.0
            } else {
                h / spec.contrast_t
            };
            diag[j] = comp;
            diag[c + j] = comp;
        }
    }
    let a = DenseMatrix::from_diag(&diag);
    let mut b = DenseMatrix::zeros(c - 1, n);
    for i in 1..c {
        b[(i - 1, i)] = 1.0;
        b[(i - 1, i - 1)] = -1.0;
    }
    let mut f = vec![0.0; n];
    for (j, fj) in f.iter_mut().take(c).enumerate() {
        *fj = -load_primitive(spec, (j as f64 + 0.5) * h);
    }
    SaddleProblem::new(a, b, vec![0.0; n], f, &TolerancePolicy::default())
}

/// One row of a contrast sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub t: f64,
    pub sigma: Vec<f64>,
    pub sigma_norm: f64,
    pub rho: Constant,
    pub rho_d: Constant,
    pub kappa: f64,
    pub c_a: Constant,
    pub c_b: Constant,
    pub residual_first_eq: f64,
    pub residual_constraint: f64,
    pub kernel_overlap_dim: usize,
    pub checks_passed: bool,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// `max_t ‖σ(t) − σ(∞)‖`; `None` without an `∞` entry in the grid.
    pub max_distance_to_limit: Option<f64>,
    /// `max_t ρ(t)` over applicable rows.
    pub max_rho: Option<f64>,
}

impl SweepTable {
    /// Row with the exactly degenerate problem, if the grid contains `∞`.
    pub fn limit_row(&self) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.t.is_infinite())
    }

    /// `‖σ(t) − σ(∞)‖` per row, in grid order.
    pub fn distances_to_limit(&self) -> Option<Vec<f64>> {
        let lim = self.limit_row()?;
        Some(
            self.rows
                .iter()
                .map(|r| vecops::norm(&vecops::sub(&r.sigma, &lim.sigma)))
                .collect(),
        )
    }
}

/// Solves and analyzes `jump_problem` at each contrast of the grid.
///
/// Rows are computed in parallel and returned in grid order.
pub fn sweep(spec: &JumpSpec, t_grid: &[f64], tol: &TolerancePolicy) -> Result<SweepTable> {
    if t_grid.is_empty() {
        return Err(Error::InvalidInput("contrast grid is empty".into()));
    }
    if t_grid
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidInput(
            "contrast grid must be strictly increasing".into(),
        ));
    }
    let rows = t_grid
        .par_iter()
        .map(|&t| -> Result<SweepRow> {
            let p = jump_problem(&JumpSpec {
                contrast_t: t,
                ..spec.clone()
            })?;
            let an = analyze(&p, tol)?;
            let sol = an.solution;
            Ok(SweepRow {
                t,
                sigma_norm: vecops::norm(&sol.sigma),
                sigma: sol.sigma,
                rho: an.report.rho,
                rho_d: an.report.rho_d,
                kappa: an.report.kappa,
                c_a: an.report.c_a,
                c_b: an.report.c_b,
                residual_first_eq: sol.residual_first_eq,
                residual_constraint: sol.residual_constraint,
                kernel_overlap_dim: sol.kernel_overlap_dim,
                checks_passed: an.report.all_passed(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = SweepTable {
        rows,
        max_distance_to_limit: None,
        max_rho: None,
    };
    table.max_distance_to_limit = table
        .distances_to_limit()
        .map(|d| d.into_iter().fold(0.0, f64::max));
    table.max_rho = table
        .rows
        .iter()
        .filter_map(|r| r.rho.value())
        .reduce(f64::max);
    Ok(table)
}

/// `N(A) ∩ N(B)` of a generated problem, from an independent basis of
/// `R(A) + R(Bᵀ)`.
pub fn shared_kernel_dim(p: &SaddleProblem, tol: &TolerancePolicy) -> Result<usize> {
    let stacked = p.a().hcat(&p.b().transpose())?;
    let range: Subspace = orth_range(&stacked, tol)?;
    Ok(p.n() - range.dim())
}
