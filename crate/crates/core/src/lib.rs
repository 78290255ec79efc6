//! Degenerate symmetric saddle point problems
//!
//! ```text
//!     A σ + Bᵀ u = g
//!     B (σ − f)  = 0
//! ```
//!
//! solved through the null-space splitting of `B`, with the wellposedness
//! constants (inf-sup, coercivity, generalized coercivity, closed-range,
//! minimum gap) and numerical checks of the identities relating them.
//!
//! All linear algebra is dense and self-contained in [`densekit`].

pub mod densekit;
pub mod error;
pub mod probgen;
pub mod saddle;
pub mod subspace;
pub mod wellposed;

pub use densekit::{DenseMatrix, TolerancePolicy};
pub use error::{Error, Result};
pub use probgen::{
    jump_problem, random_problem, sweep, JumpSpec, Load, RandomSpec, SweepRow, SweepTable,
};
pub use saddle::{
    build_split, lagrangian, recover_u, solution_set, solve, solve_sigma, SaddleProblem,
    SolutionSet, SolveReport, SplitSystem,
};
pub use subspace::{min_gap, GapExpression, GapReport, Subspace};
pub use wellposed::{
    analyze, Analysis, CheckRecord, CheckStatus, Constant, WellposednessReport, CHECK_NAMES,
};
