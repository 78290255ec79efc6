mod common;

use common::oracle;
use common::specs::{draw_subspace_pair, spec_batch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saddlegap_core::densekit::{null_space, orth_range, vecops};
use saddlegap_core::probgen::shared_kernel_dim;
use saddlegap_core::wellposed::{infsup_constant, lbb_lemma_checks};
use saddlegap_core::{
    analyze, build_split, jump_problem, lagrangian, min_gap, random_problem, solve, solve_sigma,
    sweep, CheckStatus, DenseMatrix, JumpSpec, RandomSpec, SaddleProblem, Subspace,
    TolerancePolicy,
};

const REL: f64 = 1e-12;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn running_example() -> SaddleProblem {
    SaddleProblem::new(
        DenseMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 1.0, 1.0]]).unwrap(),
        DenseMatrix::from_rows(&[[1.0, 0.0, 0.0]]).unwrap(),
        vec![0.0, 1.0, 1.0],
        vec![2.0, 0.0, 0.0],
        &tol(),
    )
    .unwrap()
}

fn rel_err(x: &[f64], reference: &[f64]) -> f64 {
    let d = vecops::norm(&vecops::sub(x, reference));
    let r = vecops::norm(reference);
    if r == 0.0 {
        d
    } else {
        d / r
    }
}

#[test]
fn running_example_by_elimination() {
    // Stacked system [P⊥A; P] σ = [P⊥g; Pf] with P = diag(1, 0, 0) written out.
    let stacked = DenseMatrix::from_rows(&[
        [0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
    ])
    .unwrap();
    let rhs = [0.0, 1.0, 1.0, 2.0, 0.0, 0.0];
    let sigma = oracle::min_norm_by_elimination(&stacked, &rhs, 1e-12);
    assert!(rel_err(&sigma, &[2.0, 0.5, 0.5]) < 1e-15, "{sigma:?}");

    // Bᵀu = P(g − Aσ): first coordinate 0 − 2.
    let bt = DenseMatrix::from_rows(&[[1.0], [0.0], [0.0]]).unwrap();
    let u = oracle::min_norm_by_elimination(&bt, &[-2.0, 0.0, 0.0], 1e-12);
    assert!((u[0] + 2.0).abs() < 1e-15);

    let p = running_example();
    let t = tol();
    let r = solve(&p, &build_split(&p, &t).unwrap(), &t).unwrap();
    assert!(rel_err(&r.sigma, &sigma) < 1e-14);
    assert!((r.u.unwrap()[0] - u[0]).abs() < 1e-14);
}

#[test]
fn running_example_kernel_by_elimination() {
    // N(A) ∩ N(B) = N([A; B]).
    let stacked = DenseMatrix::from_rows(&[
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
        [1.0, 0.0, 0.0],
    ])
    .unwrap();
    let e = oracle::eliminate(&stacked, &[0.0; 4], 1e-12);
    assert_eq!(e.rank, 2);
    assert_eq!(e.null_basis.len(), 1);
    let k = &e.null_basis[0];
    let t = tol();
    let p = running_example();
    let split = build_split(&p, &t).unwrap();
    let r = solve_sigma(&p, &split, &t).unwrap();
    let reference = Subspace::span(&DenseMatrix::from_columns(3, &[k]).unwrap(), &t).unwrap();
    let eq = saddlegap_core::subspace::subspace_equal(&r.kernel, &reference, &t).unwrap();
    assert!(eq.equal, "{eq:?}");
}

#[test]
fn running_example_constants_against_oracle() {
    let p = running_example();
    let a = oracle::to_na(p.a());
    assert_eq!(oracle::sym_eigenvalues(&a).len(), 3);
    assert!((oracle::rho_d(&a, REL).unwrap() - 1.0).abs() < 1e-12);
    assert!((oracle::rho(&p, REL).unwrap() - 0.5).abs() < 1e-12);
    let bt = oracle::to_na(p.b()).transpose();
    assert!((oracle::kappa(&a, &bt) - 1.0).abs() < 1e-12);
}

#[test]
fn running_example_lagrangian_is_flat_in_u() {
    let t = tol();
    let p = running_example();
    let r = solve(&p, &build_split(&p, &t).unwrap(), &t).unwrap();
    let u = r.u.unwrap();
    let base = lagrangian(&p, &r.sigma, &u).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let du = [u[0] + rng.random_range(-5.0..5.0)];
        assert!((lagrangian(&p, &r.sigma, &du).unwrap() - base).abs() < 1e-12);
    }
}

#[test]
fn solver_matches_stacked_oracle() {
    let t = tol();
    for spec in spec_batch(11, 150, 20, 12) {
        let p = random_problem(&spec).unwrap();
        let split = build_split(&p, &t).unwrap();
        let r = solve(&p, &split, &t).unwrap();
        assert!(r.admissible, "{spec:?}");
        let reference = oracle::stacked_sigma(&p);
        let e = rel_err(&r.sigma, reference.as_slice());
        assert!(e <= 1e-9, "σ error {e:e} for {spec:?}");
        let u_ref = oracle::multiplier(&p, &reference);
        let scale = 1.0 + vecops::norm(u_ref.as_slice());
        let eu = vecops::norm(&vecops::sub(r.u.as_ref().unwrap(), u_ref.as_slice())) / scale;
        assert!(eu <= 1e-8, "u error {eu:e} for {spec:?}");
    }
}

#[test]
fn constants_match_oracle() {
    let t = tol();
    for spec in spec_batch(12, 120, 15, 10) {
        let p = random_problem(&spec).unwrap();
        let an = analyze(&p, &t).unwrap();
        let a = oracle::to_na(p.a());
        match (an.report.rho.value(), oracle::rho(&p, REL)) {
            (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-8 * y, "{x} vs {y} for {spec:?}"),
            (x, y) => assert_eq!(x.is_some(), y.is_some(), "{spec:?}"),
        }
        match (an.report.rho_d.value(), oracle::rho_d(&a, REL)) {
            (Some(x), Some(y)) => assert!((x - y).abs() <= 1e-8 * y),
            (x, y) => assert_eq!(x.is_some(), y.is_some()),
        }
        let k = oracle::kappa_problem(&p);
        assert!(
            (an.report.kappa - k).abs() <= 1e-8,
            "{} vs {k} for {spec:?}",
            an.report.kappa
        );
    }
}

#[test]
fn saddle_point_inequalities_on_random_problems() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for spec in spec_batch(13, 40, 12, 8) {
        let p = random_problem(&spec).unwrap();
        let r = solve(&p, &build_split(&p, &t).unwrap(), &t).unwrap();
        let u = r.u.clone().unwrap();
        let base = lagrangian(&p, &r.sigma, &u).unwrap();
        let scale = 1.0 + base.abs() + vecops::norm(&r.sigma).powi(2);
        for _ in 0..50 {
            let du: Vec<f64> = (0..p.m()).map(|_| rng.random_range(-3.0..3.0)).collect();
            let v = lagrangian(&p, &r.sigma, &vecops::add(&u, &du)).unwrap();
            assert!((v - base).abs() <= 1e-10 * scale);
            let ds: Vec<f64> = (0..p.n()).map(|_| rng.random_range(-3.0..3.0)).collect();
            let v = lagrangian(&p, &vecops::add(&r.sigma, &ds), &u).unwrap();
            assert!(v >= base - 1e-8 * scale);
        }
    }
}

#[test]
fn generator_postconditions_by_independent_ranks() {
    let t = tol();
    for spec in spec_batch(14, 200, 14, 10) {
        let p = random_problem(&spec).unwrap();
        assert_eq!(
            oracle::elimination_rank(p.b(), 1e-10),
            spec.rank_b,
            "{spec:?}"
        );
        assert_eq!(
            oracle::elimination_rank(p.a(), 1e-10),
            spec.rank_a,
            "{spec:?}"
        );
        let stacked = p.a().vcat(p.b()).unwrap();
        let overlap = spec.n - oracle::elimination_rank(&stacked, 1e-10);
        assert_eq!(overlap, spec.overlap_dim, "{spec:?}");
        assert_eq!(shared_kernel_dim(&p, &t).unwrap(), spec.overlap_dim);
        assert_eq!(null_space(p.b(), &t).unwrap().dim(), spec.n - spec.rank_b);
        assert_eq!(orth_range(p.a(), &t).unwrap().dim(), spec.rank_a);
        assert!(random_problem(&spec).unwrap() == p);
    }
}

#[test]
fn spec_example_with_overlap() {
    let t = tol();
    let p = random_problem(&RandomSpec::new(6, 3, 3, 4, 1, 42)).unwrap();
    let stacked = p.a().vcat(p.b()).unwrap();
    assert_eq!(6 - oracle::elimination_rank(&stacked, 1e-10), 1);
    let r = solve_sigma(&p, &build_split(&p, &t).unwrap(), &t).unwrap();
    assert_eq!(r.kernel_overlap_dim, 1);
}

#[test]
fn lbb_checks_on_rank_deficient_wide_b() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let l: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..2).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let r: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..6).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let b = DenseMatrix::from_rows(&l)
            .unwrap()
            .matmul(&DenseMatrix::from_rows(&r).unwrap())
            .unwrap();
        assert_eq!(oracle::elimination_rank(&b, 1e-10), 2);
        let checks = lbb_lemma_checks(&b, &t).unwrap();
        assert!(
            checks.iter().all(|c| c.status == CheckStatus::Pass),
            "{checks:?}"
        );
        let cb = infsup_constant(&b, &t).unwrap().value().unwrap();
        let s = oracle::singular_values(&oracle::to_na(&b));
        assert!((cb - s[1]).abs() <= 1e-12 * s[0]);
    }
}

#[test]
fn gap_matches_oracle_on_subspace_pairs() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..200 {
        let (d, p) = draw_subspace_pair(&mut rng, 10);
        let ds = Subspace::span(&d, &t).unwrap();
        let ps = Subspace::span(&p, &t).unwrap();
        let g = min_gap(&ds, &ps, &t).unwrap();
        let k = oracle::kappa(&oracle::to_na(&d), &oracle::to_na(&p));
        assert!((g.kappa - k).abs() <= 1e-8, "{} vs {k}", g.kappa);
    }
}

fn oracle_jump_sigma(spec: &JumpSpec) -> Vec<f64> {
    let p = jump_problem(spec).unwrap();
    oracle::stacked_sigma(&p).as_slice().to_vec()
}

#[test]
fn jump_family_decays_like_inverse_contrast() {
    let spec = JumpSpec::new(4, 1.0);
    let limit = oracle_jump_sigma(&JumpSpec {
        contrast_t: f64::INFINITY,
        ..spec.clone()
    });
    let d3 = vecops::norm(&vecops::sub(
        &oracle_jump_sigma(&JumpSpec {
            contrast_t: 1e3,
            ..spec.clone()
        }),
        &limit,
    ));
    let d6 = vecops::norm(&vecops::sub(
        &oracle_jump_sigma(&JumpSpec {
            contrast_t: 1e6,
            ..spec.clone()
        }),
        &limit,
    ));
    let ratio = d3 / d6;
    assert!(
        d3 > 0.0 && (ratio / 1e3 - 1.0).abs() < 0.05,
        "d(1e3) = {d3:e}, d(1e6) = {d6:e}"
    );

    let t = tol();
    for ct in [1e3, 1e6, f64::INFINITY] {
        let s = JumpSpec {
            contrast_t: ct,
            ..spec.clone()
        };
        let p = jump_problem(&s).unwrap();
        let r = solve_sigma(&p, &build_split(&p, &t).unwrap(), &t).unwrap();
        assert!(rel_err(&r.sigma, &oracle_jump_sigma(&s)) < 1e-9);
    }
}

#[test]
fn sweep_agrees_with_oracle_over_grid() {
    let t = tol();
    let spec = JumpSpec::new(8, 1.0);
    let grid = [1.0, 1e2, 1e4, 1e6, 1e8, f64::INFINITY];
    let table = sweep(&spec, &grid, &t).unwrap();
    let limit = oracle_jump_sigma(&JumpSpec {
        contrast_t: f64::INFINITY,
        ..spec.clone()
    });
    let mut prev = f64::INFINITY;
    for row in &table.rows {
        let reference = oracle_jump_sigma(&JumpSpec {
            contrast_t: row.t,
            ..spec.clone()
        });
        assert!(rel_err(&row.sigma, &reference) < 1e-9, "t = {}", row.t);
        let d = vecops::norm(&vecops::sub(&reference, &limit));
        if row.t.is_finite() {
            assert!(d < prev);
        }
        prev = d;
        assert!(row.checks_passed, "t = {}", row.t);
    }
    assert!(table.rows.windows(2).all(|w| w[0].c_b == w[1].c_b));
}
