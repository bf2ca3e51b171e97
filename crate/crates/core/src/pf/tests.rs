use super::*;
use rand::Rng;

fn dense(rows: usize, v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, rows, v)
}

/// A random matrix with non-positive off-diagonal entries, similar to a
/// symmetric one through a positive diagonal scaling.
fn random_z_matrix(rng: &mut ChaCha8Rng, n: usize, density: f64) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = rng.random_range(-3.0..3.0);
        for j in 0..i {
            if rng.random_bool(density) {
                let v = -rng.random_range(0.01..2.0);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
    }
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    DMatrix::from_fn(n, n, |i, j| d[i] * s[(i, j)] / d[j])
}

fn dense_min(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
}

#[test]
fn min_eigenvalue_examples() {
    assert!((min_eigenvalue(&dense(2, &[4.0, -2.0, -2.0, 4.0])).unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(min_eigenvalue(&dense(1, &[0.0])).unwrap(), 0.0);
    assert!((min_eigenvalue(&dense(2, &[2.0, -1.0, -1.0, 2.0])).unwrap() - 1.0).abs() < 1e-15);
    assert!(min_eigenvalue(&DMatrix::<f64>::zeros(0, 0)).is_err());
}

#[test]
fn routes() {
    let tri = dense(3, &[2.0, -1.0, 0.0, -4.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
    let (e, route) = min_eigenvalue_with_route(&tri).unwrap();
    assert_eq!(route, EigenRoute::Tridiagonal);
    assert!((e - dense_min(&tri)).abs() < 1e-12);
    let full = dense(3, &[2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0]);
    assert_eq!(min_eigenvalue_with_route(&full).unwrap().1, EigenRoute::Dense);
    // one-sided tridiagonal coupling is not symmetrizable
    let lopsided = dense(2, &[1.0, -1.0, 0.0, 2.0]);
    let (e, route) = min_eigenvalue_with_route(&lopsided).unwrap();
    assert_eq!(route, EigenRoute::Dense);
    assert!((e - 1.0).abs() < 1e-12);
}

#[test]
fn all_eigenvalues_ascending() {
    let ev = eigenvalues(&dense(2, &[4.0, -2.0, -2.0, 4.0]));
    assert!((ev[0] - 2.0).abs() < 1e-12 && (ev[1] - 6.0).abs() < 1e-12);
    let ev = eigenvalues(&dense(3, &[3.0, -1.0, -2.0, -1.0, 3.0, -1.0, -0.5, -1.0, 3.0]));
    assert!(ev.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn power_iteration_examples() {
    let e = power_iteration_min_eigenvalue(&dense(2, &[4.0, -2.0, -2.0, 4.0])).unwrap();
    assert!((e - 2.0).abs() < 1e-9);
    // path graph Laplacian, smallest eigenvalue 0
    let n = 30;
    let lap = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => if i == 0 || i == n - 1 { 1.0 } else { 2.0 },
        1 => -1.0,
        _ => 0.0,
    });
    assert!(power_iteration_min_eigenvalue(&lap).unwrap().abs() < 1e-8);
}

#[test]
fn power_iteration_matches_dense_solves() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..150 {
        let n = rng.random_range(1..=if k < 140 { 40 } else { 200 });
        let m = random_z_matrix(&mut rng, n, 0.3);
        let e = power_iteration_min_eigenvalue(&m).unwrap();
        let want = dense_min(&m);
        assert!((e - want).abs() < 1e-8, "n = {n}: {e} vs {want}");
    }
}

#[test]
fn certificate_examples() {
    let c = irreducibility_certificate(&dense(2, &[4.0, -2.0, -2.0, 4.0]));
    assert_eq!(c, IrreducibilityCertificate { shift: 5.0, power: 1, attained: true });
    assert!(!irreducibility_certificate(&dense(2, &[0.0, 0.0, 0.0, 0.0])).attained);
    let n = 5;
    let tri = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 1.0,
        1 => -0.5,
        _ => 0.0,
    });
    let c = irreducibility_certificate(&tri);
    assert!(c.attained);
    assert_eq!(c.power, 4);
}

#[test]
fn certificates_agree_with_explicit_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..300 {
        let n = rng.random_range(1..=12);
        let b = random_z_matrix(&mut rng, n, 0.25);
        let cert = irreducibility_certificate(&b);
        let shifted = DMatrix::identity(n, n) * cert.shift - &b;
        let mut power = shifted.clone();
        for _ in 1..cert.power {
            power = &power * &shifted;
        }
        let positive = power.iter().all(|&v| v > 0.0);
        if cert.attained {
            assert!(positive, "{b}");
            if cert.power > 1 {
                let mut lower = shifted.clone();
                for _ in 1..cert.power - 1 {
                    lower = &lower * &shifted;
                }
                assert!(lower.iter().any(|&v| v <= 0.0), "power {} is not minimal", cert.power);
            }
        } else {
            // no power up to n can be positive
            let mut p = shifted.clone();
            for _ in 1..n {
                p = &p * &shifted;
            }
            assert!(p.iter().any(|&v| v <= 0.0));
        }
    }
}

#[test]
fn compare_examples() {
    let a = dense(2, &[2.0, -1.0, -1.0, 2.0]);
    let b = dense(2, &[1.0, -1.0, -1.0, 1.0]);
    let v = pf_compare(&a, &b);
    assert_eq!(v.status, VerdictStatus::HoldsStrict);
    assert!((v.e_small.unwrap() - 1.0).abs() < 1e-12);
    assert!(v.e_large.unwrap().abs() < 1e-12);

    let zero = dense(1, &[0.0]);
    let v = pf_compare(&zero, &zero);
    assert_eq!(v.status, VerdictStatus::HoldsNonStrict);

    let v = pf_compare(&b, &a);
    assert_eq!(v.status, VerdictStatus::PreconditionFailed);
    assert!(v.witnesses.iter().all(|w| matches!(
        w.location,
        Location::Precondition { condition: Condition::Domination, .. }
    )));

    let v = pf_compare(&a, &zero);
    assert!(v.witnesses.iter().any(|w| matches!(
        w.location,
        Location::Precondition { condition: Condition::DimensionOrder, .. }
    )));

    let positive = dense(2, &[1.0, 0.5, 0.5, 1.0]);
    let v = pf_compare(&positive, &positive);
    assert_eq!(v.status, VerdictStatus::PreconditionFailed);
    assert_eq!(v.witnesses.len(), 4);
}

#[test]
fn reducible_larger_matrix_is_never_strict() {
    let a = dense(1, &[1.0]);
    let b = dense(2, &[0.0, 0.0, 0.0, 5.0]);
    let v = pf_compare(&a, &b);
    assert_eq!(v.status, VerdictStatus::HoldsNonStrict);
}

#[test]
fn random_comparisons_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..300 {
        let n = rng.random_range(1..=20);
        let m = rng.random_range(1..=n);
        let b = random_z_matrix(&mut rng, n, 0.4);
        // A dominates the leading block of B entrywise, keeping signs
        let mut a = DMatrix::from_fn(m, m, |i, j| b[(i, j)]);
        for i in 0..m {
            for j in 0..m {
                let bump = if rng.random_bool(0.3) { rng.random_range(0.0..1.0) } else { 0.0 };
                a[(i, j)] = if i == j { a[(i, j)] + bump } else { (a[(i, j)] + bump).min(0.0) };
            }
        }
        let v = pf_compare(&a, &b);
        assert_ne!(v.status, VerdictStatus::Violated);
        assert_ne!(v.status, VerdictStatus::PreconditionFailed);
        let (ea, eb) = (dense_min(&a), dense_min(&b));
        assert!(eb <= ea + 1e-9);
        if v.status == VerdictStatus::HoldsStrict {
            assert!(eb < ea);
        }
        let strict_hyp = n > m || (0..m).any(|i| (0..m).any(|j| b[(i, j)] < a[(i, j)] - 1e-12));
        if strict_hyp && irreducibility_certificate(&b).attained {
            assert_eq!(v.status, VerdictStatus::HoldsStrict, "gap {}", eb - ea);
        }
    }
}

#[test]
fn sparse_sector_matrices_work_too() {
    let m = SparseSectorMatrix::from_dense(&dense(2, &[4.0, -2.0, -2.0, 4.0]), crate::HalfInteger::HALF, 0, 0.0);
    assert!((min_eigenvalue(&m).unwrap() - 2.0).abs() < 1e-12);
    assert!((power_iteration_min_eigenvalue(&m).unwrap() - 2.0).abs() < 1e-9);
    let v = pf_compare(&SparseSectorMatrix::from_dense(&dense(1, &[4.0]), crate::HalfInteger::ZERO, 0, 0.0), &m);
    assert_eq!(v.status, VerdictStatus::HoldsStrict);
}
