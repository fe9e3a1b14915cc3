use nalgebra::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::convex::{asymptotic_slope, RayFunction};
use crate::hermitian::{geodesic_point, random_direction, random_form, random_unitary};
use crate::linalg::CMatrix;

fn c(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

fn columns(n: usize, cols: &[&[f64]]) -> CMatrix {
    CMatrix::from_fn(n, cols.len(), |i, a| c(cols[a][i]))
}

fn random_sample(n: usize, m: usize, rng: &mut ChaCha8Rng) -> PolarizedSample {
    let evals = CMatrix::from_fn(n, m, |_, _| Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let weights = (0..m).map(|_| 0.5 + rng.gen::<f64>()).collect();
    PolarizedSample::new("random", 1, 1, evals, weights).unwrap()
}

fn random_ac_sample(n: usize, m: usize, k: u32, rng: &mut ChaCha8Rng) -> AnticanonicalSample {
    let s = random_sample(n, m, rng);
    let s = PolarizedSample::new("random", k, 1, s.evals().clone(), s.weights().to_vec()).unwrap();
    let base = (0..m).map(|_| 0.5 + rng.gen::<f64>()).collect();
    AnticanonicalSample::new(s, base).unwrap()
}

fn symmetric_pair(k: u32) -> AnticanonicalSample {
    let s = PolarizedSample::new("pair", k, 1, columns(2, &[&[1.0, 0.0], &[0.0, 1.0]]), vec![0.5, 0.5])
        .unwrap();
    AnticanonicalSample::new(s, vec![1.0, 1.0]).unwrap()
}

fn integral_direction(n: usize, rng: &mut ChaCha8Rng) -> TangentDirection {
    loop {
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-3i32..=3) as f64).collect();
        if values.iter().any(|v| *v != values[0]) {
            let u = random_unitary(n, rng);
            return TangentDirection::from_spectrum(&u, &values).unwrap();
        }
    }
}

#[test]
fn density_examples() {
    let s = PolarizedSample::new("e1", 1, 1, columns(1, &[&[1.0]]), vec![1.0]).unwrap();
    let rho = bergman_density(&s, &HermitianForm::identity(1), Normalization::Internal).unwrap();
    assert_eq!(rho, vec![1.0]);

    let s = PolarizedSample::new_degenerate("e2", 1, 1, columns(3, &[&[0.0, 1.0, 0.0]]), vec![1.0])
        .unwrap();
    let h = HermitianForm::from_diagonal(&[2.0, 4.0, 8.0]).unwrap();
    let rho = bergman_density(&s, &h, Normalization::Internal).unwrap();
    assert!((rho[0] - 0.25).abs() < 1e-15);
}

#[test]
fn t_operator_examples() {
    let s = PolarizedSample::new("pair", 1, 1, columns(2, &[&[1.0, 0.0], &[0.0, 1.0]]), vec![0.5, 0.5])
        .unwrap();
    let t = t_operator(&s, &HermitianForm::identity(2)).unwrap();
    assert!((t.matrix() - CMatrix::identity(2, 2)).norm() < 1e-15);

    let s = PolarizedSample::new("one", 0, 1, columns(1, &[&[0.7]]), vec![2.0]).unwrap();
    let h = HermitianForm::from_diagonal(&[3.5]).unwrap();
    assert!((t_operator(&s, &h).unwrap().matrix()[(0, 0)].re - 3.5).abs() < 1e-14);
}

#[test]
fn energy_examples() {
    let s = PolarizedSample::new_degenerate("e1", 1, 1, columns(3, &[&[1.0, 0.0, 0.0]]), vec![1.0])
        .unwrap();
    assert_eq!(balancing_energy(&s, &HermitianForm::identity(3)).unwrap(), 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let s = random_sample(4, 9, &mut rng);
        let h = random_form(4, 1.0, &mut rng);
        for scale in [3.0, 1e-3, 1e3] {
            let dz = balancing_energy(&s, &h.scaled(scale).unwrap()).unwrap() - balancing_energy(&s, &h).unwrap();
            assert!(dz.abs() < 1e-9, "{dz}");
        }
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=5 {
        let s = random_sample(n, 3 * n + 1, &mut rng);
        let h = random_form(n, 1.0, &mut rng);
        let a = random_direction(n, &mut rng);
        let g = energy_gradient(&s, &h).unwrap();
        assert!(g.trace().abs() < 1e-10);
        let step = 1e-5;
        let zp = balancing_energy(&s, &geodesic_point(&h, &a, step).unwrap()).unwrap();
        let zm = balancing_energy(&s, &geodesic_point(&h, &a, -step).unwrap()).unwrap();
        let fd = (zp - zm) / (2.0 * step);
        let an = a.pairing(g.matrix());
        assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-3), "{fd} vs {an}");
    }
}

#[test]
fn slope_examples() {
    let s = PolarizedSample::new("p", 1, 1, columns(2, &[&[1.0, 1.0], &[1.0, -1.0]]), vec![0.5, 0.5])
        .unwrap();
    let id = HermitianForm::identity(2);
    let scalar = TangentDirection::from_diagonal(&[2.0, 2.0]).unwrap();
    assert_eq!(exact_slope(&s, &id, &scalar).unwrap(), 0.0);

    let one = PolarizedSample::new_degenerate("p", 1, 1, columns(2, &[&[1.0, 1.0]]), vec![1.0]).unwrap();
    let a = TangentDirection::from_diagonal(&[1.0, -1.0]).unwrap();
    assert_eq!(exact_slope(&one, &id, &a).unwrap(), 1.0);

    let off = PolarizedSample::new_degenerate("p", 1, 1, columns(2, &[&[0.0, 1.0]]), vec![1.0]).unwrap();
    let a = TangentDirection::from_diagonal(&[-5.0, 1.0]).unwrap();
    assert_eq!(exact_slope(&off, &id, &a).unwrap(), -3.0);
}

#[test]
fn restriction_matches_matrix_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let s = random_sample(3, 7, &mut rng);
        let h0 = random_form(3, 1.0, &mut rng);
        let a = random_direction(3, &mut rng);
        let r = balancing_restriction(&s, &h0, &a).unwrap();
        for t in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            let direct = balancing_energy(&s, &geodesic_point(&h0, &a, t).unwrap()).unwrap();
            assert!((r.eval(t).unwrap() - direct).abs() < 1e-10 * (1.0 + direct.abs()));
        }
        let ac = random_ac_sample(3, 7, 2, &mut rng);
        let r = ac_restriction(&ac, &h0, &a).unwrap();
        for t in [-2.0, 0.0, 3.0] {
            let direct = ac_energy(&ac, &geodesic_point(&h0, &a, t).unwrap()).unwrap();
            assert!((r.eval(t).unwrap() - direct).abs() < 1e-10 * (1.0 + direct.abs()));
        }
    }
}

#[test]
fn chord_slopes_match_exact_slopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let n = rng.gen_range(2..=5);
        let s = random_sample(n, 2 * n + 3, &mut rng);
        let h0 = random_form(n, 1.0, &mut rng);
        let a = integral_direction(n, &mut rng);
        let r = balancing_restriction(&s, &h0, &a).unwrap();
        let est = asymptotic_slope(&r, 60.0, 1e-8).unwrap();
        assert!((est.chord - r.slope()).abs() < 1e-8);
    }
}

#[test]
fn anticanonical_examples() {
    let one = PolarizedSample::new("one", 1, 1, columns(1, &[&[0.4], &[2.0]]), vec![1.0, 1.0]).unwrap();
    let one = AnticanonicalSample::new(one, vec![1.0, 3.0]).unwrap();
    let h = HermitianForm::from_diagonal(&[2.5]).unwrap();
    let a = TangentDirection::from_diagonal(&[1.7]).unwrap();
    assert_eq!(ac_exact_slope(&one, &h, &a).unwrap(), 0.0);
    assert!((ac_t_operator(&one, &h).unwrap().matrix()[(0, 0)].re - 2.5).abs() < 1e-14);

    let pair = symmetric_pair(1);
    let id = HermitianForm::identity(2);
    assert!((ac_t_operator(&pair, &id).unwrap().matrix() - CMatrix::identity(2, 2)).norm() < 1e-15);
    assert!(ac_gradient(&pair, &id).unwrap().norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let dir = random_direction(2, &mut rng);
        let step = 1e-5;
        let fd = (ac_energy(&pair, &geodesic_point(&id, &dir, step).unwrap()).unwrap()
            - ac_energy(&pair, &geodesic_point(&id, &dir, -step).unwrap()).unwrap())
            / (2.0 * step);
        assert!(fd.abs() < 1e-8);
    }
    let diag = TangentDirection::from_diagonal(&[1.0, -1.0]).unwrap();
    assert_eq!(ac_exact_slope(&pair, &id, &diag).unwrap(), -1.0);

    let single = PolarizedSample::new_degenerate("p", 1, 1, columns(2, &[&[1.0, 1.0]]), vec![1.0]).unwrap();
    let single = AnticanonicalSample::new(single, vec![1.0]).unwrap();
    assert_eq!(ac_exact_slope(&single, &id, &diag).unwrap(), 1.0);

    let h = random_form(2, 1.0, &mut rng);
    for scale in [5.0, 1e-3, 1e3] {
        let d = ac_energy(&pair, &h.scaled(scale).unwrap()).unwrap() - ac_energy(&pair, &h).unwrap();
        assert!(d.abs() < 1e-9);
    }
}

#[test]
fn ac_gradient_and_fixed_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 1..=4 {
        let s = random_ac_sample(n, 3 * n + 2, 2, &mut rng);
        let h = random_form(n, 1.0, &mut rng);
        let a = random_direction(n, &mut rng);
        let g = ac_gradient(&s, &h).unwrap();
        assert!(g.trace().abs() < 1e-10);
        let step = 1e-5;
        let fd = (ac_energy(&s, &geodesic_point(&h, &a, step).unwrap()).unwrap()
            - ac_energy(&s, &geodesic_point(&h, &a, -step).unwrap()).unwrap())
            / (2.0 * step);
        let an = a.pairing(g.matrix());
        assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-3), "{fd} vs {an}");
    }
}

#[test]
fn iteration_scalar_and_degenerate() {
    let s = PolarizedSample::new("one", 0, 1, columns(1, &[&[0.3], &[1.1]]), vec![0.4, 0.6]).unwrap();
    let res = balance_iterate(&s, &HermitianForm::from_diagonal(&[7.0]).unwrap(), &BalanceOptions::default())
        .unwrap();
    assert_eq!(res.status, BalanceStatus::Converged);
    assert_eq!(res.iterations, 1);

    let n = 3;
    let s = PolarizedSample::new_degenerate(
        "flat",
        1,
        1,
        columns(n, &[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
        vec![1.0, 1.0],
    )
    .unwrap();
    let res = balance_iterate(&s, &HermitianForm::identity(n), &BalanceOptions::default()).unwrap();
    assert_eq!(res.status, BalanceStatus::Diverged);
    let dir = res.escape_direction.unwrap();
    let expected = TangentDirection::from_diagonal(&[-1.0, 0.5, 0.5]).unwrap().normalized().unwrap();
    assert!((dir.matrix() - expected.matrix()).norm() < 1e-9);
    assert!(exact_slope(&s, &HermitianForm::identity(n), &dir).unwrap() < 0.0);
}

#[test]
fn degenerate_gram_needs_flag() {
    let evals = columns(2, &[&[0.0, 1.0], &[0.0, 2.0]]);
    assert!(matches!(
        PolarizedSample::new("flat", 1, 1, evals.clone(), vec![1.0, 1.0]),
        Err(Error::InvalidSample(_))
    ));
    assert!(PolarizedSample::new_degenerate("flat", 1, 1, evals, vec![1.0, 1.0]).is_ok());
}

#[test]
fn convergence_implies_stationarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let s = random_sample(3, 12, &mut rng);
        let res = balance_iterate(&s, &HermitianForm::identity(3), &BalanceOptions::default()).unwrap();
        assert_eq!(res.status, BalanceStatus::Converged);
        assert!(energy_gradient(&s, &res.h).unwrap().norm() <= 1e-8);
        let normalized = bergman_density(&s, &res.h, Normalization::Normalized).unwrap();
        assert!(normalized.iter().all(|p| p.is_finite() && *p > 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn json_round_trip_is_bit_exact(seed in any::<u64>(), n in 1usize..5, extra in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sample(n, n + extra, &mut rng);
        let back = PolarizedSample::from_json(&s.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &s);
        let ac = random_ac_sample(n, n + extra, 3, &mut rng);
        let back = AnticanonicalSample::from_json(&ac.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, ac);
    }

    #[test]
    fn basis_change_moves_balanced_point(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sample(3, 10, &mut rng);
        let g = random_form(3, 0.5, &mut rng).matrix() + random_unitary(3, &mut rng);
        let moved = s.transformed(&g).unwrap();
        let h = random_form(3, 1.0, &mut rng);
        let gh = HermitianForm::new(&g * h.matrix() * g.adjoint()).unwrap();
        let log_det_g = g.determinant().norm().ln();
        let shift = balancing_energy(&moved, &gh).unwrap() - balancing_energy(&s, &h).unwrap();
        prop_assert!((shift - 2.0 * s.total_mass() / 3.0 * log_det_g).abs() < 1e-9);
        let t = t_operator(&s, &h).unwrap();
        let gt = &g * t.matrix() * g.adjoint();
        let t_moved = t_operator(&moved, &gh).unwrap();
        prop_assert!((t_moved.matrix() - &gt).norm() <= 1e-9 * gt.norm());
    }
}
