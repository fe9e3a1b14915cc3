//! Concrete samples: exact-quadrature P¹ at level k, products, S¹-invariant
//! deformations of the round metric together with their scalar curvature,
//! degenerate samples and random general-position samples.
//!
//! P¹ is described in moment coordinates: `τ = |z₀|²/(|z₀|²+|z₁|²) ∈ (0,1)`
//! and an angle `θ ∈ [0, 1)`. The area form is `dτ dθ`, so the sample
//! measure has total mass 1 and represents `c₁(O(1))`.
//!
//! An S¹-invariant metric is given by `ψ = 1/u''`, with `u` its symplectic
//! potential. The round metric has `ψ = 4πτ(1−τ)`. Deformations add
//! `τ²(1−τ)² q(τ)` for a polynomial `q`, so `ψ` stays a polynomial vanishing
//! simply at both poles. The scalar curvature is `S = −ψ''/2`; it is the
//! Gauss curvature of the metric, and `S ≡ 4π` on the round sphere of area 1.
//! With this normalization the Bergman density satisfies
//! `ρ_k = k + S/(4π) + O(1/k)`.

use gauss_quad::GaussLegendre;
use nalgebra::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use crate::error::{Error, Result};
use crate::hermitian::HermitianForm;
use crate::linalg::{frobenius, CMatrix};
use crate::quantization::{AnticanonicalSample, PolarizedSample};

/// Largest section count a generated sample may have.
pub const MAX_SECTIONS: usize = 64;
/// Largest point count a generated sample may have.
pub const MAX_POINTS: usize = 20_000;

/// Gauss–Legendre nodes in the polar variable times equispaced angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub n_polar: usize,
    pub n_angular: usize,
}

impl QuadratureSpec {
    /// The smallest rule integrating every Gram entry at level `k` exactly.
    pub fn minimal(k: u32) -> Self {
        QuadratureSpec {
            n_polar: k as usize + 1,
            n_angular: 2 * k as usize + 1,
        }
    }

    fn check(&self, k: u32) -> Result<()> {
        let k = k as usize;
        if self.n_polar < k + 1 || self.n_angular < 2 * k + 1 {
            return Err(Error::Validation(format!(
                "quadrature {}x{} is too coarse for level {k} (need at least {}x{})",
                self.n_polar,
                self.n_angular,
                k + 1,
                2 * k + 1
            )));
        }
        if self.n_polar * self.n_angular > MAX_POINTS {
            return Err(Error::Validation(format!(
                "quadrature has more than {MAX_POINTS} points"
            )));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights mapped to `[lo, hi]`.
pub fn legendre_nodes(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("positive");
    let half = 0.5 * (hi - lo);
    let mut nodes: Vec<(f64, f64)> = GaussLegendre::new(n)
        .iter()
        .map(|(x, w)| (lo + half * (x + 1.0), half * w))
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes
}

/// Polar-major point grid: `(τ, θ, weight)` with weights summing to 1.
fn grid(q: &QuadratureSpec) -> Vec<(f64, f64, f64)> {
    let mut points = Vec::with_capacity(q.n_polar * q.n_angular);
    for (tau, w) in legendre_nodes(q.n_polar, 0.0, 1.0) {
        for j in 0..q.n_angular {
            let theta = j as f64 / q.n_angular as f64;
            points.push((tau, theta, w / q.n_angular as f64));
        }
    }
    points
}

fn check_sections(n: usize) -> Result<()> {
    if n > MAX_SECTIONS {
        return Err(Error::Validation(format!(
            "{n} sections exceed the cap of {MAX_SECTIONS}"
        )));
    }
    Ok(())
}

/// Monomial sections of `O(degree)` at the points of a grid, given
/// `log|s_i|²` for every point and section.
fn monomial_sample<F>(
    label: String,
    level: u32,
    degree: u32,
    q: &QuadratureSpec,
    log_norm: F,
) -> Result<PolarizedSample>
where
    F: Fn(f64, usize) -> f64,
{
    let n = degree as usize + 1;
    check_sections(n)?;
    let points = grid(q);
    let mut evals = CMatrix::zeros(n, points.len());
    for (a, &(tau, theta, _)) in points.iter().enumerate() {
        for i in 0..n {
            let modulus = (0.5 * log_norm(tau, i)).exp();
            let phase = 2.0 * PI * i as f64 * theta;
            evals[(i, a)] = Complex::from_polar(modulus, phase);
        }
    }
    let weights = points.iter().map(|p| p.2).collect();
    PolarizedSample::new(label, level, 1, evals, weights)
}

fn round_log_norm(k: u32) -> impl Fn(f64, usize) -> f64 {
    move |tau, i| i as f64 * tau.ln() + (k as usize - i) as f64 * (1.0 - tau).ln()
}

/// Sections `z₀^i z₁^{k−i}` of `O(k)` against the Fubini–Study metric at a
/// product quadrature grid with total mass 1. The reference Gram is
/// `diag(1/((k+1)·C(k,i)))` and the balanced form `diag(1/C(k,i))`.
pub fn build_p1_sample(k: u32, q: &QuadratureSpec) -> Result<PolarizedSample> {
    q.check(k)?;
    monomial_sample(format!("p1-k{k}"), k, k, q, round_log_norm(k))
}

/// The anticanonical model of P¹ at level `k`: sections of `O(2k)` with
/// reference density weights equal to the quadrature weights.
pub fn build_p1_anticanonical(k: u32, q: &QuadratureSpec) -> Result<AnticanonicalSample> {
    if k == 0 {
        return Err(Error::Validation("anticanonical level must be positive".into()));
    }
    q.check(2 * k)?;
    let sample = monomial_sample(format!("p1-ac-k{k}"), k, 2 * k, q, round_log_norm(2 * k))?;
    let base = sample.weights().to_vec();
    AnticanonicalSample::new(sample, base)
}

/// Segre-type product: section `(i₁, i₂)` is row `i₁·N₂ + i₂`, point
/// `(a₁, a₂)` is column `a₁·M₂ + a₂`, and weights multiply.
pub fn product_sample(s1: &PolarizedSample, s2: &PolarizedSample) -> Result<PolarizedSample> {
    if s1.level() != s2.level() && s1.sections() > 1 && s2.sections() > 1 {
        return Err(Error::Validation(format!(
            "cannot multiply samples of levels {} and {}",
            s1.level(),
            s2.level()
        )));
    }
    let (n1, n2) = (s1.sections(), s2.sections());
    let (m1, m2) = (s1.points(), s2.points());
    check_sections(n1 * n2)?;
    if m1 * m2 > MAX_POINTS {
        return Err(Error::Validation(format!(
            "product has more than {MAX_POINTS} points"
        )));
    }
    let evals = s1.evals().kronecker(s2.evals());
    let weights = s1
        .weights()
        .iter()
        .flat_map(|w1| s2.weights().iter().map(move |w2| w1 * w2))
        .collect();
    PolarizedSample::new(
        format!("{}x{}", s1.label(), s2.label()),
        s1.level().max(s2.level()),
        s1.complex_dim() + s2.complex_dim(),
        evals,
        weights,
    )
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

fn poly_derivative(a: &[f64]) -> Vec<f64> {
    a.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect()
}

/// Density of points used to certify positivity of `u''`.
const POSITIVITY_GRID: usize = 4096;

/// An S¹-invariant metric on P¹: `ψ = 1/u'' = 4πτ(1−τ) + τ²(1−τ)² q(τ)`
/// with `q` given by monomial coefficients (constant term first).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricProfile {
    pub perturbation: Vec<f64>,
    /// Required lower bound for `ψ / (4πτ(1−τ))` on `[0, 1]`.
    pub margin: f64,
}

impl MetricProfile {
    pub fn new(perturbation: Vec<f64>, margin: f64) -> Result<Self> {
        let profile = MetricProfile {
            perturbation,
            margin,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn round() -> Self {
        MetricProfile {
            perturbation: Vec::new(),
            margin: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.margin > 0.0) || !self.margin.is_finite() {
            return Err(Error::Validation("convexity margin must be positive".into()));
        }
        if self.perturbation.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("perturbation coefficients"));
        }
        let actual = self.actual_margin();
        if actual < self.margin {
            return Err(Error::Validation(format!(
                "u'' loses positivity margin: min ψ/(4πτ(1−τ)) = {actual} < {}",
                self.margin
            )));
        }
        Ok(())
    }

    /// `min over τ of 1 + τ(1−τ) q(τ) / 4π` on a dense grid including ends.
    pub fn actual_margin(&self) -> f64 {
        (0..=POSITIVITY_GRID)
            .map(|j| {
                let tau = j as f64 / POSITIVITY_GRID as f64;
                1.0 + tau * (1.0 - tau) * poly_eval(&self.perturbation, tau) / (4.0 * PI)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Coefficients of `ψ` in the monomial basis.
    pub fn psi(&self) -> Vec<f64> {
        let round = [0.0, 4.0 * PI, -4.0 * PI];
        let bump = [0.0, 0.0, 1.0, -2.0, 1.0];
        poly_add(&round, &poly_mul(&bump, &self.perturbation))
    }

    /// `S(τ) = −ψ''(τ)/2`.
    pub fn scalar_curvature(&self, tau: f64) -> f64 {
        -0.5 * poly_eval(&poly_derivative(&poly_derivative(&self.psi())), tau)
    }

    /// Second derivative of the potential difference `r = 2π(u − u_round)`,
    /// namely `−q / (8π + 2τ(1−τ) q)`.
    fn correction_second(&self, tau: f64) -> f64 {
        let q = poly_eval(&self.perturbation, tau);
        -q / (8.0 * PI + 2.0 * tau * (1.0 - tau) * q)
    }

    /// `(r(τ), r'(τ))` with `r(0) = r'(0) = 0`, by Gauss–Legendre on `[0, τ]`.
    fn correction(&self, tau: f64) -> (f64, f64) {
        if self.perturbation.is_empty() || tau == 0.0 {
            return (0.0, 0.0);
        }
        let mut r = 0.0;
        let mut dr = 0.0;
        for (s, w) in legendre_nodes(48, 0.0, tau) {
            let f = self.correction_second(s);
            dr += w * f;
            r += w * (tau - s) * f;
        }
        (r, dr)
    }
}

/// Scalar curvature sampled at the polar nodes of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureGrid {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

/// Relative Gram agreement required between a quadrature and its doubling.
const QUADRATURE_TOL: f64 = 1e-10;

/// Monomial sections of `O(k)` against the metric of `profile`.
///
/// With `x = 4π u'` and the dual potential `φ = 4π(τu' − u)`, the pointwise
/// norms are `|s_i|² = exp(i·x − kφ) = τ^i (1−τ)^{k−i} exp(2(i − kτ) r' + 2k r)`.
/// The polar rule is doubled once and the two Grams must agree to 1e-10.
pub fn deformed_p1_sample(
    k: u32,
    profile: &MetricProfile,
    q: &QuadratureSpec,
) -> Result<(PolarizedSample, CurvatureGrid)> {
    profile.validate()?;
    let needed = 2 * (k as usize + 1);
    if q.n_polar < needed {
        return Err(Error::Validation(format!(
            "deformed samples need at least {needed} polar nodes at level {k}"
        )));
    }
    q.check(k)?;
    let build = |spec: &QuadratureSpec| {
        monomial_sample(format!("p1-deformed-k{k}"), k, k, spec, |tau, i| {
            let (r, dr) = profile.correction(tau);
            round_log_norm(k)(tau, i) + 2.0 * (i as f64 - k as f64 * tau) * dr + 2.0 * k as f64 * r
        })
    };
    let sample = build(q)?;
    let doubled = QuadratureSpec {
        n_polar: 2 * q.n_polar,
        n_angular: q.n_angular,
    };
    if doubled.n_polar * doubled.n_angular <= 4 * MAX_POINTS {
        let g1 = sample.gram();
        let g2 = build(&doubled)?.gram();
        let gap = frobenius(&(&g1 - &g2)) / frobenius(&g2);
        if gap > QUADRATURE_TOL {
            return Err(Error::Validation(format!(
                "quadrature not converged for the deformed weight (relative Gram gap {gap:e})"
            )));
        }
    }
    let nodes: Vec<f64> = legendre_nodes(q.n_polar, 0.0, 1.0).iter().map(|p| p.0).collect();
    let values = nodes.iter().map(|&t| profile.scalar_curvature(t)).collect();
    Ok((sample, CurvatureGrid { nodes, values }))
}

/// `max_a |ρ_a − k − S(τ_a)/4π|` for a deformed sample, with `ρ` the Bergman
/// density of the reference metric (`H` = reference Gram).
pub fn expansion_residual(sample: &PolarizedSample, grid: &CurvatureGrid) -> Result<f64> {
    let h = HermitianForm::new(sample.gram())?;
    let rho = crate::quantization::bergman_density(
        sample,
        &h,
        crate::quantization::Normalization::Normalized,
    )?;
    let per_ring = sample.points() / grid.nodes.len();
    let k = sample.level() as f64;
    Ok(rho
        .iter()
        .enumerate()
        .map(|(a, r)| (r - k - grid.values[a / per_ring] / (4.0 * PI)).abs())
        .fold(0.0, f64::max))
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Points supported in the last `n − hyperplane_dim` coordinates with
/// Gaussian entries and equal weights summing to 1. Such a sample has no
/// balanced point, so it is refused unless `allow_degenerate` is set.
pub fn degenerate_sample<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    hyperplane_dim: usize,
    allow_degenerate: bool,
    rng: &mut R,
) -> Result<PolarizedSample> {
    if hyperplane_dim == 0 || hyperplane_dim >= n {
        return Err(Error::Validation(format!(
            "hyperplane dimension must lie in 1..{n}, got {hyperplane_dim}"
        )));
    }
    if !allow_degenerate {
        return Err(Error::Validation(
            "degenerate samples violate Gram positivity; pass allow_degenerate".into(),
        ));
    }
    check_sections(n)?;
    if m == 0 || m > MAX_POINTS {
        return Err(Error::Validation(format!("point count {m} out of range")));
    }
    let evals = CMatrix::from_fn(n, m, |i, _| {
        if i < hyperplane_dim {
            Complex::new(0.0, 0.0)
        } else {
            gaussian_complex(rng)
        }
    });
    PolarizedSample::new_degenerate(
        format!("degenerate-n{n}-d{hyperplane_dim}"),
        1,
        1,
        evals,
        vec![1.0 / m as f64; m],
    )
}

/// Gaussian section values at `m` points with weights in `[0.5, 1.5]`;
/// in general position once `m ≥ n`.
pub fn random_sample<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<PolarizedSample> {
    check_sections(n)?;
    let evals = CMatrix::from_fn(n, m, |_, _| gaussian_complex(rng));
    let weights = (0..m).map(|_| 0.5 + rng.gen::<f64>()).collect();
    PolarizedSample::new(format!("random-n{n}-m{m}"), 1, 1, evals, weights)
}

/// A random sample at level `k` with base weights in `[0.5, 1.5]`.
pub fn random_anticanonical<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    k: u32,
    rng: &mut R,
) -> Result<AnticanonicalSample> {
    let s = random_sample(n, m, rng)?;
    let s = PolarizedSample::new(s.label(), k, 1, s.evals().clone(), s.weights().to_vec())?;
    let base = (0..m).map(|_| 0.5 + rng.gen::<f64>()).collect();
    AnticanonicalSample::new(s, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{distance, TangentDirection};
    use crate::quantization::{
        balance_iterate, bergman_density, exact_slope, t_operator, BalanceOptions, BalanceStatus,
        Normalization,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binomial(k: u32, i: u32) -> f64 {
        (0..i).fold(1.0, |acc, j| acc * (k - j) as f64 / (j + 1) as f64)
    }

    /// `∫₀¹ τ^i (1−τ)^{k−i} dτ = i!(k−i)!/(k+1)!`, by the Beta function.
    fn beta_integral(k: u32, i: u32) -> f64 {
        1.0 / ((k + 1) as f64 * binomial(k, i))
    }

    #[test]
    fn p1_gram_matches_beta_integrals() {
        for k in 0..=8 {
            let s = build_p1_sample(k, &QuadratureSpec::minimal(k)).unwrap();
            let gram = s.gram();
            for i in 0..=k as usize {
                for j in 0..=k as usize {
                    let expected = if i == j { beta_integral(k, i as u32) } else { 0.0 };
                    assert!((gram[(i, j)] - Complex::new(expected, 0.0)).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn p1_level_zero_has_unit_density() {
        let s = build_p1_sample(0, &QuadratureSpec::minimal(0)).unwrap();
        let rho = bergman_density(&s, &HermitianForm::identity(1), Normalization::Internal).unwrap();
        assert!(rho.iter().all(|r| (r - 1.0).abs() < 1e-15));
    }

    #[test]
    fn coarse_quadrature_is_rejected() {
        let q = QuadratureSpec {
            n_polar: 2,
            n_angular: 5,
        };
        assert!(matches!(build_p1_sample(3, &q), Err(Error::Validation(_))));
    }

    #[test]
    fn torus_symmetry_keeps_diagonal_forms_diagonal() {
        let k = 5;
        let s = build_p1_sample(k, &QuadratureSpec::minimal(k)).unwrap();
        let h = HermitianForm::from_diagonal(&[1.0, 2.0, 0.5, 3.0, 1.5, 0.7]).unwrap();
        let t = t_operator(&s, &h).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert!(t.matrix()[(i, j)].norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn product_of_level_one_lines() {
        let s = build_p1_sample(1, &QuadratureSpec::minimal(1)).unwrap();
        let p = product_sample(&s, &s).unwrap();
        assert_eq!((p.sections(), p.points()), (4, s.points() * s.points()));
        let kron = s.gram().kronecker(&s.gram());
        assert!(frobenius(&(p.gram() - kron)) < 1e-12);
        let res = balance_iterate(&p, &HermitianForm::identity(4), &BalanceOptions::default()).unwrap();
        assert_eq!(res.status, BalanceStatus::Converged);
        assert!(frobenius(&(res.h.matrix() - CMatrix::identity(4, 4))) < 1e-10);

        let unit = build_p1_sample(0, &QuadratureSpec::minimal(0)).unwrap();
        let copy = product_sample(&s, &unit).unwrap();
        assert!(frobenius(&(copy.gram() - s.gram())) < 1e-15);
    }

    #[test]
    fn product_size_cap() {
        let s = build_p1_sample(8, &QuadratureSpec::minimal(8)).unwrap();
        assert!(matches!(product_sample(&s, &s), Err(Error::Validation(_))));
    }

    #[test]
    fn round_profile_has_constant_curvature() {
        let q = QuadratureSpec {
            n_polar: 40,
            n_angular: 17,
        };
        let (s, grid) = deformed_p1_sample(8, &MetricProfile::round(), &q).unwrap();
        assert!(grid.values.iter().all(|v| (v - 4.0 * PI).abs() < 1e-8));
        let rho = bergman_density(&s, &HermitianForm::new(s.gram()).unwrap(), Normalization::Normalized).unwrap();
        assert!(rho.iter().all(|r| (r - 9.0).abs() < 1e-9));
        assert!(expansion_residual(&s, &grid).unwrap() < 1e-9);
    }

    #[test]
    fn profile_positivity_is_enforced() {
        assert!(MetricProfile::new(vec![-60.0], 0.5).is_err());
        assert!(MetricProfile::new(vec![3.0, -2.0], 0.5).is_ok());
        assert!(MetricProfile::new(vec![1.0], 0.0).is_err());
    }

    #[test]
    fn curvature_integrates_to_euler_characteristic() {
        let p = MetricProfile::new(vec![5.0, -3.0, 2.0], 0.5).unwrap();
        let total: f64 = legendre_nodes(20, 0.0, 1.0)
            .iter()
            .map(|(t, w)| w * p.scalar_curvature(*t))
            .sum();
        assert!((total - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn small_deformations_stay_near_the_round_balanced_form() {
        let k = 3;
        let q = QuadratureSpec {
            n_polar: 24,
            n_angular: 7,
        };
        let round = HermitianForm::from_diagonal(
            &(0..=k).map(|i| 1.0 / binomial(k, i)).collect::<Vec<_>>(),
        )
        .unwrap();
        for size in [1e-1, 1e-2, 1e-3] {
            let p = MetricProfile::new(vec![size, -size], 0.5).unwrap();
            let (s, _) = deformed_p1_sample(k, &p, &q).unwrap();
            let res = balance_iterate(&s, &HermitianForm::identity(4), &BalanceOptions::default()).unwrap();
            assert_eq!(res.status, BalanceStatus::Converged);
            let norm = (2.0f64).sqrt() * size;
            assert!(distance(&res.h, &round).unwrap() <= 10.0 * norm);
        }
    }

    #[test]
    fn degenerate_sample_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(degenerate_sample(2, 3, 0, true, &mut rng), Err(Error::Validation(_))));
        assert!(matches!(degenerate_sample(2, 3, 1, false, &mut rng), Err(Error::Validation(_))));
        let s = degenerate_sample(2, 3, 1, true, &mut rng).unwrap();
        let a = TangentDirection::from_diagonal(&[-1.0, 1.0]).unwrap().normalized().unwrap();
        let slope = exact_slope(&s, &HermitianForm::identity(2), &a).unwrap();
        assert!((slope + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        let res = balance_iterate(&s, &HermitianForm::identity(2), &BalanceOptions::default()).unwrap();
        assert_eq!(res.status, BalanceStatus::Diverged);
    }

    #[test]
    fn p1_anticanonical_is_torus_equivariant() {
        let s = build_p1_anticanonical(2, &QuadratureSpec::minimal(4)).unwrap();
        assert_eq!(s.sample().sections(), 5);
        let h = HermitianForm::from_diagonal(&[1.0, 0.3, 2.0, 0.9, 1.1]).unwrap();
        let t = crate::quantization::ac_t_operator(&s, &h).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert!(t.matrix()[(i, j)].norm() <= 1e-12);
                }
            }
        }
    }
}
