//! The symmetric space of positive definite Hermitian forms.
//!
//! A point `H` is stored together with a factor `B` satisfying `H = B B†`.
//! Spectral data (square roots, logarithms, inverses) is computed from `B`
//! by one-sided Jacobi, so points far out along a geodesic keep their small
//! eigenvalues to relative accuracy.
//!
//! Tangent directions at `H0` are Hermitian matrices `A` in the normalized
//! frame: the geodesic through `H0` with initial direction `A` is
//! `γ(t) = H0^{1/2} exp(tA) H0^{1/2}` and its speed is `‖A‖_F`.

use std::sync::OnceLock;

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg::{
    all_finite, frobenius, gram_spectrum, hermitian_asymmetry, hermitian_eigen, max_abs,
    symmetrize, CMatrix, Spectrum, C64,
};

/// Relative tolerance for Hermitian symmetry of inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues at or below this floor are reported as a positivity failure.
pub const EIGENVALUE_FLOOR: f64 = 1e-300;

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
    }
    if m.nrows() == 0 {
        return Err(Error::Validation("empty matrix".into()));
    }
    if !all_finite(m) {
        return Err(Error::NonFinite("matrix entries"));
    }
    let tolerance = HERMITIAN_TOL * (1.0 + max_abs(m));
    let asymmetry = hermitian_asymmetry(m);
    if asymmetry > tolerance {
        return Err(Error::NotHermitian {
            asymmetry,
            tolerance,
        });
    }
    Ok(())
}

/// A positive definite Hermitian form, i.e. a point of `Y = GL(N)/U(N)`.
#[derive(Debug)]
pub struct HermitianForm {
    matrix: CMatrix,
    factor: CMatrix,
    spectrum: OnceLock<Spectrum>,
}

impl Clone for HermitianForm {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        HermitianForm {
            matrix: self.matrix.clone(),
            factor: self.factor.clone(),
            spectrum,
        }
    }
}

impl PartialEq for HermitianForm {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HermitianForm {
    /// Validates Hermitian symmetry and positivity (via Cholesky).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_hermitian(&matrix)?;
        let matrix = symmetrize(&matrix);
        // Complex Cholesky happily takes square roots of negative pivots, so
        // the pivots are checked explicitly.
        let factor = match matrix.clone().cholesky().map(|c| c.l()) {
            Some(l) if (0..l.nrows()).all(|i| l[(i, i)].im == 0.0 && l[(i, i)].re > 0.0) => l,
            _ => {
                let min = hermitian_eigen(&matrix).values[0];
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: min,
                });
            }
        };
        let form = HermitianForm {
            matrix,
            factor,
            spectrum: OnceLock::new(),
        };
        let min = form.spectrum()?.values[0];
        if min.is_nan() || min <= EIGENVALUE_FLOOR {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
            });
        }
        Ok(form)
    }

    /// Builds `B B†` from an invertible factor. Positivity holds by
    /// construction; the spectrum is still checked against the floor.
    pub fn from_factor(factor: CMatrix) -> Result<Self> {
        if factor.nrows() != factor.ncols() {
            return Err(Error::DimensionMismatch(factor.nrows(), factor.ncols()));
        }
        if !all_finite(&factor) {
            return Err(Error::NonFinite("factor entries"));
        }
        let matrix = symmetrize(&(&factor * factor.adjoint()));
        if !all_finite(&matrix) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let form = HermitianForm {
            matrix,
            factor,
            spectrum: OnceLock::new(),
        };
        let min = form.spectrum()?.values[0];
        if min.is_nan() || min <= EIGENVALUE_FLOOR {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
            });
        }
        Ok(form)
    }

    pub fn identity(n: usize) -> Self {
        let id = CMatrix::identity(n, n);
        HermitianForm {
            matrix: id.clone(),
            factor: id,
            spectrum: OnceLock::new(),
        }
    }

    /// Diagonal form with the given positive entries.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Validation("empty diagonal".into()));
        }
        if let Some(&bad) = diag.iter().find(|d| !(**d > EIGENVALUE_FLOOR)) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: bad,
            });
        }
        let n = diag.len();
        let factor = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(diag[i].sqrt(), 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        HermitianForm::from_factor(factor)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    /// Ascending eigenvalues and eigenvectors.
    pub fn spectrum(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let s = gram_spectrum(&self.factor)?;
        Ok(self.spectrum.get_or_init(|| s))
    }

    fn spec(&self) -> &Spectrum {
        // Construction always populates or validates the spectrum.
        self.spectrum().expect("spectrum validated at construction")
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spec().values
    }

    pub fn sqrt(&self) -> CMatrix {
        self.spec().apply(f64::sqrt)
    }

    pub fn inv_sqrt(&self) -> CMatrix {
        self.spec().apply(|x| 1.0 / x.sqrt())
    }

    pub fn inverse(&self) -> CMatrix {
        self.spec().apply(|x| 1.0 / x)
    }

    pub fn log(&self) -> CMatrix {
        self.spec().apply(f64::ln)
    }

    pub fn log_det(&self) -> f64 {
        self.spec().values.iter().map(|x| x.ln()).sum()
    }

    pub fn condition_number(&self) -> f64 {
        let v = &self.spec().values;
        v[v.len() - 1] / v[0]
    }

    /// `c·H` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Precondition(format!("scale factor {c} must be positive")));
        }
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(Spectrum {
                values: s.values.iter().map(|x| x * c).collect(),
                vectors: s.vectors.clone(),
            });
        }
        Ok(HermitianForm {
            matrix: self.matrix.scale(c),
            factor: self.factor.scale(c.sqrt()),
            spectrum,
        })
    }

    /// Rescales so that `det H = 1`.
    pub fn det_normalized(&self) -> Result<Self> {
        let n = self.dim() as f64;
        self.scaled((-self.log_det() / n).exp())
    }

    /// `G† H G` for an invertible `G`.
    pub fn congruence(&self, g: &CMatrix) -> Result<Self> {
        if g.nrows() != self.dim() || g.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), g.nrows()));
        }
        HermitianForm::from_factor(g.adjoint() * &self.factor)
    }
}

/// A Hermitian generator of a geodesic, in the normalized frame at its base.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentDirection {
    matrix: CMatrix,
    norm: f64,
}

impl TangentDirection {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_hermitian(&matrix)?;
        let matrix = symmetrize(&matrix);
        let norm = frobenius(&matrix);
        Ok(TangentDirection { matrix, norm })
    }

    pub fn zero(n: usize) -> Self {
        TangentDirection {
            matrix: CMatrix::zeros(n, n),
            norm: 0.0,
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        TangentDirection::new(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(diag[i], 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        }))
    }

    /// `U diag(λ) U†` for a unitary `U`.
    pub fn from_spectrum(vectors: &CMatrix, values: &[f64]) -> Result<Self> {
        let spectrum = Spectrum {
            values: values.to_vec(),
            vectors: vectors.clone(),
        };
        TangentDirection::new(spectrum.apply(|x| x))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn spectrum(&self) -> Spectrum {
        hermitian_eigen(&self.matrix)
    }

    pub fn scaled(&self, c: f64) -> Self {
        TangentDirection {
            matrix: self.matrix.scale(c),
            norm: self.norm * c.abs(),
        }
    }

    /// Removes the scalar part `(tr A / N)·I`.
    pub fn traceless(&self) -> Self {
        let n = self.dim();
        let shift = self.trace() / n as f64;
        let mut m = self.matrix.clone();
        for i in 0..n {
            m[(i, i)] -= Complex::new(shift, 0.0);
        }
        let norm = frobenius(&m);
        TangentDirection { matrix: m, norm }
    }

    /// Unit Frobenius norm; fails on the zero direction.
    pub fn normalized(&self) -> Result<Self> {
        if !(self.norm > 0.0) {
            return Err(Error::Precondition("cannot normalize the zero direction".into()));
        }
        Ok(self.scaled(1.0 / self.norm))
    }

    /// `tr(A·B)`, the Frobenius pairing of Hermitian matrices.
    pub fn pairing(&self, other: &CMatrix) -> f64 {
        self.matrix
            .iter()
            .zip(other.transpose().iter())
            .map(|(a, b)| (a * b).re)
            .sum()
    }

    /// True when the direction is a multiple of the identity within `tol`
    /// (relative to its norm).
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.traceless().norm() <= tol * self.norm.max(f64::MIN_POSITIVE)
    }
}

/// How the parameter of a geodesic ray relates to distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parametrization {
    /// `‖A‖_F = 1`.
    ArcLength,
    /// The traceless part of `A` has unit norm.
    ReducedArcLength,
    Raw,
}

/// A geodesic ray `t ↦ H0^{1/2} exp(tA) H0^{1/2}`.
#[derive(Debug, Clone)]
pub struct GeodesicRay {
    base: HermitianForm,
    direction: TangentDirection,
    parametrization: Parametrization,
}

impl GeodesicRay {
    pub fn new(
        base: HermitianForm,
        direction: TangentDirection,
        parametrization: Parametrization,
    ) -> Result<Self> {
        if base.dim() != direction.dim() {
            return Err(Error::DimensionMismatch(base.dim(), direction.dim()));
        }
        let check = |value: f64, what: &str| {
            if (value - 1.0).abs() > 1e-12 {
                Err(Error::Validation(format!("{what} norm is {value}, expected 1")))
            } else {
                Ok(())
            }
        };
        match parametrization {
            Parametrization::ArcLength => check(direction.norm(), "direction")?,
            Parametrization::ReducedArcLength => {
                check(direction.traceless().norm(), "traceless direction")?
            }
            Parametrization::Raw => {}
        }
        Ok(GeodesicRay {
            base,
            direction,
            parametrization,
        })
    }

    /// Arc-length ray along the normalized direction.
    pub fn unit(base: HermitianForm, direction: &TangentDirection) -> Result<Self> {
        GeodesicRay::new(base, direction.normalized()?, Parametrization::ArcLength)
    }

    /// Reduced-arc-length ray; the scalar part of the direction is kept.
    pub fn reduced(base: HermitianForm, direction: &TangentDirection) -> Result<Self> {
        let t = direction.traceless().norm();
        if !(t > 0.0) {
            return Err(Error::Precondition(
                "direction lies in the scaling orbit".into(),
            ));
        }
        GeodesicRay::new(
            base,
            direction.scaled(1.0 / t),
            Parametrization::ReducedArcLength,
        )
    }

    pub fn base(&self) -> &HermitianForm {
        &self.base
    }

    pub fn direction(&self) -> &TangentDirection {
        &self.direction
    }

    pub fn parametrization(&self) -> Parametrization {
        self.parametrization
    }

    pub fn point(&self, t: f64) -> Result<HermitianForm> {
        geodesic_point(&self.base, &self.direction, t)
    }
}

/// `H0^{1/2} exp(tA) H0^{1/2}`.
pub fn geodesic_point(h0: &HermitianForm, a: &TangentDirection, t: f64) -> Result<HermitianForm> {
    if h0.dim() != a.dim() {
        return Err(Error::DimensionMismatch(h0.dim(), a.dim()));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("geodesic parameter"));
    }
    if t == 0.0 || a.norm() == 0.0 {
        return Ok(h0.clone());
    }
    let spec = a.spectrum();
    let n = a.dim();
    let mut factor = h0.sqrt() * &spec.vectors;
    for (j, &lambda) in spec.values.iter().enumerate() {
        let s = (0.5 * t * lambda).exp();
        if !s.is_finite() || s * s <= EIGENVALUE_FLOOR {
            return Err(Error::NonFinite("geodesic point (exponent out of range)"));
        }
        for i in 0..n {
            factor[(i, j)] = factor[(i, j)].scale(s);
        }
    }
    HermitianForm::from_factor(factor)
}

/// Log-eigenvalues and eigenvectors of `H1^{-1/2} H2 H1^{-1/2}`.
fn relative_log_spectrum(h1: &HermitianForm, h2: &HermitianForm) -> Result<Spectrum> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch(h1.dim(), h2.dim()));
    }
    let c = h1.inv_sqrt() * h2.factor();
    let mut spec = gram_spectrum(&c)?;
    for v in spec.values.iter_mut() {
        if !(*v > EIGENVALUE_FLOOR) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: *v });
        }
        *v = v.ln();
    }
    Ok(spec)
}

/// Riemannian distance `‖log(H1^{-1/2} H2 H1^{-1/2})‖_F`.
pub fn distance(h1: &HermitianForm, h2: &HermitianForm) -> Result<f64> {
    let spec = relative_log_spectrum(h1, h2)?;
    Ok(spec.values.iter().map(|l| l * l).sum::<f64>().sqrt())
}

/// Distance between the scaling orbits of `H1` and `H2`.
pub fn reduced_distance(h1: &HermitianForm, h2: &HermitianForm) -> Result<f64> {
    let spec = relative_log_spectrum(h1, h2)?;
    let mean = spec.values.iter().sum::<f64>() / spec.values.len() as f64;
    Ok(spec
        .values
        .iter()
        .map(|l| (l - mean) * (l - mean))
        .sum::<f64>()
        .sqrt())
}

/// The initial direction of the minimizing geodesic from `H1` to `H2`,
/// reached at `t = 1`.
pub fn connecting_direction(h1: &HermitianForm, h2: &HermitianForm) -> Result<TangentDirection> {
    let spec = relative_log_spectrum(h1, h2)?;
    TangentDirection::from_spectrum(&spec.vectors, &spec.values)
}

/// A uniformly random unitary matrix (QR of a complex Gaussian matrix with
/// phase correction).
pub fn random_unitary<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_gaussian(n, n, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub(crate) fn random_gaussian<R: rand::Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    use rand_distr::{Distribution, StandardNormal};
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im).unscale(std::f64::consts::SQRT_2)
    })
}

/// A random Hermitian direction with unit Frobenius norm.
pub fn random_direction<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> TangentDirection {
    let g = random_gaussian(n, n, rng);
    let h = symmetrize(&g);
    TangentDirection::new(h)
        .expect("symmetrized Gaussian is Hermitian")
        .normalized()
        .unwrap_or_else(|_| TangentDirection::zero(n))
}

/// A random positive definite form `exp(spread·A)` conjugated by a random
/// unitary, with `A` a random unit direction.
pub fn random_form<R: rand::Rng + ?Sized>(n: usize, spread: f64, rng: &mut R) -> HermitianForm {
    let a = random_direction(n, rng);
    geodesic_point(&HermitianForm::identity(n), &a, spread).expect("bounded spread")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::E;

    fn assert_close(a: &CMatrix, b: &CMatrix, tol: f64) {
        let d = frobenius(&(a - b));
        assert!(d <= tol, "matrices differ by {d:e}");
    }

    fn diag(d: &[f64]) -> CMatrix {
        HermitianForm::from_diagonal(d).unwrap().matrix().clone()
    }

    #[test]
    fn geodesic_commuting_diagonal_case() {
        let h0 = HermitianForm::identity(2);
        let a = TangentDirection::from_diagonal(&[1.0, -1.0]).unwrap();
        let p = geodesic_point(&h0, &a, 1.0).unwrap();
        assert_close(p.matrix(), &diag(&[E, 1.0 / E]), 1e-14);
    }

    #[test]
    fn geodesic_zero_direction_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h0 = random_form(3, 1.0, &mut rng);
        let p = geodesic_point(&h0, &TangentDirection::zero(3), 5.0).unwrap();
        assert_close(p.matrix(), h0.matrix(), 0.0);
    }

    #[test]
    fn geodesic_diagonal_base() {
        let h0 = HermitianForm::from_diagonal(&[4.0, 1.0]).unwrap();
        let a = TangentDirection::from_diagonal(&[1.0, 0.0]).unwrap();
        let p = geodesic_point(&h0, &a, 1.0).unwrap();
        assert_close(p.matrix(), &diag(&[4.0 * E, 1.0]), 1e-13);
    }

    #[test]
    fn geodesic_at_zero_returns_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h0 = random_form(4, 1.0, &mut rng);
        let a = random_direction(4, &mut rng);
        let p = geodesic_point(&h0, &a, 0.0).unwrap();
        assert_close(p.matrix(), h0.matrix(), 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_indefinite() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        );
        assert!(matches!(
            TangentDirection::new(m.clone()),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(HermitianForm::new(m), Err(Error::NotHermitian { .. })));
        let indefinite = diag(&[1.0, 1.0]) - diag(&[0.5, 3.0]);
        assert!(matches!(
            HermitianForm::new(indefinite),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn distance_examples() {
        let i2 = HermitianForm::identity(2);
        assert_eq!(distance(&i2, &i2).unwrap(), 0.0);
        let e_i = HermitianForm::from_diagonal(&[E, E]).unwrap();
        assert!((distance(&i2, &e_i).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let h = HermitianForm::from_diagonal(&[E * E, 1.0]).unwrap();
        assert!((distance(&i2, &h).unwrap() - 2.0).abs() < 1e-14);
        let wrong = HermitianForm::identity(3);
        assert!(matches!(distance(&i2, &wrong), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn reduced_distance_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_form(3, 1.0, &mut rng);
        assert!(reduced_distance(&h, &h.scaled(7.0).unwrap()).unwrap() < 1e-12);
        let i2 = HermitianForm::identity(2);
        let a = HermitianForm::from_diagonal(&[E, 1.0 / E]).unwrap();
        assert!((reduced_distance(&i2, &a).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let b = HermitianForm::from_diagonal(&[E * E, 1.0]).unwrap();
        assert!((reduced_distance(&i2, &b).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn connecting_direction_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_form(3, 1.0, &mut rng);
        assert!(connecting_direction(&h, &h).unwrap().norm() < 1e-13);
        let i2 = HermitianForm::identity(2);
        let target = HermitianForm::from_diagonal(&[E, 1.0 / E]).unwrap();
        let a = connecting_direction(&i2, &target).unwrap();
        let expected = TangentDirection::from_diagonal(&[1.0, -1.0]).unwrap();
        assert_close(a.matrix(), expected.matrix(), 1e-14);
    }

    #[test]
    fn connecting_direction_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            for _ in 0..20 {
                let h1 = random_form(n, 1.5, &mut rng);
                let h2 = random_form(n, 1.5, &mut rng);
                let a = connecting_direction(&h1, &h2).unwrap();
                let back = geodesic_point(&h1, &a, 1.0).unwrap();
                let rel = frobenius(&(back.matrix() - h2.matrix())) / frobenius(h2.matrix());
                assert!(rel < 1e-10, "round trip residual {rel:e}");
                assert!((a.norm() - distance(&h1, &h2).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn scaling_and_det_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = random_form(4, 1.0, &mut rng).scaled(3.0).unwrap();
        assert!(h.det_normalized().unwrap().log_det().abs() < 1e-13);
        assert!(h.scaled(0.0).is_err());
    }

    #[test]
    fn ray_parametrization_invariants() {
        let a = TangentDirection::from_diagonal(&[3.0, 1.0]).unwrap();
        let ray = GeodesicRay::reduced(HermitianForm::identity(2), &a).unwrap();
        assert!((ray.direction().traceless().norm() - 1.0).abs() < 1e-12);
        let unit = GeodesicRay::unit(HermitianForm::identity(2), &a).unwrap();
        assert!((unit.direction().norm() - 1.0).abs() < 1e-12);
        assert!(GeodesicRay::new(HermitianForm::identity(2), a, Parametrization::ArcLength).is_err());
        let scalar = TangentDirection::from_diagonal(&[1.0, 1.0]).unwrap();
        assert!(GeodesicRay::reduced(HermitianForm::identity(2), &scalar).is_err());
    }
}
