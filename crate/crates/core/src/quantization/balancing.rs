//! Bergman densities, the T-operator and the balancing energy.

use crate::convex::Objective;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianForm, TangentDirection};
use crate::linalg::{pairwise_sum, CMatrix};

use super::sample::{weighted_outer, PolarizedSample};
use super::spectral::{EnergyKind, SpectralRestriction};

/// Scale of reported Bergman densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `v_a† H^{-1} v_a`.
    Internal,
    /// `N·ρ_a / Σ_b ν_b ρ_b`: invariant under scaling of `H`, integrates to
    /// `N` against the sample measure and equals `N/V` at balance.
    Normalized,
}

/// `H^{-1/2}·evals` together with the internal densities.
pub(crate) struct Whitened {
    pub columns: CMatrix,
    pub densities: Vec<f64>,
}

pub(crate) fn whiten(s: &PolarizedSample, h: &HermitianForm) -> Result<Whitened> {
    if h.dim() != s.sections() {
        return Err(Error::DimensionMismatch(h.dim(), s.sections()));
    }
    let columns = h.inv_sqrt() * s.evals();
    let mut densities = Vec::with_capacity(s.points());
    for a in 0..s.points() {
        let rho: f64 = columns.column(a).iter().map(|z| z.norm_sqr()).sum();
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::NonPositiveDensity { point: a, value: rho });
        }
        densities.push(rho);
    }
    Ok(Whitened { columns, densities })
}

pub fn bergman_density(
    s: &PolarizedSample,
    h: &HermitianForm,
    normalization: Normalization,
) -> Result<Vec<f64>> {
    let rho = whiten(s, h)?.densities;
    Ok(match normalization {
        Normalization::Internal => rho,
        Normalization::Normalized => {
            let weighted: Vec<f64> = s.weights().iter().zip(&rho).map(|(w, r)| w * r).collect();
            let scale = s.sections() as f64 / pairwise_sum(&weighted);
            rho.iter().map(|r| r * scale).collect()
        }
    })
}

/// `(N/V) Σ_a ν_a v_a v_a† / ρ_a(H)` as a raw matrix. It can be singular
/// when the sample is degenerate.
pub(crate) fn t_matrix(s: &PolarizedSample, h: &HermitianForm) -> Result<CMatrix> {
    let rho = whiten(s, h)?.densities;
    let coeffs: Vec<f64> = s.weights().iter().zip(&rho).map(|(w, r)| w / r).collect();
    let scale = s.sections() as f64 / s.total_mass();
    Ok(weighted_outer(s.evals(), &coeffs).scale(scale))
}

/// The T-operator, whose fixed points are the balanced forms.
pub fn t_operator(s: &PolarizedSample, h: &HermitianForm) -> Result<HermitianForm> {
    HermitianForm::new(t_matrix(s, h)?)
}

/// `Z(H) = Σ ν_a log ρ_a(H) + (V/N) log det H`.
pub fn balancing_energy(s: &PolarizedSample, h: &HermitianForm) -> Result<f64> {
    let rho = whiten(s, h)?.densities;
    let terms: Vec<f64> = s.weights().iter().zip(&rho).map(|(w, r)| w * r.ln()).collect();
    Ok(pairwise_sum(&terms) + s.total_mass() / s.sections() as f64 * h.log_det())
}

/// `G = (V/N) I − Σ ν_a w_a w_a† / ρ_a` with `w_a = H^{-1/2} v_a`, so that
/// `d/dt Z(H^{1/2} e^{tA} H^{1/2})|₀ = tr(A·G)`.
pub fn energy_gradient(s: &PolarizedSample, h: &HermitianForm) -> Result<TangentDirection> {
    let w = whiten(s, h)?;
    let coeffs: Vec<f64> = s.weights().iter().zip(&w.densities).map(|(v, r)| v / r).collect();
    let n = s.sections();
    let id = CMatrix::identity(n, n).scale(s.total_mass() / n as f64);
    TangentDirection::new(id - weighted_outer(&w.columns, &coeffs))
}

/// Closed-form restriction of `Z` to the ray through `h0` along `a`.
pub fn balancing_restriction(
    s: &PolarizedSample,
    h0: &HermitianForm,
    a: &TangentDirection,
) -> Result<SpectralRestriction> {
    SpectralRestriction::new(s, s.weights(), EnergyKind::Balancing, h0, a)
}

/// `lim Z(γ(t))/t = (V/N) tr Λ − Σ ν_a min{λ_i : u_{a,i} ≠ 0}`.
pub fn exact_slope(s: &PolarizedSample, h0: &HermitianForm, a: &TangentDirection) -> Result<f64> {
    Ok(balancing_restriction(s, h0, a)?.slope())
}

impl Objective for PolarizedSample {
    fn dim(&self) -> usize {
        self.sections()
    }

    fn value(&self, h: &HermitianForm) -> Result<f64> {
        balancing_energy(self, h)
    }

    fn gradient(&self, h: &HermitianForm) -> Result<TangentDirection> {
        energy_gradient(self, h)
    }

    fn exact_slope(&self, h0: &HermitianForm, a: &TangentDirection) -> Option<Result<f64>> {
        Some(exact_slope(self, h0, a))
    }
}
