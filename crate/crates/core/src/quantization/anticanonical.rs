//! The anticanonical model, where the measure moves with the metric through
//! the factor `ρ^{−1/k}`.

use crate::convex::Objective;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianForm, TangentDirection};
use crate::linalg::CMatrix;

use super::balancing::whiten;
use super::sample::{weighted_outer, PolarizedSample, SampleDocument};
use super::spectral::{log_sum_exp, EnergyKind, SpectralRestriction};

/// A polarized sample at level `k ≥ 1` together with reference density
/// weights `β_a > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnticanonicalSample {
    sample: PolarizedSample,
    base: Vec<f64>,
}

impl AnticanonicalSample {
    pub fn new(sample: PolarizedSample, base: Vec<f64>) -> Result<Self> {
        if sample.level() == 0 {
            return Err(Error::InvalidSample("anticanonical level must be positive".into()));
        }
        if base.len() != sample.points() {
            return Err(Error::DimensionMismatch(base.len(), sample.points()));
        }
        if let Some(a) = base.iter().position(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(Error::InvalidSample(format!("base weight {a} is not a positive number")));
        }
        Ok(AnticanonicalSample { sample, base })
    }

    pub fn sample(&self) -> &PolarizedSample {
        &self.sample
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn level(&self) -> u32 {
        self.sample.level()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&SampleDocument::from_sample(&self.sample, Some(&self.base)))
            .map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut doc: SampleDocument =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let base = doc
            .base
            .take()
            .ok_or_else(|| Error::InvalidSample("anticanonical sample needs \"base\"".into()))?;
        AnticanonicalSample::new(doc.into_sample()?, base)
    }
}

/// Per-point coefficients `β_a ρ_a^{−(k+1)/k} / F` and `log F`.
struct AcTerms {
    columns: CMatrix,
    coeffs: Vec<f64>,
    log_f: f64,
    log_det: f64,
}

fn ac_terms(s: &AnticanonicalSample, h: &HermitianForm) -> Result<AcTerms> {
    let w = whiten(&s.sample, h)?;
    let k = s.level() as f64;
    let log_rho: Vec<f64> = w.densities.iter().map(|r| r.ln()).collect();
    let log_f = log_sum_exp(s.base.iter().zip(&log_rho).map(|(b, l)| b.ln() - l / k));
    let coeffs = s
        .base
        .iter()
        .zip(&log_rho)
        .map(|(b, l)| (b.ln() - (k + 1.0) / k * l - log_f).exp())
        .collect();
    Ok(AcTerms {
        columns: w.columns,
        coeffs,
        log_f,
        log_det: h.log_det(),
    })
}

/// `Z^ac(H) = (1/N) log det H − k log Σ_a β_a ρ_a(H)^{−1/k}`.
pub fn ac_energy(s: &AnticanonicalSample, h: &HermitianForm) -> Result<f64> {
    let t = ac_terms(s, h)?;
    Ok(t.log_det / s.sample.sections() as f64 - s.level() as f64 * t.log_f)
}

/// `G^ac = (1/N) I − (1/F) Σ β_a ρ_a^{−(k+1)/k} w_a w_a†`.
pub fn ac_gradient(s: &AnticanonicalSample, h: &HermitianForm) -> Result<TangentDirection> {
    let t = ac_terms(s, h)?;
    let n = s.sample.sections();
    let id = CMatrix::identity(n, n).unscale(n as f64);
    TangentDirection::new(id - weighted_outer(&t.columns, &t.coeffs))
}

pub(crate) fn ac_t_matrix(s: &AnticanonicalSample, h: &HermitianForm) -> Result<CMatrix> {
    let t = ac_terms(s, h)?;
    let n = s.sample.sections() as f64;
    Ok(weighted_outer(s.sample.evals(), &t.coeffs).scale(n))
}

/// `T^ac(H) = (N/F) Σ β_a ρ_a^{−(k+1)/k} v_a v_a†`.
pub fn ac_t_operator(s: &AnticanonicalSample, h: &HermitianForm) -> Result<HermitianForm> {
    HermitianForm::new(ac_t_matrix(s, h)?)
}

pub fn ac_restriction(
    s: &AnticanonicalSample,
    h0: &HermitianForm,
    a: &TangentDirection,
) -> Result<SpectralRestriction> {
    SpectralRestriction::new(
        &s.sample,
        &s.base,
        EnergyKind::Anticanonical { level: s.level() },
        h0,
        a,
    )
}

/// `lim Z^ac(γ(t))/t = tr Λ / N − max_a min{λ_i : u_{a,i} ≠ 0}`.
pub fn ac_exact_slope(s: &AnticanonicalSample, h0: &HermitianForm, a: &TangentDirection) -> Result<f64> {
    Ok(ac_restriction(s, h0, a)?.slope())
}

impl Objective for AnticanonicalSample {
    fn dim(&self) -> usize {
        self.sample.sections()
    }

    fn value(&self, h: &HermitianForm) -> Result<f64> {
        ac_energy(self, h)
    }

    fn gradient(&self, h: &HermitianForm) -> Result<TangentDirection> {
        ac_gradient(self, h)
    }

    fn exact_slope(&self, h0: &HermitianForm, a: &TangentDirection) -> Option<Result<f64>> {
        Some(ac_exact_slope(self, h0, a))
    }
}
