//! Energies restricted to a geodesic ray, in closed form.
//!
//! Along `γ(t) = H0^{1/2} e^{tA} H0^{1/2}` with `A = U Λ U†` and
//! `u_a = U† H0^{-1/2} v_a`, the density is `ρ_a(t) = Σ_i |u_{a,i}|² e^{−λ_i t}`
//! and `log det γ(t) = log det H0 + t·tr Λ`, so both energies become
//! log-sum-exp expressions in `t` with exactly computable slopes.

use crate::convex::RayFunction;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianForm, TangentDirection};
use crate::linalg::pairwise_sum;

use super::sample::PolarizedSample;

/// Relative threshold below which an eigen-coordinate `|u_{a,i}|²` counts as
/// zero in slope formulas.
pub const SUPPORT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum EnergyKind {
    /// `Σ ν log ρ + (V/N) log det`.
    Balancing,
    /// `(1/N) log det − k log Σ β ρ^{−1/k}`.
    Anticanonical { level: u32 },
}

/// Supported eigen-coordinates of one point: `(λ_i, log |u_{a,i}|²)`.
type Terms = Vec<(f64, f64)>;

/// Closed-form restriction of an energy to a geodesic ray.
#[derive(Debug, Clone)]
pub struct SpectralRestriction {
    kind: EnergyKind,
    weights: Vec<f64>,
    terms: Vec<Terms>,
    trace: f64,
    log_det_base: f64,
    sections: usize,
    total_mass: f64,
}

impl SpectralRestriction {
    pub(crate) fn new(
        sample: &PolarizedSample,
        weights: &[f64],
        kind: EnergyKind,
        h0: &HermitianForm,
        a: &TangentDirection,
    ) -> Result<Self> {
        let n = sample.sections();
        if h0.dim() != n {
            return Err(Error::DimensionMismatch(h0.dim(), n));
        }
        if a.dim() != n {
            return Err(Error::DimensionMismatch(a.dim(), n));
        }
        let spec = a.spectrum();
        let coords = spec.vectors.adjoint() * h0.inv_sqrt() * sample.evals();
        let mut terms = Vec::with_capacity(sample.points());
        for col in 0..sample.points() {
            let mags: Vec<f64> = coords.column(col).iter().map(|z| z.norm_sqr()).collect();
            let total: f64 = mags.iter().sum();
            let support: Terms = mags
                .iter()
                .zip(&spec.values)
                .filter(|(m, _)| **m > SUPPORT_EPS * total)
                .map(|(m, &lambda)| (lambda, m.ln()))
                .collect();
            if support.is_empty() {
                return Err(Error::InvalidSample(format!("point {col} has empty support")));
            }
            terms.push(support);
        }
        Ok(SpectralRestriction {
            kind,
            weights: weights.to_vec(),
            terms,
            trace: spec.values.iter().sum(),
            log_det_base: h0.log_det(),
            sections: n,
            total_mass: pairwise_sum(weights),
        })
    }

    /// `log ρ_a(t)` for every point.
    pub fn log_densities(&self, t: f64) -> Vec<f64> {
        self.terms
            .iter()
            .map(|terms| log_sum_exp(terms.iter().map(|(lambda, lm)| lm - lambda * t)))
            .collect()
    }

    /// `min{λ_i : i in the support of u_a}` for every point.
    pub fn support_minima(&self) -> Vec<f64> {
        self.terms
            .iter()
            .map(|terms| terms.iter().map(|(l, _)| *l).fold(f64::INFINITY, f64::min))
            .collect()
    }

    /// `lim Z(γ(t))/t`.
    pub fn slope(&self) -> f64 {
        let n = self.sections as f64;
        let minima = self.support_minima();
        match self.kind {
            EnergyKind::Balancing => {
                let weighted: Vec<f64> =
                    self.weights.iter().zip(&minima).map(|(w, m)| w * m).collect();
                self.total_mass / n * self.trace - pairwise_sum(&weighted)
            }
            EnergyKind::Anticanonical { .. } => {
                let worst = minima.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                self.trace / n - worst
            }
        }
    }
}

impl RayFunction for SpectralRestriction {
    fn eval(&self, t: f64) -> Result<f64> {
        let n = self.sections as f64;
        let log_det = self.log_det_base + t * self.trace;
        let log_rho = self.log_densities(t);
        let value = match self.kind {
            EnergyKind::Balancing => {
                let terms: Vec<f64> = self.weights.iter().zip(&log_rho).map(|(w, l)| w * l).collect();
                pairwise_sum(&terms) + self.total_mass / n * log_det
            }
            EnergyKind::Anticanonical { level } => {
                let k = level as f64;
                let log_f = log_sum_exp(
                    self.weights.iter().zip(&log_rho).map(|(b, l)| b.ln() - l / k),
                );
                log_det / n - k * log_f
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite("restricted energy"))
        }
    }

    fn exact_slope(&self) -> Option<f64> {
        Some(self.slope())
    }
}

pub(crate) fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let terms: Vec<f64> = xs.map(|x| (x - max).exp()).collect();
    max + pairwise_sum(&terms).ln()
}
