//! The discrete polarized model: samples, Bergman densities, the T-operator
//! fixed-point iteration, the balancing energy and its anticanonical
//! variant, and exact slopes along geodesic rays.

mod anticanonical;
mod balancing;
mod sample;
mod spectral;

pub use anticanonical::{
    ac_energy, ac_exact_slope, ac_gradient, ac_restriction, ac_t_operator, AnticanonicalSample,
};
pub use balancing::{
    balancing_energy, balancing_restriction, bergman_density, energy_gradient, exact_slope,
    t_operator, Normalization,
};
pub use sample::{PolarizedSample, SampleDocument};
pub use spectral::{SpectralRestriction, SUPPORT_EPS};

use crate::convex::Objective;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianForm, TangentDirection};
use crate::linalg::{frobenius, hermitian_eigen, pairwise_sum, CMatrix};

/// An energy whose critical points are the fixed points of a T-type map.
pub trait BalancingModel: Objective {
    /// The T-map as a raw matrix (possibly singular on degenerate samples).
    fn t_matrix(&self, h: &HermitianForm) -> Result<CMatrix>;

    /// `c` such that `c·H` has ν-weighted mean internal density 1.
    fn gauge_scale(&self, h: &HermitianForm) -> Result<f64>;
}

fn mean_density_scale(s: &PolarizedSample, weights: &[f64], h: &HermitianForm) -> Result<f64> {
    let rho = bergman_density(s, h, Normalization::Internal)?;
    let weighted: Vec<f64> = weights.iter().zip(&rho).map(|(w, r)| w * r).collect();
    Ok(pairwise_sum(&weighted) / pairwise_sum(weights))
}

impl BalancingModel for PolarizedSample {
    fn t_matrix(&self, h: &HermitianForm) -> Result<CMatrix> {
        balancing::t_matrix(self, h)
    }

    fn gauge_scale(&self, h: &HermitianForm) -> Result<f64> {
        mean_density_scale(self, self.weights(), h)
    }
}

impl BalancingModel for AnticanonicalSample {
    fn t_matrix(&self, h: &HermitianForm) -> Result<CMatrix> {
        anticanonical::ac_t_matrix(self, h)
    }

    fn gauge_scale(&self, h: &HermitianForm) -> Result<f64> {
        mean_density_scale(self.sample(), self.base(), h)
    }
}

/// Normalization of the reported balanced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// `det H = 1`, the gauge used during iteration.
    Determinant,
    /// Weighted mean of the internal density equal to 1, so that a balanced
    /// form has `ρ ≡ 1` at every point.
    Density,
}

#[derive(Debug, Clone, Copy)]
pub struct BalanceOptions {
    pub eps_bal: f64,
    pub max_iter: usize,
    pub cond_cap: f64,
    pub gauge: Gauge,
}

impl Default for BalanceOptions {
    fn default() -> Self {
        BalanceOptions {
            eps_bal: 1e-12,
            max_iter: 2000,
            cond_cap: 1e12,
            gauge: Gauge::Density,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceStatus {
    Converged,
    Diverged,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct BalanceResult {
    pub h: HermitianForm,
    /// `‖T(H) − H‖_F / ‖H‖_F` at the returned form.
    pub residual: f64,
    pub iterations: usize,
    pub status: BalanceStatus,
    /// Traceless unit log of the last iterate relative to the start, for
    /// diverged runs.
    pub escape_direction: Option<TangentDirection>,
    pub residual_history: Vec<f64>,
    /// Whether the residual decreased at every step.
    pub monotone: bool,
}

/// Traceless unit part of `log(H0^{-1/2} T H0^{-1/2})`, with eigenvalues
/// clamped at `max/cond_cap` so singular limits still give a direction.
fn escape_from(h0: &HermitianForm, t: &CMatrix, cond_cap: f64) -> Result<TangentDirection> {
    let w = h0.inv_sqrt();
    let spec = hermitian_eigen(&(&w * t * &w));
    let top = spec.values.last().copied().unwrap_or(0.0);
    if !(top > 0.0) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: top,
        });
    }
    let floor = top / cond_cap;
    let logs: Vec<f64> = spec.values.iter().map(|v| v.max(floor).ln()).collect();
    TangentDirection::from_spectrum(&spec.vectors, &logs)?
        .traceless()
        .normalized()
}

/// Fixed-point iteration `H ← T(H)` with determinant normalization.
///
/// Stops when the relative residual drops to `eps_bal` (converged), when the
/// next iterate has condition number above `cond_cap` (diverged), or after
/// `max_iter` steps.
pub fn balance_iterate<M: BalancingModel + ?Sized>(
    model: &M,
    h0: &HermitianForm,
    opts: &BalanceOptions,
) -> Result<BalanceResult> {
    if h0.dim() != model.dim() {
        return Err(Error::DimensionMismatch(h0.dim(), model.dim()));
    }
    if !(opts.eps_bal > 0.0) || !(opts.cond_cap > 1.0) {
        return Err(Error::Precondition("eps_bal and cond_cap must be positive".into()));
    }
    let start = h0.det_normalized()?;
    let mut h = start.clone();
    let mut history = Vec::new();
    let mut status = BalanceStatus::MaxIter;
    let mut escape = None;
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        iterations = it;
        let t = model.t_matrix(&h)?;
        residual = frobenius(&(&t - h.matrix())) / frobenius(h.matrix());
        history.push(residual);
        if residual <= opts.eps_bal {
            status = BalanceStatus::Converged;
            break;
        }
        let spec = hermitian_eigen(&t);
        let (lo, hi) = (spec.values[0], spec.values[spec.values.len() - 1]);
        if !(lo > 0.0) || hi / lo > opts.cond_cap {
            status = BalanceStatus::Diverged;
            escape = Some(escape_from(&start, &t, opts.cond_cap)?);
            break;
        }
        h = HermitianForm::new(t)?.det_normalized()?;
    }
    let monotone = history.windows(2).all(|w| w[1] <= w[0]);
    let h = match opts.gauge {
        Gauge::Determinant => h,
        Gauge::Density => {
            let c = model.gauge_scale(&h)?;
            h.scaled(c)?
        }
    };
    Ok(BalanceResult {
        h,
        residual,
        iterations,
        status,
        escape_direction: escape,
        residual_history: history,
        monotone,
    })
}

#[cfg(test)]
mod tests;
