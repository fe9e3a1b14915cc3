//! Discrete polarized samples and their JSON form.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::HermitianForm;
use crate::linalg::{all_finite, pairwise_sum, CMatrix, CVector};

/// Section values at weighted points: column `a` of `evals` holds the values
/// of the `N` basis sections at point `a`, measured against the reference
/// metric, and `weights[a]` is the mass of that point.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizedSample {
    label: String,
    level: u32,
    complex_dim: u32,
    evals: CMatrix,
    weights: Vec<f64>,
    total_mass: f64,
    allow_degenerate: bool,
}

impl PolarizedSample {
    /// Validates weights and requires a positive definite reference Gram.
    pub fn new(
        label: impl Into<String>,
        level: u32,
        complex_dim: u32,
        evals: CMatrix,
        weights: Vec<f64>,
    ) -> Result<Self> {
        Self::build(label.into(), level, complex_dim, evals, weights, false)
    }

    /// Like [`PolarizedSample::new`] but accepts a singular reference Gram.
    /// Such samples have no balanced point; they exist to exercise the
    /// divergence branch.
    pub fn new_degenerate(
        label: impl Into<String>,
        level: u32,
        complex_dim: u32,
        evals: CMatrix,
        weights: Vec<f64>,
    ) -> Result<Self> {
        Self::build(label.into(), level, complex_dim, evals, weights, true)
    }

    fn build(
        label: String,
        level: u32,
        complex_dim: u32,
        evals: CMatrix,
        weights: Vec<f64>,
        allow_degenerate: bool,
    ) -> Result<Self> {
        let (n, m) = evals.shape();
        if n == 0 || m == 0 {
            return Err(Error::InvalidSample("sample needs at least one section and one point".into()));
        }
        if weights.len() != m {
            return Err(Error::DimensionMismatch(weights.len(), m));
        }
        if complex_dim == 0 {
            return Err(Error::InvalidSample("complex dimension must be positive".into()));
        }
        if let Some(a) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidSample(format!("weight {a} is not a positive number")));
        }
        if !all_finite(&evals) {
            return Err(Error::NonFinite("section values"));
        }
        if let Some(a) = (0..m).find(|&a| evals.column(a).iter().all(|z| z.norm_sqr() == 0.0)) {
            return Err(Error::InvalidSample(format!("every section vanishes at point {a}")));
        }
        let total_mass = pairwise_sum(&weights);
        let sample = PolarizedSample {
            label,
            level,
            complex_dim,
            evals,
            weights,
            total_mass,
            allow_degenerate,
        };
        if !allow_degenerate {
            HermitianForm::new(sample.gram()).map_err(|e| {
                Error::InvalidSample(format!(
                    "reference Gram is not positive definite ({e}); use the degenerate constructor \
                     to keep such a sample"
                ))
            })?;
        }
        Ok(sample)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn complex_dim(&self) -> u32 {
        self.complex_dim
    }

    /// Number of sections `N`.
    pub fn sections(&self) -> usize {
        self.evals.nrows()
    }

    /// Number of points `M`.
    pub fn points(&self) -> usize {
        self.evals.ncols()
    }

    pub fn evals(&self) -> &CMatrix {
        &self.evals
    }

    pub fn column(&self, a: usize) -> CVector {
        self.evals.column(a).into_owned()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `V = Σ ν_a`.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn allows_degenerate(&self) -> bool {
        self.allow_degenerate
    }

    /// Reference Gram `Σ ν_a v_a v_a†`.
    pub fn gram(&self) -> CMatrix {
        weighted_outer(&self.evals, &self.weights)
    }

    /// The same points with section values `v_a ↦ G v_a`.
    pub fn transformed(&self, g: &CMatrix) -> Result<Self> {
        if g.ncols() != self.sections() || g.nrows() != self.sections() {
            return Err(Error::DimensionMismatch(g.ncols(), self.sections()));
        }
        Self::build(
            self.label.clone(),
            self.level,
            self.complex_dim,
            g * &self.evals,
            self.weights.clone(),
            self.allow_degenerate,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&SampleDocument::from_sample(self, None))
            .map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SampleDocument =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        doc.into_sample()
    }
}

/// `Σ_a c_a v_a v_a†` for the columns of `evals`.
pub(crate) fn weighted_outer(evals: &CMatrix, coeffs: &[f64]) -> CMatrix {
    let mut scaled = evals.clone();
    for (a, &c) in coeffs.iter().enumerate() {
        let s = c.sqrt();
        for z in scaled.column_mut(a).iter_mut() {
            *z *= s;
        }
    }
    crate::linalg::symmetrize(&(&scaled * scaled.adjoint()))
}

/// Serialized sample. `evals` lists `[re, im]` pairs column by column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleDocument {
    pub label: String,
    #[serde(rename = "N")]
    pub sections: usize,
    #[serde(rename = "M")]
    pub points: usize,
    pub k: u32,
    pub n: u32,
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<f64>>,
    pub evals: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_degenerate: bool,
}

impl SampleDocument {
    pub fn from_sample(s: &PolarizedSample, base: Option<&[f64]>) -> Self {
        SampleDocument {
            label: s.label.clone(),
            sections: s.sections(),
            points: s.points(),
            k: s.level,
            n: s.complex_dim,
            weights: s.weights.clone(),
            base: base.map(|b| b.to_vec()),
            evals: s.evals.iter().map(|z| [z.re, z.im]).collect(),
            allow_degenerate: s.allow_degenerate,
        }
    }

    pub fn into_sample(self) -> Result<PolarizedSample> {
        if self.evals.len() != self.sections * self.points {
            return Err(Error::InvalidSample(format!(
                "expected {} section values, found {}",
                self.sections * self.points,
                self.evals.len()
            )));
        }
        let evals = CMatrix::from_iterator(
            self.sections,
            self.points,
            self.evals.iter().map(|[re, im]| Complex::new(*re, *im)),
        );
        PolarizedSample::build(
            self.label,
            self.k,
            self.n,
            evals,
            self.weights,
            self.allow_degenerate,
        )
    }
}
