//! Small dense complex linear-algebra kernels shared by the geometry and
//! quantization modules.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation from Hermitian symmetry.
pub(crate) fn hermitian_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub(crate) fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Hermitian eigendecomposition: ascending real eigenvalues and a unitary
/// matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Spectrum {
    /// `U diag(f(λ)) U†`, symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let s = f(lambda);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        symmetrize(&(scaled * self.vectors.adjoint()))
    }

    fn sorted(values: Vec<f64>, vectors: CMatrix) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let sorted_values = order.iter().map(|&i| values[i]).collect();
        let sorted_vectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
        Spectrum {
            values: sorted_values,
            vectors: sorted_vectors,
        }
    }
}

/// Eigendecomposition of a Hermitian matrix (normwise accurate).
pub fn hermitian_eigen(m: &CMatrix) -> Spectrum {
    let eig = symmetrize(m).symmetric_eigen();
    Spectrum::sorted(eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// One-sided (Hestenes) Jacobi SVD returning the singular values and left
/// singular vectors of a square matrix `b`, i.e. the spectrum of `b b†`
/// expressed as `(σ², W)`.
///
/// Singular values are computed to high relative accuracy when `b = Y D`
/// with `Y` well conditioned and `D` an arbitrary column scaling, which is
/// exactly the structure of factors of far-out geodesic points.
pub fn gram_spectrum(b: &CMatrix) -> Result<Spectrum> {
    let n = b.ncols();
    let mut c = b.clone();
    let tol = 4.0 * f64::EPSILON;
    let mut converged = false;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for i in 0..c.nrows() {
                    let cp = c[(i, p)];
                    let cq = c[(i, q)];
                    alpha += cp.norm_sqr();
                    beta += cq.norm_sqr();
                    gamma += cp.conj() * cq;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..c.nrows() {
                    let cp = c[(i, p)];
                    let d = c[(i, q)] * phase.conj();
                    c[(i, p)] = cp.scale(cs) - d.scale(sn);
                    c[(i, q)] = (cp.scale(sn) + d.scale(cs)) * phase;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Contract("Jacobi SVD did not converge".into()));
    }
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let sigma2: f64 = c.column(j).iter().map(|z| z.norm_sqr()).sum();
        values.push(sigma2);
        let sigma = sigma2.sqrt();
        if sigma > 0.0 {
            for i in 0..c.nrows() {
                c[(i, j)] = c[(i, j)].unscale(sigma);
            }
        }
    }
    Ok(Spectrum::sorted(values, c))
}

/// Pairwise summation in fixed index order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gram_spectrum_matches_dense_eigen_on_small_case() {
        let b = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.5, 0.2),
                c(0.0, -1.0),
                c(0.3, 0.1),
                c(2.0, 0.0),
                c(0.1, 0.0),
                c(0.0, 0.0),
                c(-0.4, 0.7),
                c(1.5, 0.0),
            ],
        );
        let h = &b * b.adjoint();
        let dense = hermitian_eigen(&h);
        let jac = gram_spectrum(&b).unwrap();
        for (a, b) in dense.values.iter().zip(&jac.values) {
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
        let rebuilt = jac.apply(|x| x);
        assert!(frobenius(&(rebuilt - h)) < 1e-12);
    }

    #[test]
    fn gram_spectrum_keeps_relative_accuracy_under_column_scaling() {
        // Y unitary-ish rotation, D spanning 1e-20 .. 1e20.
        let th: f64 = 0.3;
        let y = CMatrix::from_row_slice(
            2,
            2,
            &[c(th.cos(), 0.0), c(-th.sin(), 0.0), c(th.sin(), 0.0), c(th.cos(), 0.0)],
        );
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1e-20, 0.0), c(1e20, 0.0)]));
        let spec = gram_spectrum(&(y * d)).unwrap();
        assert!((spec.values[0] / 1e-40 - 1.0).abs() < 1e-14);
        assert!((spec.values[1] / 1e40 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
