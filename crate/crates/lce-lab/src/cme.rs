//! Kernel conditional mean embeddings as linear conditional expectations.
//!
//! Embedding `X` and `Y` through the canonical feature maps of reproducing
//! kernels `k` and `ℓ` turns conditioning into an affine problem: with
//! `V = φ(X)` and `U = ψ(Y)`,
//!
//! ```text
//! E[U | X] = μ_U + (C_V† C_VU)* (φ(X) − μ_V)
//! ```
//!
//! At desk scale the feature spaces are realised in finite coordinates by a
//! symmetric PSD square root of the Gram matrix: the coordinates of `φ(xⱼ)`
//! are the rows of `K^{1/2}`, which preserves every pairwise inner product
//! and handles rank-deficient Gram matrices uniformly through the spectral
//! machinery. Fitting then delegates to [`crate::lce`] on the embedded law;
//! prediction embeds a query through the cross-Gram against the training
//! points composed with the stored factorisation's pseudo-inverse.
//!
//! Operators are centred by default; an uncentred variant exists only at the
//! moments level (`FiniteJointDistribution::empirical_moments(false)`).

use crate::lce::{self, LceResult};
use crate::linalg::{psd_square_root, pseudo_inverse, Matrix, Tolerance, Vector};
use crate::moments::FiniteJointDistribution;
use crate::{Error, Result};

/// Kernel family plus parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// `k(x, y) = exp(−‖x − y‖² / (2 ℓ²))`
    GaussianRbf { lengthscale: f64 },
    /// `k(x, y) = ⟨x, y⟩`
    Linear,
    /// `k(x, y) = (⟨x, y⟩ + offset)^degree`
    Polynomial { degree: u32, offset: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::GaussianRbf { lengthscale } => {
                if lengthscale.is_nan() || *lengthscale <= 0.0 {
                    return Err(Error::OutOfRange(format!(
                        "lengthscale must be positive, got {lengthscale}"
                    )));
                }
            }
            KernelSpec::Linear => {}
            KernelSpec::Polynomial { degree, .. } => {
                if *degree < 1 {
                    return Err(Error::OutOfRange("polynomial degree must be ≥ 1".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, a: &Vector, b: &Vector) -> f64 {
        match self {
            KernelSpec::GaussianRbf { lengthscale } => {
                let d2 = (a - b).norm_squared();
                (-d2 / (2.0 * lengthscale * lengthscale)).exp()
            }
            KernelSpec::Linear => a.dot(b),
            KernelSpec::Polynomial { degree, offset } => (a.dot(b) + offset).powi(*degree as i32),
        }
    }
}

/// Cross-Gram matrix `G[i, j] = k(aᵢ, bⱼ)`.
pub fn gram(spec: &KernelSpec, points_a: &[Vector], points_b: &[Vector]) -> Result<Matrix> {
    spec.validate()?;
    if let (Some(a0), Some(b0)) = (points_a.first(), points_b.first()) {
        if a0.len() != b0.len() {
            return Err(Error::ShapeMismatch(format!(
                "point dims {} vs {}",
                a0.len(),
                b0.len()
            )));
        }
    }
    Ok(Matrix::from_fn(points_a.len(), points_b.len(), |i, j| {
        spec.eval(&points_a[i], &points_b[j])
    }))
}

/// Joint law of the feature-embedded pair `(φ(X), ψ(Y))`.
///
/// Coordinates are rows of the symmetric PSD square roots of the two Gram
/// matrices, so all pairwise inner products reproduce the Gram entries.
pub fn embed_joint(
    x_points: &[Vector],
    y_points: &[Vector],
    weights: Option<Vec<f64>>,
    k_spec: &KernelSpec,
    l_spec: &KernelSpec,
    tol: &Tolerance,
) -> Result<FiniteJointDistribution> {
    let (fx, fy) = embed_factors(x_points, y_points, k_spec, l_spec, tol)?;
    embedded_law(&fx, &fy, weights)
}

fn embed_factors(
    x_points: &[Vector],
    y_points: &[Vector],
    k_spec: &KernelSpec,
    l_spec: &KernelSpec,
    tol: &Tolerance,
) -> Result<(Matrix, Matrix)> {
    if x_points.len() != y_points.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} x-points vs {} y-points",
            x_points.len(),
            y_points.len()
        )));
    }
    if x_points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = gram(k_spec, x_points, x_points)?;
    let l = gram(l_spec, y_points, y_points)?;
    Ok((psd_square_root(&k, tol)?, psd_square_root(&l, tol)?))
}

fn embedded_law(
    factor_x: &Matrix,
    factor_y: &Matrix,
    weights: Option<Vec<f64>>,
) -> Result<FiniteJointDistribution> {
    let rows = (0..factor_x.nrows())
        .map(|j| {
            (
                factor_x.row(j).transpose(),
                factor_y.row(j).transpose(),
            )
        })
        .collect();
    FiniteJointDistribution::from_rows(rows, weights)
}

/// A fitted conditional mean embedding.
#[derive(Debug, Clone)]
pub struct CmeModel {
    pub x_points: Vec<Vector>,
    pub y_points: Vec<Vector>,
    pub weights: Vec<f64>,
    pub k_spec: KernelSpec,
    pub l_spec: KernelSpec,
    pub eps: f64,
    /// `K^{1/2}`: row `j` holds the coordinates of `φ(xⱼ)`.
    pub factor_x: Matrix,
    /// `L^{1/2}`: row `j` holds the coordinates of `ψ(yⱼ)`.
    pub factor_y: Matrix,
    pub lce: LceResult,
    tol: Tolerance,
}

/// Fit a conditional mean embedding on weighted `(x, y)` pairs.
///
/// `eps = 0` requests the compatible (pseudo-inverse) path; `eps > 0` the
/// Tikhonov-regularised one. Moments are centred.
pub fn cme_fit(
    x_points: &[Vector],
    y_points: &[Vector],
    weights: Option<Vec<f64>>,
    k_spec: &KernelSpec,
    l_spec: &KernelSpec,
    eps: f64,
    tol: &Tolerance,
) -> Result<CmeModel> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::OutOfRange(format!("eps must be ≥ 0, got {eps}")));
    }
    let (factor_x, factor_y) = embed_factors(x_points, y_points, k_spec, l_spec, tol)?;
    let law = embedded_law(&factor_x, &factor_y, weights)?;
    let m = law.empirical_moments(true);
    let lce = if eps == 0.0 {
        lce::lce_compatible(&m, tol)?
    } else {
        lce::lce_regularized(&m, eps)?
    };
    Ok(CmeModel {
        x_points: x_points.to_vec(),
        y_points: y_points.to_vec(),
        weights: law.weights().to_vec(),
        k_spec: k_spec.clone(),
        l_spec: l_spec.clone(),
        eps,
        factor_x,
        factor_y,
        lce,
        tol: *tol,
    })
}

impl CmeModel {
    /// Reassemble a model from persisted parts (no refitting).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        x_points: Vec<Vector>,
        y_points: Vec<Vector>,
        weights: Vec<f64>,
        k_spec: KernelSpec,
        l_spec: KernelSpec,
        eps: f64,
        factor_x: Matrix,
        factor_y: Matrix,
        lce: LceResult,
        tol: Tolerance,
    ) -> Self {
        Self {
            x_points,
            y_points,
            weights,
            k_spec,
            l_spec,
            eps,
            factor_x,
            factor_y,
            lce,
            tol,
        }
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    /// The embedded training law (recomputed from the stored factors).
    pub fn embedded_law(&self) -> Result<FiniteJointDistribution> {
        embedded_law(&self.factor_x, &self.factor_y, Some(self.weights.clone()))
    }

    /// Coordinates of `φ(x)` in the training feature basis, with the norm of
    /// the component orthogonal to the training span as a diagnostic.
    ///
    /// The in-span part is `(K^{1/2})† k(x, ·)`; the reported residual is
    /// `√(k(x,x) − ‖coords‖²)`, clamped at zero.
    pub fn embed_query(&self, x: &Vector) -> Result<(Vector, f64)> {
        let kvec = Vector::from_fn(self.x_points.len(), |j, _| self.k_spec.eval(&self.x_points[j], x));
        let coords = pseudo_inverse(&self.factor_x, &self.tol)? * kvec;
        let kxx = self.k_spec.eval(x, x);
        let out = (kxx - coords.norm_squared()).max(0.0).sqrt();
        Ok((coords, out))
    }

    /// Coordinates of the in-span part of `ψ(g)` in the training `Y` basis.
    pub fn embed_y(&self, g: &Vector) -> Result<Vector> {
        let lvec = Vector::from_fn(self.y_points.len(), |j, _| self.l_spec.eval(&self.y_points[j], g));
        Ok(pseudo_inverse(&self.factor_y, &self.tol)? * lvec)
    }

    /// Predicted conditional mean embedding at a query point, as a
    /// coefficient vector over the `Y`-feature coordinates.
    pub fn predict(&self, x: &Vector) -> Result<Vector> {
        let (coords, _) = self.embed_query(x)?;
        Ok(self.lce.gamma.apply(&coords))
    }

    /// Estimate `E[ℓ(g, Y) | X = x]` by pairing the prediction with the
    /// embedded test point `g`.
    pub fn expectation(&self, g: &Vector, x: &Vector) -> Result<f64> {
        Ok(self.embed_y(g)?.dot(&self.predict(x)?))
    }

    /// Same model with the conditioning operator refit at truncation order
    /// `n` (top-`n` eigenspace of the embedded `C_V`).
    pub fn with_truncation(&self, n: usize) -> Result<CmeModel> {
        let m = self.embedded_law()?.empirical_moments(true);
        let lce = lce::lce_truncated(&m, n, &self.tol)?;
        let mut out = self.clone();
        out.lce = lce;
        Ok(out)
    }
}
