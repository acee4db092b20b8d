//! Conditioning of jointly Gaussian vectors.
//!
//! For a Gaussian pair `(U, V)` the conditional expectation is affine, so it
//! coincides with the linear conditional expectation, and the conditional
//! covariance is the constant matrix given by one of three equivalent
//! formulas:
//!
//! * invertible `C_V`: `C_U − C_UV C_V⁻¹ C_VU`;
//! * compatible: `C_U − C_UV C_V† C_VU`;
//! * general: `C_U − M_VUᵀ M_VU` with `M_VU = (C_V^{1/2})† C_VU`.
//!
//! All three agree whenever `C_V` is invertible. The module also provides
//! Karhunen–Loève truncation of a Gaussian measure (projecting the
//! covariance onto its leading eigenspace) and seeded sampling for Monte
//! Carlo cross-checks; samples are drawn as `mean + C^{1/2} z` with `z`
//! standard normal from a ChaCha20 stream, so byte-identical output is
//! reproducible from the seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::lce::{self, LceResult};
use crate::linalg::{
    psd_square_root, pseudo_inverse, spectral_decomposition, Matrix, Tolerance, Vector,
};
use crate::moments::JointMoments;
use crate::{Error, Result};

/// Gaussian measure on coordinate space: mean vector plus symmetric PSD
/// covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMeasure {
    pub mean: Vector,
    pub cov: Matrix,
}

impl GaussianMeasure {
    pub fn new(mean: Vector, cov: Matrix, tol: &Tolerance) -> Result<Self> {
        if cov.nrows() != mean.len() || cov.ncols() != mean.len() {
            return Err(Error::ShapeMismatch(format!(
                "mean has dim {} but covariance is {}×{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        spectral_decomposition(&cov, tol)?;
        Ok(Self { mean, cov })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Conditional law of the `U` block given `V = v`: an affine conditional
/// mean map and a constant conditional covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalGaussian {
    pub mean_map: crate::moments::AffineOperator,
    pub cond_cov: Matrix,
}

/// Which conditional-covariance formula to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovRegime {
    Invertible,
    Compatible,
    Incompatible,
}

/// Split a joint measure over `(U, V)` into block moments, `U` first.
fn block_moments(joint: &GaussianMeasure, dim_u: usize) -> Result<JointMoments> {
    let dim = joint.dim();
    if dim_u == 0 || dim_u >= dim {
        return Err(Error::OutOfRange(format!(
            "u-block size {dim_u} must lie in 1..{dim}"
        )));
    }
    let dim_v = dim - dim_u;
    Ok(JointMoments {
        mu_u: joint.mean.rows(0, dim_u).clone_owned(),
        mu_v: joint.mean.rows(dim_u, dim_v).clone_owned(),
        c_u: joint.cov.view((0, 0), (dim_u, dim_u)).clone_owned(),
        c_v: joint.cov.view((dim_u, dim_u), (dim_v, dim_v)).clone_owned(),
        c_uv: joint.cov.view((0, dim_u), (dim_u, dim_v)).clone_owned(),
        centered: true,
    })
}

/// Condition a joint Gaussian on its `V` block.
///
/// The mean map is the linear conditional expectation of the block moments;
/// the conditional covariance follows the requested regime. Requesting the
/// invertible regime with a numerically singular `C_V` is an error.
pub fn gaussian_condition(
    joint: &GaussianMeasure,
    dim_u: usize,
    regime: CovRegime,
    tol: &Tolerance,
) -> Result<ConditionalGaussian> {
    let m = block_moments(joint, dim_u)?;
    let fit: LceResult = match lce::lce_compatible(&m, tol) {
        Ok(f) => f,
        Err(Error::IncompatibleCase { .. }) => {
            let dec = spectral_decomposition(&m.c_v, tol)?;
            lce::lce_truncated(&m, dec.numerical_rank(tol).max(1), tol)?
        }
        Err(e) => return Err(e),
    };

    let c_vu = m.c_vu();
    let cond_cov = match regime {
        CovRegime::Invertible => {
            let dec = spectral_decomposition(&m.c_v, tol)?;
            let rank = dec.numerical_rank(tol);
            if rank < m.dim_v() {
                return Err(Error::SingularCovariance {
                    rank,
                    dim: m.dim_v(),
                });
            }
            let inv = m
                .c_v
                .clone()
                .cholesky()
                .ok_or_else(|| Error::SingularCovariance {
                    rank,
                    dim: m.dim_v(),
                })?
                .inverse();
            &m.c_u - &m.c_uv * inv * &c_vu
        }
        CovRegime::Compatible => &m.c_u - &m.c_uv * pseudo_inverse(&m.c_v, tol)? * &c_vu,
        CovRegime::Incompatible => {
            let s_pinv = pseudo_inverse(&psd_square_root(&m.c_v, tol)?, tol)?;
            let m_vu = s_pinv * &c_vu;
            &m.c_u - m_vu.transpose() * &m_vu
        }
    };
    let cond_cov = (&cond_cov + cond_cov.transpose()) * 0.5;
    Ok(ConditionalGaussian {
        mean_map: fit.gamma,
        cond_cov,
    })
}

/// Karhunen–Loève truncation: project the covariance onto its top-`n`
/// eigenspace, leaving the mean unchanged.
pub fn kl_truncate(g: &GaussianMeasure, n: usize, tol: &Tolerance) -> Result<GaussianMeasure> {
    let dim = g.dim();
    if n == 0 || n > dim {
        return Err(Error::OutOfRange(format!(
            "truncation order {n} outside 1..={dim}"
        )));
    }
    let dec = spectral_decomposition(&g.cov, tol)?;
    let mut cov = Matrix::zeros(dim, dim);
    for i in 0..n {
        let h = dec.eigenvectors.column(i).clone_owned();
        cov.ger(dec.eigenvalues[i], &h, &h, 1.0);
    }
    let cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianMeasure {
        mean: g.mean.clone(),
        cov,
    })
}

/// Draw `count` samples, one per row, deterministically from the seed.
pub fn sample(g: &GaussianMeasure, count: usize, seed: u64, tol: &Tolerance) -> Result<Matrix> {
    if count == 0 {
        return Err(Error::OutOfRange("sample count must be ≥ 1".into()));
    }
    let root = psd_square_root(&g.cov, tol)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let dim = g.dim();
    let mut out = Matrix::zeros(count, dim);
    let mut z = Vector::zeros(dim);
    for i in 0..count {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        let x = &g.mean + &root * &z;
        out.row_mut(i).copy_from(&x.transpose());
    }
    Ok(out)
}
