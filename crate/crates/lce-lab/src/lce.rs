//! Linear conditional expectation and covariance.
//!
//! The estimators here realise the affine minimiser of
//! `E_{U|V}(γ) = E‖U − γ(V)‖²` in three regimes:
//!
//! * **compatible** — `γ(v) = μ_U + C_UV C_V† (v − μ_V)`, valid when
//!   `ran C_VU ⊆ ran C_V` (automatic for moments of a finite discrete law);
//! * **truncated** — the same formula after projecting `C_V` and `C_VU` onto
//!   the span of the top-`n` eigenvectors of `C_V`; over `n` this realises
//!   the martingale `E^A[U|V⁽ⁿ⁾]` and its convergence to the optimum;
//! * **regularised** — `γ_ε(v) = μ_U + C_UV (C_V + εI)⁻¹ (v − μ_V)`, the
//!   minimiser of the Tikhonov-penalised functional `E_{U|V}(γ) + ε‖γ̄‖²_HS`.
//!
//! Since we work in real coordinates the adjoint in `(C_V† C_VU)*` is a
//! plain transpose, so all slopes are assembled as `C_UV C_V†`-style
//! products acting on the left.
//!
//! On top of the conditional mean sit the second-order objects: the average
//! linear conditional covariance [`alcc`] `C_UW − M_VU ᵀ M_VW` and the
//! pointwise [`lcc`] field, computed as the LCE of the flattened residual
//! product `Z = R[U|V] ⊗ R[W|V]` given `V`.

use crate::linalg::{
    self, psd_square_root, pseudo_inverse, spectral_decomposition, Matrix, Tolerance, Vector,
};
use crate::moments::{AffineOperator, FiniteJointDistribution, JointMoments};
use crate::{Error, Result};

/// Which estimator produced an [`LceResult`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Compatible,
    Truncated(usize),
    Regularized(f64),
}

/// A fitted linear conditional expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct LceResult {
    pub gamma: AffineOperator,
    pub regime: Regime,
    /// Relative norm of the part of `C_VU` outside `ran C_V`.
    pub compat_residual: f64,
    /// Numerical rank of `C_V` actually used by the inversion.
    pub rank_used: usize,
}

/// Range-inclusion diagnostic for the compatible-case formula.
///
/// Returns `(flag, residual)` with
/// `residual = ‖C_VU − P_{ran C_V} C_VU‖ / max(‖C_VU‖, 1)` and
/// `flag = residual ≤ tol.residual_abs`. The flag is always true when `C_V`
/// has full numerical rank.
pub fn compatibility_check(m: &JointMoments, tol: &Tolerance) -> Result<(bool, f64)> {
    let c_vu = m.c_vu();
    let dec = spectral_decomposition(&m.c_v, tol)?;
    let rank = dec.numerical_rank(tol);
    let p = dec.projector(rank);
    let residual = (&c_vu - p * &c_vu).norm() / c_vu.norm().max(1.0);
    Ok((residual <= tol.residual_abs, residual))
}

/// The truncation sequence `γ⁽¹⁾, γ⁽²⁾, …` of a fixed set of moments.
///
/// Holds the eigendecomposition of `C_V` once, so the whole sequence (the
/// discrete martingale realised by conditioning on ever more spectral
/// coordinates) costs a single decomposition.
#[derive(Debug, Clone)]
pub struct TruncationPath {
    mu_u: Vector,
    mu_v: Vector,
    c_uv: Matrix,
    dec: linalg::SpectralDecomposition,
    rank: usize,
    compat_residual: f64,
}

impl TruncationPath {
    pub fn new(m: &JointMoments, tol: &Tolerance) -> Result<Self> {
        let dec = spectral_decomposition(&m.c_v, tol)?;
        let rank = dec.numerical_rank(tol);
        let c_vu = m.c_vu();
        let p = dec.projector(rank);
        let compat_residual = (&c_vu - p * &c_vu).norm() / c_vu.norm().max(1.0);
        Ok(Self {
            mu_u: m.mu_u.clone(),
            mu_v: m.mu_v.clone(),
            c_uv: m.c_uv.clone(),
            dec,
            rank,
            compat_residual,
        })
    }

    /// Numerical rank of `C_V`; orders beyond it add nothing.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn compat_residual(&self) -> f64 {
        self.compat_residual
    }

    /// The order-`n` operator: compatible formula after projecting `C_V`
    /// and `C_VU` onto the span of the top `min(n, rank)` eigenvectors.
    pub fn operator(&self, n: usize) -> Result<LceResult> {
        let dim_v = self.mu_v.len();
        if n == 0 || n > dim_v {
            return Err(Error::OutOfRange(format!(
                "truncation order {n} outside 1..={dim_v}"
            )));
        }
        let k = n.min(self.rank);
        // slope in the eigenbasis: C_UV Σ_{i≤k} λ_i⁻¹ h_i h_iᵀ
        let mut a = Matrix::zeros(self.mu_u.len(), dim_v);
        for i in 0..k {
            let h = self.dec.eigenvectors.column(i).clone_owned();
            let coeff = (&self.c_uv * &h) / self.dec.eigenvalues[i];
            a.ger(1.0, &coeff, &h, 1.0);
        }
        let b = &self.mu_u - &a * &self.mu_v;
        Ok(LceResult {
            gamma: AffineOperator::new(a, b)?,
            regime: Regime::Truncated(n),
            compat_residual: self.compat_residual,
            rank_used: k,
        })
    }
}

/// Compatible-case LCE: `γ(v) = μ_U + C_UV C_V† (v − μ_V)`.
///
/// Fails with [`Error::IncompatibleCase`] when the range-inclusion check
/// does not pass; callers should then fall back to [`lce_truncated`] or
/// [`lce_regularized`].
pub fn lce_compatible(m: &JointMoments, tol: &Tolerance) -> Result<LceResult> {
    let path = TruncationPath::new(m, tol)?;
    if path.compat_residual > tol.residual_abs {
        return Err(Error::IncompatibleCase {
            residual: path.compat_residual,
        });
    }
    let mut fit = path.operator(m.dim_v())?;
    fit.regime = Regime::Compatible;
    Ok(fit)
}

/// Rank-`n` truncated LCE.
///
/// `C_V` and `C_VU` are compressed onto the span of the top-`n` eigenvectors
/// of `C_V` before applying the compatible formula; eigenvectors with
/// eigenvalue at the rank cutoff are never included, so the effective
/// projection rank is `min(n, numerical rank)`. For a sweep over `n`, build
/// a [`TruncationPath`] once instead.
pub fn lce_truncated(m: &JointMoments, n: usize, tol: &Tolerance) -> Result<LceResult> {
    TruncationPath::new(m, tol)?.operator(n)
}

/// Tikhonov-regularised LCE: `γ_ε(v) = μ_U + C_UV (C_V + εI)⁻¹ (v − μ_V)`.
pub fn lce_regularized(m: &JointMoments, eps: f64) -> Result<LceResult> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::OutOfRange(format!(
            "regularisation parameter must be positive, got {eps}"
        )));
    }
    let dim_v = m.dim_v();
    let shifted = &m.c_v + Matrix::identity(dim_v, dim_v) * eps;
    let chol = shifted
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPsd("C_V + εI is not positive definite".into()))?;
    // A = C_UV (C_V + εI)⁻¹, assembled by solving on the transpose
    let a = chol.solve(&m.c_uv.transpose()).transpose();
    let b = &m.mu_u - &a * &m.mu_v;
    let tol = Tolerance::default();
    let (_, residual) = compatibility_check(m, &tol)?;
    Ok(LceResult {
        gamma: AffineOperator::new(a, b)?,
        regime: Regime::Regularized(eps),
        compat_residual: residual,
        rank_used: dim_v,
    })
}

/// Empirical value of the functional `E_{U|V}(γ) = Σⱼ wⱼ ‖uⱼ − γ(vⱼ)‖²`.
pub fn empirical_risk(dist: &FiniteJointDistribution, gamma: &AffineOperator) -> Result<f64> {
    if gamma.dim_in() != dist.dim_v() || gamma.dim_out() != dist.dim_u() {
        return Err(Error::ShapeMismatch(format!(
            "operator maps {}→{} but law has dims ({}, {})",
            gamma.dim_in(),
            gamma.dim_out(),
            dist.dim_v(),
            dist.dim_u()
        )));
    }
    Ok(dist
        .atoms()
        .iter()
        .zip(dist.weights())
        .map(|((v, u), w)| w * (u - gamma.apply(v)).norm_squared())
        .sum())
}

/// Tikhonov-penalised functional `E_{U|V}(γ) + ε‖γ̄‖²_HS`.
pub fn regularized_risk(
    dist: &FiniteJointDistribution,
    gamma: &AffineOperator,
    eps: f64,
) -> Result<f64> {
    Ok(empirical_risk(dist, gamma)? + eps * gamma.a.norm_squared())
}

/// Law of the linear conditional residual `R[U|V] = U − γ(V)`.
///
/// Atoms become `(vⱼ, uⱼ − γ(vⱼ))` with unchanged weights.
pub fn residual_distribution(
    dist: &FiniteJointDistribution,
    gamma: &AffineOperator,
) -> Result<FiniteJointDistribution> {
    if gamma.dim_in() != dist.dim_v() || gamma.dim_out() != dist.dim_u() {
        return Err(Error::ShapeMismatch(format!(
            "operator maps {}→{} but law has dims ({}, {})",
            gamma.dim_in(),
            gamma.dim_out(),
            dist.dim_v(),
            dist.dim_u()
        )));
    }
    dist.with_u_block(
        dist.atoms()
            .iter()
            .map(|(v, u)| u - gamma.apply(v))
            .collect(),
    )
}

/// Moments of a `(U, V)` pair extended by a third block `W` sharing `C_V`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleMoments {
    pub base: JointMoments,
    pub mu_w: Vector,
    pub c_w: Matrix,
    pub c_uw: Matrix,
    pub c_vw: Matrix,
}

impl TripleMoments {
    /// Exact moments of aligned `(v, u, w)` atom blocks.
    pub fn from_blocks(
        v: &[Vector],
        u: &[Vector],
        w: &[Vector],
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        if v.len() != u.len() || v.len() != w.len() {
            return Err(Error::ShapeMismatch(format!(
                "block lengths differ: {} v, {} u, {} w",
                v.len(),
                u.len(),
                w.len()
            )));
        }
        let uv = FiniteJointDistribution::from_rows(
            v.iter().cloned().zip(u.iter().cloned()).collect(),
            weights.clone(),
        )?;
        let base = uv.empirical_moments(true);
        let wv = FiniteJointDistribution::from_rows(
            v.iter().cloned().zip(w.iter().cloned()).collect(),
            weights.clone(),
        )?;
        let wm = wv.empirical_moments(true);
        // cross moment C_UW
        let dims = (u[0].len(), w[0].len());
        let mut c_uw = Matrix::zeros(dims.0, dims.1);
        for (j, wt) in uv.weights().iter().enumerate() {
            let du = &u[j] - &base.mu_u;
            let dw = &w[j] - &wm.mu_u;
            c_uw.ger(*wt, &du, &dw, 1.0);
        }
        Ok(Self {
            base,
            mu_w: wm.mu_u,
            c_w: wm.c_u,
            c_uw,
            c_vw: wm.c_uv.transpose(),
        })
    }

    /// View `(W, V)` as a two-block moment set.
    pub fn w_side(&self) -> JointMoments {
        JointMoments {
            mu_u: self.mu_w.clone(),
            mu_v: self.base.mu_v.clone(),
            c_u: self.c_w.clone(),
            c_v: self.base.c_v.clone(),
            c_uv: self.c_vw.transpose(),
            centered: self.base.centered,
        }
    }
}

/// Average linear conditional covariance `C_UW − M_VUᵀ M_VW` with
/// `M_VU = (C_V^{1/2})† C_VU`.
///
/// In the compatible case this equals `C_UW − C_UV C_V† C_VW`; for `W = U`
/// it is symmetric PSD.
pub fn alcc(tm: &TripleMoments, tol: &Tolerance) -> Result<Matrix> {
    let s = psd_square_root(&tm.base.c_v, tol)?;
    let s_pinv = pseudo_inverse(&s, tol)?;
    let m_vu = &s_pinv * tm.base.c_vu();
    let m_vw = &s_pinv * &tm.c_vw;
    Ok(&tm.c_uw - m_vu.transpose() * m_vw)
}

/// Affine map from a conditioning value `v` to a `dim_u × dim_w` matrix.
///
/// Evaluates as `base + Σᵢ (vᵢ − v_offsetᵢ)·slope[i]`, where `v_offset` is
/// the mean of the conditioning block, so that `base` is both the field's
/// value at `μ_V` and its expected value over the law.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineOperatorField {
    pub base: Matrix,
    pub v_offset: Vector,
    pub slope: Vec<Matrix>,
}

impl AffineOperatorField {
    pub fn eval(&self, v: &Vector) -> Result<Matrix> {
        if v.len() != self.v_offset.len() {
            return Err(Error::ShapeMismatch(format!(
                "field expects dim {}, got {}",
                self.v_offset.len(),
                v.len()
            )));
        }
        let mut out = self.base.clone();
        for (i, s) in self.slope.iter().enumerate() {
            out += s * (v[i] - self.v_offset[i]);
        }
        Ok(out)
    }
}

/// Pointwise linear conditional covariance `v ↦ Cov[U,W|V=v]`.
///
/// Forms the residual product `Z = R[U|V] ⊗ R[W|V]` atomwise (flattened
/// row-major over `(u-index, w-index)`), computes the LCE of `Z` given `V`
/// in the requested regime, and reshapes: the constant term is the ALCC
/// `μ_Z`, the slope its `v`-derivative. `W` defaults to `U`.
pub fn lcc(
    dist: &FiniteJointDistribution,
    w_block: Option<&[Vector]>,
    regime: Regime,
    tol: &Tolerance,
) -> Result<AffineOperatorField> {
    let fit = |m: &JointMoments| -> Result<LceResult> {
        match regime {
            Regime::Compatible => lce_compatible(m, tol),
            Regime::Regularized(eps) => lce_regularized(m, eps),
            Regime::Truncated(n) => lce_truncated(m, n, tol),
        }
    };

    let gamma_u = fit(&dist.empirical_moments(true))?.gamma;
    let res_u = residual_distribution(dist, &gamma_u)?;

    let (dim_w, res_w) = match w_block {
        None => (dist.dim_u(), None),
        Some(w) => {
            let wdist = dist.with_u_block(w.to_vec())?;
            let gamma_w = fit(&wdist.empirical_moments(true))?.gamma;
            (w[0].len(), Some(residual_distribution(&wdist, &gamma_w)?))
        }
    };

    let dim_u = dist.dim_u();
    let z_atoms: Vec<Vector> = (0..dist.len())
        .map(|j| {
            let ru = &res_u.atoms()[j].1;
            let rw = match &res_w {
                Some(r) => &r.atoms()[j].1,
                None => ru,
            };
            Vector::from_fn(dim_u * dim_w, |idx, _| rw[idx % dim_w] * ru[idx / dim_w])
        })
        .collect();
    let z_dist = dist.with_u_block(z_atoms)?;
    let z_moments = z_dist.empirical_moments(true);
    let z_fit = fit(&z_moments)?;

    let unflatten = |col: &Vector| Matrix::from_fn(dim_u, dim_w, |i, j| col[i * dim_w + j]);
    let slope = (0..dist.dim_v())
        .map(|i| unflatten(&z_fit.gamma.a.column(i).clone_owned()))
        .collect();
    Ok(AffineOperatorField {
        base: unflatten(&z_moments.mu_u),
        v_offset: z_moments.mu_v,
        slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn example_3_1() -> FiniteJointDistribution {
        FiniteJointDistribution::scalar_uniform(&[0.0, 0.0, 1.0, 1.0], &[1.0, -1.0, 2.0, -2.0])
            .unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn compatibility_trivial_and_forced() {
        // zero cross-covariance is always compatible
        let m = example_3_1().empirical_moments(true);
        let (ok, r) = compatibility_check(&m, &tol()).unwrap();
        assert!(ok);
        assert_eq!(r, 0.0);

        // rank-deficient C_V with coupling into the dead direction
        let m = JointMoments {
            mu_u: Vector::zeros(1),
            mu_v: Vector::zeros(2),
            c_u: Matrix::identity(1, 1),
            c_v: Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 0.0])),
            c_uv: Matrix::from_row_slice(1, 2, &[0.0, 1.0]),
            centered: true,
        };
        let (ok, r) = compatibility_check(&m, &tol()).unwrap();
        assert!(!ok);
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-14);
        assert!(matches!(
            lce_compatible(&m, &tol()),
            Err(Error::IncompatibleCase { .. })
        ));
    }

    #[test]
    fn example_3_1_lce_is_zero() {
        let m = example_3_1().empirical_moments(true);
        let fit = lce_compatible(&m, &tol()).unwrap();
        assert_abs_diff_eq!(fit.gamma.a[(0, 0)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.gamma.b[0], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn absolute_value_fixture_is_constant_two_thirds() {
        let d =
            FiniteJointDistribution::scalar_uniform(&[-1.0, 0.0, 1.0], &[1.0, 0.0, 1.0]).unwrap();
        let fit = lce_compatible(&d.empirical_moments(true), &tol()).unwrap();
        assert_abs_diff_eq!(fit.gamma.a[(0, 0)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.gamma.b[0], 2.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn stability_recovers_affine_dependence() {
        let phi = AffineOperator::new(
            Matrix::from_row_slice(1, 2, &[2.0, -1.0]),
            Vector::from_vec(vec![0.5]),
        )
        .unwrap();
        let vs = [
            Vector::from_vec(vec![0.0, 0.0]),
            Vector::from_vec(vec![1.0, 0.0]),
            Vector::from_vec(vec![0.0, 1.0]),
            Vector::from_vec(vec![1.0, 1.0]),
            Vector::from_vec(vec![0.3, -0.7]),
        ];
        let d = FiniteJointDistribution::uniform(
            vs.iter().map(|v| (v.clone(), phi.apply(v))).collect(),
        )
        .unwrap();
        let fit = lce_compatible(&d.empirical_moments(true), &tol()).unwrap();
        assert!((fit.gamma.a - &phi.a).amax() <= 1e-12);
        assert!((fit.gamma.b - &phi.b).amax() <= 1e-12);
    }

    #[test]
    fn truncated_full_rank_equals_compatible() {
        let d = FiniteJointDistribution::uniform(vec![
            (Vector::from_vec(vec![0.0, 0.0]), Vector::from_vec(vec![1.0])),
            (Vector::from_vec(vec![1.0, 2.0]), Vector::from_vec(vec![0.0])),
            (Vector::from_vec(vec![2.0, -1.0]), Vector::from_vec(vec![2.0])),
            (Vector::from_vec(vec![-1.0, 1.0]), Vector::from_vec(vec![-1.0])),
        ])
        .unwrap();
        let m = d.empirical_moments(true);
        let full = lce_compatible(&m, &tol()).unwrap();
        let trunc = lce_truncated(&m, 2, &tol()).unwrap();
        assert!((full.gamma.a - &trunc.gamma.a).amax() <= 1e-10);
        assert!((full.gamma.b - &trunc.gamma.b).amax() <= 1e-10);
    }

    #[test]
    fn truncated_rank_one_projects_onto_top_eigenvector() {
        let m = JointMoments {
            mu_u: Vector::zeros(1),
            mu_v: Vector::zeros(2),
            c_u: Matrix::identity(1, 1),
            c_v: Matrix::from_diagonal(&Vector::from_vec(vec![4.0, 1.0])),
            c_uv: Matrix::from_row_slice(1, 2, &[1.0, 1.0]),
            centered: true,
        };
        let fit = lce_truncated(&m, 1, &tol()).unwrap();
        assert_abs_diff_eq!(fit.gamma.a[(0, 0)], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(fit.gamma.a[(0, 1)], 0.0, epsilon = 1e-14);
        assert!(lce_truncated(&m, 3, &tol()).is_err());
        assert!(lce_truncated(&m, 0, &tol()).is_err());
    }

    #[test]
    fn regularized_limits() {
        let m = JointMoments {
            mu_u: Vector::from_vec(vec![2.0]),
            mu_v: Vector::zeros(1),
            c_u: Matrix::identity(1, 1),
            c_v: Matrix::identity(1, 1),
            c_uv: Matrix::identity(1, 1),
            centered: true,
        };
        // scalar: slope 1/(1+ε) = 1/2 at ε = 1
        let fit = lce_regularized(&m, 1.0).unwrap();
        assert_abs_diff_eq!(fit.gamma.a[(0, 0)], 0.5, epsilon = 1e-14);

        // huge ε: slope → 0, intercept → μ_U
        let fit = lce_regularized(&m, 1e12).unwrap();
        assert!(fit.gamma.a.amax() < 1e-11);
        assert_abs_diff_eq!(fit.gamma.b[0], 2.0, epsilon = 1e-10);

        // Example 3.1 stays zero for any ε since C_UV = 0
        let m = example_3_1().empirical_moments(true);
        let fit = lce_regularized(&m, 0.37).unwrap();
        assert_eq!(fit.gamma.a.amax(), 0.0);
        assert_eq!(fit.gamma.b[0], 0.0);

        assert!(lce_regularized(&m, 0.0).is_err());
        assert!(lce_regularized(&m, -1.0).is_err());
    }

    #[test]
    fn residual_distribution_identities() {
        let d = example_3_1();
        let fit = lce_compatible(&d.empirical_moments(true), &tol()).unwrap();
        let res = residual_distribution(&d, &fit.gamma).unwrap();
        // γ ≡ 0, so the residual atoms equal the original U atoms
        for (orig, r) in d.atoms().iter().zip(res.atoms()) {
            assert_eq!(orig.1, r.1);
        }

        // interpolating operator leaves zero residuals
        let phi = AffineOperator::new(Matrix::from_element(1, 1, 3.0), Vector::from_vec(vec![-1.0]))
            .unwrap();
        let dd = d
            .with_u_block(d.atoms().iter().map(|(v, _)| phi.apply(v)).collect())
            .unwrap();
        let res = residual_distribution(&dd, &phi).unwrap();
        assert!(res.atoms().iter().all(|(_, u)| u.amax() == 0.0));

        // mean-zero and Cov[R, V] = 0 under the fitted LCE
        let rm = res.empirical_moments(true);
        assert!(rm.mu_u.amax() <= 1e-12);
        assert!(rm.c_uv.amax() <= 1e-12);
    }

    #[test]
    fn alcc_example_values() {
        let d = example_3_1();
        let atoms = d.atoms();
        let v: Vec<_> = atoms.iter().map(|(v, _)| v.clone()).collect();
        let u: Vec<_> = atoms.iter().map(|(_, u)| u.clone()).collect();
        let tm = TripleMoments::from_blocks(&v, &u, &u, None).unwrap();
        let a = alcc(&tm, &tol()).unwrap();
        assert_abs_diff_eq!(a[(0, 0)], 2.5, epsilon = 1e-12);

        // independent V (product law): ALCC = C_U
        let v_ind: Vec<_> = [0.0, 0.0, 1.0, 1.0]
            .iter()
            .map(|&x| Vector::from_vec(vec![x]))
            .collect();
        let u_ind: Vec<_> = [1.0, -1.0, 1.0, -1.0]
            .iter()
            .map(|&x| Vector::from_vec(vec![x]))
            .collect();
        let tm = TripleMoments::from_blocks(&v_ind, &u_ind, &u_ind, None).unwrap();
        let a = alcc(&tm, &tol()).unwrap();
        assert_abs_diff_eq!(a[(0, 0)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn lcc_example_field() {
        let d = example_3_1();
        let field = lcc(&d, None, Regime::Compatible, &tol()).unwrap();
        let at = |x: f64| field.eval(&Vector::from_vec(vec![x])).unwrap()[(0, 0)];
        assert_abs_diff_eq!(at(0.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(at(1.0), 4.0, epsilon = 1e-12);
        // base is the ALCC
        assert_abs_diff_eq!(field.base[(0, 0)], 2.5, epsilon = 1e-12);
    }

    #[test]
    fn lcc_negative_value_fixture() {
        let n = 3.0f64;
        let d = FiniteJointDistribution::scalar_uniform(
            &[-1.0, -1.0, 0.0, 0.0, 1.0, 1.0],
            &[1.0, -1.0, 1.0, -1.0, n, -n],
        )
        .unwrap();
        let field = lcc(&d, None, Regime::Compatible, &tol()).unwrap();
        let at = |x: f64| field.eval(&Vector::from_vec(vec![x])).unwrap()[(0, 0)];
        // field is ½(N²−1)v + ⅓(N²+2)
        for x in [-1.0, 0.0, 1.0] {
            let expected = 0.5 * (n * n - 1.0) * x + (n * n + 2.0) / 3.0;
            assert_abs_diff_eq!(at(x), expected, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(at(-1.0), -1.0 / 3.0, epsilon = 1e-12);
        assert!(at(-1.0) < 0.0);
    }

    #[test]
    fn lcc_constant_u_is_zero_field() {
        let d = FiniteJointDistribution::scalar_uniform(&[-1.0, 0.0, 2.0], &[5.0, 5.0, 5.0])
            .unwrap();
        let field = lcc(&d, None, Regime::Compatible, &tol()).unwrap();
        assert_eq!(field.base.amax(), 0.0);
        assert!(field.slope.iter().all(|s| s.amax() == 0.0));
    }
}
