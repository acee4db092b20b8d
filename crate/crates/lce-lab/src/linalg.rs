//! Dense linear-algebra substrate: pseudo-inverses, PSD square roots,
//! spectral decompositions, and the Douglas/Baker operator factorisations.
//!
//! All operators are finite-dimensional coordinate representations stored as
//! dense `f64` matrices. Rank decisions are made relative to the largest
//! singular value (`Tolerance::rank_rel`); residual and symmetry checks use
//! `Tolerance::residual_abs`.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Dense real matrix.
pub type Matrix = DMatrix<f64>;
/// Dense real column vector.
pub type Vector = DVector<f64>;

/// Numerical cutoffs used throughout the crate.
///
/// `rank_rel` is the relative singular/eigenvalue cutoff: values below
/// `rank_rel × σ_max` are treated as zero. `residual_abs` bounds symmetry
/// defects, range-inclusion residuals and reconstruction errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rank_rel: f64,
    pub residual_abs: f64,
}

impl Tolerance {
    pub fn new(rank_rel: f64, residual_abs: f64) -> Result<Self> {
        if rank_rel.is_nan() || rank_rel <= 0.0 || residual_abs.is_nan() || residual_abs <= 0.0 {
            return Err(Error::OutOfRange(format!(
                "tolerances must be strictly positive, got rank_rel={rank_rel}, residual_abs={residual_abs}"
            )));
        }
        Ok(Self {
            rank_rel,
            residual_abs,
        })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel: 1e-12,
            residual_abs: 1e-8,
        }
    }
}

/// Eigendecomposition of a symmetric PSD matrix, sorted non-increasing.
///
/// `eigenvectors` holds orthonormal columns `h₁, h₂, …` matching
/// `eigenvalues`; the input is recovered as `Σ λₙ hₙ hₙᵀ`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vector,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    /// Number of eigenvalues above `rank_rel × λ_max`.
    pub fn numerical_rank(&self, tol: &Tolerance) -> usize {
        let max = self.eigenvalues.get(0).copied().unwrap_or(0.0);
        if max <= 0.0 {
            return 0;
        }
        self.eigenvalues
            .iter()
            .filter(|&&l| l > tol.rank_rel * max)
            .count()
    }

    /// Reassemble `Σ λₙ hₙ hₙᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let scaled = Matrix::from_columns(
            &self
                .eigenvectors
                .column_iter()
                .zip(self.eigenvalues.iter())
                .map(|(h, &l)| h * l)
                .collect::<Vec<_>>(),
        );
        &scaled * self.eigenvectors.transpose()
    }

    /// Orthogonal projector onto the span of the top `n` eigenvectors.
    pub fn projector(&self, n: usize) -> Matrix {
        let h = self.eigenvectors.columns(0, n);
        h * h.transpose()
    }

    /// Apply `f` to each retained eigenvalue and reassemble; eigenvalues at
    /// or below `rank_rel × λ_max` are dropped.
    pub fn map_spectrum(&self, tol: &Tolerance, f: impl Fn(f64) -> f64) -> Matrix {
        let dim = self.eigenvectors.nrows();
        let mut out = Matrix::zeros(dim, dim);
        let max = self.eigenvalues.get(0).copied().unwrap_or(0.0);
        for (h, &l) in self.eigenvectors.column_iter().zip(self.eigenvalues.iter()) {
            if l > tol.rank_rel * max && l > 0.0 {
                let fl = f(l);
                // out += fl * h hᵀ, written without forming h hᵀ
                out.ger(fl, &h.clone_owned(), &h.clone_owned(), 1.0);
            }
        }
        out
    }
}

fn ensure_finite(m: &Matrix, what: &str) -> Result<()> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} has non-finite entries")));
    }
    Ok(())
}

/// Cyclic two-sided Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns unsorted eigenvalues with matching eigenvector columns. Chosen
/// over faster tridiagonalisation-based solvers for its accuracy and its
/// robustness on (near-)diagonal and rank-deficient input.
fn jacobi_symmetric_eigen(sym: &Matrix) -> (Vector, Matrix) {
    let n = sym.nrows();
    let mut b = sym.clone();
    let mut q = Matrix::identity(n, n);

    const MAX_SWEEPS: usize = 64;
    const EPS: f64 = 1e-15;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in (p + 1)..n {
                let bpq = b[(p, r)];
                if bpq == 0.0 || bpq.abs() <= EPS * (b[(p, p)].abs() * b[(r, r)].abs()).sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (b[(r, r)] - b[(p, p)]) / (2.0 * bpq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let bpp = b[(p, p)] - t * bpq;
                let brr = b[(r, r)] + t * bpq;
                for k in 0..n {
                    let x = b[(k, p)];
                    let y = b[(k, r)];
                    b[(k, p)] = c * x - s * y;
                    b[(k, r)] = s * x + c * y;
                }
                for k in 0..n {
                    let x = b[(p, k)];
                    let y = b[(r, k)];
                    b[(p, k)] = c * x - s * y;
                    b[(r, k)] = s * x + c * y;
                }
                b[(p, p)] = bpp;
                b[(r, r)] = brr;
                b[(p, r)] = 0.0;
                b[(r, p)] = 0.0;
                for k in 0..n {
                    let x = q[(k, p)];
                    let y = q[(k, r)];
                    q[(k, p)] = c * x - s * y;
                    q[(k, r)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (b.diagonal(), q)
}

/// Singular value decomposition `M = U Σ Vᵀ` with `Σ` non-increasing.
///
/// Columns of `u` belonging to zero singular values are zero (only the range
/// part of `U` is materialised).
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

/// One-sided Jacobi SVD.
///
/// Cyclic sweeps orthogonalise column pairs until all mutual inner products
/// are at rounding level; singular values are the final column norms. Slow
/// for large matrices but accurate to machine precision on the dense,
/// desk-scale operators this crate works with.
pub fn jacobi_svd(m: &Matrix) -> Result<Svd> {
    ensure_finite(m, "svd input")?;
    if m.nrows() < m.ncols() {
        let t = jacobi_svd(&m.transpose())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = Matrix::identity(cols, cols);

    const MAX_SWEEPS: usize = 64;
    const EPS: f64 = 1e-15;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let ap = a.column(p);
                let aq = a.column(q);
                let app = ap.norm_squared();
                let aqq = aq.norm_squared();
                let apq = ap.dot(&aq);
                if apq.abs() <= EPS * (app * aqq).sqrt() || app == 0.0 || aqq == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    a[(i, p)] = c * x - s * y;
                    a[(i, q)] = s * x + c * y;
                }
                for i in 0..cols {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = Matrix::zeros(rows, cols);
    let mut vs = Matrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        if sigma > 0.0 {
            u.column_mut(dst).copy_from(&(a.column(src) / sigma));
        }
        vs.column_mut(dst).copy_from(&v.column(src));
    }
    Ok(Svd {
        u,
        singular_values,
        v: vs,
    })
}

/// Moore–Penrose pseudo-inverse via SVD with relative rank cutoff.
///
/// Singular values below `rank_rel × σ_max` are zeroed, so the result is the
/// pseudo-inverse of the nearest matrix of that numerical rank.
pub fn pseudo_inverse(m: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    Ok(pinv_with_rank(m, tol)?.0)
}

/// Pseudo-inverse together with the retained numerical rank.
pub fn pinv_with_rank(m: &Matrix, tol: &Tolerance) -> Result<(Matrix, usize)> {
    let (rows, cols) = m.shape();
    let svd = jacobi_svd(m)?;
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = tol.rank_rel * smax;

    let mut rank = 0;
    let mut pinv = Matrix::zeros(cols, rows);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut && s > 0.0 {
            rank += 1;
            let vi = svd.v.column(i).clone_owned();
            let ui = svd.u.column(i).clone_owned();
            pinv.ger(1.0 / s, &vi, &ui, 1.0);
        }
    }
    Ok((pinv, rank))
}

/// Sorted eigendecomposition of a symmetric PSD matrix.
///
/// The input is symmetrised when its asymmetry is within tolerance and
/// rejected otherwise. Eigenvalues in `[−residual_abs·max(1, λ_max), 0)` are
/// clamped to zero; more negative ones are an error. Ties in the
/// non-increasing eigenvalue order are broken by ordering eigenvectors
/// lexicographically, after fixing each eigenvector's sign so that its first
/// nonzero coordinate is positive.
pub fn spectral_decomposition(c: &Matrix, tol: &Tolerance) -> Result<SpectralDecomposition> {
    ensure_finite(c, "spectral_decomposition input")?;
    if c.nrows() != c.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "expected square matrix, got {}×{}",
            c.nrows(),
            c.ncols()
        )));
    }
    let scale = c.amax().max(1.0);
    let asym = (c - c.transpose()).amax();
    if asym > tol.residual_abs * scale {
        return Err(Error::NotPsd(format!(
            "asymmetry {asym:.3e} exceeds tolerance {:.3e}",
            tol.residual_abs * scale
        )));
    }
    let sym = (c + c.transpose()) * 0.5;
    let (values, vectors) = jacobi_symmetric_eigen(&sym);

    let lambda_max = values.iter().cloned().fold(0.0, f64::max);
    let neg_tol = tol.residual_abs * lambda_max.max(1.0);
    let mut pairs: Vec<(f64, Vector)> = Vec::with_capacity(values.len());
    for (i, &l) in values.iter().enumerate() {
        if l < -neg_tol {
            return Err(Error::NotPsd(format!(
                "eigenvalue {l:.3e} below −{neg_tol:.3e}"
            )));
        }
        let mut h = vectors.column(i).clone_owned();
        if let Some(first) = h.iter().find(|&&x| x != 0.0) {
            if *first < 0.0 {
                h.neg_mut();
            }
        }
        pairs.push((l.max(0.0), h));
    }
    pairs.sort_by(|(la, ha), (lb, hb)| {
        lb.partial_cmp(la)
            .unwrap()
            .then_with(|| lex_cmp(ha, hb))
    });

    let eigenvalues = Vector::from_iterator(pairs.len(), pairs.iter().map(|(l, _)| *l));
    let eigenvectors = Matrix::from_columns(&pairs.into_iter().map(|(_, h)| h).collect::<Vec<_>>());
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn lex_cmp(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y).unwrap() {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

/// Symmetric PSD square root: `S` with `S·S = C`.
pub fn psd_square_root(c: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let dec = spectral_decomposition(c, tol)?;
    let mut s = dec.map_spectrum(tol, f64::sqrt);
    // map_spectrum assembles from one-sided products; symmetrise the round-off
    let st = s.transpose();
    s += st;
    s *= 0.5;
    Ok(s)
}

/// Douglas factor `Q = B†A` for the range inclusion `ran A ⊆ ran B`.
///
/// On success `A = BQ`, `ker Q = ker A` and `ran Q ⊆ ran Bᵀ` hold within
/// tolerance. A range-inclusion violation is detected through the relative
/// Frobenius residual `‖A − BQ‖ / ‖A‖` and reported as
/// [`Error::IncompatibleRanges`].
pub fn douglas_factor(a: &Matrix, b: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    ensure_finite(a, "douglas_factor A")?;
    ensure_finite(b, "douglas_factor B")?;
    if a.nrows() != b.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "A has {} rows but B has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    let q = pseudo_inverse(b, tol)? * a;
    let norm_a = a.norm();
    let residual = (a - b * &q).norm();
    if residual > tol.residual_abs * norm_a && norm_a > 0.0 {
        return Err(Error::IncompatibleRanges { residual });
    }
    Ok(q)
}

/// Correlation operator `R_VU = (C_V^{1/2})† C_VU (C_U^{1/2})†`.
///
/// For moments of a genuine joint distribution this is the unique operator
/// with `C_VU = C_V^{1/2} R_VU C_U^{1/2}` and `‖R_VU‖ ≤ 1`; in the scalar
/// case it reduces to the Pearson correlation coefficient. Reconstruction
/// failure beyond tolerance means the inputs are not consistent second-order
/// moments and is reported as [`Error::InconsistentMoments`].
pub fn baker_correlation(
    c_u: &Matrix,
    c_v: &Matrix,
    c_vu: &Matrix,
    tol: &Tolerance,
) -> Result<Matrix> {
    if c_vu.nrows() != c_v.nrows() || c_vu.ncols() != c_u.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "C_VU is {}×{} but C_V is {}×{} and C_U is {}×{}",
            c_vu.nrows(),
            c_vu.ncols(),
            c_v.nrows(),
            c_v.ncols(),
            c_u.nrows(),
            c_u.ncols()
        )));
    }
    let sv = psd_square_root(c_v, tol)?;
    let su = psd_square_root(c_u, tol)?;
    let r = pseudo_inverse(&sv, tol)? * c_vu * pseudo_inverse(&su, tol)?;

    let scale = c_vu.norm().max(1.0);
    let residual = (&sv * &r * &su - c_vu).norm();
    if residual > tol.residual_abs * scale {
        return Err(Error::InconsistentMoments { residual });
    }
    Ok(r)
}

/// Hilbert–Schmidt inner product `trace(M1ᵀ M2)`.
pub fn trace_product(m1: &Matrix, m2: &Matrix) -> Result<f64> {
    if m1.shape() != m2.shape() {
        return Err(Error::ShapeMismatch(format!(
            "trace_product needs equal shapes, got {}×{} and {}×{}",
            m1.nrows(),
            m1.ncols(),
            m2.nrows(),
            m2.ncols()
        )));
    }
    Ok(m1.iter().zip(m2.iter()).map(|(x, y)| x * y).sum())
}

/// Eigenvalues of `(M + Mᵀ)/2`, sorted non-increasing. Unlike
/// [`spectral_decomposition`] this never rejects indefinite input, so it is
/// the tool for checking PSD orderings of difference matrices.
pub fn symmetric_eigenvalues(m: &Matrix) -> Vector {
    let sym = (m + m.transpose()) * 0.5;
    let (values, _) = jacobi_symmetric_eigen(&sym);
    let mut vals: Vec<f64> = values.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Vector::from_vec(vals)
}

/// Largest singular value (operator norm).
pub fn operator_norm(m: &Matrix) -> f64 {
    jacobi_svd(m)
        .map(|svd| svd.singular_values.first().copied().unwrap_or(0.0))
        .unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn random_matrix(rng: &mut ChaCha20Rng, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn pseudo_inverse_identity() {
        let id = Matrix::identity(3, 3);
        let p = pseudo_inverse(&id, &Tolerance::default()).unwrap();
        assert_abs_diff_eq!(p, id, epsilon = 1e-14);
    }

    #[test]
    fn pseudo_inverse_diagonal_with_zero() {
        let m = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 0.0]));
        let p = pseudo_inverse(&m, &Tolerance::default()).unwrap();
        let expected = Matrix::from_diagonal(&Vector::from_vec(vec![0.5, 0.0]));
        assert_abs_diff_eq!(p, expected, epsilon = 1e-14);
    }

    #[test]
    fn pseudo_inverse_rank_deficient_penrose() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        // 5×3 of rank 2
        let m = random_matrix(&mut rng, 5, 2) * random_matrix(&mut rng, 2, 3);
        let p = pseudo_inverse(&m, &Tolerance::default()).unwrap();
        assert!((&m * &p * &m - &m).norm() < 1e-10);
        assert!((&p * &m * &p - &p).norm() < 1e-10);
    }

    #[test]
    fn pseudo_inverse_rejects_nan() {
        let mut m = Matrix::identity(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(matches!(
            pseudo_inverse(&m, &Tolerance::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn sqrt_identity_and_diagonal() {
        let tol = Tolerance::default();
        let id = Matrix::identity(4, 4);
        assert_abs_diff_eq!(psd_square_root(&id, &tol).unwrap(), id, epsilon = 1e-12);

        let c = Matrix::from_diagonal(&Vector::from_vec(vec![4.0, 9.0]));
        let expected = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 3.0]));
        assert_abs_diff_eq!(psd_square_root(&c, &tol).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn sqrt_reconstructs_random_psd() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let g = random_matrix(&mut rng, 4, 4);
        let c = g.transpose() * &g;
        let s = psd_square_root(&c, &Tolerance::default()).unwrap();
        assert!((&s * &s - &c).norm() <= 1e-10);
        assert!((&s - s.transpose()).norm() <= 1e-12);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let c = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, -0.5]));
        assert!(matches!(
            psd_square_root(&c, &Tolerance::default()),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn spectral_sorts_and_reconstructs() {
        let tol = Tolerance::default();
        let c = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 3.0, 2.0]));
        let dec = spectral_decomposition(&c, &tol).unwrap();
        assert_eq!(dec.eigenvalues.as_slice(), &[3.0, 2.0, 1.0]);
        // axis eigenvectors with positive leading sign
        assert_abs_diff_eq!(dec.eigenvectors.column(0)[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dec.eigenvectors.column(1)[2], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dec.eigenvectors.column(2)[0], 1.0, epsilon = 1e-14);

        let zero = Matrix::zeros(3, 3);
        let dec0 = spectral_decomposition(&zero, &tol).unwrap();
        assert!(dec0.eigenvalues.iter().all(|&l| l == 0.0));

        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let g = random_matrix(&mut rng, 6, 6);
        let c = g.transpose() * &g;
        let dec = spectral_decomposition(&c, &tol).unwrap();
        assert!((dec.reconstruct() - &c).norm() <= 1e-10 * c.norm().max(1.0));
        let q = &dec.eigenvectors;
        assert!((q.transpose() * q - Matrix::identity(6, 6)).norm() < 1e-10);
    }

    #[test]
    fn spectral_rejects_gross_asymmetry_and_is_deterministic() {
        let tol = Tolerance::default();
        let mut m = Matrix::identity(3, 3);
        m[(0, 1)] = 0.5;
        assert!(matches!(spectral_decomposition(&m, &tol), Err(Error::NotPsd(_))));

        // repeated eigenvalues: the tie-break fixes one ordering
        let c = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 2.0, 1.0]));
        let a = spectral_decomposition(&c, &tol).unwrap();
        let b = spectral_decomposition(&c, &tol).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
        assert!((a.reconstruct() - &c).amax() < 1e-14);
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0, 1e-8).is_err());
        assert!(Tolerance::new(1e-12, -1.0).is_err());
        assert!(Tolerance::new(1e-12, 1e-8).is_ok());
    }

    #[test]
    fn baker_norm_bound_on_a_large_discrete_law() {
        let mut rng = ChaCha20Rng::seed_from_u64(200);
        let tol = Tolerance::default();
        // empirical moments of a 200-atom joint law
        let n = 200;
        let vs: Vec<Vector> = (0..n).map(|_| Vector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0))).collect();
        let us: Vec<Vector> = vs
            .iter()
            .map(|v| Vector::from_fn(2, |i, _| v[i] * v[2] + rng.gen_range(-0.5..0.5)))
            .collect();
        let mu_v = vs.iter().sum::<Vector>() / n as f64;
        let mu_u = us.iter().sum::<Vector>() / n as f64;
        let mut c_v = Matrix::zeros(3, 3);
        let mut c_u = Matrix::zeros(2, 2);
        let mut c_vu = Matrix::zeros(3, 2);
        for (v, u) in vs.iter().zip(&us) {
            let dv = v - &mu_v;
            let du = u - &mu_u;
            c_v.ger(1.0 / n as f64, &dv, &dv, 1.0);
            c_u.ger(1.0 / n as f64, &du, &du, 1.0);
            c_vu.ger(1.0 / n as f64, &dv, &du, 1.0);
        }
        let r = baker_correlation(&c_u, &c_v, &c_vu, &tol).unwrap();
        assert!(operator_norm(&r) <= 1.0 + 1e-10);
    }

    #[test]
    fn douglas_identity_and_violation() {
        let tol = Tolerance::default();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let b = {
            let g = random_matrix(&mut rng, 4, 4);
            g.transpose() * g + Matrix::identity(4, 4)
        };
        let q = douglas_factor(&b, &b, &tol).unwrap();
        assert!((&b * &q - &b).norm() < 1e-10);
        assert_abs_diff_eq!(q, Matrix::identity(4, 4), epsilon = 1e-9);

        // column of A outside ran B
        let b = Matrix::from_diagonal(&Vector::from_vec(vec![1.0, 0.0]));
        let a = Matrix::from_column_slice(2, 1, &[0.0, 1.0]);
        assert!(matches!(
            douglas_factor(&a, &b, &tol),
            Err(Error::IncompatibleRanges { .. })
        ));
    }

    #[test]
    fn douglas_on_constructed_compatible_pair() {
        let tol = Tolerance::default();
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let b = random_matrix(&mut rng, 5, 3) * random_matrix(&mut rng, 3, 5); // rank 3
        let x = random_matrix(&mut rng, 5, 4);
        let a = &b * &x;
        let q = douglas_factor(&a, &b, &tol).unwrap();
        assert!((&a - &b * &q).norm() <= 1e-10);
    }

    #[test]
    fn baker_zero_and_scalar() {
        let tol = Tolerance::default();
        let c_u = Matrix::identity(2, 2);
        let c_v = Matrix::identity(3, 3);
        let c_vu = Matrix::zeros(3, 2);
        let r = baker_correlation(&c_u, &c_v, &c_vu, &tol).unwrap();
        assert!(r.norm() == 0.0);

        // scalar case: R_VU is the Pearson correlation
        let rho = 0.37;
        let one = Matrix::from_element(1, 1, 1.0);
        let c_vu = Matrix::from_element(1, 1, rho);
        let r = baker_correlation(&one, &one, &c_vu, &tol).unwrap();
        assert_abs_diff_eq!(r[(0, 0)], rho, epsilon = 1e-14);
    }

    #[test]
    fn trace_product_basics() {
        let id = Matrix::identity(2, 2);
        assert_eq!(trace_product(&id, &id).unwrap(), 2.0);
        let m = Matrix::from_fn(3, 4, |i, j| (i + j) as f64);
        assert_eq!(trace_product(&m, &Matrix::zeros(3, 4)).unwrap(), 0.0);
        assert!(trace_product(&m, &id).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn penrose_identities(seed in 0u64..500, rows in 1usize..6, cols in 1usize..6, rank in 1usize..6) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let r = rank.min(rows).min(cols);
            let m = random_matrix(&mut rng, rows, r) * random_matrix(&mut rng, r, cols);
            let tol = Tolerance::default();
            let p = pseudo_inverse(&m, &tol).unwrap();
            // each identity measured relative to its own natural scale
            let scale_m = m.norm().max(1.0);
            let scale_p = p.norm().max(1.0);
            prop_assert!((&m * &p * &m - &m).norm() <= 1e-9 * scale_m);
            prop_assert!((&p * &m * &p - &p).norm() <= 1e-9 * scale_p);
            prop_assert!(((&m * &p).transpose() - &m * &p).norm() <= 1e-9 * scale_m * scale_p);
            prop_assert!(((&p * &m).transpose() - &p * &m).norm() <= 1e-9 * scale_m * scale_p);
        }

        #[test]
        fn sqrt_is_symmetric_psd(seed in 0u64..200, dim in 1usize..7) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let g = random_matrix(&mut rng, dim, dim);
            let c = g.transpose() * &g;
            let tol = Tolerance::default();
            let s = psd_square_root(&c, &tol).unwrap();
            prop_assert!((&s - s.transpose()).norm() <= 1e-10);
            let dec = spectral_decomposition(&s, &tol).unwrap();
            prop_assert!(dec.eigenvalues.iter().all(|&l| l >= -1e-10));
        }

        #[test]
        fn douglas_kernel_inclusion(seed in 0u64..200) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let tol = Tolerance::default();
            let b = random_matrix(&mut rng, 5, 3) * random_matrix(&mut rng, 3, 5);
            let x = random_matrix(&mut rng, 5, 4);
            let a = &b * &x;
            let q = douglas_factor(&a, &b, &tol).unwrap();
            prop_assert!((&a - &b * &q).norm() <= 1e-9 * a.norm().max(1.0));
            // every kernel vector of A maps to ~0 under Q
            let pa = pseudo_inverse(&a, &tol).unwrap();
            let ker_proj = Matrix::identity(4, 4) - &pa * &a;
            for col in ker_proj.column_iter() {
                prop_assert!((&q * col.clone_owned()).norm() <= 1e-9 * q.norm().max(1.0));
            }
        }

        #[test]
        fn trace_product_is_squared_hs_norm(seed in 0u64..100) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 3, 4);
            let t = trace_product(&m, &m).unwrap();
            prop_assert!(t >= 0.0);
            prop_assert!((t - m.norm().powi(2)).abs() <= 1e-12 * t.max(1.0));
            // direct elementwise-summation oracle
            let n = random_matrix(&mut rng, 3, 4);
            let direct: f64 = (0..3).flat_map(|i| (0..4).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)] * n[(i, j)]).sum();
            prop_assert!((trace_product(&m, &n).unwrap() - direct).abs() <= 1e-12);
            prop_assert!((trace_product(&m, &n).unwrap() - trace_product(&n, &m).unwrap()).abs() <= 1e-12);
        }
    }
}
