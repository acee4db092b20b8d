//! Finite discrete joint laws and their first and second moments.
//!
//! A [`FiniteJointDistribution`] is a weighted family of atoms `(vⱼ, uⱼ)`;
//! it is the exactly-known ground-truth object behind every oracle in this
//! crate. [`JointMoments`] packages the sufficient statistics
//! `(μ_U, μ_V, C_U, C_V, C_UV)` consumed by the conditioning formulas, in
//! centred form `C_UV = E[U⊗V] − E[U]⊗E[V]` or uncentred form `E[U⊗V]`.

use crate::linalg::{Matrix, Tolerance, Vector};
use crate::{Error, Result};

/// Weighted atoms `(vⱼ, uⱼ)` representing an exactly-known joint law.
///
/// Weights are stored normalised to sum one; duplicate atoms are kept as-is
/// (grouping is an oracle concern, see [`crate::verification`]).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteJointDistribution {
    dim_v: usize,
    dim_u: usize,
    atoms: Vec<(Vector, Vector)>,
    weights: Vec<f64>,
}

impl FiniteJointDistribution {
    /// Build a distribution from `(v, u)` rows and optional raw weights.
    ///
    /// Weights are normalised to sum one; omitted weights mean the uniform
    /// distribution.
    pub fn from_rows(rows: Vec<(Vector, Vector)>, weights: Option<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let dim_v = rows[0].0.len();
        let dim_u = rows[0].1.len();
        for (j, (v, u)) in rows.iter().enumerate() {
            if v.len() != dim_v || u.len() != dim_u {
                return Err(Error::ShapeMismatch(format!(
                    "atom {j} has dims ({}, {}), expected ({dim_v}, {dim_u})",
                    v.len(),
                    u.len()
                )));
            }
            if v.iter().chain(u.iter()).any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("atom {j} has non-finite coordinates")));
            }
        }
        let mut weights = match weights {
            Some(w) => {
                if w.len() != rows.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "{} weights for {} atoms",
                        w.len(),
                        rows.len()
                    )));
                }
                for (j, &x) in w.iter().enumerate() {
                    if !x.is_finite() || x < 0.0 {
                        return Err(Error::NegativeWeight(x, j));
                    }
                }
                w
            }
            None => vec![1.0; rows.len()],
        };
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidInput("weights sum to zero".into()));
        }
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self {
            dim_v,
            dim_u,
            atoms: rows,
            weights,
        })
    }

    /// Uniform distribution over the given atoms.
    pub fn uniform(rows: Vec<(Vector, Vector)>) -> Result<Self> {
        Self::from_rows(rows, None)
    }

    /// Uniform scalar law from paired `(v, u)` values.
    pub fn scalar_uniform(v: &[f64], u: &[f64]) -> Result<Self> {
        if v.len() != u.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} v-values vs {} u-values",
                v.len(),
                u.len()
            )));
        }
        Self::uniform(
            v.iter()
                .zip(u.iter())
                .map(|(&a, &b)| (Vector::from_vec(vec![a]), Vector::from_vec(vec![b])))
                .collect(),
        )
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_u(&self) -> usize {
        self.dim_u
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[(Vector, Vector)] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Swap the roles of `V` and `U`.
    pub fn swapped(&self) -> Self {
        Self {
            dim_v: self.dim_u,
            dim_u: self.dim_v,
            atoms: self.atoms.iter().map(|(v, u)| (u.clone(), v.clone())).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Replace the `U` block atomwise, keeping `V` and the weights.
    pub fn with_u_block(&self, u: Vec<Vector>) -> Result<Self> {
        if u.len() != self.atoms.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} replacement u-atoms for {} atoms",
                u.len(),
                self.atoms.len()
            )));
        }
        Self::from_rows(
            self.atoms
                .iter()
                .zip(u)
                .map(|((v, _), nu)| (v.clone(), nu))
                .collect(),
            Some(self.weights.clone()),
        )
    }

    /// Exact weighted moments of the law.
    ///
    /// With `centered = true` the covariance blocks are
    /// `E[(X−μ)⊗(Y−μ)]`; otherwise the raw second moments `E[X⊗Y]`.
    pub fn empirical_moments(&self, centered: bool) -> JointMoments {
        let mut mu_v = Vector::zeros(self.dim_v);
        let mut mu_u = Vector::zeros(self.dim_u);
        for ((v, u), &w) in self.atoms.iter().zip(&self.weights) {
            mu_v.axpy(w, v, 1.0);
            mu_u.axpy(w, u, 1.0);
        }
        let (zv, zu) = if centered {
            (mu_v.clone(), mu_u.clone())
        } else {
            (Vector::zeros(self.dim_v), Vector::zeros(self.dim_u))
        };
        let mut c_v = Matrix::zeros(self.dim_v, self.dim_v);
        let mut c_u = Matrix::zeros(self.dim_u, self.dim_u);
        let mut c_uv = Matrix::zeros(self.dim_u, self.dim_v);
        for ((v, u), &w) in self.atoms.iter().zip(&self.weights) {
            let dv = v - &zv;
            let du = u - &zu;
            c_v.ger(w, &dv, &dv, 1.0);
            c_u.ger(w, &du, &du, 1.0);
            c_uv.ger(w, &du, &dv, 1.0);
        }
        JointMoments {
            mu_u,
            mu_v,
            c_u,
            c_v,
            c_uv,
            centered,
        }
    }
}

/// Means and (cross-)covariance operators of a square-integrable pair.
///
/// `c_uv` maps v-space to u-space (`dim_u × dim_v`); the reverse block is
/// implied by `C_VU = C_UVᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMoments {
    pub mu_u: Vector,
    pub mu_v: Vector,
    pub c_u: Matrix,
    pub c_v: Matrix,
    pub c_uv: Matrix,
    pub centered: bool,
}

impl JointMoments {
    /// Validate shapes and PSD structure of externally supplied moments.
    pub fn new(
        mu_u: Vector,
        mu_v: Vector,
        c_u: Matrix,
        c_v: Matrix,
        c_uv: Matrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        let (du, dv) = (mu_u.len(), mu_v.len());
        if c_u.shape() != (du, du) || c_v.shape() != (dv, dv) || c_uv.shape() != (du, dv) {
            return Err(Error::ShapeMismatch(format!(
                "moment blocks {:?}, {:?}, {:?} inconsistent with dims ({du}, {dv})",
                c_u.shape(),
                c_v.shape(),
                c_uv.shape()
            )));
        }
        crate::linalg::spectral_decomposition(&c_u, tol)?;
        crate::linalg::spectral_decomposition(&c_v, tol)?;
        Ok(Self {
            mu_u,
            mu_v,
            c_u,
            c_v,
            c_uv,
            centered: true,
        })
    }

    pub fn dim_u(&self) -> usize {
        self.mu_u.len()
    }

    pub fn dim_v(&self) -> usize {
        self.mu_v.len()
    }

    /// `C_VU = C_UVᵀ`.
    pub fn c_vu(&self) -> Matrix {
        self.c_uv.transpose()
    }

    /// Push the moments through an affine map `ψ` applied to one side.
    ///
    /// For `side = U`: `μ_U ← ψ̄ μ_U + b`, `C_U ← ψ̄ C_U ψ̄ᵀ`,
    /// `C_UV ← ψ̄ C_UV`; symmetrically for `side = V`.
    pub fn push_affine(&self, psi: &AffineOperator, side: Side) -> Result<JointMoments> {
        let dim_in = match side {
            Side::U => self.dim_u(),
            Side::V => self.dim_v(),
        };
        if psi.a.ncols() != dim_in {
            return Err(Error::ShapeMismatch(format!(
                "affine map takes dim {}, {side:?}-side has dim {dim_in}",
                psi.a.ncols()
            )));
        }
        let mut m = self.clone();
        match side {
            Side::U => {
                m.mu_u = psi.apply(&self.mu_u);
                m.c_u = &psi.a * &self.c_u * psi.a.transpose();
                m.c_uv = &psi.a * &self.c_uv;
            }
            Side::V => {
                m.mu_v = psi.apply(&self.mu_v);
                m.c_v = &psi.a * &self.c_v * psi.a.transpose();
                m.c_uv = &self.c_uv * psi.a.transpose();
            }
        }
        Ok(m)
    }
}

/// Which block of a joint law an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    U,
    V,
}

/// Affine map `γ(v) = b + A v`; `A` is the "non-affine part" `γ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineOperator {
    pub a: Matrix,
    pub b: Vector,
}

impl AffineOperator {
    pub fn new(a: Matrix, b: Vector) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::ShapeMismatch(format!(
                "A has {} rows but b has length {}",
                a.nrows(),
                b.len()
            )));
        }
        if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("affine operator has non-finite entries".into()));
        }
        Ok(Self { a, b })
    }

    /// The identity map on `dim`-space.
    pub fn identity(dim: usize) -> Self {
        Self {
            a: Matrix::identity(dim, dim),
            b: Vector::zeros(dim),
        }
    }

    /// The constant map `v ↦ g`.
    pub fn constant(g: Vector, dim_in: usize) -> Self {
        Self {
            a: Matrix::zeros(g.len(), dim_in),
            b: g,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.a.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.a.nrows()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.a * v + &self.b
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &AffineOperator) -> Result<AffineOperator> {
        if self.dim_in() != other.dim_out() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: inner output dim {} vs outer input dim {}",
                other.dim_out(),
                self.dim_in()
            )));
        }
        Ok(AffineOperator {
            a: &self.a * &other.a,
            b: &self.a * &other.b + &self.b,
        })
    }

    /// Pointwise linear combination `α·self + β·other`.
    pub fn linear_combination(&self, alpha: f64, other: &AffineOperator, beta: f64) -> Result<AffineOperator> {
        if self.a.shape() != other.a.shape() {
            return Err(Error::ShapeMismatch("affine operators differ in shape".into()));
        }
        Ok(AffineOperator {
            a: &self.a * alpha + &other.a * beta,
            b: &self.b * alpha + &other.b * beta,
        })
    }
}
