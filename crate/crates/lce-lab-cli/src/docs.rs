//! JSON document types (`"schema": "lce-lab/1"`) and their conversions to
//! and from the library types. Matrices are serialised as row-major nested
//! arrays.

use lce_lab::cme::{CmeModel, KernelSpec};
use lce_lab::gaussian::{ConditionalGaussian, GaussianMeasure};
use lce_lab::lce::{AffineOperatorField, LceResult, Regime};
use lce_lab::linalg::{Matrix, Tolerance, Vector};
use lce_lab::moments::AffineOperator;
use serde::{Deserialize, Serialize};

use crate::{CliError, SCHEMA};

fn check_schema(tag: &str) -> Result<(), CliError> {
    if tag != SCHEMA {
        return Err(CliError::parse(
            None,
            format!("unsupported document schema {tag:?}, expected {SCHEMA:?}"),
        ));
    }
    Ok(())
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    if rows.is_empty() {
        return Err(CliError::parse(None, "empty matrix"));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::parse(None, "ragged matrix rows"));
    }
    Ok(Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

pub fn vectors_to_rows(vs: &[Vector]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.iter().copied().collect()).collect()
}

pub fn rows_to_vectors(rows: &[Vec<f64>]) -> Vec<Vector> {
    rows.iter().map(|r| Vector::from_vec(r.clone())).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum RegimeDoc {
    Compatible,
    Truncated(usize),
    Regularized(f64),
}

impl From<Regime> for RegimeDoc {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Compatible => RegimeDoc::Compatible,
            Regime::Truncated(n) => RegimeDoc::Truncated(n),
            Regime::Regularized(e) => RegimeDoc::Regularized(e),
        }
    }
}

impl From<RegimeDoc> for Regime {
    fn from(r: RegimeDoc) -> Self {
        match r {
            RegimeDoc::Compatible => Regime::Compatible,
            RegimeDoc::Truncated(n) => Regime::Truncated(n),
            RegimeDoc::Regularized(e) => Regime::Regularized(e),
        }
    }
}

/// Output of `lce fit`: the fitted operator with its diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LceResultDoc {
    pub schema: String,
    /// Slope, row-major `dim_u × dim_v`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub regime: RegimeDoc,
    pub compat_residual: f64,
    pub rank_used: usize,
    /// Value of the empirical functional on the training law; absent where
    /// no training law is at hand (embedded operator of a model document).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub functional_value: Option<f64>,
}

impl LceResultDoc {
    pub fn new(fit: &LceResult, functional_value: Option<f64>) -> Self {
        Self {
            schema: SCHEMA.into(),
            a: matrix_to_rows(&fit.gamma.a),
            b: fit.gamma.b.iter().copied().collect(),
            regime: fit.regime.into(),
            compat_residual: fit.compat_residual,
            rank_used: fit.rank_used,
            functional_value,
        }
    }

    pub fn operator(&self) -> Result<AffineOperator, CliError> {
        check_schema(&self.schema)?;
        AffineOperator::new(rows_to_matrix(&self.a)?, Vector::from_vec(self.b.clone()))
            .map_err(CliError::from)
    }
}

/// Serialised affine operator field plus the per-atom table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LccDoc {
    pub schema: String,
    /// Field value at `v_offset` (equals the ALCC), row-major.
    pub base: Vec<Vec<f64>>,
    pub v_offset: Vec<f64>,
    /// One `dim_u × dim_w` matrix per `v`-coordinate.
    pub slope: Vec<Vec<Vec<f64>>>,
    pub atoms: Vec<LccAtomRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LccAtomRow {
    pub v: Vec<f64>,
    pub value: Vec<Vec<f64>>,
}

impl LccDoc {
    pub fn new(field: &AffineOperatorField, atoms: &[(Vector, Matrix)]) -> Self {
        Self {
            schema: SCHEMA.into(),
            base: matrix_to_rows(&field.base),
            v_offset: field.v_offset.iter().copied().collect(),
            slope: field.slope.iter().map(matrix_to_rows).collect(),
            atoms: atoms
                .iter()
                .map(|(v, m)| LccAtomRow {
                    v: v.iter().copied().collect(),
                    value: matrix_to_rows(m),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum KernelSpecDoc {
    GaussianRbf { lengthscale: f64 },
    Linear,
    Polynomial { degree: u32, offset: f64 },
}

impl From<&KernelSpec> for KernelSpecDoc {
    fn from(k: &KernelSpec) -> Self {
        match k {
            KernelSpec::GaussianRbf { lengthscale } => KernelSpecDoc::GaussianRbf {
                lengthscale: *lengthscale,
            },
            KernelSpec::Linear => KernelSpecDoc::Linear,
            KernelSpec::Polynomial { degree, offset } => KernelSpecDoc::Polynomial {
                degree: *degree,
                offset: *offset,
            },
        }
    }
}

impl From<&KernelSpecDoc> for KernelSpec {
    fn from(k: &KernelSpecDoc) -> Self {
        match k {
            KernelSpecDoc::GaussianRbf { lengthscale } => KernelSpec::GaussianRbf {
                lengthscale: *lengthscale,
            },
            KernelSpecDoc::Linear => KernelSpec::Linear,
            KernelSpecDoc::Polynomial { degree, offset } => KernelSpec::Polynomial {
                degree: *degree,
                offset: *offset,
            },
        }
    }
}

/// Persisted conditional mean embedding model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CmeModelDoc {
    pub schema: String,
    pub x_points: Vec<Vec<f64>>,
    pub y_points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub kernel_x: KernelSpecDoc,
    pub kernel_y: KernelSpecDoc,
    pub eps: f64,
    pub factor_x: Vec<Vec<f64>>,
    pub factor_y: Vec<Vec<f64>>,
    pub operator: LceResultDoc,
    pub tol_rank: f64,
    pub tol_res: f64,
}

impl CmeModelDoc {
    pub fn new(model: &CmeModel) -> Self {
        Self {
            schema: SCHEMA.into(),
            x_points: vectors_to_rows(&model.x_points),
            y_points: vectors_to_rows(&model.y_points),
            weights: model.weights.clone(),
            kernel_x: (&model.k_spec).into(),
            kernel_y: (&model.l_spec).into(),
            eps: model.eps,
            factor_x: matrix_to_rows(&model.factor_x),
            factor_y: matrix_to_rows(&model.factor_y),
            operator: LceResultDoc::new(&model.lce, None),
            tol_rank: model.tolerance().rank_rel,
            tol_res: model.tolerance().residual_abs,
        }
    }

    pub fn into_model(&self) -> Result<CmeModel, CliError> {
        check_schema(&self.schema)?;
        let gamma = self.operator.operator()?;
        let lce = LceResult {
            gamma,
            regime: self.operator.regime.clone().into(),
            compat_residual: self.operator.compat_residual,
            rank_used: self.operator.rank_used,
        };
        let tol = Tolerance::new(self.tol_rank, self.tol_res)?;
        Ok(CmeModel::from_parts(
            rows_to_vectors(&self.x_points),
            rows_to_vectors(&self.y_points),
            self.weights.clone(),
            (&self.kernel_x).into(),
            (&self.kernel_y).into(),
            self.eps,
            rows_to_matrix(&self.factor_x)?,
            rows_to_matrix(&self.factor_y)?,
            lce,
            tol,
        ))
    }
}

/// Input document for `gaussian condition`: joint measure over `(U, V)`
/// with the `U` block first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianJointDoc {
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    pub u_dim: usize,
}

impl GaussianJointDoc {
    pub fn measure(&self, tol: &Tolerance) -> Result<GaussianMeasure, CliError> {
        GaussianMeasure::new(
            Vector::from_vec(self.mean.clone()),
            rows_to_matrix(&self.cov)?,
            tol,
        )
        .map_err(CliError::from)
    }
}

/// Input document for `gaussian sample`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianMeasureDoc {
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

impl GaussianMeasureDoc {
    pub fn measure(&self, tol: &Tolerance) -> Result<GaussianMeasure, CliError> {
        GaussianMeasure::new(
            Vector::from_vec(self.mean.clone()),
            rows_to_matrix(&self.cov)?,
            tol,
        )
        .map_err(CliError::from)
    }
}

/// Output of `gaussian condition`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionalGaussianDoc {
    pub schema: String,
    pub mean_a: Vec<Vec<f64>>,
    pub mean_b: Vec<f64>,
    pub cond_cov: Vec<Vec<f64>>,
}

impl ConditionalGaussianDoc {
    pub fn new(c: &ConditionalGaussian) -> Self {
        Self {
            schema: SCHEMA.into(),
            mean_a: matrix_to_rows(&c.mean_map.a),
            mean_b: c.mean_map.b.iter().copied().collect(),
            cond_cov: matrix_to_rows(&c.cond_cov),
        }
    }
}

/// Generic column table for `--format json` outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableDoc {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Canonical JSON serialisation: pretty-printed, trailing newline,
/// shortest-round-trip number rendering.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable document");
    s.push('\n');
    s
}

pub fn from_json_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::parse(Some(e.line()), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_wire_format_is_stable() {
        assert_eq!(
            serde_json::to_string(&RegimeDoc::Compatible).unwrap(),
            r#""compatible""#
        );
        assert_eq!(
            serde_json::to_string(&RegimeDoc::Truncated(3)).unwrap(),
            r#"{"truncated":3}"#
        );
        assert_eq!(
            serde_json::to_string(&RegimeDoc::Regularized(0.5)).unwrap(),
            r#"{"regularized":0.5}"#
        );
        let r: RegimeDoc = serde_json::from_str(r#"{"regularized":1e-6}"#).unwrap();
        assert_eq!(r, RegimeDoc::Regularized(1e-6));
    }

    #[test]
    fn kernel_wire_format_is_stable() {
        assert_eq!(
            serde_json::to_string(&KernelSpecDoc::GaussianRbf { lengthscale: 2.0 }).unwrap(),
            r#"{"family":"gaussian-rbf","lengthscale":2.0}"#
        );
        assert_eq!(
            serde_json::to_string(&KernelSpecDoc::Linear).unwrap(),
            r#"{"family":"linear"}"#
        );
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = Matrix::from_fn(3, 2, |i, j| (i as f64 + 0.1) / (j as f64 + 0.7));
        let rows = matrix_to_rows(&m);
        let back = rows_to_matrix(&rows).unwrap();
        assert_eq!(m, back);
        assert!(rows_to_matrix(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
