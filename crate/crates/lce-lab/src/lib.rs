//! Bayes-linear conditioning in finite-dimensional coordinate Hilbert spaces.
//!
//! Everything in this crate revolves around the best affine approximation of a
//! conditional expectation. Given square-integrable random vectors `U` and `V`
//! with means `μ_U`, `μ_V`, covariances `C_U`, `C_V` and cross-covariance
//! `C_UV`, the *linear conditional expectation* (LCE) of `U` given `V` is the
//! affine map
//!
//! ```text
//! γ(v) = μ_U + C_UV C_V† (v − μ_V)
//! ```
//!
//! that minimises `E‖U − γ(V)‖²` among affine maps. The crate computes this
//! map with a Moore–Penrose pseudo-inverse (compatible case), through
//! rank-`n` spectral truncations of `C_V`, and in Tikhonov-regularised form
//! `C_UV (C_V + εI)⁻¹`, together with the associated conditional-covariance
//! objects:
//!
//! * the *ALCC* `C_UW − M_VU* M_VW` (the classical "adjusted covariance",
//!   always PSD for `W = U`), and
//! * the *LCC*, an affine operator field `v ↦ Cov[U,W|V=v]` obtained as the
//!   LCE of the residual product, which may take negative values.
//!
//! Two applications ship with the library: kernel conditional mean embeddings
//! ([`cme`]), which realise conditioning of feature-embedded variables as an
//! LCE, and Gaussian conditioning ([`gaussian`]), where the LCE is exact and
//! the ALCC equals the conditional covariance.
//!
//! The [`verification`] module holds independent oracles (exact conditional
//! tables on discrete laws, an affine least-squares fit through a disjoint
//! code path) and a set of exactly-solvable fixtures used by the acceptance
//! suite and the `paper-examples` CLI subcommand.

pub mod cme;
pub mod gaussian;
pub mod lce;
pub mod linalg;
pub mod moments;
pub mod synth;
pub mod verification;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

pub use lce::{AffineOperatorField, LceResult, Regime, TripleMoments};
pub use linalg::{Matrix, SpectralDecomposition, Tolerance, Vector};
pub use moments::{AffineOperator, FiniteJointDistribution, JointMoments, Side};
