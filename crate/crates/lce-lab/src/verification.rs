//! Independent oracles and exactly-solvable fixtures.
//!
//! On a finite discrete law the conditional expectation function and the
//! conditional covariance have closed forms: group atoms with identical
//! conditioning value and take weighted means/covariances per group.
//! [`exact_cef`] and [`exact_ccov`] implement that grouping (exact bitwise
//! equality of `v` coordinates) and serve as ground truth for the affine
//! estimators, which can only ever match them when the truth happens to be
//! affine.
//!
//! [`least_squares_oracle`] solves the same affine minimisation as
//! [`crate::lce::lce_compatible`] through a deliberately different route —
//! stacked design matrix with an intercept column, normal equations solved
//! by a pseudo-inverse of the design Gram — so the two can be played against
//! each other.
//!
//! [`fixtures`] returns the small laws with hand-computable answers used by
//! the acceptance suite and the `paper-examples` CLI subcommand: a
//! two-level conditional-variance example, the counterexamples showing which
//! properties of exact conditioning the affine theory loses (monotonicity,
//! towers, Fatou, dominated convergence, `Lᵖ`-contractivity, sign of the
//! conditional covariance), each reduced to literal numeric facts.

use std::collections::HashMap;

use crate::lce::{self, Regime};
use crate::linalg::{pseudo_inverse, Matrix, Tolerance, Vector};
use crate::moments::{AffineOperator, FiniteJointDistribution};
use crate::{Error, Result};

/// One row of a conditional table: a distinct conditioning value, the
/// conditional value attached to it, and the group's probability mass.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEntry<T> {
    pub v: Vector,
    pub value: T,
    pub prob: f64,
}

/// Conditional expectation/covariance of a discrete law, one entry per
/// distinct conditioning value (first-occurrence order).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable<T> {
    pub entries: Vec<ConditionalEntry<T>>,
}

impl<T> ConditionalTable<T> {
    /// Entry whose conditioning value matches `v` bitwise.
    pub fn lookup(&self, v: &Vector) -> Option<&ConditionalEntry<T>> {
        let key = bit_key(v);
        self.entries.iter().find(|e| bit_key(&e.v) == key)
    }
}

fn bit_key(v: &Vector) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

fn group_atoms(dist: &FiniteJointDistribution) -> Vec<(Vector, Vec<usize>, f64)> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut groups: Vec<(Vector, Vec<usize>, f64)> = Vec::new();
    for (j, ((v, _), &w)) in dist.atoms().iter().zip(dist.weights()).enumerate() {
        let key = bit_key(v);
        match index.get(&key) {
            Some(&g) => {
                groups[g].1.push(j);
                groups[g].2 += w;
            }
            None => {
                index.insert(key, groups.len());
                groups.push((v.clone(), vec![j], w));
            }
        }
    }
    groups
}

/// Exact conditional expectation function on a discrete law.
///
/// Atoms are grouped by exactly-equal `v`; each entry holds the weighted
/// mean of `u` over its group.
pub fn exact_cef(dist: &FiniteJointDistribution) -> ConditionalTable<Vector> {
    let entries = group_atoms(dist)
        .into_iter()
        .map(|(v, members, prob)| {
            let mut mean = Vector::zeros(dist.dim_u());
            for &j in &members {
                mean.axpy(dist.weights()[j] / prob, &dist.atoms()[j].1, 1.0);
            }
            ConditionalEntry { v, value: mean, prob }
        })
        .collect();
    ConditionalTable { entries }
}

/// Exact conditional covariance on a discrete law: per `v`-group, the
/// weighted covariance of `u`.
pub fn exact_ccov(dist: &FiniteJointDistribution) -> ConditionalTable<Matrix> {
    let entries = group_atoms(dist)
        .into_iter()
        .map(|(v, members, prob)| {
            let mut mean = Vector::zeros(dist.dim_u());
            for &j in &members {
                mean.axpy(dist.weights()[j] / prob, &dist.atoms()[j].1, 1.0);
            }
            let mut cov = Matrix::zeros(dist.dim_u(), dist.dim_u());
            for &j in &members {
                let d = &dist.atoms()[j].1 - &mean;
                cov.ger(dist.weights()[j] / prob, &d, &d, 1.0);
            }
            ConditionalEntry { v, value: cov, prob }
        })
        .collect();
    ConditionalTable { entries }
}

/// Minimal-norm weighted affine least-squares fit of `u` on `v`.
///
/// Solves the normal equations of the stacked design `[1, vᵀ]` with a
/// pseudo-inverse of the design Gram — a code path disjoint from the
/// conditioning formulas in [`crate::lce`].
pub fn least_squares_oracle(dist: &FiniteJointDistribution) -> Result<AffineOperator> {
    let (dv, du) = (dist.dim_v(), dist.dim_u());
    let mut gram = Matrix::zeros(dv + 1, dv + 1);
    let mut rhs = Matrix::zeros(dv + 1, du);
    let mut x = Vector::zeros(dv + 1);
    for ((v, u), &w) in dist.atoms().iter().zip(dist.weights()) {
        x[0] = 1.0;
        x.rows_mut(1, dv).copy_from(v);
        gram.ger(w, &x, &x, 1.0);
        for c in 0..du {
            rhs.column_mut(c).axpy(w * u[c], &x, 1.0);
        }
    }
    let theta = pseudo_inverse(&gram, &Tolerance::default())? * rhs;
    let b = theta.row(0).transpose();
    let a = theta.rows(1, dv).transpose();
    AffineOperator::new(a, b)
}

/// One literal numeric fact checked by a fixture.
#[derive(Debug, Clone)]
pub struct FixtureCheck {
    pub label: String,
    pub expected: f64,
    pub computed: f64,
    /// Absolute tolerance on `computed − expected`.
    pub tol: f64,
}

impl FixtureCheck {
    pub fn deviation(&self) -> f64 {
        (self.computed - self.expected).abs()
    }

    pub fn passed(&self) -> bool {
        self.deviation() <= self.tol
    }
}

/// Outcome of evaluating one fixture.
#[derive(Debug, Clone)]
pub struct FixtureReport {
    pub name: String,
    pub checks: Vec<FixtureCheck>,
}

impl FixtureReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(FixtureCheck::deviation).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(FixtureCheck::passed)
    }
}

/// Parameters distinguishing the fixture variants.
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureKind {
    /// Four-atom law whose conditional mean is affine (identically zero) and
    /// whose conditional variance takes two values.
    Example31,
    /// `V` uniform on `{−1, 0, 1}`, `U₂ = |V|`: the affine conditional mean
    /// is the constant `2/3`, defeating monotonicity, the triangle
    /// inequality, Jensen, and pulling out known factors.
    Monotonicity,
    /// `W = |V|`: conditioning the constant `2/3` on `W` stays `2/3` and
    /// differs from the direct affine conditional mean `W` itself.
    WrongTower,
    /// Alternating targets whose affine conditional means oscillate; the
    /// pointwise lim inf dips below the affine mean of the lim inf.
    Fatou,
    /// Odd power-law tails `V(ω) = ±(1∓ω)^{−α}` on `[−1,1]` with targets
    /// `U_k = ±(1∓ω)^{−2α}` on bands `1/(2k) ≤ 1∓ω ≤ 1/k`: the
    /// least-squares slope grows like `k^β`, so no dominated-convergence
    /// statement with an `L¹` bound can hold.
    DctL1 { eps: f64, grid: usize, ks: Vec<u32> },
    /// Four-atom laws whose affine conditional means expand `Lᵖ` norms for
    /// `p ≠ 2`; `f₁ < 0` (resp. `f₂ < 0`) certifies the violation for
    /// `p < 2` (resp. `p > 2`).
    Contractivity {
        slope_eps: f64,
        sign_eps: f64,
        p_low: f64,
        p_high: f64,
    },
    /// Six-atom law whose conditional-covariance field
    /// `½(N²−1)v + ⅓(N²+2)` takes a negative value at `v = −1`.
    NegativeLcc { n: f64 },
}

/// A named fixture with exactly-known expected values.
#[derive(Debug, Clone)]
pub struct PaperFixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub kind: FixtureKind,
}

/// Contractivity defect for `p < 2`: `f₁(ε) = (1+ε²)ᵖ − (1+εᵖ)`.
pub fn contractivity_f1(eps: f64, p: f64) -> f64 {
    (1.0 + eps * eps).powf(p) - (1.0 + eps.powf(p))
}

/// Contractivity defect for `p > 2`:
/// `f₂(ε) = (1+ε²)ᵖ(1+2ᵖεᵖ) − (1+2ε²)ᵖ(1+εᵖ)`.
pub fn contractivity_f2(eps: f64, p: f64) -> f64 {
    (1.0 + eps * eps).powf(p) * (1.0 + 2f64.powf(p) * eps.powf(p))
        - (1.0 + 2.0 * eps * eps).powf(p) * (1.0 + eps.powf(p))
}

/// Closed-form slope `a_k = ((2^β − 1) ε / (β (1+ε))) k^β` with
/// `β = 3α − 1`, `α = 1/(2+2ε)`.
pub fn dct_slope_formula(eps: f64, k: u32) -> f64 {
    let alpha = 1.0 / (2.0 + 2.0 * eps);
    let beta = 3.0 * alpha - 1.0;
    (2f64.powf(beta) - 1.0) * eps / (beta * (1.0 + eps)) * (k as f64).powf(beta)
}

/// Discretised least-squares slope of `U_k` on `V` for the power-tail law.
///
/// Midpoint quadrature on a uniform grid over `[−1, 1]`; the two cells
/// touching the endpoint singularity carry the exact cell root-mean-square
/// of the tail so that the discrete second moment of `V` matches the
/// integral. Requires `k < grid/4` so the `U_k` bands stay clear of the
/// corrected cells.
pub fn dct_slope_discretized(eps: f64, k: u32, grid: usize) -> Result<f64> {
    if eps.is_nan() || eps <= 0.0 || grid < 8 || k == 0 {
        return Err(Error::OutOfRange(format!(
            "need eps > 0, grid ≥ 8, k ≥ 1; got eps={eps}, grid={grid}, k={k}"
        )));
    }
    if (k as usize) * 4 >= grid {
        return Err(Error::OutOfRange(format!(
            "band index k={k} too large for grid {grid}"
        )));
    }
    let alpha = 1.0 / (2.0 + 2.0 * eps);
    let h = 2.0 / grid as f64;
    let w = 1.0 / grid as f64;

    // moments of V: exact odd symmetry makes the mean vanish, so accumulate
    // the second moment over the left branch and double it
    let rms_first = h.powf(-alpha) / (1.0 - 2.0 * alpha).sqrt();
    let mut sv2 = w * rms_first * rms_first;
    let half = grid / 2;
    for j in 1..half {
        let t = (j as f64 + 0.5) * h;
        let v = t.powf(-alpha);
        sv2 += w * v * v;
    }
    if grid % 2 == 1 {
        let t = (half as f64 + 0.5) * h; // centre cell, counted once below
        let v = t.powf(-alpha);
        sv2 += 0.5 * w * v * v;
    }
    sv2 *= 2.0;

    // cross moment over the band 1/(2k) ≤ t ≤ 1/k (left branch, doubled);
    // u and v are both odd so the product is even
    let (lo, hi) = (1.0 / (2.0 * k as f64), 1.0 / k as f64);
    let j_lo = (lo / h - 0.5).ceil().max(1.0) as usize;
    let j_hi = ((hi / h - 0.5).floor() as usize).min(half.saturating_sub(1));
    let mut svu = 0.0;
    for j in j_lo..=j_hi {
        let t = (j as f64 + 0.5) * h;
        if t < lo || t > hi {
            continue;
        }
        svu += w * t.powf(-alpha) * t.powf(-2.0 * alpha);
    }
    svu *= 2.0;

    // means are zero by symmetry; slope = Cov(V, U_k) / Var(V)
    Ok(svu / sv2)
}

/// Build the discretised power-tail law `(V, U_k)` at the given grid.
pub fn dct_distribution(eps: f64, k: u32, grid: usize) -> Result<FiniteJointDistribution> {
    if eps.is_nan() || eps <= 0.0 || grid < 8 || k == 0 || (k as usize) * 4 >= grid {
        return Err(Error::OutOfRange(format!(
            "invalid power-tail parameters eps={eps}, k={k}, grid={grid}"
        )));
    }
    let alpha = 1.0 / (2.0 + 2.0 * eps);
    let h = 2.0 / grid as f64;
    let rms = h.powf(-alpha) / (1.0 - 2.0 * alpha).sqrt();
    let (lo, hi) = (1.0 / (2.0 * k as f64), 1.0 / k as f64);
    let rows = (0..grid)
        .map(|j| {
            let omega = -1.0 + (j as f64 + 0.5) * h;
            let (t, sign) = if omega <= 0.0 {
                (1.0 + omega, 1.0)
            } else {
                (1.0 - omega, -1.0)
            };
            let v = if j == 0 || j == grid - 1 { rms } else { t.powf(-alpha) };
            let u = if t >= lo && t <= hi { t.powf(-2.0 * alpha) } else { 0.0 };
            (
                Vector::from_vec(vec![sign * v]),
                Vector::from_vec(vec![sign * u]),
            )
        })
        .collect();
    FiniteJointDistribution::uniform(rows)
}

fn scalar(dist: &FiniteJointDistribution, tol: &Tolerance) -> Result<AffineOperator> {
    Ok(lce::lce_compatible(&dist.empirical_moments(true), tol)?.gamma)
}

impl PaperFixture {
    /// The discrete law a fixture conditions on (for the quadrature fixture:
    /// the law of `(V, U_k)` at the first configured `k`).
    pub fn distribution(&self) -> Result<FiniteJointDistribution> {
        match &self.kind {
            FixtureKind::Example31 => FiniteJointDistribution::scalar_uniform(
                &[0.0, 0.0, 1.0, 1.0],
                &[1.0, -1.0, 2.0, -2.0],
            ),
            FixtureKind::Monotonicity | FixtureKind::WrongTower => {
                FiniteJointDistribution::scalar_uniform(&[-1.0, 0.0, 1.0], &[1.0, 0.0, 1.0])
            }
            FixtureKind::Fatou => {
                FiniteJointDistribution::scalar_uniform(&[-1.0, 0.0, 1.0], &[0.0, 0.0, 1.0])
            }
            FixtureKind::DctL1 { eps, grid, ks } => {
                dct_distribution(*eps, *ks.first().unwrap_or(&3), *grid)
            }
            FixtureKind::Contractivity { slope_eps, .. } => {
                let e = *slope_eps;
                FiniteJointDistribution::scalar_uniform(&[-1.0, -e, e, 1.0], &[-1.0, 0.0, 0.0, 1.0])
            }
            FixtureKind::NegativeLcc { n } => FiniteJointDistribution::scalar_uniform(
                &[-1.0, -1.0, 0.0, 0.0, 1.0, 1.0],
                &[1.0, -1.0, 1.0, -1.0, *n, -*n],
            ),
        }
    }

    /// Override a named parameter (`N`, `eps`, `grid`, `p`).
    pub fn set_param(&mut self, key: &str, value: f64) -> Result<()> {
        match (&mut self.kind, key) {
            (FixtureKind::NegativeLcc { n }, "N" | "n") => *n = value,
            (FixtureKind::DctL1 { eps, .. }, "eps") => *eps = value,
            (FixtureKind::DctL1 { grid, .. }, "grid") => *grid = value as usize,
            (FixtureKind::Contractivity { slope_eps, .. }, "eps") => *slope_eps = value,
            (FixtureKind::Contractivity { sign_eps, .. }, "sign_eps") => *sign_eps = value,
            // the f₁ sign fact concerns p < 2, the f₂ one p > 2
            (FixtureKind::Contractivity { p_low, .. }, "p") if value < 2.0 => *p_low = value,
            (FixtureKind::Contractivity { p_high, .. }, "p") => *p_high = value,
            _ => {
                return Err(Error::OutOfRange(format!(
                    "fixture {} has no parameter {key}",
                    self.name
                )))
            }
        }
        Ok(())
    }

    /// Run the fixture against the library and report computed vs expected.
    pub fn evaluate(&self) -> Result<FixtureReport> {
        let tol = Tolerance::default();
        let mut checks = Vec::new();
        let mut push = |label: &str, expected: f64, computed: f64, t: f64| {
            checks.push(FixtureCheck {
                label: label.to_string(),
                expected,
                computed,
                tol: t,
            });
        };

        match &self.kind {
            FixtureKind::Example31 => {
                let d = self.distribution()?;
                let gamma = scalar(&d, &tol)?;
                push("lce slope", 0.0, gamma.a[(0, 0)], 1e-12);
                push("lce intercept", 0.0, gamma.b[0], 1e-12);
                let cef = exact_cef(&d);
                push("cef(v=0)", 0.0, cef.entries[0].value[0], 1e-12);
                push("cef(v=1)", 0.0, cef.entries[1].value[0], 1e-12);
                let ccov = exact_ccov(&d);
                push("cond var(v=0)", 1.0, ccov.entries[0].value[(0, 0)], 1e-12);
                push("cond var(v=1)", 4.0, ccov.entries[1].value[(0, 0)], 1e-12);
                let field = lce::lcc(&d, None, Regime::Compatible, &tol)?;
                push("lcc(v=0)", 1.0, field.eval(&Vector::from_vec(vec![0.0]))?[(0, 0)], 1e-12);
                push("lcc(v=1)", 4.0, field.eval(&Vector::from_vec(vec![1.0]))?[(0, 0)], 1e-12);
                push("alcc", 2.5, field.base[(0, 0)], 1e-12);
            }
            FixtureKind::Monotonicity => {
                let d = self.distribution()?;
                let g2 = scalar(&d, &tol)?;
                push("lce slope (|V|)", 0.0, g2.a[(0, 0)], 1e-10);
                push("lce intercept (|V|)", 2.0 / 3.0, g2.b[0], 1e-10);
                let d1 = FiniteJointDistribution::scalar_uniform(
                    &[-1.0, 0.0, 1.0],
                    &[-1.0, 0.0, 1.0],
                )?;
                let g1 = scalar(&d1, &tol)?;
                push("lce slope (V)", 1.0, g1.a[(0, 0)], 1e-10);
                push("lce intercept (V)", 0.0, g1.b[0], 1e-10);
                // |V| ≥ V pointwise yet the conditional means cross at v = 1
                let defect = g2.apply(&Vector::from_vec(vec![1.0]))[0]
                    - g1.apply(&Vector::from_vec(vec![1.0]))[0];
                push("monotonicity defect at v=1", -1.0 / 3.0, defect, 1e-10);
            }
            FixtureKind::WrongTower => {
                let d = self.distribution()?;
                let inner = scalar(&d, &tol)?; // E^A[|V| given V] ≡ 2/3
                // condition the constant on W = |V|
                let w_law = FiniteJointDistribution::scalar_uniform(
                    &[1.0, 0.0, 1.0],
                    &[
                        inner.apply(&Vector::from_vec(vec![-1.0]))[0],
                        inner.apply(&Vector::from_vec(vec![0.0]))[0],
                        inner.apply(&Vector::from_vec(vec![1.0]))[0],
                    ],
                )?;
                let outer = scalar(&w_law, &tol)?;
                push("nested lce slope", 0.0, outer.a[(0, 0)], 1e-10);
                push("nested lce intercept", 2.0 / 3.0, outer.b[0], 1e-10);
                let direct_law = FiniteJointDistribution::scalar_uniform(
                    &[1.0, 0.0, 1.0],
                    &[1.0, 0.0, 1.0],
                )?;
                let direct = scalar(&direct_law, &tol)?;
                push("direct lce slope", 1.0, direct.a[(0, 0)], 1e-10);
                push("direct lce intercept", 0.0, direct.b[0], 1e-10);
                let defect = outer.apply(&Vector::from_vec(vec![1.0]))[0]
                    - direct.apply(&Vector::from_vec(vec![1.0]))[0];
                push("tower defect at w=1", -1.0 / 3.0, defect, 1e-10);
            }
            FixtureKind::Fatou => {
                let odd = self.distribution()?; // U_odd = (0, 0, 1)
                let even = FiniteJointDistribution::scalar_uniform(
                    &[-1.0, 0.0, 1.0],
                    &[1.0, 0.0, 0.0],
                )?;
                let g_odd = scalar(&odd, &tol)?;
                let g_even = scalar(&even, &tol)?;
                let liminf = |v: f64| {
                    let x = Vector::from_vec(vec![v]);
                    g_odd.apply(&x)[0].min(g_even.apply(&x)[0])
                };
                push("liminf lce at v=-1", -1.0 / 6.0, liminf(-1.0), 1e-10);
                push("liminf lce at v=0", 1.0 / 3.0, liminf(0.0), 1e-10);
                push("liminf lce at v=1", -1.0 / 6.0, liminf(1.0), 1e-10);
                // the pointwise lim inf of the targets is 0, whose LCE is 0
                let zero = FiniteJointDistribution::scalar_uniform(
                    &[-1.0, 0.0, 1.0],
                    &[0.0, 0.0, 0.0],
                )?;
                let g0 = scalar(&zero, &tol)?;
                push("lce of liminf at v=-1", 0.0, g0.apply(&Vector::from_vec(vec![-1.0]))[0], 1e-12);
            }
            FixtureKind::DctL1 { eps, grid, ks } => {
                let mut prev = f64::NEG_INFINITY;
                for &k in ks {
                    let expected = dct_slope_formula(*eps, k);
                    let computed = dct_slope_discretized(*eps, k, *grid)?;
                    push(
                        &format!("slope a_{k}"),
                        expected,
                        computed,
                        0.01 * expected.abs(),
                    );
                    push(&format!("a_{k} increases"), 1.0, (computed > prev) as u8 as f64, 0.0);
                    prev = computed;
                }
            }
            FixtureKind::Contractivity {
                slope_eps,
                sign_eps,
                p_low,
                p_high,
            } => {
                let e = *slope_eps;
                let v = [-1.0, -e, e, 1.0];
                let u1 = [-1.0, 0.0, 0.0, 1.0];
                let u2 = [-1.0, -2.0 * e, 2.0 * e, 1.0];
                let d1 = FiniteJointDistribution::scalar_uniform(&v, &u1)?;
                let d2 = FiniteJointDistribution::scalar_uniform(&v, &u2)?;
                let g1 = least_squares_oracle(&d1)?;
                let g2 = least_squares_oracle(&d2)?;
                push("slope a1", 1.0 / (1.0 + e * e), g1.a[(0, 0)], 1e-12);
                push("slope a2", (1.0 + 2.0 * e * e) / (1.0 + e * e), g2.a[(0, 0)], 1e-12);
                push("intercept b1", 0.0, g1.b[0], 1e-12);
                push("intercept b2", 0.0, g2.b[0], 1e-12);
                // hand-reduced rational values at ε = 0.05, p = 1 and p = 3
                let se = *sign_eps;
                if (se - 0.05).abs() < 1e-15 && (*p_low - 1.0).abs() < 1e-15 {
                    push("f1(0.05; p=1)", -0.0475, contractivity_f1(se, *p_low), 1e-12);
                } else {
                    push(
                        &format!("f1({se}; p={p_low}) negative"),
                        1.0,
                        (contractivity_f1(se, *p_low) < 0.0) as u8 as f64,
                        0.0,
                    );
                }
                if (se - 0.05).abs() < 1e-15 && (*p_high - 3.0).abs() < 1e-15 {
                    push("f2(0.05; p=3)", -0.006675725, contractivity_f2(se, *p_high), 1e-12);
                } else {
                    push(
                        &format!("f2({se}; p={p_high}) negative"),
                        1.0,
                        (contractivity_f2(se, *p_high) < 0.0) as u8 as f64,
                        0.0,
                    );
                }
            }
            FixtureKind::NegativeLcc { n } => {
                let d = self.distribution()?;
                let gamma = scalar(&d, &tol)?;
                push("lce slope", 0.0, gamma.a[(0, 0)], 1e-10);
                push("lce intercept", 0.0, gamma.b[0], 1e-10);
                let field = lce::lcc(&d, None, Regime::Compatible, &tol)?;
                let at = |x: f64| -> Result<f64> {
                    Ok(field.eval(&Vector::from_vec(vec![x]))?[(0, 0)])
                };
                // field is ½(N²−1)v + ⅓(N²+2)
                push("lcc slope", 0.5 * (n * n - 1.0), field.slope[0][(0, 0)], 1e-10);
                push("lcc at v=0", (n * n + 2.0) / 3.0, at(0.0)?, 1e-10);
                push("lcc at v=-1", (7.0 - n * n) / 6.0, at(-1.0)?, 1e-10);
            }
        }
        Ok(FixtureReport {
            name: self.name.to_string(),
            checks,
        })
    }
}

/// The built-in fixtures with their default parameters.
pub fn fixtures() -> Vec<PaperFixture> {
    vec![
        PaperFixture {
            name: "example_3_1",
            summary: "affine conditional mean ≡ 0, conditional variance 1 and 4, average 5/2",
            kind: FixtureKind::Example31,
        },
        PaperFixture {
            name: "monotonicity",
            summary: "affine conditional mean of |V| is the constant 2/3; monotonicity, triangle, Jensen and pull-out all fail",
            kind: FixtureKind::Monotonicity,
        },
        PaperFixture {
            name: "wrong_tower",
            summary: "re-conditioning the constant 2/3 on W = |V| does not recover the direct estimate W",
            kind: FixtureKind::WrongTower,
        },
        PaperFixture {
            name: "fatou",
            summary: "pointwise lim inf of the affine conditional means dips to −1/6 while the mean of the lim inf is 0",
            kind: FixtureKind::Fatou,
        },
        PaperFixture {
            name: "dct_l1",
            summary: "least-squares slopes of shrinking power-law bands grow like k^β, defeating an L¹ dominated-convergence bound",
            kind: FixtureKind::DctL1 {
                eps: 0.25,
                grid: 1_000_000,
                ks: vec![3, 10, 70],
            },
        },
        PaperFixture {
            name: "contractivity",
            summary: "affine conditioning expands Lᵖ norms for p ≠ 2 (f₁ < 0 for p < 2, f₂ < 0 for p > 2)",
            kind: FixtureKind::Contractivity {
                slope_eps: 0.3,
                sign_eps: 0.05,
                p_low: 1.0,
                p_high: 3.0,
            },
        },
        PaperFixture {
            name: "negative_lcc",
            summary: "conditional-covariance field ½(N²−1)v + ⅓(N²+2) is negative at v = −1 for N = 3",
            kind: FixtureKind::NegativeLcc { n: 3.0 },
        },
    ]
}
