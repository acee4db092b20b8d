//! Seeded generators of finite discrete laws for the randomized suites.
//!
//! Every generator is a pure function of its seed (ChaCha20), so test runs
//! are reproducible. The generators cover the structures the invariants
//! need: generic laws, laws with planted duplicate conditioning values,
//! product laws with independent blocks, laws whose `V`-coordinates are
//! independent with distinct variances (the Karhunen–Loève structure behind
//! the truncation martingale), and high-dimensional laws with fast-decaying
//! spectra.

use rand::prelude::*;
use rand_chacha::ChaCha20Rng;

use crate::gaussian::GaussianMeasure;
use crate::linalg::{Matrix, Tolerance, Vector};
use crate::moments::FiniteJointDistribution;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Generic random law: atoms uniform in a box, optionally random weights,
/// `U` a random quadratic image of `V` plus noise.
pub fn law(seed: u64, dim_v: usize, dim_u: usize, atoms: usize, weighted: bool) -> FiniteJointDistribution {
    let mut r = rng(seed);
    let quad = Matrix::from_fn(dim_u, dim_v, |_, _| r.gen_range(-1.0..1.0));
    let lin = Matrix::from_fn(dim_u, dim_v, |_, _| r.gen_range(-1.0..1.0));
    let rows = (0..atoms)
        .map(|_| {
            let v = Vector::from_fn(dim_v, |_, _| r.gen_range(-1.5..1.5));
            let v2 = v.map(|x| x * x);
            let noise = Vector::from_fn(dim_u, |_, _| r.gen_range(-0.3..0.3));
            let u = &lin * &v + &quad * v2 + noise;
            (v, u)
        })
        .collect();
    let weights = weighted.then(|| (0..atoms).map(|_| r.gen_range(0.05..1.0)).collect());
    FiniteJointDistribution::from_rows(rows, weights).expect("synthetic law is valid")
}

/// Law whose `V`-coordinates are drawn from small per-coordinate grids, so
/// duplicate conditioning values occur and the exact conditional tables are
/// non-trivial.
pub fn gridded_law(seed: u64, dim_v: usize, dim_u: usize, atoms: usize, grid: usize) -> FiniteJointDistribution {
    let mut r = rng(seed);
    let levels: Vec<Vec<f64>> = (0..dim_v)
        .map(|_| (0..grid.max(2)).map(|_| r.gen_range(-1.0..1.0)).collect())
        .collect();
    let lin = Matrix::from_fn(dim_u, dim_v, |_, _| r.gen_range(-1.0..1.0));
    let rows = (0..atoms)
        .map(|_| {
            let v = Vector::from_fn(dim_v, |i, _| levels[i][r.gen_range(0..levels[i].len())]);
            let noise = Vector::from_fn(dim_u, |_, _| r.gen_range(-0.5..0.5));
            let u = &lin * v.map(|x| x.abs()) + noise;
            (v, u)
        })
        .collect();
    let weights = (0..atoms).map(|_| r.gen_range(0.1..1.0)).collect();
    FiniteJointDistribution::from_rows(rows, Some(weights)).expect("synthetic law is valid")
}

/// Product law: `V` and `U` independent, atoms on the product of two
/// supports with product weights.
pub fn product_law(seed: u64, dim_v: usize, dim_u: usize, nv: usize, nu: usize) -> FiniteJointDistribution {
    let mut r = rng(seed);
    let v_support: Vec<Vector> = (0..nv)
        .map(|_| Vector::from_fn(dim_v, |_, _| r.gen_range(-1.0..1.0)))
        .collect();
    let u_support: Vec<Vector> = (0..nu)
        .map(|_| Vector::from_fn(dim_u, |_, _| r.gen_range(-1.0..1.0)))
        .collect();
    let vw: Vec<f64> = (0..nv).map(|_| r.gen_range(0.1..1.0)).collect();
    let uw: Vec<f64> = (0..nu).map(|_| r.gen_range(0.1..1.0)).collect();
    let mut rows = Vec::with_capacity(nv * nu);
    let mut weights = Vec::with_capacity(nv * nu);
    for (v, wv) in v_support.iter().zip(&vw) {
        for (u, wu) in u_support.iter().zip(&uw) {
            rows.push((v.clone(), u.clone()));
            weights.push(wv * wu);
        }
    }
    FiniteJointDistribution::from_rows(rows, Some(weights)).expect("synthetic law is valid")
}

/// A law whose `V`-coordinates are independent with known, well-separated
/// variances (descending), together with those variances.
pub struct CoordinateLaw {
    pub dist: FiniteJointDistribution,
    /// Per-coordinate variances, strictly decreasing.
    pub coord_vars: Vec<f64>,
    /// Per-coordinate means of `V`.
    pub coord_means: Vec<f64>,
}

/// Build a product law over independent `V`-coordinates.
///
/// Coordinate `i` takes two or three values with mean `mᵢ` and variance
/// `σᵢ²`, the variances strictly decreasing with ratio ≥ 2 between
/// consecutive coordinates; `U` is a quadratic function of the coordinates.
/// This is exactly the structure under which conditioning on the top-`n`
/// coordinate block reproduces the rank-`n` truncated estimator.
pub fn independent_coordinate_law(seed: u64, dim_v: usize, dim_u: usize) -> CoordinateLaw {
    let mut r = rng(seed);
    // per-coordinate supports and probabilities
    let mut supports: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(dim_v);
    let mut coord_vars = Vec::with_capacity(dim_v);
    let mut coord_means = Vec::with_capacity(dim_v);
    for i in 0..dim_v {
        let target_sd = 1.5f64 * 0.6f64.powi(i as i32) * r.gen_range(0.9..1.1);
        let mean = r.gen_range(-0.5..0.5);
        let (values, probs) = if r.gen_bool(0.5) {
            // two-point: p·a + (1−p)·b = 0 around the mean
            let p: f64 = r.gen_range(0.25..0.75);
            let a = (target_sd * ((1.0 - p) / p).sqrt()).max(1e-3);
            let b = -p * a / (1.0 - p);
            (vec![mean + a, mean + b], vec![p, 1.0 - p])
        } else {
            // symmetric three-point
            let p: f64 = r.gen_range(0.2..0.4);
            let a = target_sd / (2.0 * p).sqrt();
            (vec![mean - a, mean, mean + a], vec![p, 1.0 - 2.0 * p, p])
        };
        let m: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
        let var: f64 = values
            .iter()
            .zip(&probs)
            .map(|(v, p)| p * (v - m) * (v - m))
            .sum();
        supports.push((values, probs));
        coord_vars.push(var);
        coord_means.push(m);
    }

    // cartesian product of the supports
    let mut vs: Vec<(Vector, f64)> = vec![(Vector::zeros(dim_v), 1.0)];
    for (i, (values, probs)) in supports.iter().enumerate() {
        let mut next = Vec::with_capacity(vs.len() * values.len());
        for (v, w) in &vs {
            for (val, p) in values.iter().zip(probs) {
                let mut nv = v.clone();
                nv[i] = *val;
                next.push((nv, w * p));
            }
        }
        vs = next;
    }

    let lin = Matrix::from_fn(dim_u, dim_v, |_, _| r.gen_range(-1.0..1.0));
    let quad = Matrix::from_fn(dim_u, dim_v, |_, _| r.gen_range(-0.5..0.5));
    let rows: Vec<_> = vs
        .iter()
        .map(|(v, _)| {
            let u = &lin * v + &quad * v.map(|x| x * x);
            (v.clone(), u)
        })
        .collect();
    let weights = vs.into_iter().map(|(_, w)| w).collect();
    let dist = FiniteJointDistribution::from_rows(rows, Some(weights)).expect("synthetic law is valid");
    CoordinateLaw {
        dist,
        coord_vars,
        coord_means,
    }
}

/// High-dimensional ill-conditioned law: empirical `C_V` spectrum decays
/// roughly like `i^{−decay}`.
pub fn decaying_spectrum_law(seed: u64, dim_v: usize, dim_u: usize, atoms: usize, decay: f64) -> FiniteJointDistribution {
    let mut r = rng(seed);
    let lin = Matrix::from_fn(dim_u, dim_v, |_, _| r.gen_range(-1.0..1.0));
    let rows = (0..atoms)
        .map(|_| {
            let v = Vector::from_fn(dim_v, |i, _| {
                let scale = ((i + 1) as f64).powf(-decay / 2.0);
                scale * r.gen_range(-1.7..1.7)
            });
            let noise = Vector::from_fn(dim_u, |_, _| r.gen_range(-0.1..0.1));
            let u = &lin * &v + noise;
            (v, u)
        })
        .collect();
    FiniteJointDistribution::uniform(rows).expect("synthetic law is valid")
}

/// Random joint Gaussian over `(U, V)` blocks with a well-conditioned
/// covariance.
pub fn random_gaussian_joint(seed: u64, dim_u: usize, dim_v: usize) -> GaussianMeasure {
    let mut r = rng(seed);
    let dim = dim_u + dim_v;
    let g = Matrix::from_fn(dim, dim, |_, _| r.gen_range(-1.0..1.0));
    let cov = &g * g.transpose() + Matrix::identity(dim, dim) * 0.3;
    let mean = Vector::from_fn(dim, |_, _| r.gen_range(-1.0..1.0));
    GaussianMeasure::new(mean, cov, &Tolerance::default()).expect("synthetic joint is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seed_deterministic() {
        assert_eq!(law(3, 2, 2, 10, true), law(3, 2, 2, 10, true));
        assert_ne!(law(3, 2, 2, 10, true), law(4, 2, 2, 10, true));
    }

    #[test]
    fn coordinate_law_has_independent_coordinates() {
        let cl = independent_coordinate_law(11, 3, 2);
        let m = cl.dist.empirical_moments(true);
        // off-diagonal covariance vanishes and variances match, descending
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(m.c_v[(i, j)].abs() < 1e-12);
                }
            }
            assert!((m.c_v[(i, i)] - cl.coord_vars[i]).abs() < 1e-10);
            assert!((m.mu_v[i] - cl.coord_means[i]).abs() < 1e-10);
        }
        for w in cl.coord_vars.windows(2) {
            assert!(w[0] > 1.2 * w[1], "variances not separated: {:?}", cl.coord_vars);
        }
    }

    #[test]
    fn product_law_has_zero_cross_covariance() {
        let d = product_law(5, 2, 3, 4, 5);
        let m = d.empirical_moments(true);
        assert!(m.c_uv.amax() < 1e-14);
    }

    #[test]
    fn decaying_law_is_ill_conditioned() {
        let d = decaying_spectrum_law(7, 20, 2, 30, 4.0);
        let m = d.empirical_moments(true);
        let dec = crate::linalg::spectral_decomposition(&m.c_v, &Tolerance::default()).unwrap();
        let ratio = dec.eigenvalues[15] / dec.eigenvalues[0];
        assert!(ratio < 1e-3, "spectrum not decaying: {ratio}");
    }
}
