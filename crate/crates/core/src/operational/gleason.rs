//! Probability assignments on projections: additivity of the trace form and
//! recovery of a density operator from sampled values.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::QuantumError;
use crate::hilbert::{c, check_dims, check_square, random, CMatrix, DensityOperator, SpectralDecomposition};

#[derive(Clone, Debug, Serialize)]
pub struct GleasonCheck {
    pub trials: usize,
    pub max_residual: f64,
    /// Set when the dimension is below 3, where the trace form is not the
    /// only additive assignment.
    pub warning: Option<String>,
}

/// Draws `trials` random orthogonal resolutions of the identity and checks
/// normalization and pairwise additivity of `E ↦ Tr(W E)` on each.
pub fn gleason_additivity_check(w: &DensityOperator, trials: usize, seed: u64) -> GleasonCheck {
    let dim = w.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mu = |e: &CMatrix| w.expectation(e);
    let mut max_residual: f64 = 0.0;
    for _ in 0..trials {
        let resolution = random_resolution(&mut rng, dim);
        let values: Vec<f64> = resolution.iter().map(mu).collect();
        max_residual = max_residual.max((values.iter().sum::<f64>() - 1.0).abs());
        for i in 0..resolution.len() {
            for j in i + 1..resolution.len() {
                let joined = &resolution[i] + &resolution[j];
                max_residual = max_residual.max((mu(&joined) - values[i] - values[j]).abs());
            }
        }
    }
    let warning = (dim < 3).then(|| format!("dimension {dim} < 3: additivity does not force the trace form"));
    GleasonCheck {
        trials,
        max_residual,
        warning,
    }
}

/// Projectors onto groups of columns of a Haar unitary, at least two groups
/// when `dim ≥ 2`.
pub fn random_resolution(rng: &mut impl Rng, dim: usize) -> Vec<CMatrix> {
    let u = random::unitary(rng, dim);
    let mut columns: Vec<usize> = (0..dim).collect();
    columns.shuffle(rng);
    let blocks = if dim < 2 { 1 } else { rng.random_range(2..=dim) };
    // cut points split the shuffled columns into `blocks` nonempty groups
    let mut cuts: Vec<usize> = (1..dim).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(blocks - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(dim);
    bounds
        .windows(2)
        .map(|w| {
            let mut p = CMatrix::zeros(dim, dim);
            for &col in &columns[w[0]..w[1]] {
                let v = u.column(col);
                p += v * v.adjoint();
            }
            p
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FrameFit {
    pub state: DensityOperator,
    /// `max |Tr(ρ̂ E) - value|` over the samples.
    pub residual: f64,
    /// Rank of the linear system including the trace constraint.
    pub rank: usize,
    pub underdetermined: bool,
}

/// Least-squares fit of a unit-trace Hermitian `ρ` to `Tr(ρ E_k) = v_k`,
/// projected onto the positive cone by clipping and renormalizing.
pub fn frame_fit(samples: &[(CMatrix, f64)], dim: usize) -> Result<FrameFit, QuantumError> {
    if dim == 0 {
        return Err(QuantumError::InvalidArgument("dimension must be positive".into()));
    }
    for (e, v) in samples {
        check_dims(dim, check_square(e)?)?;
        if !v.is_finite() {
            return Err(QuantumError::NonFinite);
        }
    }
    let basis = hermitian_basis(dim);
    let n = basis.len();
    let rows = samples.len() + 1;
    let mut a = DMatrix::<f64>::zeros(rows, n);
    let mut b = DVector::<f64>::zeros(rows);
    for (k, (e, v)) in samples.iter().enumerate() {
        for (j, basis_el) in basis.iter().enumerate() {
            a[(k, j)] = (basis_el * e).trace().re;
        }
        b[k] = *v;
    }
    for (j, basis_el) in basis.iter().enumerate() {
        a[(samples.len(), j)] = basis_el.trace().re;
    }
    b[samples.len()] = 1.0;

    let svd = a.svd(true, true);
    let top = svd.singular_values.max();
    let eps = 1e-10 * top.max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > eps).count();
    let x = svd
        .solve(&b, eps)
        .map_err(|e| QuantumError::InvalidArgument(e.to_string()))?;

    let mut rho = CMatrix::zeros(dim, dim);
    for (coef, basis_el) in x.iter().zip(&basis) {
        rho += basis_el * c(*coef, 0.0);
    }
    let spec = SpectralDecomposition::of_hermitian_part(&rho);
    let clipped: Vec<f64> = spec.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let state = if total > 0.0 {
        let scaled: Vec<f64> = clipped.iter().map(|l| l / total).collect();
        DensityOperator::normalized_unchecked(&spec.rebuild(&scaled))
    } else {
        DensityOperator::maximally_mixed(dim)
    };
    let residual = samples
        .iter()
        .map(|(e, v)| (state.expectation(e) - v).abs())
        .fold(0.0, f64::max);
    Ok(FrameFit {
        state,
        residual,
        rank,
        underdetermined: rank < n,
    })
}

/// Real basis of the `d²`-dimensional space of Hermitian matrices.
fn hermitian_basis(dim: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        let mut m = CMatrix::zeros(dim, dim);
        m[(i, i)] = c(1.0, 0.0);
        out.push(m);
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let mut re = CMatrix::zeros(dim, dim);
            re[(i, j)] = c(1.0, 0.0);
            re[(j, i)] = c(1.0, 0.0);
            out.push(re);
            let mut im = CMatrix::zeros(dim, dim);
            im[(i, j)] = c(0.0, 1.0);
            im[(j, i)] = c(0.0, -1.0);
            out.push(im);
        }
    }
    out
}

/// Rank-one projectors onto `count` Haar-random vectors.
pub fn random_projectors(rng: &mut impl Rng, dim: usize, count: usize) -> Vec<CMatrix> {
    (0..count)
        .map(|_| crate::hilbert::projector(&random::pure_vector(rng, dim)))
        .collect()
}

/// An additive-looking but non-Gleason assignment: every sampled rank-one
/// projector gets 1/2 and the identity gets 1. No state fits it in `dim ≥ 3`.
pub fn planted_non_additive(rng: &mut impl Rng, dim: usize, count: usize) -> Vec<(CMatrix, f64)> {
    let mut samples: Vec<(CMatrix, f64)> = random_projectors(rng, dim, count)
        .into_iter()
        .map(|p| (p, 0.5))
        .collect();
    samples.push((crate::hilbert::identity(dim), 1.0));
    samples
}
