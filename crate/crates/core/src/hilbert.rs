//! Finite-dimensional complex linear algebra: validated density operators
//! and effects, spectral calculus, tensor products and (anti)symmetrizers.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::QuantumError;
use crate::tolerance::Tolerances;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest Hilbert-space dimension any constructor will produce.
pub const DIM_CAP: usize = 4096;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// `Tr(AB)` in `O(n²)`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.component_mul(&b.transpose()).sum()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |M - M†|` entrywise.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// `|ψ⟩⟨ψ|` for the normalized `ψ`.
pub fn projector(psi: &CVector) -> CMatrix {
    let psi = psi.normalize();
    &psi * psi.adjoint()
}

/// Basis vector `|i⟩` in dimension `dim`.
pub fn ket(dim: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[i] = c(1.0, 0.0);
    v
}

pub fn check_square(m: &CMatrix) -> Result<usize, QuantumError> {
    if m.nrows() != m.ncols() {
        return Err(QuantumError::NotSquare(m.nrows(), m.ncols()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(QuantumError::NonFinite);
    }
    Ok(m.nrows())
}

pub fn check_dims(expected: usize, got: usize) -> Result<(), QuantumError> {
    if expected != got {
        return Err(QuantumError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian
/// matrix.
///
/// Each eigenvector is phase-fixed so its first non-negligible component is
/// real and positive.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn new(m: &CMatrix, tol_hermitian: f64) -> Result<Self, QuantumError> {
        check_square(m)?;
        let defect = hermiticity_defect(m);
        if defect > tol_hermitian {
            return Err(QuantumError::NotHermitian(defect));
        }
        Ok(Self::of_hermitian_part(m))
    }

    /// Decomposes `(M + M†)/2` without checking how far `M` is from
    /// Hermitian.
    pub fn of_hermitian_part(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let eig = hermitian_part(m).symmetric_eigen();
        let order: Vec<usize> = (0..dim)
            .sorted_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]))
            .collect();
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut eigenvectors = CMatrix::zeros(dim, dim);
        for (col, &i) in order.iter().enumerate() {
            let mut v = eig.eigenvectors.column(i).into_owned();
            if let Some(first) = v.iter().find(|z| z.norm() > 1e-12).copied() {
                v *= first.conj() / first.norm();
            }
            eigenvectors.set_column(col, &v);
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U f(Λ) U†`. Fails if `f` is not finite on some eigenvalue.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<CMatrix, QuantumError> {
        let mut values = Vec::with_capacity(self.dim());
        for &x in &self.eigenvalues {
            let y = f(x);
            if !y.is_finite() {
                return Err(QuantumError::Domain(x));
            }
            values.push(y);
        }
        Ok(self.rebuild(&values))
    }

    /// `U diag(values) U†` for arbitrary complex values.
    pub fn rebuild_complex(&self, values: &[Complex64]) -> CMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= v);
        }
        scaled * u.adjoint()
    }

    pub fn rebuild(&self, values: &[f64]) -> CMatrix {
        let values: Vec<Complex64> = values.iter().map(|&x| c(x, 0.0)).collect();
        self.rebuild_complex(&values)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.rebuild(&self.eigenvalues)
    }
}

/// Spectral decomposition with the default Hermiticity tolerance.
pub fn spectral(m: &CMatrix) -> Result<SpectralDecomposition, QuantumError> {
    SpectralDecomposition::new(m, Tolerances::default().hermitian)
}

/// `f(M) = U f(Λ) U†` for Hermitian `M`.
pub fn func_of_hermitian(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix, QuantumError> {
    spectral(m)?.map(f)
}

/// `x log x` with `0 log 0 = 0`; NaN for negative `x`.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x > 0.0 {
        x * x.ln()
    } else {
        f64::NAN
    }
}

/// `e^{-iHt}` for Hermitian `H`.
pub fn unitary_propagator(h: &CMatrix, t: f64) -> Result<CMatrix, QuantumError> {
    let spec = spectral(h)?;
    let phases: Vec<Complex64> = spec.eigenvalues.iter().map(|&e| c(0.0, -e * t).exp()).collect();
    Ok(spec.rebuild_complex(&phases))
}

/// Eigenvalues of the Hermitian part, descending.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// A positive, unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    /// Validates Hermiticity, positivity and trace. Eigenvalues in
    /// `[-positivity, 0)` are clipped to zero and the result renormalized.
    pub fn with_tolerances(m: CMatrix, tol: &Tolerances) -> Result<Self, QuantumError> {
        check_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > tol.hermitian {
            return Err(QuantumError::NotHermitian(defect));
        }
        let tr = trace(&m).re;
        if (tr - 1.0).abs() > tol.trace {
            return Err(QuantumError::Trace(tr));
        }
        let spec = SpectralDecomposition::of_hermitian_part(&m);
        let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol.positivity {
            return Err(QuantumError::Negative(min));
        }
        let mut matrix = if min < 0.0 {
            let clipped: Vec<f64> = spec.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
            spec.rebuild(&clipped)
        } else {
            hermitian_part(&m)
        };
        let tr = trace(&matrix).re;
        matrix /= c(tr, 0.0);
        Ok(Self { matrix })
    }

    /// Symmetrizes and normalizes the trace without the positivity check.
    /// For results of maps already known to be positive.
    pub(crate) fn normalized_unchecked(m: &CMatrix) -> Self {
        let matrix = hermitian_part(m);
        let tr = trace(&matrix).re;
        Self {
            matrix: matrix / c(tr, 0.0),
        }
    }

    pub fn pure(psi: &CVector) -> Self {
        Self {
            matrix: hermitian_part(&projector(psi)),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: identity(dim) / c(dim as f64, 0.0),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `Tr W²`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues(&self.matrix)
    }

    pub fn expectation(&self, observable: &CMatrix) -> f64 {
        trace_product(&self.matrix, observable).re
    }
}

/// Extreme points of the state space: `Tr W² ≥ 1 - 1e-9`.
pub fn is_pure(w: &DensityOperator) -> bool {
    w.purity() >= 1.0 - 1e-9
}

/// `Σ λ_i W_i` for nonnegative weights summing to one.
pub fn convex_mix(pairs: &[(f64, &DensityOperator)]) -> Result<DensityOperator, QuantumError> {
    let tol = Tolerances::default();
    let (_, first) = pairs.first().ok_or(QuantumError::Empty("mixture"))?;
    let dim = first.dim();
    let total: f64 = pairs.iter().map(|(w, _)| w).sum();
    if pairs.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) || (total - 1.0).abs() > tol.trace {
        return Err(QuantumError::Weights(total));
    }
    let mut sum = CMatrix::zeros(dim, dim);
    for (w, state) in pairs {
        check_dims(dim, state.dim())?;
        sum += state.matrix() * c(*w, 0.0);
    }
    DensityOperator::new(sum)
}

/// A Hermitian operator with spectrum in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectOperator {
    matrix: CMatrix,
}

impl EffectOperator {
    pub fn new(m: CMatrix) -> Result<Self, QuantumError> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    /// Spectrum values within `positivity` of `[0, 1]` are clipped into it.
    pub fn with_tolerances(m: CMatrix, tol: &Tolerances) -> Result<Self, QuantumError> {
        check_square(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > tol.hermitian {
            return Err(QuantumError::NotHermitian(defect));
        }
        let spec = SpectralDecomposition::of_hermitian_part(&m);
        let max = spec.eigenvalues.first().copied().unwrap_or(0.0);
        let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol.positivity {
            return Err(QuantumError::Negative(min));
        }
        if max > 1.0 + tol.positivity {
            return Err(QuantumError::AboveOne(max));
        }
        let matrix = if min < 0.0 || max > 1.0 {
            let clipped: Vec<f64> = spec.eigenvalues.iter().map(|&x| x.clamp(0.0, 1.0)).collect();
            spec.rebuild(&clipped)
        } else {
            hermitian_part(&m)
        };
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: identity(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn projector(psi: &CVector) -> Self {
        Self {
            matrix: hermitian_part(&projector(psi)),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `1 - F`.
    pub fn complement(&self) -> Self {
        Self {
            matrix: identity(self.dim()) - &self.matrix,
        }
    }

    /// Whether `F² = F` within `tol`: a decision effect.
    pub fn is_projection(&self, tol: f64) -> bool {
        max_abs(&(&self.matrix * &self.matrix - &self.matrix)) <= tol
    }
}

/// Kronecker product `a ⊗ b`, capped at [`DIM_CAP`].
pub fn tensor(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, QuantumError> {
    tensor_with_cap(a, b, DIM_CAP)
}

pub fn tensor_with_cap(a: &CMatrix, b: &CMatrix, cap: usize) -> Result<CMatrix, QuantumError> {
    let rows = a.nrows().saturating_mul(b.nrows());
    let cols = a.ncols().saturating_mul(b.ncols());
    if rows.max(cols) > cap {
        return Err(QuantumError::DimensionCap(rows.max(cols), cap));
    }
    Ok(a.kronecker(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// Orthogonal projector onto the (anti)symmetric subspace of the `k`-fold
/// tensor power of a `d`-dimensional space, as `(1/k!) Σ_π (±1)^π P_π`.
pub fn sym_projector(d: usize, k: usize, parity: Parity) -> Result<CMatrix, QuantumError> {
    if d == 0 || k == 0 {
        return Err(QuantumError::InvalidArgument(
            "dimension and factor count must be positive".into(),
        ));
    }
    let dim = (0..k)
        .try_fold(1usize, |acc, _| acc.checked_mul(d))
        .filter(|&n| n <= DIM_CAP);
    let Some(dim) = dim else {
        return Err(QuantumError::DimensionCap(d.saturating_pow(k as u32), DIM_CAP));
    };
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0; k];
        for slot in out.iter_mut().rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    };
    let index = |digits: &[usize]| digits.iter().fold(0, |acc, &x| acc * d + x);

    let mut p = CMatrix::zeros(dim, dim);
    let mut count = 0usize;
    for perm in (0..k).permutations(k) {
        count += 1;
        let sign = match parity {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => permutation_sign(&perm),
        };
        for col in 0..dim {
            let src = digits(col);
            let permuted: Vec<usize> = perm.iter().map(|&i| src[i]).collect();
            p[(index(&permuted), col)] += c(sign, 0.0);
        }
    }
    Ok(p / c(count as f64, 0.0))
}

fn permutation_sign(perm: &[usize]) -> f64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Seeded random matrices and states.
pub mod random {
    use rand::Rng;
    use rand_distr::StandardNormal;

    use super::*;

    fn gaussian(rng: &mut impl Rng) -> Complex64 {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
    }

    /// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
    pub fn unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
        let qr = ginibre(rng, dim, dim).qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..dim {
            let d = r[(j, j)];
            if d.norm() > 0.0 {
                let phase = d / d.norm();
                for z in q.column_mut(j).iter_mut() {
                    *z *= phase;
                }
            }
        }
        q
    }

    pub fn pure_vector(rng: &mut impl Rng, dim: usize) -> CVector {
        CVector::from_fn(dim, |_, _| gaussian(rng)).normalize()
    }

    /// Random mixed state `G G† / Tr(G G†)`.
    pub fn state(rng: &mut impl Rng, dim: usize) -> DensityOperator {
        let g = ginibre(rng, dim, dim);
        let m = &g * g.adjoint();
        let tr = trace(&m);
        DensityOperator::new(m / tr).expect("Ginibre state is valid")
    }

    pub fn hermitian(rng: &mut impl Rng, dim: usize) -> CMatrix {
        hermitian_part(&ginibre(rng, dim, dim))
    }

    /// `n` Kraus operators with `Σ K†K = 1`: blocks of an isometry.
    pub fn kraus(rng: &mut impl Rng, dim: usize, n: usize) -> Vec<CMatrix> {
        let u = unitary(rng, dim * n);
        (0..n).map(|k| u.view((k * dim, 0), (dim, dim)).into_owned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&x| c(x, 0.0))))
    }

    #[test]
    fn maximally_mixed_qubit() {
        let w = DensityOperator::new(identity(2) / c(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(w.purity(), 0.5, epsilon = 1e-15);
        assert!(!is_pure(&w));
    }

    #[test]
    fn negative_spectrum_is_rejected() {
        let err = DensityOperator::new(diag(&[1.5, -0.5])).unwrap_err();
        assert!(matches!(err, QuantumError::Negative(x) if x < -0.4));
    }

    #[test]
    fn other_invalid_densities() {
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(DensityOperator::new(m), Err(QuantumError::NotHermitian(_))));
        assert!(matches!(
            DensityOperator::new(diag(&[0.5, 0.6])),
            Err(QuantumError::Trace(_))
        ));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(DensityOperator::new(rect), Err(QuantumError::NotSquare(2, 3))));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clipped() {
        let w = DensityOperator::new(diag(&[1.0 + 5e-11, -5e-11])).unwrap();
        assert!(w.eigenvalues().iter().all(|&x| x >= 0.0));
        assert_abs_diff_eq!(trace(w.matrix()).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn random_projector_is_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = random::pure_vector(&mut rng, 5);
        let w = DensityOperator::new(projector(&psi)).unwrap();
        assert!(is_pure(&w));
        assert_abs_diff_eq!(w.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn nearly_pure_is_not_pure() {
        let w = DensityOperator::new(diag(&[0.999, 0.001])).unwrap();
        assert!(!is_pure(&w));
    }

    #[test]
    fn mixtures() {
        let zero = DensityOperator::pure(&ket(2, 0));
        let one = DensityOperator::pure(&ket(2, 1));
        let same = convex_mix(&[(1.0, &zero)]).unwrap();
        assert_eq!(same, zero);
        let mixed = convex_mix(&[(0.5, &zero), (0.5, &one)]).unwrap();
        assert_abs_diff_eq!(
            max_abs(&(mixed.matrix() - identity(2) / c(2.0, 0.0))),
            0.0,
            epsilon = 1e-15
        );

        // 2x2 oracle: eigenvalues of [[3/4, 1/4], [1/4, 1/4]] are (1 ± 1/√2)/2
        let plus = DensityOperator::pure(&(ket(2, 0) + ket(2, 1)));
        let w = convex_mix(&[(0.5, &zero), (0.5, &plus)]).unwrap();
        let (a, b, d): (f64, f64, f64) = (0.75, 0.25, 0.25);
        let disc = ((a - d) * (a - d) / 4.0 + b * b).sqrt();
        let expected = [(a + d) / 2.0 + disc, (a + d) / 2.0 - disc];
        let got = w.eigenvalues();
        let pi8 = std::f64::consts::PI / 8.0;
        assert_abs_diff_eq!(got[0], expected[0], epsilon = 1e-14);
        assert_abs_diff_eq!(got[1], expected[1], epsilon = 1e-14);
        assert_abs_diff_eq!(got[0], pi8.cos().powi(2), epsilon = 1e-14);
        assert_abs_diff_eq!(got[1], pi8.sin().powi(2), epsilon = 1e-14);

        assert!(matches!(
            convex_mix(&[(0.7, &zero), (0.7, &one)]),
            Err(QuantumError::Weights(_))
        ));
    }

    #[test]
    fn functional_calculus() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random::hermitian(&mut rng, 4);
        let same = func_of_hermitian(&h, |x| x).unwrap();
        assert!(max_abs(&(same - &h)) < 1e-12);

        let e = func_of_hermitian(&diag(&[0.0, 2f64.ln()]), f64::exp).unwrap();
        assert!(max_abs(&(e - diag(&[1.0, 2.0]))) < 1e-14);

        let kernel = func_of_hermitian(&(identity(2) / c(2.0, 0.0)), xlogx).unwrap();
        assert_abs_diff_eq!(-trace(&kernel).re, 2f64.ln(), epsilon = 1e-15);

        assert!(matches!(
            func_of_hermitian(&diag(&[-1.0, 1.0]), f64::ln),
            Err(QuantumError::Domain(_))
        ));
        assert!(func_of_hermitian(&diag(&[0.0, 1.0]), xlogx).is_ok());
    }

    #[test]
    fn phase_fixing_and_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random::hermitian(&mut rng, 6);
        let spec = spectral(&h).unwrap();
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for j in 0..6 {
            let first = spec
                .eigenvectors
                .column(j)
                .iter()
                .find(|z| z.norm() > 1e-12)
                .copied()
                .unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
    }

    #[test]
    fn tensor_products() {
        assert_eq!(tensor(&identity(2), &identity(2)).unwrap(), identity(4));
        let p0 = projector(&ket(2, 0));
        let p1 = projector(&ket(2, 1));
        assert_eq!(tensor(&p0, &p1).unwrap(), projector(&ket(4, 1)));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random::ginibre(&mut rng, 2, 2);
        let b = random::ginibre(&mut rng, 2, 2);
        let t = tensor(&a, &b).unwrap();
        assert!((trace(&t) - trace(&a) * trace(&b)).norm() < 1e-13);
        assert!(matches!(
            tensor_with_cap(&identity(64), &identity(128), 4096),
            Err(QuantumError::DimensionCap(8192, 4096))
        ));
    }

    #[test]
    fn symmetrizers() {
        assert_eq!(sym_projector(3, 1, Parity::Symmetric).unwrap(), identity(3));
        let anti = sym_projector(2, 2, Parity::Antisymmetric).unwrap();
        assert_abs_diff_eq!(trace(&anti).re, 1.0, epsilon = 1e-15);
        let sym = sym_projector(2, 2, Parity::Symmetric).unwrap();
        assert_abs_diff_eq!(trace(&sym).re, 3.0, epsilon = 1e-15);
        // the antisymmetric part of two qubits is the singlet
        let singlet = (ket(4, 1) - ket(4, 2)).normalize();
        assert!(max_abs(&(anti - projector(&singlet))) < 1e-15);
        assert!(matches!(
            sym_projector(2, 13, Parity::Symmetric),
            Err(QuantumError::DimensionCap(..))
        ));
    }

    #[test]
    fn effects() {
        let f = EffectOperator::new(diag(&[1.0, 0.3])).unwrap();
        assert_eq!(f.complement().matrix(), &diag(&[0.0, 0.7]));
        assert!(!f.is_projection(1e-12));
        assert!(EffectOperator::projector(&ket(3, 2)).is_projection(1e-15));
        assert!(matches!(
            EffectOperator::new(diag(&[1.2, 0.0])),
            Err(QuantumError::AboveOne(_))
        ));
        assert!(matches!(
            EffectOperator::new(diag(&[-0.1, 0.0])),
            Err(QuantumError::Negative(_))
        ));
    }
}
