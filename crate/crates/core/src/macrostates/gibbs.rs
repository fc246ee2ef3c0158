use nalgebra::{DMatrix, DVector};

use crate::error::QuantumError;
use crate::hilbert::{
    c, check_dims, check_square, commutator, eigenvalues, hermitian_part, hermiticity_defect, max_abs, trace_product,
    CMatrix, DensityOperator, SpectralDecomposition,
};
use crate::tolerance::Tolerances;

/// `e^{-Φ} / Tr e^{-Φ}` and `log Tr e^{-Φ}`, with the spectrum shifted by
/// its minimum before exponentiating.
pub fn gibbs_form(phi: &CMatrix) -> Result<(DensityOperator, f64), QuantumError> {
    let spec = SpectralDecomposition::new(phi, Tolerances::default().hermitian)?;
    let min = spec
        .eigenvalues
        .last()
        .copied()
        .ok_or(QuantumError::Empty("operator"))?;
    let weights: Vec<f64> = spec.eigenvalues.iter().map(|&x| (-(x - min)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / z).collect();
    let state = DensityOperator::normalized_unchecked(&spec.rebuild(&probs));
    Ok((state, z.ln() - min))
}

#[derive(Clone, Debug)]
pub struct GrandCanonical {
    pub state: DensityOperator,
    /// `max |[H, N]|` entrywise. Nonzero means `N` is not conserved.
    pub commutator_norm: f64,
    pub log_partition: f64,
}

/// `e^{-β(H - μN)} / Tr e^{-β(H - μN)}`.
pub fn grand_canonical(h: &CMatrix, n: &CMatrix, beta: f64, mu: f64) -> Result<GrandCanonical, QuantumError> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(QuantumError::InvalidArgument(format!(
            "inverse temperature {beta} must be positive"
        )));
    }
    if !mu.is_finite() {
        return Err(QuantumError::InvalidArgument(
            "chemical potential must be finite".into(),
        ));
    }
    check_dims(check_square(h)?, check_square(n)?)?;
    let kernel = (h - n * c(mu, 0.0)) * c(beta, 0.0);
    let (state, log_partition) = gibbs_form(&kernel)?;
    Ok(GrandCanonical {
        state,
        commutator_norm: max_abs(&commutator(h, n)),
        log_partition,
    })
}

/// Gibbs-form state `e^{-Φ(ζ)} / Tr e^{-Φ(ζ)}` with `Φ(ζ) = Σ ζ_j A_j`.
#[derive(Clone, Debug)]
pub struct ReferenceMacrostate {
    observables: Vec<CMatrix>,
    fields: Vec<f64>,
    state: DensityOperator,
    log_partition: f64,
}

pub fn reference_state(observables: Vec<CMatrix>, fields: Vec<f64>) -> Result<ReferenceMacrostate, QuantumError> {
    let first = observables.first().ok_or(QuantumError::Empty("observable list"))?;
    let dim = check_square(first)?;
    if observables.len() != fields.len() {
        return Err(QuantumError::InvalidArgument(format!(
            "{} observables but {} fields",
            observables.len(),
            fields.len()
        )));
    }
    for a in &observables {
        check_dims(dim, check_square(a)?)?;
        let defect = hermiticity_defect(a);
        if defect > Tolerances::default().hermitian {
            return Err(QuantumError::NotHermitian(defect));
        }
    }
    if fields.iter().any(|z| !z.is_finite()) {
        return Err(QuantumError::NonFinite);
    }
    let observables: Vec<CMatrix> = observables.iter().map(hermitian_part).collect();
    let (state, log_partition) = gibbs_form(&phi(&observables, &fields))?;
    Ok(ReferenceMacrostate {
        observables,
        fields,
        state,
        log_partition,
    })
}

fn phi(observables: &[CMatrix], fields: &[f64]) -> CMatrix {
    let dim = observables[0].nrows();
    observables
        .iter()
        .zip(fields)
        .fold(CMatrix::zeros(dim, dim), |acc, (a, z)| acc + a * c(*z, 0.0))
}

impl ReferenceMacrostate {
    pub fn observables(&self) -> &[CMatrix] {
        &self.observables
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    pub fn phi(&self) -> CMatrix {
        phi(&self.observables, &self.fields)
    }

    /// `⟨A_j⟩` in the reference state.
    pub fn expectations(&self) -> Vec<f64> {
        expectations(&self.state, &self.observables)
    }

    /// `⟨A_j²⟩ - ⟨A_j⟩²`.
    pub fn variances(&self) -> Vec<f64> {
        self.observables
            .iter()
            .map(|a| {
                let mean = self.state.expectation(a);
                self.state.expectation(&(a * a)) - mean * mean
            })
            .collect()
    }
}

pub fn expectations(w: &DensityOperator, observables: &[CMatrix]) -> Vec<f64> {
    observables.iter().map(|a| w.expectation(a)).collect()
}

/// `½ Σ |λ_i(A - B)|`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> f64 {
    0.5 * eigenvalues(&(a.matrix() - b.matrix()))
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

#[derive(Clone, Debug)]
pub struct FieldFit {
    pub reference: ReferenceMacrostate,
    /// `max_j |⟨A_j⟩_fit - ⟨A_j⟩_target|`.
    pub mismatch: f64,
    /// Trace distance from the target to the fitted reference state.
    pub residual: f64,
    pub iterations: usize,
}

/// Finds the reference state with the same `⟨A_j⟩` as `target`, the
/// maximum-entropy state under those constraints.
///
/// Minimizes the convex dual `log Z(ζ) + Σ ζ_j t_j` by damped Newton steps.
/// The Hessian is the Kubo-Mori covariance
/// `Σ_il Re(A_j,il A_k,li) L(p_i, p_l) - ⟨A_j⟩⟨A_k⟩` in the eigenbasis of
/// `Φ(ζ)`, with `L` the logarithmic mean, so each step needs one
/// diagonalization.
pub fn fit_fields(
    target: &DensityOperator,
    observables: &[CMatrix],
    initial: &[f64],
) -> Result<FieldFit, QuantumError> {
    if observables.len() != initial.len() {
        return Err(QuantumError::InvalidArgument(
            "one initial field per observable is required".into(),
        ));
    }
    let t = DVector::from_vec(expectations(target, observables));
    let mut point = DualPoint::new(observables, &t, initial.to_vec())?;
    let scale = t.amax().max(1.0);
    let mut iterations = 0;
    while iterations < 100 && point.grad.amax() > 1e-13 * scale {
        iterations += 1;
        let hessian = point.hessian(observables);
        let svd = hessian.svd(true, true);
        let eps = 1e-12 * svd.singular_values.max().max(1e-300);
        let Ok(step) = svd.solve(&point.grad, eps) else { break };
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<f64> = point
                .fields
                .iter()
                .zip(step.iter())
                .map(|(z, s)| z - alpha * s)
                .collect();
            let next = DualPoint::new(observables, &t, trial)?;
            if next.dual <= point.dual {
                accepted = Some(next);
                break;
            }
            if alpha < 1e-6 {
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            // no measurable progress left at double precision
            Some(next) if point.dual - next.dual <= 1e-15 * point.dual.abs().max(1.0) => {
                point = next;
                break;
            }
            Some(next) => point = next,
            None => break,
        }
    }
    let reference = reference_state(observables.to_vec(), point.fields.clone())?;
    let residual = trace_distance(target, reference.state());
    Ok(FieldFit {
        reference,
        mismatch: point.grad.amax(),
        residual,
        iterations,
    })
}

struct DualPoint {
    fields: Vec<f64>,
    spec: SpectralDecomposition,
    probs: Vec<f64>,
    means: Vec<f64>,
    grad: DVector<f64>,
    dual: f64,
}

impl DualPoint {
    fn new(observables: &[CMatrix], t: &DVector<f64>, fields: Vec<f64>) -> Result<Self, QuantumError> {
        let spec = SpectralDecomposition::of_hermitian_part(&phi(observables, &fields));
        let min = spec
            .eigenvalues
            .last()
            .copied()
            .ok_or(QuantumError::Empty("operator"))?;
        let weights: Vec<f64> = spec.eigenvalues.iter().map(|&x| (-(x - min)).exp()).collect();
        let z: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|w| w / z).collect();
        let state = spec.rebuild(&probs);
        let means: Vec<f64> = observables.iter().map(|a| trace_product(&state, a).re).collect();
        let grad = t - DVector::from_column_slice(&means);
        let dual = z.ln() - min + fields.iter().zip(t.iter()).map(|(f, x)| f * x).sum::<f64>();
        if !dual.is_finite() {
            return Err(QuantumError::NonFinite);
        }
        Ok(Self {
            fields,
            spec,
            probs,
            means,
            grad,
            dual,
        })
    }

    fn hessian(&self, observables: &[CMatrix]) -> DMatrix<f64> {
        let v = &self.spec.eigenvectors;
        let rotated: Vec<CMatrix> = observables.iter().map(|a| v.adjoint() * a * v).collect();
        let n = self.probs.len();
        let phi = &self.spec.eigenvalues;
        let mut lmean = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for l in 0..n {
                let gap = phi[l] - phi[i];
                lmean[(i, l)] = if gap.abs() < 1e-10 {
                    0.5 * (self.probs[i] + self.probs[l])
                } else {
                    (self.probs[i] - self.probs[l]) / gap
                };
            }
        }
        let k = observables.len();
        let mut h = DMatrix::<f64>::zeros(k, k);
        for j in 0..k {
            for m in j..k {
                let mut s = 0.0;
                for i in 0..n {
                    for l in 0..n {
                        s += (rotated[j][(i, l)] * rotated[m][(l, i)]).re * lmean[(i, l)];
                    }
                }
                let value = s - self.means[j] * self.means[m];
                h[(j, m)] = value;
                h[(m, j)] = value;
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{identity, random};
    use crate::macrostates::fock::fock_build;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_mode_occupation() {
        let (_, ops) = fock_build(1, 30).unwrap();
        let n = &ops.number[0];
        let gc = grand_canonical(n, n, 1.0, 0.0).unwrap();
        let mean = gc.state.expectation(n);
        assert_abs_diff_eq!(mean, 1.0 / (1f64.exp() - 1.0), epsilon = 1e-10);
        assert_eq!(gc.commutator_norm, 0.0);
    }

    #[test]
    fn low_temperature_limit_is_the_ground_space() {
        // levels 0, 0, 1: degenerate ground pair
        let h = CMatrix::from_diagonal(&DVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        let gc = grand_canonical(&h, &CMatrix::zeros(3, 3), 60.0, 0.0).unwrap();
        let mut expected = identity(3) * c(0.5, 0.0);
        expected[(2, 2)] = c(0.0, 0.0);
        assert!(max_abs(&(gc.state.matrix() - expected)) < 1e-10);
    }

    #[test]
    fn huge_energies_do_not_overflow() {
        let h = CMatrix::from_diagonal(&DVector::from_vec(vec![c(1e4, 0.0), c(1e4 + 1.0, 0.0)]));
        let gc = grand_canonical(&h, &CMatrix::zeros(2, 2), 1.0, 0.0).unwrap();
        let p0 = 1.0 / (1.0 + (-1f64).exp());
        assert_abs_diff_eq!(gc.state.matrix()[(0, 0)].re, p0, epsilon = 1e-12);
        assert!(grand_canonical(&h, &h, -1.0, 0.0).is_err());
    }

    #[test]
    fn reference_specializations() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let h = random::hermitian(&mut rng, 4);
        let zero = reference_state(vec![h.clone()], vec![0.0]).unwrap();
        assert!(max_abs(&(zero.state().matrix() - identity(4) * c(0.25, 0.0))) < 1e-14);

        let (_, ops) = fock_build(2, 3).unwrap();
        let n = ops.total_number();
        let hh = &ops.number[0] * c(1.0, 0.0) + &ops.number[1] * c(1.5, 0.0);
        let (beta, mu) = (0.7, 0.2);
        let gc = grand_canonical(&hh, &n, beta, mu).unwrap();
        let r = reference_state(vec![hh, n], vec![beta, -beta * mu]).unwrap();
        assert!(max_abs(&(gc.state.matrix() - r.state().matrix())) < 1e-10);
    }

    #[test]
    fn conjugate_variance() {
        let (_, ops) = fock_build(2, 4).unwrap();
        let obs = vec![ops.number[0].clone(), ops.number[1].clone()];
        let fields = vec![0.8, 1.3];
        let r = reference_state(obs.clone(), fields.clone()).unwrap();
        let var = r.variances();
        let h = 1e-4;
        for j in 0..2 {
            let mut up = fields.clone();
            let mut down = fields.clone();
            up[j] += h;
            down[j] -= h;
            let plus = reference_state(obs.clone(), up).unwrap().expectations()[j];
            let minus = reference_state(obs.clone(), down).unwrap().expectations()[j];
            let slope = (plus - minus) / (2.0 * h);
            assert!(slope < 0.0);
            assert!((slope + var[j]).abs() <= 1e-5 * var[j], "{slope} vs {}", -var[j]);
        }
    }

    #[test]
    fn fit_recovers_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let obs = vec![random::hermitian(&mut rng, 3), random::hermitian(&mut rng, 3)];
        let truth = reference_state(obs.clone(), vec![0.4, -0.9]).unwrap();
        let fit = fit_fields(truth.state(), &obs, &[0.0, 0.0]).unwrap();
        assert!(fit.mismatch < 1e-10, "{}", fit.mismatch);
        assert!(fit.residual < 1e-8, "{}", fit.residual);
        assert_abs_diff_eq!(fit.reference.fields()[0], 0.4, epsilon = 1e-6);
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let a = DensityOperator::pure(&crate::hilbert::ket(2, 0));
        let b = DensityOperator::pure(&crate::hilbert::ket(2, 1));
        assert_abs_diff_eq!(trace_distance(&a, &b), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(trace_distance(&a, &a), 0.0, epsilon = 1e-14);
    }
}
