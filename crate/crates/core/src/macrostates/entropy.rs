use crate::error::QuantumError;
use crate::hilbert::{
    check_dims, check_square, eigenvalues, hermiticity_defect, trace, xlogx, CMatrix, DensityOperator, EffectOperator,
};
use crate::tolerance::Tolerances;

/// `-k Tr(W log W)` from the spectrum, with `0 log 0 = 0`.
pub fn entropy(w: &DensityOperator, k: f64) -> f64 {
    let s: f64 = w.eigenvalues().iter().map(|&x| -xlogx(x.max(0.0))).sum();
    k * s.max(0.0)
}

/// States of a system that may be any of several types of microsystem,
/// one positive block per type with `Σ Tr W_i = 1`.
#[derive(Clone, Debug)]
pub struct MultiTypeState {
    components: Vec<CMatrix>,
}

impl MultiTypeState {
    pub fn new(components: Vec<CMatrix>) -> Result<Self, QuantumError> {
        Self::with_tolerances(components, &Tolerances::default())
    }

    pub fn with_tolerances(components: Vec<CMatrix>, tol: &Tolerances) -> Result<Self, QuantumError> {
        if components.is_empty() {
            return Err(QuantumError::Empty("component list"));
        }
        let mut total = 0.0;
        for w in &components {
            check_square(w)?;
            let defect = hermiticity_defect(w);
            if defect > tol.hermitian {
                return Err(QuantumError::NotHermitian(defect));
            }
            let min = eigenvalues(w).last().copied().unwrap_or(0.0);
            if min < -tol.positivity {
                return Err(QuantumError::Negative(min));
            }
            total += trace(w).re;
        }
        if (total - 1.0).abs() > tol.trace {
            return Err(QuantumError::Trace(total));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[CMatrix] {
        &self.components
    }

    /// `Tr W_i`: probability that the microsystem is of type `i`.
    pub fn type_weight(&self, i: usize) -> Option<f64> {
        self.components.get(i).map(|w| trace(w).re)
    }
}

/// `Σ_i Tr(W_i F_i)`.
pub fn multitype_mu(w: &MultiTypeState, effects: &[EffectOperator]) -> Result<f64, QuantumError> {
    check_dims(w.components.len(), effects.len())?;
    let mut total = 0.0;
    for (wi, fi) in w.components.iter().zip(effects) {
        check_dims(wi.nrows(), fi.dim())?;
        total += (wi * fi.matrix()).trace().re;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// The effect `(0, …, 1_i, …, 0)` registering a microsystem of type `i`.
pub fn type_registration(dims: &[usize], i: usize) -> Vec<EffectOperator> {
    dims.iter()
        .enumerate()
        .map(|(j, &d)| {
            if j == i {
                EffectOperator::identity(d)
            } else {
                EffectOperator::zero(d)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{c, convex_mix, identity, ket, random};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn entropy_extremes() {
        assert!(entropy(&DensityOperator::pure(&ket(3, 1)), 1.0) <= 1e-12);
        for d in 1..6 {
            let s = entropy(&DensityOperator::maximally_mixed(d), 2.0);
            assert_abs_diff_eq!(s, 2.0 * (d as f64).ln(), epsilon = 1e-12);
        }
    }

    #[test]
    fn entropy_is_concave() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let (a, b) = (random::state(&mut rng, 4), random::state(&mut rng, 4));
            let mix = convex_mix(&[(0.35, &a), (0.65, &b)]).unwrap();
            assert!(entropy(&mix, 1.0) >= 0.35 * entropy(&a, 1.0) + 0.65 * entropy(&b, 1.0) - 1e-9);
        }
    }

    #[test]
    fn two_type_system() {
        let w1 = identity(2) * c(0.15, 0.0);
        let w2 = identity(3) * c(0.7 / 3.0, 0.0);
        let w = MultiTypeState::new(vec![w1, w2]).unwrap();
        let dims = [2, 3];
        assert_abs_diff_eq!(
            multitype_mu(&w, &[EffectOperator::identity(2), EffectOperator::identity(3)]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            multitype_mu(&w, &type_registration(&dims, 0)).unwrap(),
            0.3,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            multitype_mu(&w, &type_registration(&dims, 1)).unwrap(),
            0.7,
            epsilon = 1e-12
        );
        assert_eq!(
            multitype_mu(&w, &[EffectOperator::zero(2), EffectOperator::zero(3)]).unwrap(),
            0.0
        );
        assert!(multitype_mu(&w, &[EffectOperator::zero(2)]).is_err());
        assert!(multitype_mu(&w, &[EffectOperator::zero(3), EffectOperator::zero(3)]).is_err());
    }

    #[test]
    fn rejects_bad_normalization() {
        assert!(matches!(
            MultiTypeState::new(vec![identity(2) * c(0.5, 0.0), identity(2) * c(0.5, 0.0)]),
            Err(QuantumError::Trace(_))
        ));
    }
}
