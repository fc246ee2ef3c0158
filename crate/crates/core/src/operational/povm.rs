use crate::error::QuantumError;
use crate::hilbert::{check_dims, identity, max_abs, CMatrix, CVector, DensityOperator, EffectOperator};

/// Allowed deviation of `Σ F_i` from the identity.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// A finite-outcome positive operator-valued measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    outcomes: Vec<String>,
    effects: Vec<EffectOperator>,
}

impl Povm {
    pub fn new(outcomes: Vec<String>, effects: Vec<EffectOperator>) -> Result<Self, QuantumError> {
        if outcomes.is_empty() {
            return Err(QuantumError::Empty("outcome set"));
        }
        if outcomes.len() != effects.len() {
            return Err(QuantumError::InvalidArgument(format!(
                "{} outcomes but {} effects",
                outcomes.len(),
                effects.len()
            )));
        }
        check_unique(&outcomes)?;
        let dim = effects[0].dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for f in &effects {
            check_dims(dim, f.dim())?;
            sum += f.matrix();
        }
        let defect = max_abs(&(sum - identity(dim)));
        if defect > NORMALIZATION_TOL {
            return Err(QuantumError::NotNormalized(defect));
        }
        Ok(Self { outcomes, effects })
    }

    /// Projective measurement in an orthonormal basis given as columns.
    pub fn projective(outcomes: Vec<String>, basis: &CMatrix) -> Result<Self, QuantumError> {
        let effects = basis
            .column_iter()
            .map(|col| EffectOperator::projector(&col.into_owned()))
            .collect();
        Self::new(outcomes, effects)
    }

    /// Measurement in the computational basis with outcomes `"0"`, `"1"`, ...
    pub fn computational(dim: usize) -> Self {
        let outcomes = (0..dim).map(|i| i.to_string()).collect();
        Self::projective(outcomes, &identity(dim)).expect("standard basis is orthonormal")
    }

    /// The trivial measurement whose single outcome always occurs.
    pub fn trivial(label: impl Into<String>, dim: usize) -> Self {
        Self {
            outcomes: vec![label.into()],
            effects: vec![EffectOperator::identity(dim)],
        }
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn effects(&self) -> &[EffectOperator] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn index_of(&self, outcome: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == outcome)
    }

    /// `F(M) = Σ_{i ∈ M} F_i` for a set of outcome labels.
    pub fn effect_of<S: AsRef<str>>(&self, subset: &[S]) -> Result<EffectOperator, QuantumError> {
        let dim = self.dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for i in outcome_indices(&self.outcomes, subset)? {
            sum += self.effects[i].matrix();
        }
        EffectOperator::new(sum)
    }

    /// Whether every effect is an orthogonal projection.
    pub fn is_projective(&self, tol: f64) -> bool {
        self.effects.iter().all(|f| f.is_projection(tol))
    }
}

pub(crate) fn check_unique(labels: &[String]) -> Result<(), QuantumError> {
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            return Err(QuantumError::DuplicateOutcome(label.clone()));
        }
    }
    Ok(())
}

/// Indices of a set of outcome labels, sorted and deduplicated.
pub(crate) fn outcome_indices<S: AsRef<str>>(outcomes: &[String], subset: &[S]) -> Result<Vec<usize>, QuantumError> {
    let mut indices = subset
        .iter()
        .map(|s| {
            let s = s.as_ref();
            outcomes
                .iter()
                .position(|o| o == s)
                .ok_or_else(|| QuantumError::UnknownOutcome(s.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    indices.sort_unstable();
    indices.dedup();
    Ok(indices)
}

/// `Tr(W F)`, clipped into `[0, 1]`.
pub fn born(w: &DensityOperator, f: &EffectOperator) -> Result<f64, QuantumError> {
    check_dims(w.dim(), f.dim())?;
    Ok(w.expectation(f.matrix()).clamp(0.0, 1.0))
}

/// Outcome probabilities of `P` in state `W`, in outcome order.
pub fn povm_distribution(w: &DensityOperator, p: &Povm) -> Result<Vec<f64>, QuantumError> {
    p.effects.iter().map(|f| born(w, f)).collect()
}

/// The trine POVM `{(2/3)|φ_k⟩⟨φ_k|}` with `φ_k` at angles `2πk/3` on a
/// real great circle of the qubit.
pub fn trine() -> Povm {
    let effects = (0..3)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let v = CVector::from_vec(vec![
                crate::hilbert::c((theta / 2.0).cos(), 0.0),
                crate::hilbert::c((theta / 2.0).sin(), 0.0),
            ]);
            let m = EffectOperator::projector(&v).matrix() * crate::hilbert::c(2.0 / 3.0, 0.0);
            EffectOperator::new(m).expect("scaled projector is an effect")
        })
        .collect();
    Povm::new(vec!["0".into(), "1".into(), "2".into()], effects).expect("trine is normalized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{c, convex_mix, ket, random};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus() -> DensityOperator {
        DensityOperator::pure(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]))
    }

    #[test]
    fn born_edge_cases() {
        let w = plus();
        assert_abs_diff_eq!(born(&w, &EffectOperator::identity(2)).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(born(&w, &EffectOperator::zero(2)).unwrap(), 0.0);
        let zero = EffectOperator::projector(&ket(2, 0));
        assert_abs_diff_eq!(born(&w, &zero).unwrap(), 0.5, epsilon = 1e-15);
        assert!(born(&w, &EffectOperator::identity(3)).is_err());
    }

    #[test]
    fn z_measurement_on_plus() {
        let d = povm_distribution(&plus(), &Povm::computational(2)).unwrap();
        assert_abs_diff_eq!(d[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn trine_on_maximally_mixed() {
        let d = povm_distribution(&DensityOperator::maximally_mixed(2), &trine()).unwrap();
        for p in d {
            assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_unnormalized_and_duplicates() {
        let half = EffectOperator::new(identity(2) * c(0.5, 0.0)).unwrap();
        let err = Povm::new(vec!["a".into()], vec![half.clone()]).unwrap_err();
        assert!(matches!(err, QuantumError::NotNormalized(_)));
        let err = Povm::new(vec!["a".into(), "a".into()], vec![half.clone(), half]).unwrap_err();
        assert!(matches!(err, QuantumError::DuplicateOutcome(_)));
    }

    #[test]
    fn affine_in_the_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = trine();
        let (a, b) = (random::state(&mut rng, 2), random::state(&mut rng, 2));
        let mix = convex_mix(&[(0.3, &a), (0.7, &b)]).unwrap();
        let (da, db, dm) = (
            povm_distribution(&a, &p).unwrap(),
            povm_distribution(&b, &p).unwrap(),
            povm_distribution(&mix, &p).unwrap(),
        );
        for i in 0..3 {
            assert_abs_diff_eq!(dm[i], 0.3 * da[i] + 0.7 * db[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn coarse_grained_effects() {
        let p = Povm::computational(3);
        let f = p.effect_of(&["0", "2", "0"]).unwrap();
        assert_abs_diff_eq!(f.matrix()[(2, 2)].re, 1.0);
        assert_abs_diff_eq!(f.matrix()[(1, 1)].re, 0.0);
        assert!(p.effect_of(&["7"]).is_err());
        assert!(p.is_projective(1e-12));
        assert!(!trine().is_projective(1e-6));
    }
}
