use crate::error::QuantumError;
use crate::hilbert::{
    c, check_dims, check_square, eigenvalues, func_of_hermitian, identity, max_abs, trace, CMatrix, DensityOperator,
    EffectOperator,
};

use super::povm::{check_unique, outcome_indices, Povm, NORMALIZATION_TOL};

/// Probabilities at or below this yield no conditional state.
pub const NULL_PROBABILITY: f64 = 1e-12;

/// A completely positive, trace non-increasing map `W ↦ Σ K W K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct Operation {
    kraus: Vec<CMatrix>,
}

impl Operation {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let first = kraus.first().ok_or(QuantumError::Empty("Kraus list"))?;
        let dim = check_square(first)?;
        for k in &kraus {
            check_dims(dim, check_square(k)?)?;
        }
        let op = Self { kraus };
        let top = eigenvalues(&op.effect()).first().copied().unwrap_or(0.0);
        if top > 1.0 + NORMALIZATION_TOL {
            return Err(QuantumError::NotContracting(top));
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![identity(dim)],
        }
    }

    /// The Lüders operation `W ↦ √F W √F`.
    pub fn luders(f: &EffectOperator) -> Self {
        let root = func_of_hermitian(f.matrix(), |x| x.max(0.0).sqrt()).expect("effect is Hermitian");
        Self { kraus: vec![root] }
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// `Σ K†K`, the effect this operation registers.
    pub fn effect(&self) -> CMatrix {
        let dim = self.dim();
        self.kraus
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k)
    }

    /// The unnormalized image `Σ K W K†`.
    pub fn apply_matrix(&self, w: &CMatrix) -> CMatrix {
        let dim = self.dim();
        self.kraus
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, k| acc + k * w * k.adjoint())
    }
}

/// Applies `op` to `W`, returning `Tr σ` and the conditional state `σ / Tr σ`
/// when that probability is not negligible.
pub fn apply_operation(w: &DensityOperator, op: &Operation) -> Result<(f64, Option<DensityOperator>), QuantumError> {
    check_dims(op.dim(), w.dim())?;
    Ok(condition(op.apply_matrix(w.matrix())))
}

fn condition(sigma: CMatrix) -> (f64, Option<DensityOperator>) {
    let p = trace(&sigma).re.clamp(0.0, 1.0);
    if p > NULL_PROBABILITY {
        (p, Some(DensityOperator::normalized_unchecked(&sigma)))
    } else {
        (p, None)
    }
}

/// A finite-outcome instrument: one operation per outcome, jointly trace
/// preserving.
#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    outcomes: Vec<String>,
    operations: Vec<Operation>,
}

impl Instrument {
    pub fn new(entries: Vec<(String, Operation)>) -> Result<Self, QuantumError> {
        if entries.is_empty() {
            return Err(QuantumError::Empty("outcome set"));
        }
        let (outcomes, operations): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        check_unique(&outcomes)?;
        let dim = operations[0].dim();
        let mut total = CMatrix::zeros(dim, dim);
        for op in &operations {
            check_dims(dim, op.dim())?;
            total += op.effect();
        }
        let defect = max_abs(&(total - identity(dim)));
        if defect > NORMALIZATION_TOL {
            return Err(QuantumError::NotNormalized(defect));
        }
        Ok(Self { outcomes, operations })
    }

    /// The Lüders instrument of a POVM. For a projective POVM this is the
    /// von Neumann measurement.
    pub fn luders(povm: &Povm) -> Self {
        let operations = povm.effects().iter().map(Operation::luders).collect();
        Self {
            outcomes: povm.outcomes().to_vec(),
            operations,
        }
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn operations(&self) -> &[Operation] {
        &self.operations
    }

    pub fn dim(&self) -> usize {
        self.operations[0].dim()
    }

    pub fn operation(&self, outcome: &str) -> Option<&Operation> {
        self.outcomes
            .iter()
            .position(|o| o == outcome)
            .map(|i| &self.operations[i])
    }
}

/// `M(M)[W]` for a set of outcomes `M`: probability and conditional state.
pub fn instrument_select<S: AsRef<str>>(
    w: &DensityOperator,
    instrument: &Instrument,
    subset: &[S],
) -> Result<(f64, Option<DensityOperator>), QuantumError> {
    if subset.is_empty() {
        return Err(QuantumError::Empty("outcome subset"));
    }
    check_dims(instrument.dim(), w.dim())?;
    let dim = w.dim();
    let mut sigma = CMatrix::zeros(dim, dim);
    for i in outcome_indices(&instrument.outcomes, subset)? {
        sigma += instrument.operations[i].apply_matrix(w.matrix());
    }
    Ok(condition(sigma))
}

/// The POVM `F(M) = M(M)'[1]` registered by an instrument.
pub fn induced_povm(instrument: &Instrument) -> Povm {
    let effects = instrument
        .operations
        .iter()
        .map(|op| EffectOperator::new(op.effect()).expect("Kraus effect lies in [0, 1]"))
        .collect();
    Povm::new(instrument.outcomes.clone(), effects).expect("instrument is normalized")
}

/// One leaf of a repeated-measurement tree.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcomes: Vec<String>,
    pub probability: f64,
    /// Conditional state after the whole record, absent for null branches.
    pub state: Option<DensityOperator>,
}

/// Applies `instrument` `depth` times in sequence, branching on every
/// outcome. Null branches are kept with probability zero and not expanded.
pub fn measurement_tree(
    w: &DensityOperator,
    instrument: &Instrument,
    depth: usize,
) -> Result<Vec<Branch>, QuantumError> {
    check_dims(instrument.dim(), w.dim())?;
    let mut leaves = vec![Branch {
        outcomes: Vec::new(),
        probability: 1.0,
        state: Some(w.clone()),
    }];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(leaves.len() * instrument.outcomes.len());
        for leaf in leaves {
            let Some(state) = &leaf.state else {
                next.push(leaf);
                continue;
            };
            for (label, op) in instrument.outcomes.iter().zip(&instrument.operations) {
                let (p, post) = apply_operation(state, op)?;
                let mut outcomes = leaf.outcomes.clone();
                outcomes.push(label.clone());
                next.push(Branch {
                    outcomes,
                    probability: leaf.probability * p,
                    state: post,
                });
            }
        }
        leaves = next;
    }
    Ok(leaves)
}

/// Kraus operators of amplitude damping with decay probability `gamma`.
pub fn amplitude_damping(gamma: f64) -> Result<Operation, QuantumError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(QuantumError::InvalidArgument(format!(
            "damping probability {gamma} outside [0, 1]"
        )));
    }
    let k0 = CMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - gamma).sqrt(), 0.0)],
    );
    let k1 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(gamma.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    Operation::new(vec![k0, k1])
}
