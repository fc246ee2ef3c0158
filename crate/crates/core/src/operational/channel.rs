use crate::hilbert::{c, eigenvalues, CMatrix};

use super::instrument::Operation;

/// Eigenvalues of the Choi matrix at or above this count as nonnegative.
pub const CP_TOL: f64 = 1e-9;

/// A linear map on `d × d` matrices.
pub trait SuperOperator {
    fn input_dim(&self) -> usize;
    fn apply(&self, m: &CMatrix) -> CMatrix;
}

impl SuperOperator for Operation {
    fn input_dim(&self) -> usize {
        self.dim()
    }

    fn apply(&self, m: &CMatrix) -> CMatrix {
        self.apply_matrix(m)
    }
}

/// Matrix transposition: positive but not completely positive.
#[derive(Clone, Copy, Debug)]
pub struct TransposeMap(pub usize);

impl SuperOperator for TransposeMap {
    fn input_dim(&self) -> usize {
        self.0
    }

    fn apply(&self, m: &CMatrix) -> CMatrix {
        m.transpose()
    }
}

/// `C = (id ⊗ Φ)|Ω⟩⟨Ω| = (1/d) Σ_ij E_ij ⊗ Φ(E_ij)` with `|Ω⟩` normalized,
/// so that trace-preserving maps have unit-trace Choi matrices.
pub fn choi(map: &impl SuperOperator) -> CMatrix {
    let d = map.input_dim();
    let mut out = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e[(i, j)] = c(1.0, 0.0);
            let image = map.apply(&e);
            let rows = image.nrows();
            let cols = image.ncols();
            // E_ij ⊗ Φ(E_ij) occupies block (i, j)
            for r in 0..rows {
                for s in 0..cols {
                    out[(i * rows + r, j * cols + s)] = image[(r, s)] / c(d as f64, 0.0);
                }
            }
        }
    }
    out
}

pub fn choi_min_eigenvalue(map: &impl SuperOperator) -> f64 {
    eigenvalues(&choi(map)).last().copied().unwrap_or(0.0)
}

/// Complete positivity via the Choi matrix spectrum.
pub fn is_cp(map: &impl SuperOperator) -> bool {
    choi_min_eigenvalue(map) >= -CP_TOL
}
