use crate::error::QuantumError;
use crate::hilbert::{c, check_dims, check_square, hermiticity_defect, CMatrix, DensityOperator, DIM_CAP};
use crate::tolerance::Tolerances;

/// Bosonic modes truncated at `nmax` quanta each. Basis states are
/// occupancy tuples in little-endian order: mode 0 varies fastest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    modes: usize,
    nmax: usize,
    dim: usize,
}

impl FockSpace {
    pub fn new(modes: usize, nmax: usize) -> Result<Self, QuantumError> {
        Self::with_cap(modes, nmax, DIM_CAP)
    }

    pub fn with_cap(modes: usize, nmax: usize, cap: usize) -> Result<Self, QuantumError> {
        if modes == 0 {
            return Err(QuantumError::InvalidArgument("at least one mode is required".into()));
        }
        let levels = nmax.checked_add(1).ok_or(QuantumError::DimensionCap(usize::MAX, cap))?;
        let dim = (0..modes)
            .try_fold(1usize, |acc, _| acc.checked_mul(levels))
            .filter(|&d| d <= cap)
            .ok_or_else(|| QuantumError::DimensionCap(levels.saturating_pow(modes as u32), cap))?;
        Ok(Self { modes, nmax, dim })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let levels = self.nmax + 1;
        (0..self.modes)
            .map(|_| {
                let n = index % levels;
                index /= levels;
                n
            })
            .collect()
    }

    pub fn index(&self, occupation: &[usize]) -> usize {
        occupation.iter().rev().fold(0, |acc, &n| acc * (self.nmax + 1) + n)
    }

    pub fn operators(&self) -> ModeOperators {
        let levels = self.nmax + 1;
        let mut annihilation = Vec::with_capacity(self.modes);
        for m in 0..self.modes {
            let stride = levels.pow(m as u32);
            let mut a = CMatrix::zeros(self.dim, self.dim);
            for col in 0..self.dim {
                let n = (col / stride) % levels;
                if n > 0 {
                    a[(col - stride, col)] = c((n as f64).sqrt(), 0.0);
                }
            }
            annihilation.push(a);
        }
        let creation: Vec<CMatrix> = annihilation.iter().map(|a| a.adjoint()).collect();
        // a†a has integer diagonal; set it directly to avoid √n·√n rounding
        let number = (0..self.modes)
            .map(|m| {
                let stride = levels.pow(m as u32);
                CMatrix::from_fn(self.dim, self.dim, |i, j| {
                    if i == j {
                        c(((i / stride) % levels) as f64, 0.0)
                    } else {
                        c(0.0, 0.0)
                    }
                })
            })
            .collect();
        ModeOperators {
            annihilation,
            creation,
            number,
        }
    }

    /// Population of basis states with at least one mode at the cutoff.
    pub fn truncation_tail(&self, w: &DensityOperator) -> Result<f64, QuantumError> {
        check_dims(self.dim, w.dim())?;
        Ok((0..self.dim)
            .filter(|&i| self.occupation(i).contains(&self.nmax))
            .map(|i| w.matrix()[(i, i)].re)
            .sum())
    }
}

/// Ladder and number operators, one per mode.
#[derive(Clone, Debug)]
pub struct ModeOperators {
    pub annihilation: Vec<CMatrix>,
    pub creation: Vec<CMatrix>,
    pub number: Vec<CMatrix>,
}

impl ModeOperators {
    pub fn total_number(&self) -> CMatrix {
        let dim = self.number[0].nrows();
        self.number.iter().fold(CMatrix::zeros(dim, dim), |acc, n| acc + n)
    }
}

pub fn fock_build(modes: usize, nmax: usize) -> Result<(FockSpace, ModeOperators), QuantumError> {
    let space = FockSpace::new(modes, nmax)?;
    let ops = space.operators();
    Ok((space, ops))
}

/// Second-quantized lift `Σ_mn A_mn a†_m a_n` of a one-particle operator on
/// the mode space.
pub fn additive_observable(a: &CMatrix, fock: &FockSpace) -> Result<CMatrix, QuantumError> {
    check_dims(fock.modes(), check_square(a)?)?;
    let defect = hermiticity_defect(a);
    if defect > Tolerances::default().hermitian {
        return Err(QuantumError::NotHermitian(defect));
    }
    let ops = fock.operators();
    let mut out = CMatrix::zeros(fock.dim(), fock.dim());
    for m in 0..fock.modes() {
        for n in 0..fock.modes() {
            if a[(m, n)].norm() != 0.0 {
                out += &ops.creation[m] * &ops.annihilation[n] * a[(m, n)];
            }
        }
    }
    Ok(out)
}
