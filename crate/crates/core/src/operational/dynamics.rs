use std::io;

use crate::error::QuantumError;
use crate::hilbert::{
    anticommutator, c, check_dims, check_square, commutator, eigenvalues, hermitian_part, hermiticity_defect, trace,
    unitary_propagator, CMatrix, DensityOperator,
};
use crate::tolerance::Tolerances;

/// Largest `|Tr W - 1|` tolerated along a trajectory.
pub const TRACE_DRIFT: f64 = 1e-9;
/// Smallest eigenvalue tolerated along a trajectory.
pub const NEGATIVITY: f64 = -1e-7;

/// `e^{-iHt} W e^{iHt}`.
pub fn unitary_evolve(w: &DensityOperator, h: &CMatrix, t: f64) -> Result<DensityOperator, QuantumError> {
    check_dims(w.dim(), check_square(h)?)?;
    let u = unitary_propagator(h, t)?;
    Ok(DensityOperator::normalized_unchecked(&(&u * w.matrix() * u.adjoint())))
}

/// A Markovian generator in Lindblad form.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    hamiltonian: CMatrix,
    jumps: Vec<(CMatrix, f64)>,
}

impl LindbladModel {
    pub fn new(hamiltonian: CMatrix, jumps: Vec<(CMatrix, f64)>) -> Result<Self, QuantumError> {
        let dim = check_square(&hamiltonian)?;
        let defect = hermiticity_defect(&hamiltonian);
        if defect > Tolerances::default().hermitian {
            return Err(QuantumError::NotHermitian(defect));
        }
        for (l, rate) in &jumps {
            check_dims(dim, check_square(l)?)?;
            if !(rate.is_finite() && *rate >= 0.0) {
                return Err(QuantumError::NegativeRate(*rate));
            }
        }
        Ok(Self {
            hamiltonian: hermitian_part(&hamiltonian),
            jumps,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[(CMatrix, f64)] {
        &self.jumps
    }

    /// `dW/dt = -i[H, W] + Σ γ (L W L† - ½{L†L, W})`.
    pub fn generator(&self, w: &CMatrix) -> CMatrix {
        let mut out = commutator(&self.hamiltonian, w) * c(0.0, -1.0);
        for (l, rate) in &self.jumps {
            let ldl = l.adjoint() * l;
            out += (l * w * l.adjoint() - anticommutator(&ldl, w) * c(0.5, 0.0)) * c(*rate, 0.0);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct TrajectoryPoint {
    pub time: f64,
    pub state: CMatrix,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.points.iter().map(|p| (p.trace - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    /// Writes `time`, the row-major real and imaginary parts of the state,
    /// `trace` and `min_eigenvalue` as CSV.
    pub fn write_csv(&self, out: impl io::Write) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        let dim = self.points.first().map_or(0, |p| p.state.nrows());
        let mut header = vec!["time".to_string()];
        for i in 0..dim {
            for j in 0..dim {
                header.push(format!("re_{i}_{j}"));
                header.push(format!("im_{i}_{j}"));
            }
        }
        header.extend(["trace".into(), "min_eigenvalue".into()]);
        writer.write_record(&header)?;
        for p in &self.points {
            let mut row = vec![p.time.to_string()];
            for i in 0..dim {
                for j in 0..dim {
                    let z = p.state[(i, j)];
                    row.push(z.re.to_string());
                    row.push(z.im.to_string());
                }
            }
            row.push(p.trace.to_string());
            row.push(p.min_eigenvalue.to_string());
            writer.write_record(&row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Integrates the master equation from `0` to `t` with classical RK4,
/// recording every step.
pub fn lindblad_evolve(
    model: &LindbladModel,
    w: &DensityOperator,
    t: f64,
    dt: f64,
) -> Result<Trajectory, QuantumError> {
    lindblad_evolve_every(model, w, t, dt, 1)
}

/// As [`lindblad_evolve`], recording every `stride`-th step and the final
/// one. Every step is validated regardless.
///
/// The step count is `ceil(t / dt)` and the step shrinks so the last one
/// lands on `t` exactly.
pub fn lindblad_evolve_every(
    model: &LindbladModel,
    w: &DensityOperator,
    t: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory, QuantumError> {
    check_dims(model.dim(), w.dim())?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(QuantumError::InvalidArgument(format!(
            "time step {dt} must be positive"
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(QuantumError::InvalidArgument(format!(
            "final time {t} must be nonnegative"
        )));
    }
    let stride = stride.max(1);
    let steps = (t / dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { t / steps as f64 };

    let mut state = w.matrix().clone();
    let mut trajectory = Trajectory::default();
    trajectory.points.push(validate(0.0, &state)?);
    for n in 1..=steps {
        let k1 = model.generator(&state);
        let k2 = model.generator(&(&state + &k1 * c(h / 2.0, 0.0)));
        let k3 = model.generator(&(&state + &k2 * c(h / 2.0, 0.0)));
        let k4 = model.generator(&(&state + &k3 * c(h, 0.0)));
        state += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(h / 6.0, 0.0);
        state = hermitian_part(&state);
        let point = validate(n as f64 * h, &state)?;
        if n % stride == 0 || n == steps {
            trajectory.points.push(point);
        }
    }
    Ok(trajectory)
}

fn validate(time: f64, state: &CMatrix) -> Result<TrajectoryPoint, QuantumError> {
    let tr = trace(state).re;
    let min = eigenvalues(state).last().copied().unwrap_or(0.0);
    if !tr.is_finite() || (tr - 1.0).abs() > TRACE_DRIFT {
        return Err(QuantumError::Unstable {
            time,
            reason: format!("trace drifted to {tr}"),
        });
    }
    if min < NEGATIVITY {
        return Err(QuantumError::Unstable {
            time,
            reason: format!("eigenvalue {min:e} is negative"),
        });
    }
    Ok(TrajectoryPoint {
        time,
        state: state.clone(),
        trace: tr,
        min_eigenvalue: min,
    })
}

/// `|0⟩⟨1|`: decay from the excited level `|1⟩` to `|0⟩`.
pub fn lowering() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{ket, max_abs, random, CVector};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rabi_flip() {
        let h = sigma_x() * c(0.5, 0.0);
        let w = DensityOperator::pure(&ket(2, 0));
        let out = unitary_evolve(&w, &h, std::f64::consts::PI).unwrap();
        assert!(max_abs(&(out.matrix() - DensityOperator::pure(&ket(2, 1)).matrix())) < 1e-9);
        let same = unitary_evolve(&w, &h, 0.0).unwrap();
        assert!(max_abs(&(same.matrix() - w.matrix())) < 1e-15);
    }

    #[test]
    fn commuting_evolution_is_trivial() {
        let h = sigma_z();
        let w = DensityOperator::new(CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.3, 0.0),
            c(0.7, 0.0),
        ])))
        .unwrap();
        let out = unitary_evolve(&w, &h, 1.7).unwrap();
        assert!(max_abs(&(out.matrix() - w.matrix())) < 1e-14);
    }

    #[test]
    fn spectrum_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = random::state(&mut rng, 5);
        let h = random::hermitian(&mut rng, 5);
        let out = unitary_evolve(&w, &h, 2.3).unwrap();
        for (a, b) in w.eigenvalues().iter().zip(out.eigenvalues()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn free_evolution_is_constant() {
        let model = LindbladModel::new(CMatrix::zeros(2, 2), vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let w = random::state(&mut rng, 2);
        let traj = lindblad_evolve(&model, &w, 1.0, 0.1).unwrap();
        assert_eq!(traj.points.len(), 11);
        assert!(max_abs(&(&traj.last().unwrap().state - w.matrix())) < 1e-15);
    }

    #[test]
    fn amplitude_damping_decays_exponentially() {
        let gamma = 2.0;
        let model = LindbladModel::new(CMatrix::zeros(2, 2), vec![(lowering(), gamma)]).unwrap();
        let w = DensityOperator::pure(&ket(2, 1));
        let traj = lindblad_evolve_every(&model, &w, 5.0 / gamma, 1e-3 / gamma, 10).unwrap();
        for p in &traj.points {
            assert_abs_diff_eq!(p.state[(1, 1)].re, (-gamma * p.time).exp(), epsilon = 1e-6);
        }
        assert!(traj.max_trace_drift() <= 1e-9);
        assert_abs_diff_eq!(traj.last().unwrap().time, 5.0 / gamma, epsilon = 1e-12);
    }

    #[test]
    fn dephasing_halves_coherence_at_twice_the_rate() {
        let gamma = 0.5;
        let model = LindbladModel::new(CMatrix::zeros(2, 2), vec![(sigma_z(), gamma)]).unwrap();
        let w = DensityOperator::pure(&CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]));
        let traj = lindblad_evolve_every(&model, &w, 3.0, 1e-3, 100).unwrap();
        for p in &traj.points {
            assert_abs_diff_eq!(
                p.state[(0, 1)].norm(),
                0.5 * (-2.0 * gamma * p.time).exp(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn huge_steps_are_reported() {
        let model = LindbladModel::new(CMatrix::zeros(2, 2), vec![(lowering(), 1.0)]).unwrap();
        let w = DensityOperator::pure(&ket(2, 1));
        let err = lindblad_evolve(&model, &w, 10.0, 5.0).unwrap_err();
        assert!(matches!(err, QuantumError::Unstable { .. }), "{err}");
    }

    #[test]
    fn rejects_bad_models() {
        assert!(matches!(
            LindbladModel::new(CMatrix::zeros(2, 2), vec![(lowering(), -1.0)]),
            Err(QuantumError::NegativeRate(_))
        ));
        assert!(LindbladModel::new(lowering(), vec![]).is_err());
    }

    #[test]
    fn csv_has_expected_columns() {
        let model = LindbladModel::new(sigma_z(), vec![]).unwrap();
        let traj = lindblad_evolve(&model, &DensityOperator::maximally_mixed(2), 0.2, 0.1).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "time,re_0_0,im_0_0,re_0_1,im_0_1,re_1_0,im_1_0,re_1_1,im_1_1,trace,min_eigenvalue"
        );
        assert_eq!(lines.count(), 3);
    }
}
