use std::io;

use crate::error::QuantumError;
use crate::hilbert::{c, check_dims, check_square, spectral, CMatrix, DensityOperator};

use super::gibbs::{expectations, fit_fields, ReferenceMacrostate};

#[derive(Clone, Debug)]
pub struct LiouvillePoint {
    pub time: f64,
    pub state: DensityOperator,
    /// `⟨A_j⟩_t` for the observables of the reference state.
    pub expectations: Vec<f64>,
    /// Fields of the reference state with the same `⟨A_j⟩_t`.
    pub fitted_fields: Vec<f64>,
    /// Trace distance from `W_t` to that reference state; zero while the
    /// evolution stays inside the reference family.
    pub fit_residual: f64,
}

/// `W_t = e^{-iHt} W_ζ e^{iHt}` on a time grid, tracking the relevant
/// expectations and how far `W_t` is from the reference family.
pub fn liouville_evolve(
    reference: &ReferenceMacrostate,
    h: &CMatrix,
    times: &[f64],
) -> Result<Vec<LiouvillePoint>, QuantumError> {
    check_dims(reference.state().dim(), check_square(h)?)?;
    let spec = spectral(h)?;
    let observables = reference.observables();
    let mut warm = reference.fields().to_vec();
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if !t.is_finite() {
            return Err(QuantumError::NonFinite);
        }
        let phases: Vec<_> = spec.eigenvalues.iter().map(|&e| c(0.0, -e * t).exp()).collect();
        let u = spec.rebuild_complex(&phases);
        let state = DensityOperator::normalized_unchecked(&(&u * reference.state().matrix() * u.adjoint()));
        let fit = fit_fields(&state, observables, &warm)?;
        warm = fit.reference.fields().to_vec();
        out.push(LiouvillePoint {
            time: t,
            expectations: expectations(&state, observables),
            fitted_fields: warm.clone(),
            fit_residual: fit.residual,
            state,
        });
    }
    Ok(out)
}

/// Writes `t`, `fit_residual` and one column per observable.
pub fn write_liouville_csv(points: &[LiouvillePoint], names: &[String], out: impl io::Write) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "fit_residual".to_string()];
    header.extend(names.iter().cloned());
    writer.write_record(&header)?;
    for p in points {
        let mut row = vec![p.time.to_string(), p.fit_residual.to_string()];
        row.extend(p.expectations.iter().map(f64::to_string));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// `J (a_0† a_1 + a_1† a_0)` on two modes.
pub fn hopping(ops: &super::fock::ModeOperators, j: f64) -> CMatrix {
    let forward = &ops.creation[0] * &ops.annihilation[1];
    (&forward + forward.adjoint()) * c(j, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::max_abs;
    use crate::macrostates::entropy::entropy;
    use crate::macrostates::fock::fock_build;
    use crate::macrostates::gibbs::reference_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stationary_when_commuting() {
        let (_, ops) = fock_build(2, 4).unwrap();
        let r = reference_state(vec![ops.number[0].clone(), ops.number[1].clone()], vec![1.0, 2.0]).unwrap();
        let h = &ops.number[0] * c(0.3, 0.0) + &ops.number[1];
        let points = liouville_evolve(&r, &h, &[0.0, 1.0, 5.0]).unwrap();
        let initial = r.expectations();
        for p in &points {
            for (x, y) in p.expectations.iter().zip(&initial) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
            assert!(p.fit_residual < 1e-8);
        }
    }

    #[test]
    fn hopping_moves_particles_and_leaves_the_family() {
        let (space, ops) = fock_build(2, 6).unwrap();
        let n = ops.total_number();
        let r = reference_state(vec![ops.number[0].clone(), ops.number[1].clone()], vec![0.5, 3.0]).unwrap();
        assert!(space.truncation_tail(r.state()).unwrap() < 0.05);
        let h = hopping(&ops, 1.0);
        let times: Vec<f64> = (0..=16).map(|k| k as f64 * 0.1).collect();
        let points = liouville_evolve(&r, &h, &times).unwrap();
        let n0 = r.state().expectation(&n);
        let s0 = entropy(r.state(), 1.0);
        let n1: Vec<f64> = points.iter().map(|p| p.expectations[0]).collect();
        assert_abs_diff_eq!(n1[0], r.expectations()[0], epsilon = 1e-10);
        let spread = n1.iter().cloned().fold(f64::MIN, f64::max) - n1.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 0.1, "{spread}");
        for p in &points {
            assert_abs_diff_eq!(p.state.expectation(&n), n0, epsilon = 1e-9);
            assert_abs_diff_eq!(p.state.matrix().trace().re, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(entropy(&p.state, 1.0), s0, epsilon = 1e-9);
        }
        assert!(points[0].fit_residual < 1e-8);
        assert!(points.iter().map(|p| p.fit_residual).fold(0.0, f64::max) > 1e-3);
        assert!(max_abs(&(points[0].state.matrix() - r.state().matrix())) < 1e-12);
    }
}
