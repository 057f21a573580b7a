use num_complex::Complex64;

use super::{GridState, NumError, Trajectory};
use crate::ringcore::DiffPoly;

/// Periodic trapezoid integral of `density` over one state.
pub fn charge(density: &DiffPoly, state: &GridState) -> Result<Complex64, NumError> {
    let vars: Vec<_> = density.variables().into_iter().collect();
    let jets = state.jets(&vars)?;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..state.len() {
        total += density.eval(state.kappa, |v| jets[v][j]);
    }
    Ok(total * state.step())
}

/// Charge of a real density per snapshot (real part; the imaginary part is rounding).
pub fn charge_evaluate(density: &DiffPoly, traj: &Trajectory) -> Result<Vec<f64>, NumError> {
    traj.states.iter().map(|s| charge(density, s).map(|z| z.re)).collect()
}

/// `max |q - q_0| / |q_0|` (absolute drift when `q_0` vanishes).
pub fn relative_drift(series: &[f64]) -> f64 {
    let Some(&q0) = series.first() else { return 0.0 };
    let scale = if q0.abs() > 0.0 { q0.abs() } else { 1.0 };
    series.iter().map(|q| (q - q0).abs() / scale).fold(0.0, f64::max)
}
