use num_complex::Complex64;
use serde::Serialize;

use super::grid::{fft, ifft};
use super::{GridState, NumError};
use crate::ringcore::Direction;

/// Snapshots of an NLS run, one per time step (including the initial state).
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GridState>,
}

impl Trajectory {
    pub fn kappa(&self) -> f64 {
        self.states[0].kappa
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// `psi_t = i psi_xx - 2 i kappa |psi|^2 psi` by the integrating-factor
/// fourth-order Runge-Kutta scheme: the dispersive part is integrated
/// exactly in Fourier space, the cubic term by classical RK4.
pub fn evolve_nls(initial: &GridState, t_span: (f64, f64), steps: usize) -> Result<Trajectory, NumError> {
    if initial.variable != Direction::X {
        return Err(NumError::BadParameter("NLS evolution needs data along x".into()));
    }
    if steps == 0 {
        return Err(NumError::BadParameter("steps must be positive".into()));
    }
    let dt = (t_span.1 - t_span.0) / steps as f64;
    let kappa = initial.kappa;
    let ks = initial.wavenumbers();
    let half: Vec<Complex64> = ks.iter().map(|k| Complex64::from_polar(1.0, -k * k * dt / 2.0)).collect();
    let nonlinear = |spec: &[Complex64]| -> Vec<Complex64> {
        let u = ifft(spec);
        let n: Vec<Complex64> = u.iter().map(|z| Complex64::new(0.0, -2.0 * kappa) * z.norm_sqr() * z).collect();
        fft(&n)
    };
    let mul = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> { a.iter().zip(b).map(|(x, y)| x * y).collect() };
    let axpy = |a: &[Complex64], s: f64, b: &[Complex64]| -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| x + y * s).collect()
    };

    let mass0 = initial.mass();
    let mut spec = initial.spectrum();
    let mut times = vec![t_span.0];
    let mut states = vec![initial.clone()];
    for step in 1..=steps {
        let a: Vec<Complex64> = nonlinear(&spec).iter().map(|z| z * dt).collect();
        let e_spec = mul(&half, &spec);
        let b: Vec<Complex64> = nonlinear(&axpy(&e_spec, 0.5, &mul(&half, &a))).iter().map(|z| z * dt).collect();
        let c: Vec<Complex64> = nonlinear(&axpy(&e_spec, 0.5, &b)).iter().map(|z| z * dt).collect();
        let ee_spec = mul(&half, &e_spec);
        let d: Vec<Complex64> = nonlinear(&axpy(&ee_spec, 1.0, &mul(&half, &c))).iter().map(|z| z * dt).collect();
        spec = (0..spec.len())
            .map(|j| {
                let e = half[j];
                e * e * spec[j] + (e * e * a[j] + 2.0 * e * (b[j] + c[j]) + d[j]) / 6.0
            })
            .collect();
        let state = GridState { samples: ifft(&spec), ..initial.clone() };
        let m = state.mass();
        if !m.is_finite() || m > 1e3 * mass0 + f64::MIN_POSITIVE {
            return Err(NumError::Unstable { step, mass: m });
        }
        times.push(t_span.0 + step as f64 * dt);
        states.push(state);
    }
    Ok(Trajectory { times, states })
}

/// Exact plane wave `A exp(i (k x - omega t))`, `omega = k^2 + 2 kappa A^2`,
/// with `k = mode * pi / half_length` so that it is periodic on the cell.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PlaneWave {
    pub amplitude: f64,
    pub mode: i32,
    pub kappa: f64,
    pub half_length: f64,
}

impl PlaneWave {
    pub fn wavenumber(&self) -> f64 {
        self.mode as f64 * std::f64::consts::PI / self.half_length
    }

    pub fn frequency(&self) -> f64 {
        let k = self.wavenumber();
        k * k + 2.0 * self.kappa * self.amplitude * self.amplitude
    }

    pub fn value(&self, x: f64, t: f64) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.wavenumber() * x - self.frequency() * t)
    }

    pub fn grid(&self, n: usize, t: f64) -> Result<GridState, NumError> {
        GridState::from_fn(n, self.half_length, Direction::X, self.kappa, |x| self.value(x, t))
    }

    /// Largest pointwise deviation of a trajectory from the exact wave.
    pub fn max_error(&self, traj: &Trajectory) -> f64 {
        traj.times
            .iter()
            .zip(&traj.states)
            .flat_map(|(t, s)| (0..s.len()).map(move |j| (s.samples[j] - self.value(s.point(j), *t)).norm()))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub steps: usize,
    pub dt: f64,
    pub max_error: f64,
    /// Error of the previous (coarser) row divided by this one.
    pub ratio: Option<f64>,
}

/// Plane-wave error for successive step counts.
pub fn convergence_table(wave: &PlaneWave, n: usize, t_end: f64, step_counts: &[usize]) -> Result<Vec<ConvergenceRow>, NumError> {
    let init = wave.grid(n, 0.0)?;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &steps in step_counts {
        let traj = evolve_nls(&init, (0.0, t_end), steps)?;
        let err = wave.max_error(&traj);
        let ratio = rows.last().map(|r| r.max_error / err);
        rows.push(ConvergenceRow { steps, dt: t_end / steps as f64, max_error: err, ratio });
    }
    Ok(rows)
}
