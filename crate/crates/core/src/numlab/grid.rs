use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::NumError;
use crate::ringcore::{Direction, Field, JetVar};

/// Uniform periodic samples of `psi` along one variable on `[-half_length, half_length)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridState {
    pub samples: Vec<Complex64>,
    pub half_length: f64,
    pub variable: Direction,
    pub kappa: f64,
}

impl GridState {
    pub fn new(samples: Vec<Complex64>, half_length: f64, variable: Direction, kappa: f64) -> Result<Self, NumError> {
        if samples.len() < 16 {
            return Err(NumError::GridTooSmall(samples.len()));
        }
        if !(half_length > 0.0) {
            return Err(NumError::BadParameter("half_length must be positive".into()));
        }
        Ok(GridState { samples, half_length, variable, kappa })
    }

    /// Sample `f` at the grid points.
    pub fn from_fn(n: usize, half_length: f64, variable: Direction, kappa: f64, f: impl Fn(f64) -> Complex64) -> Result<Self, NumError> {
        let h = 2.0 * half_length / n as f64;
        let samples = (0..n).map(|j| f(-half_length + j as f64 * h)).collect();
        Self::new(samples, half_length, variable, kappa)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_length / self.len() as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.step()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        wavenumbers(self.len(), self.half_length)
    }

    /// `sum |psi|^2 h`.
    pub fn mass(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.step()
    }

    pub fn spectrum(&self) -> Vec<Complex64> {
        fft(&self.samples)
    }

    /// `k`-th spectral derivative along the grid variable.
    pub fn derivative(&self, k: u32) -> Vec<Complex64> {
        if k == 0 {
            return self.samples.clone();
        }
        let n = self.len();
        let ks = self.wavenumbers();
        let mut spec = self.spectrum();
        for (j, z) in spec.iter_mut().enumerate() {
            // The Nyquist mode has no odd derivative.
            if n % 2 == 0 && j == n / 2 && k % 2 == 1 {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= Complex64::new(0.0, ks[j]).powu(k);
            }
        }
        ifft(&spec)
    }

    /// Values of every requested jet at every grid point. Jets may only be
    /// differentiated along the grid variable.
    pub fn jets(&self, vars: &[JetVar]) -> Result<BTreeMap<JetVar, Vec<Complex64>>, NumError> {
        let mut by_order: BTreeMap<u32, Vec<Complex64>> = BTreeMap::new();
        let mut out = BTreeMap::new();
        for v in vars {
            let k = v.order(self.variable);
            if v.base().derived(self.variable, k) != *v || v.is_aux() {
                return Err(NumError::JetUnavailable(v.name()));
            }
            let d = by_order.entry(k).or_insert_with(|| self.derivative(k));
            let vals = match v.field {
                Field::Psi => d.clone(),
                _ => d.iter().map(|z| z.conj()).collect(),
            };
            out.insert(v.clone(), vals);
        }
        Ok(out)
    }
}

pub fn wavenumbers(n: usize, half_length: f64) -> Vec<f64> {
    let base = PI / half_length;
    (0..n)
        .map(|j| {
            let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            base * m
        })
        .collect()
}

pub fn fft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

pub fn ifft(x: &[Complex64]) -> Vec<Complex64> {
    let mut buf = x.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    let n = buf.len() as f64;
    buf.iter_mut().for_each(|z| *z /= n);
    buf
}
