//! Double-precision checks: NLS evolution, conserved charges on grids and
//! monodromy traces along `x` and along `t`.

mod charges;
mod evolve;
mod grid;
mod monodromy;

pub use charges::{charge, charge_evaluate, relative_drift};
pub use evolve::{convergence_table, evolve_nls, ConvergenceRow, PlaneWave, Trajectory};
pub use grid::{fft, ifft, wavenumbers, GridState};
pub use monodromy::{expm2, transfer_matrix, MonodromySample, Path, C2};

use crate::ringcore::RingError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("grid needs at least 16 samples, got {0}")]
    GridTooSmall(usize),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("jet {0} is not available on this grid")]
    JetUnavailable(String),
    #[error("integration became unstable at step {step} (mass {mass})")]
    Unstable { step: usize, mass: f64 },
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
}
