//! Ultralocal brackets, the r-matrix check, and the Legendre/Dirac route
//! from level Lagrangians to equal-time and equal-space brackets.

mod dirac;
mod lagrangian;
mod ostrogradski;
mod rmatrix;
mod table;

pub use dirac::{dirac_pipeline, hamilton_check, ConstraintSystem, LegendreResult};
pub use lagrangian::{build_level_lagrangian, LevelLagrangian};
pub use ostrogradski::{euler_lagrange, ostrogradski_reduce, OstrogradskiSystem};
pub use rmatrix::{matrix_bracket, verify_rmatrix, EntryResidual, RMatrixReport};
pub use table::{leibniz_bracket, BracketTable, TableLabel};

use crate::hierarchy::HierarchyError;
use crate::laxalg::LaxError;
use crate::ringcore::RingError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BracketError {
    #[error("{0} is not a coordinate of the bracket table")]
    Undeclared(String),
    #[error("diagonal entry {{{0}, {1}}} must vanish")]
    NotAntisymmetric(String, String),
    #[error("Lagrangian must be built from psi and psibar jets, found {0}")]
    NotFieldLagrangian(String),
    #[error("jet {0} mixes the evolution direction with another one")]
    MixedJet(String),
    #[error("evolution and slice directions coincide")]
    SameDirection,
    #[error("Lagrangian is more than quadratic in velocities")]
    NotQuadratic,
    #[error("velocity Hessian entry ({0}, {1}) is not constant")]
    NonConstantHessian(String, String),
    #[error("regular block of the velocity Hessian is singular")]
    SingularHessian,
    #[error("constraint involves {0}, which is not a phase-space coordinate")]
    NonUltralocalConstraint(String),
    #[error("constraint bracket ({0}, {1}) is not constant")]
    NonConstantConstraintMatrix(usize, usize),
    #[error("constraint matrix is singular")]
    FirstClass,
    #[error("cannot solve constraint {0}")]
    Unsolvable(String),
    #[error("reduced phase space has odd dimension {0}")]
    OddReducedSpace(usize),
    #[error("jet {0} is not reachable from the reduced coordinates")]
    NotInvertible(String),
    #[error("translated bracket table is not closed on its jets")]
    NotClosed,
    #[error("level Lagrangians start at level 2, got {0}")]
    Level(u32),
    #[error("normalization of the level Lagrangian failed: {0}")]
    Normalization(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Lax(#[from] LaxError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}
