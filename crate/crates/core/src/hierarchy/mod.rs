//! Riccati series, conserved densities, partner matrices and zero-curvature
//! flows, for the hierarchy based on the NLS matrix and for its dual.

mod partner;
mod riccati;
mod zc;

pub use partner::{generate_partner, generate_partner_from, generating_function_expand, PartnerBase};
pub use riccati::{conserved_density, density_from_series, riccati_residual, solve_w, WSeries};
pub use zc::{
    dual_base, dual_hierarchy, evolution_rules, on_shell, solve_evolution, u_matrix, v_matrix, zero_curvature_residual,
};

use crate::ringcore::RingError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HierarchyError {
    #[error("base matrix is zero")]
    ZeroMatrix,
    #[error("base matrix must be polynomial in lambda, found power {0}")]
    NotPolynomial(i32),
    #[error("leading coefficient has an off-diagonal part")]
    OffDiagonalLeading,
    #[error("leading coefficient is not proportional to sigma3")]
    LeadingNotSigma3,
    #[error("leading coefficient is not an invertible constant multiple of sigma3")]
    LeadingNotConstant,
    #[error("diagonal residue at order {0}")]
    DiagonalResidue(usize),
    #[error("density {0} is not real")]
    NotReal(usize),
    #[error("gamma must be +1 or -1, got {0}")]
    BadGamma(i32),
    #[error("W series has order {have}, need {need}")]
    SeriesTooShort { have: usize, need: usize },
    #[error("residual not in evolution form: {0}")]
    NotEvolutionForm(String),
    #[error("could not eliminate {0}")]
    NotEliminated(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[cfg(test)]
mod tests;
