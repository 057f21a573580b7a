//! Exact differential-polynomial arithmetic over jets of `psi`, `psibar`
//! and auxiliary phase-space variables.

mod coeff;
mod diffpoly;
mod jet;
mod normal_form;
mod wire;

pub use coeff::{rat, Coefficient, GaussRat, Rational};
pub use diffpoly::{DiffPoly, Monomial, Rules, ScalingDimension};
pub use jet::{AuxKind, AuxVar, Direction, Field, JetVar};
pub use normal_form::{normal_form_mod_dx, real_representative};
pub use wire::{CoeffJson, JetJson, TermJson};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RingError {
    #[error("substitution rules are cyclic: {0}")]
    CyclicRules(String),
    #[error("unexpected time jet {0}; substitute evolution rules first")]
    TimeJet(String),
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
    #[error("normal form needs a polynomial in x-jets of psi and psibar only, found {0}")]
    NotFieldPolynomial(String),
}
