//! Symbolic and numerical toolkit for the NLS hierarchy and its
//! space-time dual.

pub mod brackets;
pub mod hierarchy;
pub mod laxalg;
pub mod numlab;
pub mod ringcore;
