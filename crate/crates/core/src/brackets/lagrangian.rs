use super::BracketError;
use crate::hierarchy::{conserved_density, evolution_rules, u_matrix};
use crate::ringcore::{real_representative, Coefficient, DiffPoly, Direction, Field, JetVar};

/// Level-`n` Lagrangian `(i/2)(psibar psi_t - psi psibar_t) - c H`, with
/// `H` the real normal form of the next conserved density.
#[derive(Clone, Debug)]
pub struct LevelLagrangian {
    pub level: u32,
    pub lagrangian: DiffPoly,
    /// Real normal form of the density that generates the level-`n` flow.
    pub density: DiffPoly,
    /// Factor `c` making `psi_t = -i dH/dpsibar` reproduce the flow.
    pub normalization: Coefficient,
}

pub fn build_level_lagrangian(n: u32) -> Result<LevelLagrangian, BracketError> {
    if n < 2 {
        return Err(BracketError::Level(n));
    }
    let density = real_representative(&conserved_density(&u_matrix(), n as usize + 1)?)?;
    let psi_t = JetVar::psi().derived(Direction::T(n), 1);
    let target = evolution_rules(n as usize)?
        .remove(&psi_t)
        .ok_or_else(|| BracketError::Normalization(format!("no rule for {psi_t}")))?;
    let e = density.euler_operator(Field::PsiBar)?;
    let minus_i = -&Coefficient::i();
    let image = e.scale(&minus_i);
    let (m, c) = image.terms().next().ok_or_else(|| BracketError::Normalization("density is trivial".into()))?;
    let inv = c.try_inv().ok_or_else(|| BracketError::Normalization(c.to_string()))?;
    let normalization = &target.coefficient(m) * &inv;
    if image.scale(&normalization) != target {
        return Err(BracketError::Normalization(format!("{target} is not a multiple of {image}")));
    }

    let half_i = &Coefficient::frac(1, 2) * &Coefficient::i();
    let kinetic = &(&DiffPoly::psibar() * &DiffPoly::var(psi_t.clone()))
        - &(&DiffPoly::psi() * &DiffPoly::var(psi_t.conj()));
    let lagrangian = &kinetic.scale(&half_i) - &density.scale(&normalization);
    Ok(LevelLagrangian { level: n, lagrangian, density, normalization })
}
