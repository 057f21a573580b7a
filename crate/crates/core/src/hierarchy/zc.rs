use crate::laxalg::{LaxMatrix, Mat2};
use crate::ringcore::{rat, Coefficient, DiffPoly, Direction, Field, JetVar, Rules};

use super::partner::generate_partner;
use super::HierarchyError;

/// `-(i lambda / 2) sigma3 + sqrt(kappa) [[0, psibar], [psi, 0]]`.
pub fn u_matrix() -> LaxMatrix {
    let lead = Mat2::sigma3().scale(&Coefficient::i().scale_rational(rat(-1, 2)));
    let q = Mat2::off(DiffPoly::psibar(), DiffPoly::psi()).scale(&Coefficient::sqrt_kappa_pow(1));
    LaxMatrix::new([(1, lead), (0, q)]).with_level(1).with_xi(Direction::X)
}

/// Level-`n` partner of [`u_matrix`].
pub fn v_matrix(n: usize) -> Result<LaxMatrix, HierarchyError> {
    generate_partner(&u_matrix(), 1, n)
}

/// `d_eta X - d_xi Y + [X, Y]` with `xi = X.xi`, `eta = Y.xi`.
pub fn zero_curvature_residual(x: &LaxMatrix, y: &LaxMatrix) -> LaxMatrix {
    &(&x.total_derivative(y.xi) - &y.total_derivative(x.xi)) + &x.commutator(y)
}

/// Read `psi_eta = F`, `psibar_eta = conj F` off the zero-curvature residual
/// and check the residual vanishes identically once they are imposed.
pub fn solve_evolution(x: &LaxMatrix, y: &LaxMatrix) -> Result<Rules, HierarchyError> {
    let eta = y.xi;
    let residual = zero_curvature_residual(x, y);
    let mut rules = Rules::new();
    for field in [Field::Psi, Field::PsiBar] {
        let target = JetVar::field(field).derived(eta, 1);
        let rule = residual
            .coeffs()
            .flat_map(|(_, m)| m.0.iter().flatten().cloned().collect::<Vec<_>>())
            .find_map(|p| {
                let (a, rest) = p.linear_split(&target)?;
                let c = a.as_constant().filter(|c| !c.is_zero())?.try_inv()?;
                if rest.variables().iter().any(|v| v.order(eta) > 0) {
                    return None;
                }
                Some(rest.scale(&-c))
            })
            .ok_or_else(|| HierarchyError::NotEvolutionForm(format!("no entry is linear in {target}")))?;
        rules.insert(target, rule);
    }
    let left = residual.substitute(&rules)?;
    if !left.is_zero() {
        return Err(HierarchyError::NotEvolutionForm(format!("residual after substitution:\n{}", left.to_text())));
    }
    Ok(rules)
}

/// Evolution rules of the level-`n` flow of the hierarchy based on [`u_matrix`].
pub fn evolution_rules(n: usize) -> Result<Rules, HierarchyError> {
    solve_evolution(&u_matrix(), &v_matrix(n)?)
}

/// Level-`base` matrix of the hierarchy, used as the base matrix along `t_base`.
pub fn dual_base(base: usize) -> Result<LaxMatrix, HierarchyError> {
    Ok(v_matrix(base)?.with_xi(Direction::T(base as u32)))
}

/// `m`-th partner of the level-`base` matrix along `t_base`, with `gamma = -1`.
/// Entries may contain `t_base`-jets; see [`on_shell`].
pub fn dual_hierarchy(base: usize, m: usize) -> Result<LaxMatrix, HierarchyError> {
    generate_partner(&dual_base(base)?, -1, m)
}

/// Eliminate jets using evolution rules.
pub fn on_shell(a: &LaxMatrix, rules: &Rules) -> Result<LaxMatrix, HierarchyError> {
    let out = a.substitute(rules)?;
    for (_, m) in out.coeffs() {
        for p in m.0.iter().flatten() {
            if let Some(v) = p.variables().into_iter().find(|v| rules.keys().any(|k| v.prolongation_of(k).is_some())) {
                return Err(HierarchyError::NotEliminated(v.name()));
            }
        }
    }
    Ok(out)
}
