use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use super::{ostrogradski_reduce, BracketError, BracketTable, OstrogradskiSystem, TableLabel};
use crate::ringcore::{AuxKind, Coefficient, DiffPoly, Direction, Field, JetVar, Monomial, Rules};

/// Constrained Hamiltonian data on the full auxiliary phase space.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub canonical: BracketTable,
    /// Canonical Hamiltonian density (velocities of constrained directions dropped).
    pub hamiltonian: DiffPoly,
    pub constraints: Vec<DiffPoly>,
    /// `M_jk = {C_j, C_k}`.
    pub m: Vec<Vec<Coefficient>>,
    pub m_inv: Vec<Vec<Coefficient>>,
    /// Multipliers fixed by consistency, `alpha_k = -sum_j {H, C_j} (M^-1)_jk`.
    pub multipliers: Vec<DiffPoly>,
    /// `{H, C_j} + sum_k alpha_k M_kj` for each constraint; all zero means no secondary constraints.
    pub consistency: Vec<DiffPoly>,
    pub dirac: BracketTable,
    /// Constrained variables solved in terms of the reduced coordinates.
    pub eliminated: Rules,
}

impl ConstraintSystem {
    pub fn second_class(&self) -> bool {
        self.constraints.is_empty() || !self.m_inv.is_empty()
    }

    pub fn no_secondary(&self) -> bool {
        self.consistency.iter().all(DiffPoly::is_zero)
    }
}

/// Everything produced by the Legendre map along one direction.
#[derive(Clone, Debug)]
pub struct LegendreResult {
    pub evolution: Direction,
    pub slice: Direction,
    pub ostrogradski: OstrogradskiSystem,
    pub system: ConstraintSystem,
    pub reduced_table: BracketTable,
    pub reduced_hamiltonian: DiffPoly,
    /// Reduced coordinate -> jet expression.
    pub translation: BTreeMap<JetVar, DiffPoly>,
    /// Bracket table on jets of the fields.
    pub table: BracketTable,
    /// Hamiltonian density in jets.
    pub hamiltonian: DiffPoly,
}

fn momentum_of(q: &JetVar) -> JetVar {
    match q.field {
        Field::Psi => JetVar::aux(AuxKind::MomField, 1, 0),
        Field::PsiBar => JetVar::aux(AuxKind::MomField, 2, 0),
        Field::Aux(a) => {
            let kind = match a.kind {
                AuxKind::Ostro => AuxKind::MomOstro,
                AuxKind::Mult => AuxKind::MomMult,
                _ => unreachable!("momenta are not configuration variables"),
            };
            JetVar::aux(kind, a.j, a.m)
        }
    }
}

/// Which variable a constraint is solved for: lower ranks first.
fn elimination_rank(v: &JetVar) -> u8 {
    match v.field {
        Field::Aux(a) => match a.kind {
            AuxKind::Mult => 0,
            AuxKind::MomMult => 1,
            AuxKind::MomOstro => 2,
            AuxKind::MomField => 3,
            AuxKind::Ostro => 4,
        },
        _ => 5,
    }
}

fn constraint_rank(p: &JetVar) -> (u8, u8, u8) {
    match p.field {
        Field::Aux(a) => {
            let k = match a.kind {
                AuxKind::MomOstro => 0,
                AuxKind::MomField => 1,
                _ => 2,
            };
            (k, a.m, a.j)
        }
        _ => (3, 0, 0),
    }
}

/// Replace variables by exact match only (no prolongation).
pub(crate) fn replace_exact(p: &DiffPoly, map: &BTreeMap<JetVar, DiffPoly>) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (m, c) in p.terms() {
        let mut acc = DiffPoly::constant(c.clone());
        for (v, e) in m.factors() {
            let f = match map.get(v) {
                Some(r) => r.pow(*e),
                None => DiffPoly::term(Coefficient::one(), Monomial::from_factors([(v.clone(), *e)])),
            };
            acc = &acc * &f;
        }
        out += &acc;
    }
    out
}

/// Gauss-Jordan inverse over exact coefficients; `None` when a pivot has no inverse.
pub(crate) fn invert(m: &[Vec<Coefficient>]) -> Option<Vec<Vec<Coefficient>>> {
    let n = m.len();
    let mut a: Vec<Vec<Coefficient>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Coefficient::one() } else { Coefficient::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let (piv, inv) = (col..n).find_map(|r| a[r][col].try_inv().map(|x| (r, x)))?;
        a.swap(col, piv);
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Legendre map, Dirac reduction and translation back to field jets.
///
/// `evolution` is the direction playing the role of time; `slice` is the
/// other independent variable along which densities are integrated.
pub fn dirac_pipeline(l: &DiffPoly, evolution: Direction, slice: Direction) -> Result<LegendreResult, BracketError> {
    if evolution == slice {
        return Err(BracketError::SameDirection);
    }
    let ostro = ostrogradski_reduce(l, evolution)?;
    let lag = &ostro.lagrangian;
    let q = &ostro.fields;
    let v: Vec<JetVar> = q.iter().map(|x| x.derived(evolution, 1)).collect();
    let p: Vec<JetVar> = q.iter().map(momentum_of).collect();
    let vel_set: BTreeSet<&JetVar> = v.iter().collect();
    for (m, _) in lag.terms() {
        let deg: u32 = m.factors().iter().filter(|(x, _)| vel_set.contains(x)).map(|(_, e)| e).sum();
        if deg > 2 {
            return Err(BracketError::NotQuadratic);
        }
    }

    // Hessian in the velocities.
    let n = q.len();
    let first: Vec<DiffPoly> = v.iter().map(|x| lag.partial(x)).collect();
    let mut hess = vec![vec![Coefficient::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            hess[a][b] = first[a]
                .partial(&v[b])
                .as_constant()
                .ok_or_else(|| BracketError::NonConstantHessian(v[a].name(), v[b].name()))?;
        }
    }
    let degenerate: Vec<usize> = (0..n).filter(|&a| hess[a].iter().all(Coefficient::is_zero)).collect();
    let regular: Vec<usize> = (0..n).filter(|a| !degenerate.contains(a)).collect();
    let a_rr: Vec<Vec<Coefficient>> =
        regular.iter().map(|&a| regular.iter().map(|&b| hess[a][b].clone()).collect()).collect();
    let a_inv = invert(&a_rr).ok_or(BracketError::SingularHessian)?;

    let zero_vel: Rules = v.iter().map(|x| (x.clone(), DiffPoly::zero())).collect();
    let b: Vec<DiffPoly> = first.iter().map(|f| replace_exact(f, &zero_vel)).collect();

    // v_R = A_RR^-1 (p_R - b_R); constrained velocities drop out.
    let mut vel_rules: BTreeMap<JetVar, DiffPoly> = zero_vel.clone();
    for (r, &a) in regular.iter().enumerate() {
        let mut e = DiffPoly::zero();
        for (s, &c) in regular.iter().enumerate() {
            let shifted = &DiffPoly::var(p[c].clone()) - &b[c];
            e += &shifted.scale(&a_inv[r][s]);
        }
        vel_rules.insert(v[a].clone(), e);
    }
    let mut h = replace_exact(lag, &vel_rules).scale(&Coefficient::from_int(-1));
    for &a in &regular {
        h += &(&DiffPoly::var(p[a].clone()) * &vel_rules[&v[a]]);
    }

    let mut coords = q.clone();
    coords.extend(p.iter().cloned());
    let mut canonical = BracketTable::new(coords.clone(), TableLabel::Phase);
    for (qa, pa) in q.iter().zip(&p) {
        canonical.set(pa, qa, DiffPoly::one())?;
    }

    let mut order = degenerate.clone();
    order.sort_by_key(|&a| constraint_rank(&p[a]));
    let constraints: Vec<DiffPoly> = order.iter().map(|&a| &DiffPoly::var(p[a].clone()) - &b[a]).collect();
    for c in &constraints {
        if let Some(x) = c.variables().into_iter().find(|x| !canonical.contains(x)) {
            return Err(BracketError::NonUltralocalConstraint(x.name()));
        }
    }

    let k = constraints.len();
    let mut m = vec![vec![Coefficient::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            let e = canonical.bracket(&constraints[i], &constraints[j])?;
            m[i][j] = e.as_constant().ok_or(BracketError::NonConstantConstraintMatrix(i, j))?;
        }
    }
    let m_inv = if k == 0 { Vec::new() } else { invert(&m).ok_or(BracketError::FirstClass)? };

    let h_c: Vec<DiffPoly> =
        constraints.iter().map(|c| canonical.functional_bracket(&h, c, slice)).collect::<Result<_, _>>()?;
    let multipliers: Vec<DiffPoly> = (0..k)
        .map(|kk| {
            let mut s = DiffPoly::zero();
            for j in 0..k {
                s += &h_c[j].scale(&m_inv[j][kk]);
            }
            -s
        })
        .collect();
    let consistency: Vec<DiffPoly> = (0..k)
        .map(|j| {
            let mut s = h_c[j].clone();
            for kk in 0..k {
                s += &multipliers[kk].scale(&m[kk][j]);
            }
            s
        })
        .collect();

    // {a, b}_D = {a, b} - {a, C_j} (M^-1)_jk {C_k, b}
    let mut dirac = BracketTable::new(coords.clone(), TableLabel::Phase);
    let with_c: Vec<Vec<DiffPoly>> = coords
        .iter()
        .map(|x| constraints.iter().map(|c| canonical.bracket(&DiffPoly::var(x.clone()), c)).collect())
        .collect::<Result<_, _>>()?;
    for (x, a) in coords.iter().enumerate() {
        for (y, bb) in coords.iter().enumerate().skip(x + 1) {
            let mut e = canonical.get(a, bb)?;
            for j in 0..k {
                if with_c[x][j].is_zero() {
                    continue;
                }
                for kk in 0..k {
                    if m_inv[j][kk].is_zero() || with_c[y][kk].is_zero() {
                        continue;
                    }
                    // {C_k, b} = -{b, C_k}
                    let t = (&with_c[x][j] * &with_c[y][kk]).scale(&m_inv[j][kk]);
                    e += &t;
                }
            }
            dirac.set(a, bb, e)?;
        }
    }

    // Solve each constraint for its highest-priority variable.
    let mut eliminated: BTreeMap<JetVar, DiffPoly> = BTreeMap::new();
    for c in &constraints {
        let mut cands: Vec<(JetVar, Coefficient)> = c
            .variables()
            .into_iter()
            .filter(|x| !eliminated.contains_key(x))
            .filter_map(|x| {
                let (coef, _) = c.linear_split(&x)?;
                Some((x, coef.as_constant()?))
            })
            .collect();
        cands.sort_by_key(|(x, _)| elimination_rank(x));
        let (x, coef) = cands.into_iter().next().ok_or(BracketError::Unsolvable(c.to_string()))?;
        let inv = coef.try_inv().ok_or(BracketError::Unsolvable(c.to_string()))?;
        let rest = c - &DiffPoly::var(x.clone()).scale(&coef);
        eliminated.insert(x, rest.scale(&-&inv));
    }
    // Resolve chains between eliminations.
    for _ in 0..eliminated.len() {
        let snapshot = eliminated.clone();
        for e in eliminated.values_mut() {
            *e = replace_exact(e, &snapshot);
        }
    }
    let reduced: Vec<JetVar> = coords.iter().filter(|x| !eliminated.contains_key(x)).cloned().collect();
    let mut reduced_table = BracketTable::new(reduced.clone(), label_for(evolution, slice));
    for (x, a) in reduced.iter().enumerate() {
        for bb in reduced.iter().skip(x + 1) {
            reduced_table.set(a, bb, replace_exact(&dirac.get(a, bb)?, &eliminated))?;
        }
    }
    let reduced_hamiltonian = replace_exact(&h, &eliminated);

    // Translation of reduced coordinates to jets.
    let mut sigma_rules = ostro.jet_values.clone();
    let mut translation = BTreeMap::new();
    for x in &reduced {
        let val = match q.iter().position(|qq| qq == x) {
            Some(_) if !x.is_aux() => DiffPoly::var(x.clone()),
            Some(_) => sigma_rules[x].clone(),
            None => {
                let a = p.iter().position(|pp| pp == x).expect("coordinate is a field or a momentum");
                first[a].substitute(&ostro.jet_values)?
            }
        };
        translation.insert(x.clone(), val);
    }
    for (x, val) in &translation {
        if x.is_aux() {
            sigma_rules.insert(x.clone(), val.clone());
        }
    }
    let to_jets = |e: &DiffPoly| e.substitute(&sigma_rules);

    let jets = invert_translation(&translation, &reduced, evolution)?;
    let jet_coords: Vec<JetVar> = jets.keys().cloned().collect();
    let mut table = BracketTable::new(jet_coords.clone(), label_for(evolution, slice));
    for (x, a) in jet_coords.iter().enumerate() {
        for bb in jet_coords.iter().skip(x + 1) {
            let e = reduced_table.bracket(&jets[a], &jets[bb])?;
            table.set(a, bb, to_jets(&e)?)?;
        }
    }
    if !table.is_closed() {
        return Err(BracketError::NotClosed);
    }
    let hamiltonian = to_jets(&reduced_hamiltonian)?;

    let system = ConstraintSystem {
        canonical,
        hamiltonian: h,
        constraints,
        m,
        m_inv,
        multipliers,
        consistency,
        dirac,
        eliminated,
    };
    Ok(LegendreResult {
        evolution,
        slice,
        ostrogradski: ostro,
        system,
        reduced_table,
        reduced_hamiltonian,
        translation,
        table,
        hamiltonian,
    })
}

fn label_for(evolution: Direction, slice: Direction) -> TableLabel {
    match (evolution, slice) {
        (Direction::X, Direction::T(n)) => TableLabel::T(n),
        _ => TableLabel::S,
    }
}

/// Express the jets `D^m psi, D^m psibar` (`m < reduced/2`) in reduced coordinates.
/// Each step uses a reduced coordinate whose jet value has exactly one
/// unresolved jet, entering linearly with an invertible constant coefficient.
fn invert_translation(
    translation: &BTreeMap<JetVar, DiffPoly>,
    reduced: &[JetVar],
    evolution: Direction,
) -> Result<BTreeMap<JetVar, DiffPoly>, BracketError> {
    if reduced.len() % 2 != 0 {
        return Err(BracketError::OddReducedSpace(reduced.len()));
    }
    let mut known: BTreeMap<JetVar, DiffPoly> = BTreeMap::new();
    let mut used: BTreeSet<JetVar> = BTreeSet::new();
    loop {
        let mut progress = false;
        for r in reduced {
            if used.contains(r) {
                continue;
            }
            let s = &translation[r];
            let unknown: Vec<JetVar> = s.variables().into_iter().filter(|x| !known.contains_key(x)).collect();
            if unknown.len() != 1 {
                continue;
            }
            let j = &unknown[0];
            let Some((coef, rest)) = s.linear_split(j) else { continue };
            let Some(inv) = coef.as_constant().and_then(|c| c.try_inv()) else { continue };
            let rest = replace_exact(&rest, &known);
            known.insert(j.clone(), (&DiffPoly::var(r.clone()) - &rest).scale(&inv));
            used.insert(r.clone());
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let top = (reduced.len() / 2) as u32;
    let mut out = BTreeMap::new();
    for m in 0..top {
        for f in [Field::Psi, Field::PsiBar] {
            let jet = JetVar::field(f).derived(evolution, m);
            let e = known.get(&jet).ok_or_else(|| BracketError::NotInvertible(jet.name()))?;
            out.insert(jet, e.clone());
        }
    }
    Ok(out)
}

/// `D_evolution J - {H, J}` for every jet coordinate, after imposing `rules` on both sides.
pub fn hamilton_check(result: &LegendreResult, rules: &Rules) -> Result<Vec<(JetVar, DiffPoly)>, BracketError> {
    let mut out = Vec::new();
    for j in result.table.coords() {
        let var = DiffPoly::var(j.clone());
        let lhs = var.total_derivative(result.evolution).substitute(rules)?;
        let rhs = result.table.functional_bracket(&result.hamiltonian, &var, result.slice)?.substitute(rules)?;
        out.push((j.clone(), &lhs - &rhs));
    }
    Ok(out)
}

impl LegendreResult {
    pub fn to_json(&self) -> serde_json::Value {
        let sys = &self.system;
        let mat = |m: &Vec<Vec<Coefficient>>| -> Vec<Vec<String>> {
            m.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
        };
        json!({
            "evolution": self.evolution.label(),
            "slice": self.slice.label(),
            "ostrogradski_order": self.ostrogradski.order,
            "auxiliary_lagrangian": self.ostrogradski.lagrangian.to_string(),
            "constraints": sys.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "constraint_matrix": mat(&sys.m),
            "second_class": sys.second_class(),
            "multipliers": sys.multipliers.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "secondary_constraints": !sys.no_secondary(),
            "reduced_hamiltonian": self.reduced_hamiltonian.to_string(),
            "reduced_table": self.reduced_table.to_json(),
            "hamiltonian": self.hamiltonian.to_json(),
            "hamiltonian_text": self.hamiltonian.to_string(),
            "table": self.table.to_json(),
        })
    }
}
