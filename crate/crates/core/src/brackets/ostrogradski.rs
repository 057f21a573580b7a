use std::collections::BTreeMap;

use super::BracketError;
use crate::ringcore::{AuxKind, DiffPoly, Direction, Field, JetVar, Rules};

/// First-order form of a Lagrangian along the evolution direction.
#[derive(Clone, Debug)]
pub struct OstrogradskiSystem {
    pub evolution: Direction,
    /// Highest derivative order of the original Lagrangian along `evolution`.
    pub order: u32,
    /// Lagrangian with Ostrogradski fields and multiplier terms.
    pub lagrangian: DiffPoly,
    /// Configuration variables, base fields first.
    pub fields: Vec<JetVar>,
    /// Jet values of the auxiliary fields and multipliers on solutions.
    pub jet_values: Rules,
}

fn pair_index(f: Field) -> u8 {
    if f == Field::Psi {
        1
    } else {
        2
    }
}

/// Replace `D^m psi` (`1 <= m < order`) by Ostrogradski fields `vphi^(m)`
/// and add `mu^(m) (vphi^(m) - D vphi^(m-1))` for every relation.
/// Lagrangians of order at most one pass through unchanged.
pub fn ostrogradski_reduce(l: &DiffPoly, evolution: Direction) -> Result<OstrogradskiSystem, BracketError> {
    let mut order = 0;
    for v in l.variables() {
        if v.is_aux() {
            return Err(BracketError::NotFieldLagrangian(v.name()));
        }
        let k = v.order(evolution);
        if k > 0 && v.base().derived(evolution, k) != v {
            return Err(BracketError::MixedJet(v.name()));
        }
        order = order.max(k);
    }
    let bases = [Field::Psi, Field::PsiBar];
    let mut fields: Vec<JetVar> = bases.iter().map(|f| JetVar::field(*f)).collect();
    if order <= 1 {
        return Ok(OstrogradskiSystem { evolution, order, lagrangian: l.clone(), fields, jet_values: Rules::new() });
    }

    let ostro = |f: Field, m: u32| JetVar::aux(AuxKind::Ostro, pair_index(f), m as u8);
    let mult = |f: Field, m: u32| JetVar::aux(AuxKind::Mult, pair_index(f), m as u8);
    let mut to_aux = Rules::new();
    let mut ostro_jets = Rules::new();
    for f in bases {
        for m in 1..order {
            let jet = JetVar::field(f).derived(evolution, m);
            to_aux.insert(jet.clone(), DiffPoly::var(ostro(f, m)));
            ostro_jets.insert(ostro(f, m), DiffPoly::var(jet));
        }
    }
    let tilde = l.substitute(&to_aux)?;

    let mut lagrangian = tilde.clone();
    for f in bases {
        for m in 1..order {
            let prev = if m == 1 { DiffPoly::var(JetVar::field(f)) } else { DiffPoly::var(ostro(f, m - 1)) };
            let relation = &DiffPoly::var(ostro(f, m)) - &prev.total_derivative(evolution);
            lagrangian += &(&DiffPoly::var(mult(f, m)) * &relation);
        }
    }
    for m in 1..order {
        for f in bases {
            fields.push(ostro(f, m));
        }
    }
    for m in 1..order {
        for f in bases {
            fields.push(mult(f, m));
        }
    }

    // mu^(m) = -dL~/dvphi^(m) + D dL~/dD vphi^(m) - D mu^(m+1), mu^(order) = 0.
    let mut jet_values = ostro_jets.clone();
    let mut mults: BTreeMap<(Field, u32), DiffPoly> = BTreeMap::new();
    for f in bases {
        for m in (1..order).rev() {
            let phi = ostro(f, m);
            let mut mu = &tilde.partial(&phi).scale(&crate::ringcore::Coefficient::from_int(-1))
                + &tilde.partial(&phi.derived(evolution, 1)).total_derivative(evolution);
            mu = mu.substitute(&ostro_jets)?;
            if let Some(next) = mults.get(&(f, m + 1)) {
                mu = &mu - &next.total_derivative(evolution);
            }
            mults.insert((f, m), mu);
        }
    }
    for ((f, m), mu) in mults {
        jet_values.insert(mult(f, m), mu);
    }
    Ok(OstrogradskiSystem { evolution, order, lagrangian, fields, jet_values })
}

/// Full variational derivative in all independent variables,
/// `sum_K (-D)^K dL/d(D^K v)`.
pub fn euler_lagrange(l: &DiffPoly, v: &JetVar) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for w in l.variables() {
        let Some(extra) = w.prolongation_of(v) else { continue };
        let mut t = l.partial(&w);
        let mut count = 0;
        for (dir, k) in extra {
            t = t.d_pow(dir, k);
            count += k;
        }
        if count % 2 == 0 {
            out += &t;
        } else {
            out = &out - &t;
        }
    }
    out
}

impl OstrogradskiSystem {
    /// Euler-Lagrange expressions of the auxiliary Lagrangian, one per field.
    pub fn equations_of_motion(&self) -> Vec<DiffPoly> {
        self.fields.iter().map(|f| euler_lagrange(&self.lagrangian, f)).collect()
    }

    /// On the jet values of the auxiliary fields, the auxiliary equations
    /// equal the original ones for the base fields and vanish for the rest.
    pub fn reproduces(&self, original: &DiffPoly) -> Result<bool, BracketError> {
        for (f, e) in self.fields.iter().zip(self.equations_of_motion()) {
            let on_jets = e.substitute(&self.jet_values)?;
            let expected = if f.is_aux() { DiffPoly::zero() } else { euler_lagrange(original, f) };
            if on_jets != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
