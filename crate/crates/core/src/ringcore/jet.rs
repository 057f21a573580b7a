use std::fmt;

use serde::{Deserialize, Serialize};

/// Role of an auxiliary phase-space variable introduced by the Legendre /
/// Ostrogradski machinery. The pair index `j` follows the field convention
/// (1 for the psi-like member, 2 for the psibar-like member).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AuxKind {
    /// Ostrogradski field standing for the `m`-th derivative along the evolution variable.
    Ostro,
    /// Lagrange multiplier enforcing the `m`-th Ostrogradski relation.
    Mult,
    /// Momentum conjugate to the base field.
    MomField,
    /// Momentum conjugate to an Ostrogradski field.
    MomOstro,
    /// Momentum conjugate to a multiplier.
    MomMult,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AuxVar {
    pub kind: AuxKind,
    pub j: u8,
    pub m: u8,
}

impl AuxVar {
    pub fn new(kind: AuxKind, j: u8, m: u8) -> Self {
        AuxVar { kind, j, m }
    }

    /// Conjugation swaps the members of a pair.
    pub fn conj(self) -> Self {
        AuxVar { j: 3 - self.j, ..self }
    }

    pub fn name(&self) -> String {
        let base = match self.kind {
            AuxKind::Ostro => "vphi",
            AuxKind::Mult => "mu",
            AuxKind::MomField => "Pi",
            AuxKind::MomOstro => "P",
            AuxKind::MomMult => "Lambda",
        };
        format!("{base}{}_{}", self.m, self.j)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (head, j) = s.rsplit_once('_')?;
        let j: u8 = j.parse().ok()?;
        let split = head.find(|c: char| c.is_ascii_digit())?;
        let (base, m) = head.split_at(split);
        let m: u8 = m.parse().ok()?;
        let kind = match base {
            "vphi" => AuxKind::Ostro,
            "mu" => AuxKind::Mult,
            "Pi" => AuxKind::MomField,
            "P" => AuxKind::MomOstro,
            "Lambda" => AuxKind::MomMult,
            _ => return None,
        };
        Some(AuxVar { kind, j, m })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Psi,
    PsiBar,
    Aux(AuxVar),
}

impl Field {
    pub fn conj(self) -> Self {
        match self {
            Field::Psi => Field::PsiBar,
            Field::PsiBar => Field::Psi,
            Field::Aux(a) => Field::Aux(a.conj()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Field::Psi => "psi".into(),
            Field::PsiBar => "psibar".into(),
            Field::Aux(a) => a.name(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "psi" => Some(Field::Psi),
            "psibar" => Some(Field::PsiBar),
            other => AuxVar::parse(other).map(Field::Aux),
        }
    }
}

/// An independent variable along which total derivatives are taken:
/// `x` or one of the hierarchy times `t_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    X,
    T(u32),
}

impl Direction {
    /// Scaling dimension of the derivative.
    pub fn dimension(self) -> i64 {
        match self {
            Direction::X => 1,
            Direction::T(n) => n as i64,
        }
    }

    pub fn label(self) -> String {
        match self {
            Direction::X => "x".into(),
            Direction::T(n) => format!("t{n}"),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A jet coordinate: a field differentiated `x_order` times in `x` and
/// `t_orders[k].1` times in `t_{t_orders[k].0}`.
///
/// `t_orders` is sorted by level and never holds a zero order, so the
/// derived ordering is the canonical `(field, x_order, t_orders)` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub field: Field,
    pub x_order: u32,
    t_orders: Vec<(u32, u32)>,
}

impl JetVar {
    pub fn new(field: Field, x_order: u32, t_orders: &[(u32, u32)]) -> Self {
        let mut v = JetVar { field, x_order, t_orders: Vec::new() };
        for &(n, k) in t_orders {
            v.bump(Direction::T(n), k);
        }
        v
    }

    pub fn field(field: Field) -> Self {
        JetVar { field, x_order: 0, t_orders: Vec::new() }
    }

    pub fn psi() -> Self {
        Self::field(Field::Psi)
    }

    pub fn psibar() -> Self {
        Self::field(Field::PsiBar)
    }

    pub fn aux(kind: AuxKind, j: u8, m: u8) -> Self {
        Self::field(Field::Aux(AuxVar::new(kind, j, m)))
    }

    pub fn t_orders(&self) -> &[(u32, u32)] {
        &self.t_orders
    }

    pub fn order(&self, dir: Direction) -> u32 {
        match dir {
            Direction::X => self.x_order,
            Direction::T(n) => self
                .t_orders
                .iter()
                .find(|(m, _)| *m == n)
                .map(|(_, k)| *k)
                .unwrap_or(0),
        }
    }

    fn bump(&mut self, dir: Direction, k: u32) {
        if k == 0 {
            return;
        }
        match dir {
            Direction::X => self.x_order += k,
            Direction::T(n) => match self.t_orders.binary_search_by_key(&n, |(m, _)| *m) {
                Ok(i) => self.t_orders[i].1 += k,
                Err(i) => self.t_orders.insert(i, (n, k)),
            },
        }
    }

    /// This jet differentiated `k` more times along `dir`.
    pub fn derived(&self, dir: Direction, k: u32) -> Self {
        let mut v = self.clone();
        v.bump(dir, k);
        v
    }

    /// The same jet with the order along `dir` replaced by `k`.
    pub fn with_order(&self, dir: Direction, k: u32) -> Self {
        let mut v = self.clone();
        match dir {
            Direction::X => v.x_order = k,
            Direction::T(n) => {
                v.t_orders.retain(|(m, _)| *m != n);
                v.bump(dir, k);
            }
        }
        v
    }

    /// Underived version of this jet.
    pub fn base(&self) -> Self {
        Self::field(self.field)
    }

    pub fn has_t(&self) -> bool {
        !self.t_orders.is_empty()
    }

    pub fn is_aux(&self) -> bool {
        matches!(self.field, Field::Aux(_))
    }

    /// `1 + x_order + sum_n n * order_n`; auxiliary variables are dimensionless.
    pub fn scaling_dimension(&self) -> i64 {
        if self.is_aux() {
            return 0;
        }
        1 + self.x_order as i64 + self.t_orders.iter().map(|(n, k)| (*n * *k) as i64).sum::<i64>()
    }

    pub fn conj(&self) -> Self {
        JetVar { field: self.field.conj(), ..self.clone() }
    }

    /// If `self` is obtained from `other` by further differentiation,
    /// return the extra derivatives as `(direction, count)` pairs.
    pub fn prolongation_of(&self, other: &JetVar) -> Option<Vec<(Direction, u32)>> {
        if self.field != other.field || self.x_order < other.x_order {
            return None;
        }
        let mut extra = Vec::new();
        if self.x_order > other.x_order {
            extra.push((Direction::X, self.x_order - other.x_order));
        }
        for &(n, k) in &other.t_orders {
            if self.order(Direction::T(n)) < k {
                return None;
            }
        }
        for &(n, k) in &self.t_orders {
            let d = k - other.order(Direction::T(n));
            if d > 0 {
                extra.push((Direction::T(n), d));
            }
        }
        Some(extra)
    }

    /// Plain-text name, e.g. `psibar_xx_t2`.
    pub fn name(&self) -> String {
        let mut s = self.field.name();
        if self.x_order > 0 || !self.t_orders.is_empty() {
            s.push('_');
            s.push_str(&"x".repeat(self.x_order as usize));
            for (n, k) in &self.t_orders {
                for _ in 0..*k {
                    s.push_str(&format!("t{n}"));
                }
            }
        }
        s
    }

    pub fn to_latex(&self) -> String {
        let base = match self.field {
            Field::Psi => "\\psi".to_string(),
            Field::PsiBar => "\\bar\\psi".to_string(),
            Field::Aux(a) => {
                let sym = match a.kind {
                    AuxKind::Ostro => "\\varphi",
                    AuxKind::Mult => "\\mu",
                    AuxKind::MomField => "\\mathcal{P}^{0}",
                    AuxKind::MomOstro => "\\mathcal{P}^{1}",
                    AuxKind::MomMult => "\\Lambda",
                };
                format!("{sym}_{{{}}}", a.j)
            }
        };
        let mut sub = "x".repeat(self.x_order as usize);
        for (n, k) in &self.t_orders {
            for _ in 0..*k {
                sub.push_str(&format!("t_{n}"));
            }
        }
        if sub.is_empty() {
            base
        } else {
            format!("{base}_{{{sub}}}")
        }
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_t_orders() {
        let a = JetVar::new(Field::Psi, 1, &[(3, 1), (2, 1)]);
        let b = JetVar::psi().derived(Direction::T(2), 1).derived(Direction::X, 1).derived(Direction::T(3), 1);
        assert_eq!(a, b);
        assert_eq!(a.t_orders(), &[(2, 1), (3, 1)]);
        assert_eq!(a.scaling_dimension(), 1 + 1 + 2 + 3);
    }

    #[test]
    fn prolongation_detection() {
        let base = JetVar::new(Field::Psi, 0, &[(2, 1)]);
        let j = JetVar::new(Field::Psi, 2, &[(2, 1)]);
        assert_eq!(j.prolongation_of(&base), Some(vec![(Direction::X, 2)]));
        assert_eq!(JetVar::psi().prolongation_of(&base), None);
        assert_eq!(JetVar::psibar().derived(Direction::T(2), 1).prolongation_of(&base), None);
    }

    #[test]
    fn aux_names_round_trip() {
        let a = AuxVar::new(AuxKind::MomOstro, 2, 1);
        assert_eq!(AuxVar::parse(&a.name()), Some(a));
        assert_eq!(Field::parse("psibar"), Some(Field::PsiBar));
    }
}
