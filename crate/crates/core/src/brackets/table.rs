use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::json;

use super::BracketError;
use crate::ringcore::{DiffPoly, Direction, JetVar};

/// Which picture a table belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableLabel {
    /// Equal-time bracket.
    S,
    /// Equal-space bracket at level `n`.
    T(u32),
    /// Canonical or Dirac bracket on an auxiliary phase space.
    Phase,
}

impl fmt::Display for TableLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableLabel::S => write!(f, "S"),
            TableLabel::T(n) => write!(f, "T{n}"),
            TableLabel::Phase => write!(f, "phase"),
        }
    }
}

/// Ultralocal bracket on a finite set of coordinates: `{a(x), b(y)} = entry(a, b) delta(x - y)`.
///
/// Only entries with `a < b` (coordinate index order) are stored; the rest
/// follow by antisymmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTable {
    coords: Vec<JetVar>,
    index: BTreeMap<JetVar, usize>,
    entries: BTreeMap<(usize, usize), DiffPoly>,
    pub label: TableLabel,
}

impl BracketTable {
    pub fn new(coords: Vec<JetVar>, label: TableLabel) -> Self {
        let index = coords.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        BracketTable { coords, index, entries: BTreeMap::new(), label }
    }

    pub fn coords(&self) -> &[JetVar] {
        &self.coords
    }

    pub fn contains(&self, v: &JetVar) -> bool {
        self.index.contains_key(v)
    }

    fn idx(&self, v: &JetVar) -> Result<usize, BracketError> {
        self.index.get(v).copied().ok_or_else(|| BracketError::Undeclared(v.name()))
    }

    /// Set `{a, b} = value` (and `{b, a} = -value`).
    pub fn set(&mut self, a: &JetVar, b: &JetVar, value: DiffPoly) -> Result<(), BracketError> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        if i == j {
            return if value.is_zero() { Ok(()) } else { Err(BracketError::NotAntisymmetric(a.name(), b.name())) };
        }
        let (key, v) = if i < j { ((i, j), value) } else { ((j, i), -&value) };
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
        Ok(())
    }

    pub fn get(&self, a: &JetVar, b: &JetVar) -> Result<DiffPoly, BracketError> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        Ok(self.get_idx(i, j))
    }

    fn get_idx(&self, i: usize, j: usize) -> DiffPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => DiffPoly::zero(),
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self.entries.get(&(j, i)).map(|p| -p).unwrap_or_default(),
        }
    }

    /// Nonzero entries `(a, b, {a, b})` with `a` before `b`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&JetVar, &JetVar, &DiffPoly)> {
        self.entries.iter().map(|((i, j), p)| (&self.coords[*i], &self.coords[*j], p))
    }

    fn check_declared(&self, p: &DiffPoly) -> Result<(), BracketError> {
        match p.variables().into_iter().find(|v| !self.contains(v)) {
            Some(v) => Err(BracketError::Undeclared(v.name())),
            None => Ok(()),
        }
    }

    /// Leibniz extension: `sum_{a,b} df/da {a, b} dg/db`.
    pub fn bracket(&self, f: &DiffPoly, g: &DiffPoly) -> Result<DiffPoly, BracketError> {
        self.check_declared(f)?;
        self.check_declared(g)?;
        let fv: Vec<usize> = f.variables().iter().map(|v| self.index[v]).collect();
        let gv: Vec<usize> = g.variables().iter().map(|v| self.index[v]).collect();
        let mut out = DiffPoly::zero();
        for &i in &fv {
            let mut inner = DiffPoly::zero();
            for &j in &gv {
                let e = self.get_idx(i, j);
                if !e.is_zero() {
                    inner += &(&e * &g.partial(&self.coords[j]));
                }
            }
            if !inner.is_zero() {
                out += &(&f.partial(&self.coords[i]) * &inner);
            }
        }
        Ok(out)
    }

    /// `{integral of h, g}` for a density `h` whose variables are coordinates
    /// or their derivatives along `slice`: `sum_{a,b} E_a(h) {a, b} dg/db`,
    /// with `E_a` the variational derivative along `slice`.
    pub fn functional_bracket(&self, h: &DiffPoly, g: &DiffPoly, slice: Direction) -> Result<DiffPoly, BracketError> {
        self.check_declared(g)?;
        for v in h.variables() {
            let covered = self.coords.iter().any(|c| {
                v.prolongation_of(c).is_some_and(|extra| extra.iter().all(|(d, _)| *d == slice))
            });
            if !covered {
                return Err(BracketError::Undeclared(v.name()));
            }
        }
        let gv: Vec<usize> = g.variables().iter().map(|v| self.index[v]).collect();
        let mut out = DiffPoly::zero();
        for (i, a) in self.coords.iter().enumerate() {
            let mut inner = DiffPoly::zero();
            for &j in &gv {
                let e = self.get_idx(i, j);
                if !e.is_zero() {
                    inner += &(&e * &g.partial(&self.coords[j]));
                }
            }
            if inner.is_zero() {
                continue;
            }
            let ea = h.euler_along(a, slice);
            if !ea.is_zero() {
                out += &(&ea * &inner);
            }
        }
        Ok(out)
    }

    /// Every entry depends only on declared coordinates.
    pub fn is_closed(&self) -> bool {
        self.entries.values().all(|p| self.check_declared(p).is_ok())
    }

    /// `{a, {b, c}} + {b, {c, a}} + {c, {a, b}}` for every triple with a nonzero value.
    pub fn jacobi_violations(&self) -> Result<Vec<(JetVar, JetVar, JetVar, DiffPoly)>, BracketError> {
        let n = self.coords.len();
        let mut bad = Vec::new();
        // Only coordinates touching some entry can give nonzero terms.
        let active: BTreeSet<usize> = self.entries.keys().flat_map(|(i, j)| [*i, *j]).collect();
        let active: Vec<usize> = active.into_iter().collect();
        let var = |i: usize| DiffPoly::var(self.coords[i].clone());
        for (x, &i) in active.iter().enumerate() {
            for (y, &j) in active.iter().enumerate().skip(x + 1) {
                for &k in active.iter().skip(y + 1) {
                    let t1 = self.bracket(&var(i), &self.get_idx(j, k))?;
                    let t2 = self.bracket(&var(j), &self.get_idx(k, i))?;
                    let t3 = self.bracket(&var(k), &self.get_idx(i, j))?;
                    let s = &(&t1 + &t2) + &t3;
                    if !s.is_zero() {
                        bad.push((self.coords[i].clone(), self.coords[j].clone(), self.coords[k].clone(), s));
                    }
                }
            }
        }
        let _ = n;
        Ok(bad)
    }

    /// Restrict to a subset of coordinates.
    pub fn restrict(&self, coords: &[JetVar]) -> Result<BracketTable, BracketError> {
        let mut t = BracketTable::new(coords.to_vec(), self.label);
        for (x, a) in coords.iter().enumerate() {
            for b in coords.iter().skip(x + 1) {
                t.set(a, b, self.get(a, b)?)?;
            }
        }
        Ok(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label.to_string(),
            "coords": self.coords.iter().map(JetVar::name).collect::<Vec<_>>(),
            "entries": self.nonzero_entries().map(|(a, b, p)| json!({
                "left": a.name(), "right": b.name(), "value": p.to_json(), "text": p.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for BracketTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b, p) in self.nonzero_entries() {
            writeln!(f, "{{{a}, {b}}}_{} = {p}", self.label)?;
        }
        Ok(())
    }
}

/// Free-function form of [`BracketTable::bracket`].
pub fn leibniz_bracket(f: &DiffPoly, g: &DiffPoly, table: &BracketTable) -> Result<DiffPoly, BracketError> {
    table.bracket(f, g)
}
