//! Canonical representatives modulo total `x`-derivatives.

use std::collections::BTreeMap;

use super::coeff::{Coefficient, Rational};
use super::diffpoly::{DiffPoly, Monomial};
use super::jet::{Direction, Field, JetVar};
use super::RingError;

/// Elimination order: monomials carrying the highest jet order are
/// eliminated first, ties broken by the full sorted order profile.
type Key = (u32, Vec<u32>, Monomial);

fn key(m: &Monomial) -> Key {
    let mut orders: Vec<u32> = m
        .factors()
        .iter()
        .flat_map(|(v, e)| std::iter::repeat(v.x_order).take(*e as usize))
        .collect();
    orders.sort_unstable_by(|a, b| b.cmp(a));
    (orders.first().copied().unwrap_or(0), orders, m.clone())
}

/// `(psi count, psibar count, total x-order)`; `d_x` preserves the counts
/// and raises the order by one.
fn sector(m: &Monomial) -> (u32, u32, u32) {
    let (mut a, mut b, mut s) = (0, 0, 0);
    for (v, e) in m.factors() {
        match v.field {
            Field::Psi => a += e,
            Field::PsiBar => b += e,
            Field::Aux(_) => {}
        }
        s += v.x_order * e;
    }
    (a, b, s)
}

/// Non-increasing sequences of `parts` non-negative integers summing to `n`.
fn partitions(n: u32, parts: u32, max: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=max.min(n)).rev() {
        if first * parts < n {
            break;
        }
        for mut rest in partitions(n - first, parts - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn sector_monomials(a: u32, b: u32, s: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for s1 in 0..=s {
        for pa in partitions(s1, a, s1) {
            for pb in partitions(s - s1, b, s - s1) {
                let factors = pa
                    .iter()
                    .map(|&k| (JetVar::psi().derived(Direction::X, k), 1))
                    .chain(pb.iter().map(|&k| (JetVar::psibar().derived(Direction::X, k), 1)));
                out.push(Monomial::from_factors(factors));
            }
        }
    }
    out
}

type Row = BTreeMap<Key, Rational>;

fn rational_row(p: &DiffPoly) -> Row {
    p.terms()
        .map(|(m, c)| (key(m), c.as_rational().expect("d_x of a monomial has rational coefficients")))
        .collect()
}

/// Row echelon basis of `d_x` applied to every monomial of a sector one
/// order lower, indexed by pivot (largest key of each row).
fn echelon_basis(a: u32, b: u32, s: u32) -> BTreeMap<Key, Row> {
    let mut basis: BTreeMap<Key, Row> = BTreeMap::new();
    if s == 0 {
        return basis;
    }
    for m in sector_monomials(a, b, s - 1) {
        let mut row = rational_row(&DiffPoly::term(Coefficient::one(), m).d_x());
        while let Some((lead, lc)) = row.iter().next_back().map(|(k, c)| (k.clone(), *c)) {
            match basis.get(&lead) {
                Some(prow) => {
                    let f = lc / prow[&lead];
                    for (k, c) in prow {
                        let e = row.entry(k.clone()).or_default();
                        *e -= f * c;
                        if *e == Rational::from_integer(0) {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    basis.insert(lead, row);
                    break;
                }
            }
        }
    }
    basis
}

/// Canonical representative of the class of `h` modulo the image of `d_x`.
///
/// Two polynomials in `x`-jets of `psi`, `psibar` differ by a total
/// derivative exactly when their normal forms coincide.
pub fn normal_form_mod_dx(h: &DiffPoly) -> Result<DiffPoly, RingError> {
    let mut sectors: BTreeMap<(u32, u32, u32), BTreeMap<Key, Coefficient>> = BTreeMap::new();
    for v in h.variables() {
        if v.is_aux() || v.has_t() {
            return Err(RingError::NotFieldPolynomial(v.name()));
        }
    }
    for (m, c) in h.terms() {
        sectors.entry(sector(m)).or_default().insert(key(m), c.clone());
    }
    let mut out = DiffPoly::zero();
    for ((a, b, s), mut poly) in sectors {
        let basis = echelon_basis(a, b, s);
        let mut done: Vec<(Key, Coefficient)> = Vec::new();
        while let Some((lead, lc)) = poly.pop_last() {
            match basis.get(&lead) {
                Some(row) => {
                    let f = lc.scale_rational(row[&lead].recip());
                    for (k, c) in row.iter().filter(|(k, _)| **k != lead) {
                        let e = poly.entry(k.clone()).or_default();
                        *e = &*e - &f.scale_rational(*c);
                        if e.is_zero() {
                            poly.remove(k);
                        }
                    }
                }
                None => done.push((lead, lc)),
            }
        }
        for (k, c) in done {
            out.add_term(k.2, &c);
        }
    }
    Ok(out)
}

/// `(NF(h) + conj NF(h)) / 2`: a manifestly real representative of the
/// class of a real density `h`.
pub fn real_representative(h: &DiffPoly) -> Result<DiffPoly, RingError> {
    let nf = normal_form_mod_dx(h)?;
    Ok((&nf + &nf.conjugate()).scale(&Coefficient::frac(1, 2)))
}
