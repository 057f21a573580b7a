use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use super::coeff::Coefficient;
use super::jet::{Direction, Field, JetVar};
use super::RingError;

/// Commutative monomial: sorted `(jet, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(JetVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: JetVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (JetVar, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in factors {
            m = m.mul(&Monomial(vec![(v, e)]));
        }
        m
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, v: &JetVar) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    /// Divide out one power of `v`; `None` if `v` is absent.
    pub fn without_one(&self, v: &JetVar) -> Option<Monomial> {
        let i = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let mut out = self.0.clone();
        if out[i].1 == 1 {
            out.remove(i);
        } else {
            out[i].1 -= 1;
        }
        Some(Monomial(out))
    }

    pub fn scaling_dimension(&self) -> i64 {
        self.0.iter().map(|(v, e)| v.scaling_dimension() * *e as i64).sum()
    }

    pub fn conj(&self) -> Monomial {
        Monomial::from_factors(self.0.iter().map(|(v, e)| (v.conj(), *e)))
    }

    pub fn name(&self) -> String {
        self.0
            .iter()
            .map(|(v, e)| if *e == 1 { v.name() } else { format!("{}^{}", v.name(), e) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Result of [`DiffPoly::scaling_dimension`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingDimension {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

/// Substitution rules `jet -> replacement`, auto-prolonged on use.
pub type Rules = BTreeMap<JetVar, DiffPoly>;

/// Exact polynomial in commuting jet variables with [`Coefficient`] scalars.
///
/// Canonical by construction: monomials are sorted multisets and zero
/// coefficients are purged, so `==` decides equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Coefficient>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coefficient::one())
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: JetVar) -> Self {
        Self::term(Coefficient::one(), Monomial::var(v))
    }

    pub fn psi() -> Self {
        Self::var(JetVar::psi())
    }

    pub fn psibar() -> Self {
        Self::var(JetVar::psibar())
    }

    /// `d^k psi / dx^k`.
    pub fn psi_x(k: u32) -> Self {
        Self::var(JetVar::psi().derived(Direction::X, k))
    }

    pub fn psibar_x(k: u32) -> Self {
        Self::var(JetVar::psibar().derived(Direction::X, k))
    }

    pub fn term(c: Coefficient, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Coefficient> {
        match self.terms.len() {
            0 => Some(Coefficient::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Coefficient) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        let mut out = DiffPoly::zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &(a * c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut out = DiffPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn variables(&self) -> BTreeSet<JetVar> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn degree_in(&self, v: &JetVar) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Total derivative along `dir` by the Leibniz rule.
    pub fn total_derivative(&self, dir: Direction) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (v, e) in m.factors() {
                let rest = m.without_one(v).expect("factor present");
                let dm = rest.mul(&Monomial::var(v.derived(dir, 1)));
                out.add_term(dm, &c.scale_rational((*e as i128).into()));
            }
        }
        out
    }

    pub fn d_x(&self) -> DiffPoly {
        self.total_derivative(Direction::X)
    }

    pub fn d_t(&self, n: u32) -> DiffPoly {
        self.total_derivative(Direction::T(n))
    }

    pub fn d_pow(&self, dir: Direction, k: u32) -> DiffPoly {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.total_derivative(dir);
        }
        out
    }

    /// Partial derivative with respect to one jet coordinate.
    pub fn partial(&self, v: &JetVar) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                let rest = m.without_one(v).expect("factor present");
                out.add_term(rest, &c.scale_rational((e as i128).into()));
            }
        }
        out
    }

    /// Swap `psi <-> psibar` in every jet and conjugate coefficients.
    pub fn conjugate(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.conj(), &c.conj());
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Coefficient) -> Coefficient) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn scaling_dimension(&self) -> ScalingDimension {
        let mut dims = self.terms.keys().map(Monomial::scaling_dimension);
        match dims.next() {
            None => ScalingDimension::Zero,
            Some(d) => {
                if dims.all(|e| e == d) {
                    ScalingDimension::Homogeneous(d)
                } else {
                    ScalingDimension::Inhomogeneous
                }
            }
        }
    }

    /// True for zero or for homogeneous polynomials of dimension `d`.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        match self.scaling_dimension() {
            ScalingDimension::Zero => true,
            ScalingDimension::Homogeneous(e) => e == d,
            ScalingDimension::Inhomogeneous => false,
        }
    }

    /// Variational derivative `sum_k (-D)^k dP/d(D^k v)` along `dir`, where
    /// `v` is a jet coordinate and `D^k v` its `k`-th derivative along `dir`.
    pub fn euler_along(&self, v: &JetVar, dir: Direction) -> DiffPoly {
        let base_order = v.order(dir);
        let max_k = self
            .variables()
            .iter()
            .filter_map(|w| {
                let extra = w.prolongation_of(v)?;
                let only_dir = extra.iter().all(|(d, _)| *d == dir);
                only_dir.then(|| w.order(dir) - base_order)
            })
            .max();
        let Some(max_k) = max_k else {
            return DiffPoly::zero();
        };
        let mut out = DiffPoly::zero();
        for k in 0..=max_k {
            let p = self.partial(&v.derived(dir, k)).d_pow(dir, k);
            if k % 2 == 0 {
                out += &p;
            } else {
                out = &out - &p;
            }
        }
        out
    }

    /// Euler operator in `x` for the given field.
    ///
    /// Vanishes identically exactly when (for polynomials without a constant
    /// term) the input is a total `x`-derivative in that field direction.
    pub fn euler_operator(&self, field: Field) -> Result<DiffPoly, RingError> {
        if let Some(v) = self.variables().into_iter().find(|v| v.has_t()) {
            return Err(RingError::TimeJet(v.name()));
        }
        Ok(self.euler_along(&JetVar::field(field), Direction::X))
    }

    /// Both field Euler operators vanish.
    pub fn is_total_x_derivative(&self) -> Result<bool, RingError> {
        Ok(self.euler_operator(Field::Psi)?.is_zero() && self.euler_operator(Field::PsiBar)?.is_zero())
    }

    /// Apply substitution rules, prolonging each rule by total
    /// differentiation to every derived jet it covers.
    pub fn substitute(&self, rules: &Rules) -> Result<DiffPoly, RingError> {
        for (k, rhs) in rules {
            if let Some(v) = rhs.variables().iter().find(|v| v.prolongation_of(k).is_some()) {
                return Err(RingError::CyclicRules(format!("{k} -> ... {v}")));
            }
        }
        let mut cache: HashMap<JetVar, Option<DiffPoly>> = HashMap::new();
        let mut current = self.clone();
        for _ in 0..64 {
            let (next, changed) = substitute_once(&current, rules, &mut cache);
            if !changed {
                return Ok(next);
            }
            current = next;
        }
        Err(RingError::CyclicRules("substitution did not terminate".into()))
    }

    /// Split a polynomial of degree at most one in `v` as `a * v + b`.
    pub fn linear_split(&self, v: &JetVar) -> Option<(DiffPoly, DiffPoly)> {
        if self.degree_in(v) > 1 {
            return None;
        }
        let a = self.partial(v);
        let mut b = DiffPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == 0 {
                b.add_term(m.clone(), c);
            }
        }
        Some((a, b))
    }

    /// Numerical evaluation with jets supplied by `value` and a real `kappa`.
    pub fn eval<F: FnMut(&JetVar) -> Complex64>(&self, kappa: f64, mut value: F) -> Complex64 {
        let mut cache: HashMap<JetVar, Complex64> = HashMap::new();
        let mut sum = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut prod = c.eval(kappa);
            for (v, e) in m.factors() {
                let x = *cache.entry(v.clone()).or_insert_with(|| value(v));
                prod *= x.powu(*e);
            }
            sum += prod;
        }
        sum
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono: String = m
                .factors()
                .iter()
                .map(|(v, e)| if *e == 1 { v.to_latex() } else { format!("{{{}}}^{{{}}}", v.to_latex(), e) })
                .collect::<Vec<_>>()
                .join(" ");
            let coeff = c.to_latex();
            let piece = match (m.is_one(), coeff.as_str()) {
                (true, _) => coeff,
                (false, "1") => mono,
                (false, "-1") => format!("-{mono}"),
                (false, _) => format!("{coeff} {mono}"),
            };
            if i > 0 && !piece.starts_with('-') {
                s.push_str(" + ");
            } else if i > 0 {
                s.push(' ');
            }
            s.push_str(&piece);
        }
        s
    }
}

fn substitute_once(
    p: &DiffPoly,
    rules: &Rules,
    cache: &mut HashMap<JetVar, Option<DiffPoly>>,
) -> (DiffPoly, bool) {
    let mut changed = false;
    let mut out = DiffPoly::zero();
    for (m, c) in p.terms() {
        let mut acc = DiffPoly::constant(c.clone());
        let mut kept = Monomial::one();
        for (v, e) in m.factors() {
            let repl = cache
                .entry(v.clone())
                .or_insert_with(|| {
                    // The most specific rule wins when several keys cover `v`.
                    let (_, extra, rhs) = rules
                        .iter()
                        .filter_map(|(k, rhs)| {
                            let extra = v.prolongation_of(k)?;
                            let n: u32 = extra.iter().map(|(_, c)| c).sum();
                            Some((n, extra, rhs))
                        })
                        .min_by_key(|(n, _, _)| *n)?;
                    let mut r = rhs.clone();
                    for (dir, count) in extra {
                        r = r.d_pow(dir, count);
                    }
                    Some(r)
                })
                .clone();
            match repl {
                Some(r) => {
                    changed = true;
                    acc = &acc * &r.pow(*e);
                }
                None => kept = kept.mul(&Monomial(vec![(v.clone(), *e)])),
            }
        }
        for (am, ac) in acc.terms() {
            out.add_term(am.mul(&kept), ac);
        }
    }
    (out, changed)
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, o: &DiffPoly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Coefficient::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, o: DiffPoly) -> DiffPoly {
                (&self).$m(&o)
            }
        }
        impl $tr<&DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $m(self, o: &DiffPoly) -> DiffPoly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl Mul<&DiffPoly> for &Coefficient {
    type Output = DiffPoly;
    fn mul(self, p: &DiffPoly) -> DiffPoly {
        p.scale(self)
    }
}

impl Mul<DiffPoly> for Coefficient {
    type Output = DiffPoly;
    fn mul(self, p: DiffPoly) -> DiffPoly {
        p.scale(&self)
    }
}

impl From<Coefficient> for DiffPoly {
    fn from(c: Coefficient) -> Self {
        DiffPoly::constant(c)
    }
}

impl From<JetVar> for DiffPoly {
    fn from(v: JetVar) -> Self {
        DiffPoly::var(v)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_one() {
                    m.name()
                } else if *c == -Coefficient::one() {
                    format!("-{}", m.name())
                } else {
                    format!("{}*{}", c, m.name())
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Coefficient {
        Coefficient::kappa()
    }

    #[test]
    fn additive_inverse_and_product() {
        let psi = DiffPoly::psi();
        assert!((&psi + &(-&psi)).is_zero());
        let pp = &psi * &DiffPoly::psibar();
        assert_eq!(pp.num_terms(), 1);
        assert!(pp.coefficient(&Monomial::from_factors([(JetVar::psi(), 1), (JetVar::psibar(), 1)])).is_one());
        let sq = &pp * &pp;
        assert_eq!(sq, &DiffPoly::psi().pow(2) * &DiffPoly::psibar().pow(2));
    }

    #[test]
    fn derivatives() {
        assert_eq!(DiffPoly::psi().d_x(), DiffPoly::psi_x(1));
        let pp = &DiffPoly::psi() * &DiffPoly::psibar();
        let expect = &(&DiffPoly::psi_x(1) * &DiffPoly::psibar()) + &(&DiffPoly::psi() * &DiffPoly::psibar_x(1));
        assert_eq!(pp.d_x(), expect);
        let mixed = DiffPoly::var(JetVar::new(Field::Psi, 1, &[(2, 1)]));
        assert_eq!(DiffPoly::psi_x(1).d_t(2), mixed);
    }

    #[test]
    fn conjugation_of_y_block() {
        let y = &DiffPoly::psi_x(2).scale(&Coefficient::sqrt_kappa_pow(1))
            - &(&DiffPoly::psi().pow(2) * &DiffPoly::psibar()).scale(&Coefficient::term(3, super::super::coeff::GaussRat::real(2.into())));
        let ybar = &DiffPoly::psibar_x(2).scale(&Coefficient::sqrt_kappa_pow(1))
            - &(&DiffPoly::psibar().pow(2) * &DiffPoly::psi()).scale(&Coefficient::term(3, super::super::coeff::GaussRat::real(2.into())));
        assert_eq!(y.conjugate(), ybar);
        let ipsi = DiffPoly::psi().scale(&Coefficient::i());
        assert_eq!(ipsi.conjugate(), DiffPoly::psibar().scale(&-Coefficient::i()));
    }

    #[test]
    fn scaling_dimensions() {
        let h = &(&DiffPoly::psi_x(1) * &DiffPoly::psibar_x(1))
            + &(&DiffPoly::psi() * &DiffPoly::psibar()).pow(2).scale(&k());
        assert_eq!(h.scaling_dimension(), ScalingDimension::Homogeneous(4));
        let bad = &DiffPoly::psi() + &(&DiffPoly::psi() * &DiffPoly::psibar());
        assert_eq!(bad.scaling_dimension(), ScalingDimension::Inhomogeneous);
        let x = (&(&DiffPoly::psibar_x(1) * &DiffPoly::psi()) - &(&DiffPoly::psi_x(1) * &DiffPoly::psibar())).scale(&-k());
        assert_eq!(x.scaling_dimension(), ScalingDimension::Homogeneous(3));
    }

    #[test]
    fn euler_operator_examples() {
        let total = &(&DiffPoly::psi_x(1) * &DiffPoly::psibar()) + &(&DiffPoly::psi() * &DiffPoly::psibar_x(1));
        assert!(total.euler_operator(Field::Psi).unwrap().is_zero());
        let quartic = (&DiffPoly::psi().pow(2) * &DiffPoly::psibar().pow(2)).scale(&k());
        let expect = (&DiffPoly::psi() * &DiffPoly::psibar().pow(2)).scale(&(&Coefficient::from_int(2) * &k()));
        assert_eq!(quartic.euler_operator(Field::Psi).unwrap(), expect);
        let kin = &DiffPoly::psi_x(1) * &DiffPoly::psibar_x(1);
        assert_eq!(kin.euler_operator(Field::PsiBar).unwrap(), -&DiffPoly::psi_x(2));
        let tj = DiffPoly::var(JetVar::new(Field::Psi, 0, &[(2, 1)]));
        assert!(matches!(tj.euler_operator(Field::Psi), Err(RingError::TimeJet(_))));
    }

    #[test]
    fn substitution_examples() {
        let psi_t2 = JetVar::new(Field::Psi, 0, &[(2, 1)]);
        let nls = &DiffPoly::psi_x(2).scale(&Coefficient::i())
            - &(&DiffPoly::psi().pow(2) * &DiffPoly::psibar()).scale(&(&Coefficient::from_int(2) * &(&Coefficient::i() * &k())));
        let rules: Rules = [(psi_t2.clone(), nls.clone())].into_iter().collect();
        assert_eq!(DiffPoly::var(psi_t2.clone()).substitute(&rules).unwrap(), nls);
        assert_eq!(DiffPoly::psi_x(1).substitute(&Rules::new()).unwrap(), DiffPoly::psi_x(1));
        let shift: Rules = [(psi_t2.clone(), DiffPoly::psi_x(1))].into_iter().collect();
        let mixed = DiffPoly::var(psi_t2.derived(Direction::X, 1));
        assert_eq!(mixed.substitute(&shift).unwrap(), DiffPoly::psi_x(2));
        let cyclic: Rules = [(JetVar::psi().derived(Direction::X, 1), DiffPoly::psi_x(2))].into_iter().collect();
        assert!(matches!(DiffPoly::psi_x(1).substitute(&cyclic), Err(RingError::CyclicRules(_))));
    }

    #[test]
    fn substitution_prolongs_through_new_t_jets() {
        // psi_{t2 t2} needs the rule twice.
        let psi_t2 = JetVar::new(Field::Psi, 0, &[(2, 1)]);
        let psibar_t2 = JetVar::new(Field::PsiBar, 0, &[(2, 1)]);
        let rules: Rules = [
            (psi_t2.clone(), DiffPoly::psi_x(1)),
            (psibar_t2.clone(), DiffPoly::psibar_x(1)),
        ]
        .into_iter()
        .collect();
        let p = DiffPoly::var(psi_t2.derived(Direction::T(2), 1));
        assert_eq!(p.substitute(&rules).unwrap(), DiffPoly::psi_x(2));
    }
}
