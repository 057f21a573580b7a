//! Exact scalars: Gaussian rationals times integer powers of `sqrt(kappa)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational used throughout the symbolic modules.
pub type Rational = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// `re + i im` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRat { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussRat { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re, im: -self.im }
    }

    pub fn norm_sqr(&self) -> Rational {
        self.re * self.re + self.im * self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(GaussRat { re: self.re / n, im: -self.im / n })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re, im: -self.im }
    }
}

/// Finite sum `sum_p c_p * kappa^(p/2)` with Gaussian-rational `c_p`.
///
/// Zero terms are never stored, so structural equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient {
    terms: BTreeMap<i32, GaussRat>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i128) -> Self {
        Self::term(0, GaussRat::real(Rational::from_integer(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::term(0, GaussRat::real(q))
    }

    pub fn frac(num: i128, den: i128) -> Self {
        Self::from_rational(rat(num, den))
    }

    pub fn i() -> Self {
        Self::term(0, GaussRat::i())
    }

    /// `kappa^(p/2)`.
    pub fn sqrt_kappa_pow(p: i32) -> Self {
        Self::term(p, GaussRat::one())
    }

    pub fn kappa() -> Self {
        Self::sqrt_kappa_pow(2)
    }

    pub fn term(sqrt_kappa_pow: i32, value: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(sqrt_kappa_pow, value);
        }
        Coefficient { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRat)> {
        self.terms.iter().map(|(p, v)| (*p, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn conj(&self) -> Self {
        Coefficient { terms: self.terms.iter().map(|(p, v)| (*p, v.conj())).collect() }
    }

    /// Multiplicative inverse, available for single-term coefficients only.
    pub fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (p, v) = self.terms.iter().next()?;
        Some(Self::term(-*p, v.inv()?))
    }

    /// The rational value if this coefficient is a plain rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        match self.terms.iter().next() {
            Some((0, v)) if self.terms.len() == 1 && v.im.is_zero() => Some(v.re),
            _ => None,
        }
    }

    /// `sqrt(kappa) -> -sqrt(kappa)`: the action of complex conjugation on
    /// odd powers when `kappa < 0`.
    pub fn flip_odd_sqrt_kappa(&self) -> Self {
        let mut out = Coefficient::zero();
        for (p, g) in self.terms() {
            let g = if p % 2 != 0 { -g } else { g.clone() };
            out += &Coefficient::term(p, g);
        }
        out
    }

    pub fn scale_rational(&self, q: Rational) -> Self {
        let g = GaussRat::real(q);
        self * &Coefficient::term(0, g)
    }

    /// Numerical value for a given real `kappa`. Negative `kappa` uses
    /// `sqrt(kappa) = i sqrt(|kappa|)`.
    pub fn eval(&self, kappa: f64) -> Complex64 {
        let root = if kappa >= 0.0 {
            Complex64::new(kappa.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-kappa).sqrt())
        };
        self.terms
            .iter()
            .map(|(p, v)| v.to_complex() * root.powi(*p))
            .sum()
    }

    fn insert_add(&mut self, p: i32, v: GaussRat) {
        let entry = self.terms.entry(p).or_insert_with(GaussRat::zero);
        *entry = &*entry + &v;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, o: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        for (p, v) in &o.terms {
            out.insert_add(*p, v.clone());
        }
        out
    }
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, o: &Coefficient) {
        for (p, v) in &o.terms {
            self.insert_add(*p, v.clone());
        }
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, o: &Coefficient) -> Coefficient {
        self + &(-o)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, o: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (p, a) in &self.terms {
            for (q, b) in &o.terms {
                out.insert_add(p + q, a * b);
            }
        }
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        Coefficient { terms: self.terms.iter().map(|(p, v)| (*p, -v)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coefficient {
            type Output = Coefficient;
            fn $m(self, o: Coefficient) -> Coefficient {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn fmt_gauss(g: &GaussRat) -> String {
    match (g.re.is_zero(), g.im.is_zero()) {
        (_, true) => fmt_rational(&g.re),
        (true, false) => {
            if g.im.is_one() {
                "i".into()
            } else if g.im == -Rational::one() {
                "-i".into()
            } else {
                format!("{}i", fmt_rational(&g.im))
            }
        }
        (false, false) => {
            let sign = if g.im.is_negative() { "-" } else { "+" };
            let im = g.im.abs();
            let im_s = if im.is_one() { "i".to_string() } else { format!("{}i", fmt_rational(&im)) };
            format!("({}{}{})", fmt_rational(&g.re), sign, im_s)
        }
    }
}

fn fmt_kappa(p: i32) -> String {
    match p {
        0 => String::new(),
        1 => "sqrt(kappa)".into(),
        2 => "kappa".into(),
        p if p % 2 == 0 => format!("kappa^{}", p / 2),
        p => format!("kappa^({}/2)", p),
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, v)| {
                let k = fmt_kappa(*p);
                let g = fmt_gauss(v);
                match (k.is_empty(), g.as_str()) {
                    (true, _) => g,
                    (false, "1") => k,
                    (false, "-1") => format!("-{k}"),
                    (false, _) => format!("{g}*{k}"),
                }
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(" + "))
        }
    }
}

fn latex_rational(q: &Rational) -> String {
    let sign = if q.is_negative() { "-" } else { "" };
    let a = q.abs();
    if a.is_integer() {
        format!("{sign}{}", a.numer())
    } else {
        format!("{sign}\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

fn latex_gauss(g: &GaussRat) -> String {
    let im = |q: &Rational| {
        if q.is_one() {
            "i".to_string()
        } else if *q == -Rational::one() {
            "-i".to_string()
        } else {
            format!("{}i", latex_rational(q))
        }
    };
    match (g.re.is_zero(), g.im.is_zero()) {
        (_, true) => latex_rational(&g.re),
        (true, false) => im(&g.im),
        (false, false) => {
            let i_part = im(&g.im);
            let joined = if i_part.starts_with('-') { i_part } else { format!("+{i_part}") };
            format!("({}{})", latex_rational(&g.re), joined)
        }
    }
}

impl Coefficient {
    /// LaTeX rendering of the coefficient.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, v)| {
                let k = match *p {
                    0 => String::new(),
                    1 => "\\sqrt{\\kappa}".into(),
                    2 => "\\kappa".into(),
                    p if p % 2 == 0 => format!("\\kappa^{{{}}}", p / 2),
                    p => format!("\\kappa^{{{}\\over 2}}", p),
                };
                let g = latex_gauss(v);
                match (k.is_empty(), g.as_str()) {
                    (true, _) => g,
                    (false, "1") => k,
                    (false, "-1") => format!("-{k}"),
                    (false, _) => format!("{g}{k}"),
                }
            })
            .collect();
        if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.join("+"))
        }
    }
}
