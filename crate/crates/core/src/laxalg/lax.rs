use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde_json::json;

use super::mat2::Mat2;
use crate::ringcore::{Coefficient, DiffPoly, Direction, JetVar, RingError, Rules};

/// 2x2 matrix of Laurent polynomials in the spectral parameter `lambda`.
///
/// `level` is the declared hierarchy level (used by [`LaxMatrix::graded`]) and
/// `xi` the independent variable this matrix generates translations along.
#[derive(Clone, Debug)]
pub struct LaxMatrix {
    coeffs: BTreeMap<i32, Mat2>,
    pub level: Option<u32>,
    pub xi: Direction,
}

impl PartialEq for LaxMatrix {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}

impl LaxMatrix {
    pub fn new(coeffs: impl IntoIterator<Item = (i32, Mat2)>) -> Self {
        let mut out = LaxMatrix { coeffs: BTreeMap::new(), level: None, xi: Direction::X };
        for (j, m) in coeffs {
            out.add_coeff(j, &m);
        }
        out
    }

    pub fn zero() -> Self {
        Self::new([])
    }

    pub fn constant(m: Mat2) -> Self {
        Self::new([(0, m)])
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = Some(level);
        self
    }

    pub fn with_xi(mut self, xi: Direction) -> Self {
        self.xi = xi;
        self
    }

    pub fn add_coeff(&mut self, j: i32, m: &Mat2) {
        let sum = match self.coeffs.get(&j) {
            Some(e) => e + m,
            None => m.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&j);
        } else {
            self.coeffs.insert(j, sum);
        }
    }

    /// Coefficient of `lambda^j`.
    pub fn coeff(&self, j: i32) -> Mat2 {
        self.coeffs.get(&j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &Mat2)> {
        self.coeffs.iter().map(|(j, m)| (*j, m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_polynomial(&self) -> bool {
        self.low_degree().map_or(true, |d| d >= 0)
    }

    /// Multiply by `lambda^k`.
    pub fn shift(&self, k: i32) -> LaxMatrix {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|(j, m)| (j + k, m.clone())).collect();
        out
    }

    pub fn map(&self, f: impl Fn(&Mat2) -> Mat2) -> LaxMatrix {
        let mut out = LaxMatrix { coeffs: BTreeMap::new(), level: self.level, xi: self.xi };
        for (j, m) in &self.coeffs {
            out.add_coeff(*j, &f(m));
        }
        out
    }

    pub fn scale(&self, c: &Coefficient) -> LaxMatrix {
        self.map(|m| m.scale(c))
    }

    pub fn commutator(&self, o: &LaxMatrix) -> LaxMatrix {
        &(self * o) - &(o * self)
    }

    pub fn trace(&self) -> BTreeMap<i32, DiffPoly> {
        self.coeffs
            .iter()
            .map(|(j, m)| (*j, m.trace()))
            .filter(|(_, t)| !t.is_zero())
            .collect()
    }

    pub fn trace_zero(&self) -> bool {
        self.trace().is_empty()
    }

    /// `conj(X(lambda)) == sigma X(lambda) sigma` with `lambda` real and
    /// `sigma = sigma1` (`kappa > 0`) or `sigma2` (`kappa < 0`).
    pub fn sigma_symmetric(&self, kappa_negative: bool) -> bool {
        let s = if kappa_negative { Mat2::sigma2() } else { Mat2::sigma1() };
        self.coeffs
            .values()
            .all(|m| m.conjugate_entries(kappa_negative) == &(&s * m) * &s)
    }

    /// Entries at `lambda^j` homogeneous of dimension `level - j`.
    pub fn graded(&self) -> bool {
        let Some(n) = self.level else {
            return false;
        };
        self.coeffs.iter().all(|(j, m)| {
            m.0.iter().flatten().all(|p| p.is_homogeneous_of(n as i64 - *j as i64))
        })
    }

    pub fn total_derivative(&self, dir: Direction) -> LaxMatrix {
        self.map(|m| m.total_derivative(dir))
    }

    pub fn substitute(&self, rules: &Rules) -> Result<LaxMatrix, RingError> {
        let mut out = LaxMatrix { coeffs: BTreeMap::new(), level: self.level, xi: self.xi };
        for (j, m) in &self.coeffs {
            out.add_coeff(*j, &m.substitute(rules)?);
        }
        Ok(out)
    }

    /// The polynomial multiplying `lambda^j` in entry `(r, c)`.
    pub fn entry(&self, r: usize, c: usize) -> BTreeMap<i32, DiffPoly> {
        self.coeffs
            .iter()
            .map(|(j, m)| (*j, m.0[r][c].clone()))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    pub fn eval<F: FnMut(&JetVar) -> Complex64>(&self, lambda: Complex64, kappa: f64, mut value: F) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (j, m) in &self.coeffs {
            let lp = lambda.powi(*j);
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] += lp * m.0[r][c].eval(kappa, &mut value);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "level": self.level,
            "xi": self.xi.label(),
            "coeffs": self.coeffs.iter().rev().map(|(j, m)| json!({
                "lambda_pow": j,
                "entries": [[m.0[0][0].to_json(), m.0[0][1].to_json()],
                            [m.0[1][0].to_json(), m.0[1][1].to_json()]],
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut rows = Vec::new();
        for r in 0..2 {
            let cells: Vec<String> = (0..2).map(|c| entry_text(&self.entry(r, c))).collect();
            rows.push(format!("[ {} , {} ]", cells[0], cells[1]));
        }
        rows.join("\n")
    }

    pub fn to_latex(&self) -> String {
        let cell = |r, c| entry_latex(&self.entry(r, c));
        format!(
            "\\begin{{pmatrix}}\n  {} & {} \\cr\n  {} & {}\n\\end{{pmatrix}}",
            cell(0, 0),
            cell(0, 1),
            cell(1, 0),
            cell(1, 1)
        )
    }
}

fn lambda_power_text(j: i32) -> String {
    match j {
        1 => "lambda".into(),
        _ => format!("lambda^{j}"),
    }
}

fn entry_text(e: &BTreeMap<i32, DiffPoly>) -> String {
    if e.is_empty() {
        return "0".into();
    }
    e.iter()
        .rev()
        .map(|(j, p)| if *j == 0 { p.to_string() } else { format!("{}*({})", lambda_power_text(*j), p) })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn entry_latex(e: &BTreeMap<i32, DiffPoly>) -> String {
    if e.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (j, p)) in e.iter().rev().enumerate() {
        let lam = match j {
            0 => String::new(),
            1 => "\\lambda".into(),
            _ => format!("\\lambda^{{{j}}}"),
        };
        let body = p.to_latex();
        let piece = if lam.is_empty() {
            body
        } else if p.num_terms() == 1 {
            match body.as_str() {
                "1" => lam,
                "-1" => format!("-{lam}"),
                _ => match body.strip_prefix('-') {
                    Some(rest) => format!("-{lam} {rest}"),
                    None => format!("{lam} {body}"),
                },
            }
        } else {
            format!("{lam}\\left({body}\\right)")
        };
        if k > 0 && !piece.starts_with('-') {
            s.push_str(" + ");
        } else if k > 0 {
            s.push(' ');
        }
        s.push_str(&piece);
    }
    s
}

impl Add for &LaxMatrix {
    type Output = LaxMatrix;
    fn add(self, o: &LaxMatrix) -> LaxMatrix {
        let mut out = self.clone();
        for (j, m) in &o.coeffs {
            out.add_coeff(*j, m);
        }
        out
    }
}

impl Sub for &LaxMatrix {
    type Output = LaxMatrix;
    fn sub(self, o: &LaxMatrix) -> LaxMatrix {
        let mut out = self.clone();
        for (j, m) in &o.coeffs {
            out.add_coeff(*j, &-m);
        }
        out
    }
}

impl Mul for &LaxMatrix {
    type Output = LaxMatrix;
    fn mul(self, o: &LaxMatrix) -> LaxMatrix {
        let mut out = LaxMatrix { coeffs: BTreeMap::new(), level: None, xi: self.xi };
        for (j, a) in &self.coeffs {
            for (k, b) in &o.coeffs {
                out.add_coeff(j + k, &(a * b));
            }
        }
        out
    }
}

impl Neg for &LaxMatrix {
    type Output = LaxMatrix;
    fn neg(self) -> LaxMatrix {
        self.map(|m| -m)
    }
}

impl Add for LaxMatrix {
    type Output = LaxMatrix;
    fn add(self, o: LaxMatrix) -> LaxMatrix {
        &self + &o
    }
}

impl Sub for LaxMatrix {
    type Output = LaxMatrix;
    fn sub(self, o: LaxMatrix) -> LaxMatrix {
        &self - &o
    }
}

impl Mul for LaxMatrix {
    type Output = LaxMatrix;
    fn mul(self, o: LaxMatrix) -> LaxMatrix {
        &self * &o
    }
}

impl Neg for LaxMatrix {
    type Output = LaxMatrix;
    fn neg(self) -> LaxMatrix {
        -&self
    }
}
