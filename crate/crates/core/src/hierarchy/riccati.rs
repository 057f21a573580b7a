use crate::laxalg::{LaxMatrix, Mat2};
use crate::ringcore::{Coefficient, DiffPoly, Direction, GaussRat};

use super::HierarchyError;

/// Coefficients of `W(lambda) = sum_{n>=1} W_n lambda^{-n}` for a base matrix.
#[derive(Clone, Debug)]
pub struct WSeries {
    /// `w[n - 1]` is `W_n`.
    w: Vec<Mat2>,
    pub x: LaxMatrix,
    pub xi: Direction,
}

impl WSeries {
    pub fn order(&self) -> usize {
        self.w.len()
    }

    /// `W_n`, zero beyond the computed order and for `n == 0`.
    pub fn get(&self, n: i64) -> Mat2 {
        if n < 1 {
            return Mat2::zero();
        }
        self.w.get(n as usize - 1).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &[Mat2] {
        &self.w
    }

    /// Replace `W_n` (for corruption tests and external series).
    pub fn with_coefficient(mut self, n: usize, m: Mat2) -> Self {
        self.w[n - 1] = m;
        self
    }

    /// `w_n` in `W_n = i sqrt(kappa) [[0, -conj(w_n)], [w_n, 0]]`, or `None`
    /// when `W_n` lacks that reality structure.
    pub fn reduced(&self, n: usize) -> Option<DiffPoly> {
        let m = self.get(n as i64);
        if !m.is_off_diagonal() {
            return None;
        }
        let inv = Coefficient::term(-1, GaussRat::new(0.into(), (-1).into()));
        let w = m.get(1, 0).scale(&inv);
        let wbar = m.get(0, 1).scale(&-&inv);
        (wbar == w.conjugate()).then_some(w)
    }
}

fn degree(x: &LaxMatrix) -> Result<i64, HierarchyError> {
    match (x.low_degree(), x.degree()) {
        (Some(lo), Some(hi)) if lo >= 0 => Ok(hi as i64),
        (Some(lo), _) => Err(HierarchyError::NotPolynomial(lo)),
        _ => Err(HierarchyError::ZeroMatrix),
    }
}

/// Coefficient of `lambda^{N-n}` in `W_xi - X_d W + W X_d - X_o + W X_o W`
/// using the `W_k` held by `w` (absent ones count as zero).
fn riccati_order(x: &LaxMatrix, w: &WSeries, n: i64) -> Result<Mat2, HierarchyError> {
    let big_n = degree(x)?;
    let mut r = w.get(n - big_n).total_derivative(w.xi);
    for (p, xp) in x.coeffs() {
        let p = p as i64;
        let xd = xp.diagonal_part();
        let xo = xp.off_diagonal_part();
        let k = p - big_n + n;
        if k >= 1 {
            r = &r - &xd.commutator(&w.get(k));
            for k1 in 1..k {
                r = &r + &(&(&w.get(k1) * &xo) * &w.get(k - k1));
            }
        }
        if p == big_n - n {
            r = &r - &xo;
        }
    }
    Ok(r)
}

/// Per-order Riccati residual for orders `0..=w.order()`; all vanish for a
/// correct series.
pub fn riccati_residual(x: &LaxMatrix, w: &WSeries) -> Result<Vec<Mat2>, HierarchyError> {
    (0..=w.order() as i64).map(|n| riccati_order(x, w, n)).collect()
}

/// Solve the Riccati equation order by order up to `W_k`.
///
/// At each order the unknown enters only through `[c sigma3, W_n]`, with
/// `c sigma3` the leading diagonal coefficient, which is inverted in closed form.
pub fn solve_w(x: &LaxMatrix, k: usize) -> Result<WSeries, HierarchyError> {
    let big_n = degree(x)?;
    let lead = x.coeff(big_n as i32);
    if !lead.off_diagonal_part().is_zero() {
        return Err(HierarchyError::OffDiagonalLeading);
    }
    let c = lead.sigma3_multiple().ok_or(HierarchyError::LeadingNotSigma3)?;
    let c = c.as_constant().ok_or(HierarchyError::LeadingNotConstant)?;
    let half_inv = Coefficient::from_int(2).try_inv().and_then(|h| c.try_inv().map(|ci| &h * &ci));
    let half_inv = half_inv.ok_or(HierarchyError::LeadingNotConstant)?;
    let mut w = WSeries { w: Vec::with_capacity(k), x: x.clone(), xi: x.xi };
    for n in 1..=k {
        w.w.push(Mat2::zero());
        let r = riccati_order(x, &w, n as i64)?;
        if !r.is_off_diagonal() {
            return Err(HierarchyError::DiagonalResidue(n));
        }
        let a = r.get(0, 1).scale(&half_inv);
        let b = r.get(1, 0).scale(&-&half_inv);
        w.w[n - 1] = Mat2::off(a, b);
    }
    Ok(w)
}

/// Density of `z_n = (1 / 2 i kappa) tr[sigma3 Z_n]`, namely
/// `(1 / 2 i kappa) sum_p tr[sigma3 X_o^{(p)} W_{p+n}]`; needs `W` to order `N + n`.
pub fn conserved_density(x: &LaxMatrix, n: usize) -> Result<DiffPoly, HierarchyError> {
    let big_n = degree(x)? as usize;
    let w = solve_w(x, big_n + n)?;
    density_from_series(&w, n)
}

pub fn density_from_series(w: &WSeries, n: usize) -> Result<DiffPoly, HierarchyError> {
    let mut acc = DiffPoly::zero();
    for (p, xp) in w.x.coeffs() {
        let prod = &(&Mat2::sigma3() * &xp.off_diagonal_part()) * &w.get(p as i64 + n as i64);
        acc += &prod.trace();
    }
    let norm = Coefficient::term(2, GaussRat::new(0.into(), 2.into())).try_inv().expect("2 i kappa is invertible");
    let h = acc.scale(&norm);
    if h.conjugate() != h {
        return Err(HierarchyError::NotReal(n));
    }
    Ok(h)
}
