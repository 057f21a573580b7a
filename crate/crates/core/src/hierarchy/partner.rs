use crate::laxalg::{LaxMatrix, Mat2};
use crate::ringcore::{Coefficient, Direction};

use super::riccati::{solve_w, WSeries};
use super::HierarchyError;

/// Normalization of the zeroth partner matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartnerBase {
    /// `(i gamma / 2) sigma3`, the value forced by expanding the generating function.
    Consistent,
    /// `(i gamma kappa / 2) sigma3`.
    WithKappa,
}

impl PartnerBase {
    fn matrix(self, gamma: i32) -> Mat2 {
        let half_i = Coefficient::i().scale_rational(crate::ringcore::rat(gamma as i128, 2));
        let c = match self {
            PartnerBase::Consistent => half_i,
            PartnerBase::WithKappa => &half_i * &Coefficient::kappa(),
        };
        Mat2::sigma3().scale(&c)
    }
}

fn check_gamma(gamma: i32) -> Result<(), HierarchyError> {
    if gamma == 1 || gamma == -1 {
        Ok(())
    } else {
        Err(HierarchyError::BadGamma(gamma))
    }
}

/// Compositions of `n` into positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn eta_for(x: &LaxMatrix, n: u32) -> Direction {
    match x.xi {
        Direction::X => Direction::T(n),
        Direction::T(_) => Direction::X,
    }
}

/// `Y_n = lambda Y_{n-1} + i gamma sigma3 sum_j (-1)^j sum_{m_1+..+m_j=n} W_{m_1}..W_{m_j}`.
///
/// Matrices generated from a base along `x` are tagged with `t_n`; those
/// generated from a base along a time are tagged with `x`.
pub fn generate_partner_from(w: &WSeries, gamma: i32, n: usize, base: PartnerBase) -> Result<LaxMatrix, HierarchyError> {
    check_gamma(gamma)?;
    if w.order() < n {
        return Err(HierarchyError::SeriesTooShort { have: w.order(), need: n });
    }
    let i_gamma_s3 = Mat2::sigma3().scale(&Coefficient::i().scale_rational((gamma as i128).into()));
    let mut y = LaxMatrix::constant(base.matrix(gamma));
    for k in 1..=n {
        let mut sum = Mat2::zero();
        for parts in compositions(k) {
            let prod = parts.iter().fold(Mat2::identity(), |acc, &m| &acc * &w.get(m as i64));
            sum = if parts.len() % 2 == 0 { &sum + &prod } else { &sum - &prod };
        }
        y = &y.shift(1) + &LaxMatrix::constant(&i_gamma_s3 * &sum);
    }
    Ok(y.with_level(n as u32).with_xi(eta_for(&w.x, n as u32)))
}

pub fn generate_partner(x: &LaxMatrix, gamma: i32, n: usize) -> Result<LaxMatrix, HierarchyError> {
    let w = solve_w(x, n)?;
    generate_partner_from(&w, gamma, n, PartnerBase::Consistent)
}

/// Expand `gamma kappa / (2i (lambda - mu)) (1 + W(mu)) sigma3 (1 + W(mu))^{-1}`
/// in `1/mu` and read off `Y_0 .. Y_{k-1}` from `kappa sum_n Y_{n-1} mu^{-n}`.
///
/// Uses the geometric series of `1/(lambda - mu)` and the Neumann series
/// of `(1 + W)^{-1}` built recursively, independently of the composition sums.
pub fn generating_function_expand(x: &LaxMatrix, gamma: i32, k: usize) -> Result<Vec<LaxMatrix>, HierarchyError> {
    check_gamma(gamma)?;
    let w = solve_w(x, k.saturating_sub(1))?;
    let order = k.saturating_sub(1);
    let mut inv = vec![Mat2::identity()];
    for m in 1..=order {
        let mut acc = Mat2::zero();
        for j in 1..=m {
            acc = &acc - &(&w.get(j as i64) * &inv[m - j]);
        }
        inv.push(acc);
    }
    // S_m: coefficient of mu^{-m} in (1 + W) sigma3 (1 + W)^{-1}.
    let s: Vec<Mat2> = (0..=order)
        .map(|m| {
            (0..=m).fold(Mat2::zero(), |acc, a| {
                let one_plus_w = if a == 0 { Mat2::identity() } else { w.get(a as i64) };
                &acc + &(&(&one_plus_w * &Mat2::sigma3()) * &inv[m - a])
            })
        })
        .collect();
    // 1/(lambda - mu) = -sum_j lambda^j mu^{-j-1}, so the mu^{-n} coefficient
    // of the generating function is -(gamma kappa / 2i) sum_{j+m=n-1} lambda^j S_m.
    let pref = Coefficient::i().scale_rational(crate::ringcore::rat(gamma as i128, 2));
    let mut out = Vec::with_capacity(k);
    for n in 0..k {
        let mut y = LaxMatrix::zero();
        for m in 0..=n {
            y = &y + &LaxMatrix::constant(s[m].scale(&pref)).shift((n - m) as i32);
        }
        out.push(y.with_level(n as u32).with_xi(eta_for(x, n as u32)));
    }
    Ok(out)
}
