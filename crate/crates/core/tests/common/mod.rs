#![allow(dead_code)]

use nls_dual::laxalg::{LaxMatrix, Mat2};
use nls_dual::ringcore::{Coefficient, DiffPoly, Direction, Field, GaussRat, JetVar};

pub fn q(re: i128, im: i128, den: i128, sqrt_kappa_pow: i32) -> Coefficient {
    Coefficient::term(sqrt_kappa_pow, GaussRat::new(nls_dual::ringcore::rat(re, den), nls_dual::ringcore::rat(im, den)))
}

pub fn psi(k: u32) -> DiffPoly {
    DiffPoly::psi_x(k)
}

pub fn psibar(k: u32) -> DiffPoly {
    DiffPoly::psibar_x(k)
}

pub fn jet(field: Field, x: u32, t: &[(u32, u32)]) -> DiffPoly {
    DiffPoly::var(JetVar::new(field, x, t))
}

/// `|psi|^2`
pub fn mod2() -> DiffPoly {
    &psi(0) * &psibar(0)
}

pub fn sum(ps: &[DiffPoly]) -> DiffPoly {
    ps.iter().fold(DiffPoly::zero(), |a, p| &a + p)
}

pub fn lax(coeffs: Vec<(i32, [[DiffPoly; 2]; 2])>) -> LaxMatrix {
    LaxMatrix::new(coeffs.into_iter().map(|(j, e)| (j, Mat2(e))))
}

fn z() -> DiffPoly {
    DiffPoly::zero()
}

/// `lambda^j / (2i)` on the diagonal as `(+, -)`.
fn lead(j: i32, sign: i128) -> (i32, [[DiffPoly; 2]; 2]) {
    let c = q(0, -sign, 2, 0);
    (j, [[DiffPoly::constant(c.clone()), z()], [z(), DiffPoly::constant(-c)]])
}

/// `X = -kappa (psibar_x psi - psi_x psibar)`
pub fn x_block() -> DiffPoly {
    (&(&psibar(1) * &psi(0)) - &(&psi(1) * &psibar(0))).scale(&q(-1, 0, 1, 2))
}

/// `Y = sqrt(kappa) psi_xx - 2 kappa^{3/2} |psi|^2 psi`
pub fn y_block() -> DiffPoly {
    &psi(2).scale(&q(1, 0, 1, 1)) - &(&mod2() * &psi(0)).scale(&q(2, 0, 1, 3))
}

/// `Omega = -i sqrt(kappa) psi_t2 - 2 kappa^{3/2} |psi|^2 psi`
pub fn omega() -> DiffPoly {
    &jet(Field::Psi, 0, &[(2, 1)]).scale(&q(0, -1, 1, 1)) - &(&mod2() * &psi(0)).scale(&q(2, 0, 1, 3))
}

/// Reference hierarchy matrices at levels 0..=3.
pub fn reference_v(n: usize) -> LaxMatrix {
    let s = |p: DiffPoly| p.scale(&q(1, 0, 1, 1));
    let ik = q(0, 1, 1, 2);
    match n {
        0 => lax(vec![lead(0, -1)]),
        1 => lax(vec![lead(1, -1), (0, [[z(), -s(psibar(0))], [-s(psi(0)), z()]])]),
        2 => lax(vec![
            lead(2, -1),
            (1, [[z(), -s(psibar(0))], [-s(psi(0)), z()]]),
            (0, [
                [mod2().scale(&ik), s(psibar(1)).scale(&q(0, -1, 1, 0))],
                [s(psi(1)).scale(&q(0, 1, 1, 0)), mod2().scale(&-&ik)],
            ]),
        ]),
        3 => lax(vec![
            lead(3, -1),
            (2, [[z(), -s(psibar(0))], [-s(psi(0)), z()]]),
            (1, [
                [mod2().scale(&ik), s(psibar(1)).scale(&q(0, -1, 1, 0))],
                [s(psi(1)).scale(&q(0, 1, 1, 0)), mod2().scale(&-&ik)],
            ]),
            (0, [[x_block(), y_block().conjugate()], [y_block(), -&x_block()]]),
        ]),
        _ => panic!("no reference matrix at level {n}"),
    }
}

/// `-i sqrt(kappa) psi_t2`: the value of Omega the generating function produces.
pub fn omega_generated() -> DiffPoly {
    jet(Field::Psi, 0, &[(2, 1)]).scale(&q(0, -1, 1, 1))
}

/// Reference dual matrices built on the level-2 matrix, `m = 0..=3`.
pub fn reference_dual(m: usize) -> LaxMatrix {
    dual_with_omega(m, &omega())
}

/// Dual table with the given Omega block at `m = 3`.
pub fn dual_with_omega(m: usize, omega: &DiffPoly) -> LaxMatrix {
    match m {
        0 => lax(vec![lead(0, 1)]),
        1 => -&reference_v(1),
        2 => -&reference_v(2),
        3 => {
            let v3 = reference_v(3);
            let mut top = -&LaxMatrix::new(v3.coeffs().filter(|(j, _)| *j > 0).map(|(j, m)| (j, m.clone())));
            let phi = x_block();
            top.add_coeff(0, &Mat2([[-&phi, -&omega.conjugate()], [-omega, phi.clone()]]));
            top
        }
        _ => panic!("no reference dual matrix at level {m}"),
    }
}

pub fn t2() -> Direction {
    Direction::T(2)
}
