//! 2x2 Laurent-polynomial matrices in the spectral parameter, tensor
//! products on `C^2 (x) C^2`, and the rational r-matrix commutator.

mod lax;
mod mat2;
mod tensor;

pub use lax::LaxMatrix;
pub use mat2::Mat2;
pub use tensor::{Mat4, TensorMatrix};

use std::collections::BTreeMap;

use crate::ringcore::Coefficient;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LaxError {
    #[error("divided difference needs a polynomial in lambda, found power {0}")]
    NonPolynomial(i32),
    #[error("gamma must be +1 or -1, got {0}")]
    BadGamma(i32),
}

/// Divided difference `(A(mu) - A(lambda)) / (mu - lambda)` keyed by
/// `(lambda power, mu power)`.
pub fn divided_difference(a: &LaxMatrix) -> Result<BTreeMap<(i32, i32), Mat2>, LaxError> {
    if let Some(d) = a.low_degree().filter(|d| *d < 0) {
        return Err(LaxError::NonPolynomial(d));
    }
    let mut out: BTreeMap<(i32, i32), Mat2> = BTreeMap::new();
    for (p, m) in a.coeffs() {
        for s in 0..p {
            let e = out.entry((s, p - 1 - s)).or_default();
            *e = &*e + m;
        }
    }
    Ok(out)
}

/// `gamma kappa ((Delta A) (x) I - I (x) (Delta A)) P` with `Delta A` the
/// [`divided_difference`]: the commutator of `A(lambda) (x) I + I (x) A(mu)`
/// with the rational r-matrix, written without its pole at `lambda = mu`.
pub fn rmatrix_bracket_rhs(a: &LaxMatrix, gamma: i32) -> Result<TensorMatrix, LaxError> {
    if gamma != 1 && gamma != -1 {
        return Err(LaxError::BadGamma(gamma));
    }
    let mut diff = TensorMatrix::zero();
    for (key, m) in divided_difference(a)? {
        let split = Mat4::kron(&m, &Mat2::identity()).zip(&Mat4::kron(&Mat2::identity(), &m), |l, r| l - r);
        diff.add_coeff(key, &split);
    }
    let c = &Coefficient::from_int(gamma as i128) * &Coefficient::kappa();
    Ok(&diff.scale(&c) * &TensorMatrix::permutation())
}

#[cfg(test)]
mod tests;
