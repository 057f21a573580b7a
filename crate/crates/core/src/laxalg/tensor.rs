use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::lax::LaxMatrix;
use super::mat2::Mat2;
use crate::ringcore::{Coefficient, DiffPoly};

/// 4x4 matrix over [`DiffPoly`]; index `(i, k)` of `C^2 (x) C^2` is `2i + k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mat4(pub [[DiffPoly; 4]; 4]);

impl Mat4 {
    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(DiffPoly::is_zero)
    }

    pub fn zip(&self, o: &Mat4, f: impl Fn(&DiffPoly, &DiffPoly) -> DiffPoly) -> Mat4 {
        let mut out = Mat4::default();
        for r in 0..4 {
            for c in 0..4 {
                out.0[r][c] = f(&self.0[r][c], &o.0[r][c]);
            }
        }
        out
    }

    fn product(&self, o: &Mat4) -> Mat4 {
        let mut out = Mat4::default();
        for r in 0..4 {
            for c in 0..4 {
                for k in 0..4 {
                    if !self.0[r][k].is_zero() && !o.0[k][c].is_zero() {
                        out.0[r][c] += &(&self.0[r][k] * &o.0[k][c]);
                    }
                }
            }
        }
        out
    }

    /// `a (x) b`.
    pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
        let mut out = Mat4::default();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.0[2 * i + k][2 * j + l] = &a.0[i][j] * &b.0[k][l];
                    }
                }
            }
        }
        out
    }
}

/// 4x4 matrix of polynomials in two spectral parameters: keys are
/// `(lambda power, mu power)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorMatrix {
    coeffs: BTreeMap<(i32, i32), Mat4>,
}

impl TensorMatrix {
    pub fn zero() -> Self {
        TensorMatrix::default()
    }

    pub fn from_mat4(m: Mat4) -> Self {
        let mut out = TensorMatrix::zero();
        out.add_coeff((0, 0), &m);
        out
    }

    pub fn identity() -> Self {
        Self::from_mat4(Mat4::kron(&Mat2::identity(), &Mat2::identity()))
    }

    /// `P (u (x) v) = v (x) u`.
    pub fn permutation() -> Self {
        let mut m = Mat4::default();
        for i in 0..2 {
            for k in 0..2 {
                m.0[2 * i + k][2 * k + i] = DiffPoly::one();
            }
        }
        Self::from_mat4(m)
    }

    /// `A(lambda) (x) I`.
    pub fn embed1(a: &LaxMatrix) -> Self {
        let mut out = TensorMatrix::zero();
        for (j, m) in a.coeffs() {
            out.add_coeff((j, 0), &Mat4::kron(m, &Mat2::identity()));
        }
        out
    }

    /// `I (x) A(mu)`.
    pub fn embed2(a: &LaxMatrix) -> Self {
        let mut out = TensorMatrix::zero();
        for (j, m) in a.coeffs() {
            out.add_coeff((0, j), &Mat4::kron(&Mat2::identity(), m));
        }
        out
    }

    pub fn add_coeff(&mut self, key: (i32, i32), m: &Mat4) {
        let sum = match self.coeffs.get(&key) {
            Some(e) => e.zip(m, |a, b| a + b),
            None => m.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, sum);
        }
    }

    /// Add `p lambda^a mu^b` to entry `(r, c)`.
    pub fn add_entry(&mut self, key: (i32, i32), r: usize, c: usize, p: &DiffPoly) {
        let mut m = Mat4::default();
        m.0[r][c] = p.clone();
        self.add_coeff(key, &m);
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(i32, i32), &Mat4)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Entry `(r, c)` as a map from `(lambda power, mu power)`.
    pub fn entry(&self, r: usize, c: usize) -> BTreeMap<(i32, i32), DiffPoly> {
        self.coeffs
            .iter()
            .map(|(k, m)| (*k, m.0[r][c].clone()))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    pub fn scale(&self, c: &Coefficient) -> TensorMatrix {
        let mut out = TensorMatrix::zero();
        for (k, m) in &self.coeffs {
            out.add_coeff(*k, &m.zip(m, |a, _| a.scale(c)));
        }
        out
    }
}

impl Add for &TensorMatrix {
    type Output = TensorMatrix;
    fn add(self, o: &TensorMatrix) -> TensorMatrix {
        let mut out = self.clone();
        for (k, m) in &o.coeffs {
            out.add_coeff(*k, m);
        }
        out
    }
}

impl Sub for &TensorMatrix {
    type Output = TensorMatrix;
    fn sub(self, o: &TensorMatrix) -> TensorMatrix {
        self + &-o
    }
}

impl Neg for &TensorMatrix {
    type Output = TensorMatrix;
    fn neg(self) -> TensorMatrix {
        self.scale(&-Coefficient::one())
    }
}

impl Mul for &TensorMatrix {
    type Output = TensorMatrix;
    fn mul(self, o: &TensorMatrix) -> TensorMatrix {
        let mut out = TensorMatrix::zero();
        for ((a1, b1), m1) in &self.coeffs {
            for ((a2, b2), m2) in &o.coeffs {
                out.add_coeff((a1 + a2, b1 + b2), &m1.product(m2));
            }
        }
        out
    }
}
