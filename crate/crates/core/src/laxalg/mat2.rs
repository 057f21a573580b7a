use std::ops::{Add, Mul, Neg, Sub};

use crate::ringcore::{Coefficient, DiffPoly, Direction, Rules, RingError};

/// 2x2 matrix over [`DiffPoly`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mat2(pub [[DiffPoly; 2]; 2]);

impl Mat2 {
    pub fn new(a: DiffPoly, b: DiffPoly, c: DiffPoly, d: DiffPoly) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn zero() -> Self {
        Mat2::default()
    }

    pub fn identity() -> Self {
        Self::scalar(Coefficient::one())
    }

    pub fn scalar(c: Coefficient) -> Self {
        Mat2::new(c.clone().into(), DiffPoly::zero(), DiffPoly::zero(), c.into())
    }

    pub fn sigma1() -> Self {
        Mat2::new(DiffPoly::zero(), DiffPoly::one(), DiffPoly::one(), DiffPoly::zero())
    }

    pub fn sigma2() -> Self {
        let i = Coefficient::i();
        Mat2::new(DiffPoly::zero(), (-&i).into(), i.into(), DiffPoly::zero())
    }

    pub fn sigma3() -> Self {
        Mat2::new(DiffPoly::one(), DiffPoly::zero(), DiffPoly::zero(), (-Coefficient::one()).into())
    }

    /// `[[0, b], [c, 0]]`.
    pub fn off(b: DiffPoly, c: DiffPoly) -> Self {
        Mat2::new(DiffPoly::zero(), b, c, DiffPoly::zero())
    }

    pub fn get(&self, i: usize, j: usize) -> &DiffPoly {
        &self.0[i][j]
    }

    pub fn map(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Mat2 {
        Mat2([[f(&self.0[0][0]), f(&self.0[0][1])], [f(&self.0[1][0]), f(&self.0[1][1])]])
    }

    pub fn try_map(&self, f: impl Fn(&DiffPoly) -> Result<DiffPoly, RingError>) -> Result<Mat2, RingError> {
        Ok(Mat2([[f(&self.0[0][0])?, f(&self.0[0][1])?], [f(&self.0[1][0])?, f(&self.0[1][1])?]]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(DiffPoly::is_zero)
    }

    pub fn trace(&self) -> DiffPoly {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn diagonal_part(&self) -> Mat2 {
        Mat2::new(self.0[0][0].clone(), DiffPoly::zero(), DiffPoly::zero(), self.0[1][1].clone())
    }

    pub fn off_diagonal_part(&self) -> Mat2 {
        Mat2::off(self.0[0][1].clone(), self.0[1][0].clone())
    }

    pub fn is_off_diagonal(&self) -> bool {
        self.0[0][0].is_zero() && self.0[1][1].is_zero()
    }

    /// `c` with `self = c * sigma3`, if it has that form.
    pub fn sigma3_multiple(&self) -> Option<DiffPoly> {
        let c = &self.0[0][0];
        (self.0[0][1].is_zero() && self.0[1][0].is_zero() && (c + &self.0[1][1]).is_zero()).then(|| c.clone())
    }

    pub fn scale(&self, c: &Coefficient) -> Mat2 {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, p: &DiffPoly) -> Mat2 {
        self.map(|q| q * p)
    }

    pub fn commutator(&self, o: &Mat2) -> Mat2 {
        &(self * o) - &(o * self)
    }

    pub fn total_derivative(&self, dir: Direction) -> Mat2 {
        self.map(|p| p.total_derivative(dir))
    }

    pub fn substitute(&self, rules: &Rules) -> Result<Mat2, RingError> {
        self.try_map(|p| p.substitute(rules))
    }

    /// Entrywise conjugation; with `kappa_negative` odd powers of
    /// `sqrt(kappa)` also change sign.
    pub fn conjugate_entries(&self, kappa_negative: bool) -> Mat2 {
        self.map(|p| {
            let c = p.conjugate();
            if kappa_negative {
                c.map_coefficients(Coefficient::flip_odd_sqrt_kappa)
            } else {
                c
            }
        })
    }
}

impl Add for &Mat2 {
    type Output = Mat2;
    fn add(self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.0[i][j] + &o.0[i][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Sub for &Mat2 {
    type Output = Mat2;
    fn sub(self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.0[i][j] - &o.0[i][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &(&self.0[i][0] * &o.0[0][j]) + &(&self.0[i][1] * &o.0[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.map(|p| -p)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        &self + &o
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        &self - &o
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        &self * &o
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        -&self
    }
}
