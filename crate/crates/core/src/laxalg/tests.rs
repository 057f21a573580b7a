use proptest::prelude::*;

use super::*;
use crate::ringcore::{DiffPoly, Field, JetVar};

fn q() -> Mat2 {
    Mat2::off(DiffPoly::psibar(), DiffPoly::psi())
}

fn u() -> LaxMatrix {
    let half_over_i = Coefficient::i().scale_rational(crate::ringcore::rat(-1, 2));
    LaxMatrix::new([(1, Mat2::sigma3().scale(&half_over_i)), (0, q().scale(&Coefficient::sqrt_kappa_pow(1)))]).with_level(1)
}

#[test]
fn commutator_of_sigma3_with_q() {
    let s3 = Mat2::sigma3();
    assert_eq!(s3.commutator(&q()), (&s3 * &q()).scale(&Coefficient::from_int(2)));
    assert_eq!(s3.commutator(&q()), Mat2::off(DiffPoly::psibar().scale(&Coefficient::from_int(2)), DiffPoly::psi().scale(&Coefficient::from_int(-2))));
}

#[test]
fn u_is_traceless_symmetric_graded() {
    let u = u();
    assert!(u.trace_zero());
    assert!(u.sigma_symmetric(false));
    assert!(u.sigma_symmetric(true));
    assert!(u.graded());
    assert!(u.commutator(&u).is_zero());
}

#[test]
fn kappa_sign_selects_sigma() {
    // Without the sqrt(kappa) factor only the sigma1 symmetry survives.
    let half_over_i = Coefficient::i().scale_rational(crate::ringcore::rat(-1, 2));
    let m = LaxMatrix::new([(1, Mat2::sigma3().scale(&half_over_i)), (0, q())]);
    assert!(m.sigma_symmetric(false));
    assert!(!m.sigma_symmetric(true));
}

#[test]
fn permutation_identities() {
    let p = TensorMatrix::permutation();
    assert_eq!(&p * &p, TensorMatrix::identity());
    let s3 = LaxMatrix::constant(Mat2::sigma3());
    assert_eq!(&TensorMatrix::embed1(&s3) * &p, &p * &TensorMatrix::embed2(&s3));
}

#[test]
fn rmatrix_rhs_of_constant_is_zero() {
    let a = LaxMatrix::constant(Mat2::sigma3().scale(&Coefficient::frac(3, 7)));
    assert!(rmatrix_bracket_rhs(&a, 1).unwrap().is_zero());
}

#[test]
fn rmatrix_rhs_of_u_matches_brute_force() {
    let rhs = rmatrix_bracket_rhs(&u(), 1).unwrap();
    // Entry ((1,2),(2,1)) in 1-based pair notation is row 1, column 2.
    let e = rhs.entry(1, 2);
    assert_eq!(e.len(), 1);
    assert_eq!(e[&(0, 0)], DiffPoly::constant(&-Coefficient::i() * &Coefficient::kappa()));
    // Brute force: kappa * ((Delta U) (x) I - I (x) Delta U) P with Delta U the
    // lambda-coefficient of U, multiplied out entry by entry.
    let du = u().coeff(1);
    let mut brute: [[DiffPoly; 4]; 4] = Default::default();
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let mut d = DiffPoly::zero();
                    if k == l {
                        d += du.get(i, j);
                    }
                    if i == j {
                        d = &d - du.get(k, l);
                    }
                    // right-multiplying by P sends column (j,l) to (l,j)
                    brute[2 * i + k][2 * l + j] = d.scale(&Coefficient::kappa());
                }
            }
        }
    }
    for r in 0..4 {
        for c in 0..4 {
            let got = rhs.entry(r, c).get(&(0, 0)).cloned().unwrap_or_default();
            assert_eq!(got, brute[r][c], "entry {r},{c}");
        }
    }
}

#[test]
fn rmatrix_rejects_laurent_input() {
    let a = LaxMatrix::new([(-1, Mat2::sigma3())]);
    assert_eq!(rmatrix_bracket_rhs(&a, 1), Err(LaxError::NonPolynomial(-1)));
}

#[test]
fn latex_layout() {
    let s = u().to_latex();
    assert!(s.contains("\\begin{pmatrix}"));
    assert!(s.contains("\\sqrt{\\kappa}"), "{s}");
}

fn small_poly() -> impl Strategy<Value = DiffPoly> {
    let jet = (prop::bool::ANY, 0u32..3).prop_map(|(b, k)| {
        JetVar::field(if b { Field::Psi } else { Field::PsiBar }).derived(crate::ringcore::Direction::X, k)
    });
    let term = (-3i128..4, -3i128..4, 0i32..3, prop::collection::vec(jet, 0..3)).prop_map(|(re, im, p, jets)| {
        let c = Coefficient::term(p, crate::ringcore::GaussRat::new(re.into(), im.into()));
        jets.into_iter().fold(DiffPoly::constant(c), |acc, v| &acc * &DiffPoly::var(v))
    });
    prop::collection::vec(term, 0..3).prop_map(|ts| ts.iter().fold(DiffPoly::zero(), |a, t| &a + t))
}

fn small_mat() -> impl Strategy<Value = Mat2> {
    (small_poly(), small_poly(), small_poly(), small_poly()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

fn small_lax() -> impl Strategy<Value = LaxMatrix> {
    prop::collection::vec(small_mat(), 1..4).prop_map(|ms| LaxMatrix::new(ms.into_iter().enumerate().map(|(j, m)| (j as i32, m))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutators_are_traceless(a in small_lax(), b in small_lax()) {
        prop_assert!(a.commutator(&b).trace_zero());
        prop_assert!((&a.commutator(&b) + &b.commutator(&a)).is_zero());
    }

    #[test]
    fn divided_difference_is_exact(a in small_lax()) {
        // (mu - lambda) * Delta A == A(mu) - A(lambda), compared per (lambda, mu) power.
        let dd = divided_difference(&a).unwrap();
        let mut lhs: std::collections::BTreeMap<(i32, i32), Mat2> = Default::default();
        for ((s, t), m) in &dd {
            let e = lhs.entry((*s, t + 1)).or_default();
            *e = &*e + m;
            let e = lhs.entry((s + 1, *t)).or_default();
            *e = &*e - m;
        }
        let mut rhs: std::collections::BTreeMap<(i32, i32), Mat2> = Default::default();
        for (p, m) in a.coeffs() {
            let e = rhs.entry((0, p)).or_default();
            *e = &*e + m;
            let e = rhs.entry((p, 0)).or_default();
            *e = &*e - m;
        }
        lhs.retain(|_, m| !m.is_zero());
        rhs.retain(|_, m| !m.is_zero());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetric_commutator_closure(a in small_lax(), b in small_lax()) {
        // Symmetrize: A + sigma1 conj(A) sigma1 is sigma-symmetric, and the
        // commutator of two symmetric matrices is symmetric while i[A, B] is not.
        let sym = |x: &LaxMatrix| x + &x.map(|m| &(&Mat2::sigma1() * &m.conjugate_entries(false)) * &Mat2::sigma1());
        let (sa, sb) = (sym(&a), sym(&b));
        prop_assert!(sa.sigma_symmetric(false));
        let c = sa.commutator(&sb);
        prop_assert!(c.sigma_symmetric(false));
        let ic = c.scale(&Coefficient::i());
        prop_assert!(ic.is_zero() || !ic.sigma_symmetric(false));
    }

    #[test]
    fn grading_is_additive(k in 0u32..3) {
        let v = u().shift(k as i32).with_level(1 + k);
        prop_assert!(v.graded());
        let c = u().commutator(&v).with_level(2 + k);
        prop_assert!(c.graded());
    }
}
