use super::*;
use crate::laxalg::{LaxMatrix, Mat2};
use crate::ringcore::{rat, Coefficient, DiffPoly, Direction, Field, GaussRat};

fn c(re: i128, im: i128) -> Coefficient {
    Coefficient::term(0, GaussRat::new(re.into(), im.into()))
}

/// Full Laurent product `W_xi - X_d W + W X_d - X_o + W X_o W` with `W`
/// truncated at order `k`; returns the coefficient at `lambda^{N-n}`.
fn oracle_residual(x: &LaxMatrix, w: &[Mat2], xi: Direction, n: i32) -> Mat2 {
    let big_n = x.degree().unwrap();
    let wl = LaxMatrix::new(w.iter().enumerate().map(|(k, m)| (-(k as i32) - 1, m.clone())));
    let xd = x.map(|m| m.diagonal_part());
    let xo = x.map(|m| m.off_diagonal_part());
    let full = &(&(&wl.total_derivative(xi) - &(&xd * &wl)) + &(&wl * &xd)) - &xo;
    let full = &full + &(&(&wl * &xo) * &wl);
    full.coeff(big_n - n)
}

#[test]
fn first_w_coefficients_for_u() {
    let w = solve_w(&u_matrix(), 2).unwrap();
    let s = Coefficient::sqrt_kappa_pow(1);
    let w1 = Mat2::off(DiffPoly::psibar().scale(&(&-&Coefficient::i() * &s)), DiffPoly::psi().scale(&(&Coefficient::i() * &s)));
    assert_eq!(w.get(1), w1);
    assert_eq!(w.reduced(1), Some(DiffPoly::psi()));
    assert_eq!(w.reduced(2), Some(DiffPoly::psi_x(1).scale(&c(0, -1))));
    for n in 1..=2 {
        assert!(oracle_residual(&u_matrix(), w.coefficients(), Direction::X, n).is_zero());
    }
}

#[test]
fn w_series_is_real_and_graded() {
    let w = solve_w(&u_matrix(), 6).unwrap();
    for n in 1..=6 {
        let wn = w.reduced(n).unwrap_or_else(|| panic!("W_{n} lacks the reality structure"));
        assert!(wn.is_homogeneous_of(n as i64), "w_{n} = {wn}");
    }
}

#[test]
fn riccati_residual_vanishes_and_detects_corruption() {
    let u = u_matrix();
    let w = solve_w(&u, 6).unwrap();
    assert!(riccati_residual(&u, &w).unwrap().iter().all(Mat2::is_zero));
    for n in 0..=6 {
        assert!(oracle_residual(&u, w.coefficients(), Direction::X, n).is_zero());
    }
    let bad = w.clone().with_coefficient(1, &w.get(1) + &Mat2::off(DiffPoly::zero(), DiffPoly::psi_x(1)));
    let r = riccati_residual(&u, &bad).unwrap();
    assert!(r[0].is_zero());
    assert!(!r[1].is_zero());
}

#[test]
fn dual_w_series() {
    let v2 = dual_base(2).unwrap();
    let w = solve_w(&v2, 6).unwrap();
    assert!(riccati_residual(&v2, &w).unwrap().iter().all(Mat2::is_zero));
    for n in 0..=6 {
        assert!(oracle_residual(&v2, w.coefficients(), Direction::T(2), n).is_zero());
    }
    let w1 = w.get(1);
    assert!(w1.is_off_diagonal());
    for p in [w1.get(0, 1), w1.get(1, 0)] {
        assert!(p.is_homogeneous_of(1));
        assert!(p.variables().iter().all(|v| v.x_order == 0 && !v.has_t()));
    }
    // The first two coefficients agree with those of the x-based series.
    let wu = solve_w(&u_matrix(), 2).unwrap();
    assert_eq!(w.get(1), wu.get(1));
    assert_eq!(w.get(2), wu.get(2));
    assert!(w.get(3).0.iter().flatten().any(|p| p.variables().iter().any(|v| v.has_t())));
}

#[test]
fn low_densities() {
    let u = u_matrix();
    assert_eq!(conserved_density(&u, 1).unwrap(), &DiffPoly::psi() * &DiffPoly::psibar());
    let mom = (&(&DiffPoly::psibar() * &DiffPoly::psi_x(1)) - &(&DiffPoly::psi() * &DiffPoly::psibar_x(1))).scale(&Coefficient::i().scale_rational(rat(-1, 2)));
    assert_eq!(conserved_density(&u, 2).unwrap(), mom);
}

#[test]
fn third_density_is_the_nls_energy() {
    let h3 = conserved_density(&u_matrix(), 3).unwrap();
    let energy = &(&DiffPoly::psi_x(1) * &DiffPoly::psibar_x(1))
        + &(&DiffPoly::psi() * &DiffPoly::psibar()).pow(2).scale(&Coefficient::kappa());
    // h3 = energy modulo d_x: -(psi psibar_xx + psi_xx psibar)/2 + kappa |psi|^4.
    let diff = &h3 - &energy;
    assert!(diff.is_total_x_derivative().unwrap(), "h3 = {h3}");
}

#[test]
fn rejects_bad_base_matrices() {
    let off = LaxMatrix::new([(1, Mat2::sigma1())]);
    assert_eq!(solve_w(&off, 1).unwrap_err(), HierarchyError::OffDiagonalLeading);
    let diag = LaxMatrix::new([(1, Mat2::new(DiffPoly::one(), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::one()))]);
    assert_eq!(solve_w(&diag, 1).unwrap_err(), HierarchyError::LeadingNotSigma3);
    let field = LaxMatrix::new([(1, Mat2::sigma3().scale_poly(&DiffPoly::psi()))]);
    assert_eq!(solve_w(&field, 1).unwrap_err(), HierarchyError::LeadingNotConstant);
}

#[test]
fn partner_routes_agree() {
    let u = u_matrix();
    let gf = generating_function_expand(&u, 1, 5).unwrap();
    for (n, g) in gf.iter().enumerate() {
        assert_eq!(&generate_partner(&u, 1, n).unwrap(), g, "level {n}");
    }
    let gf_minus = generating_function_expand(&u, -1, 5).unwrap();
    for (a, b) in gf.iter().zip(&gf_minus) {
        assert_eq!(&-a, b);
    }
}

#[test]
fn kappa_base_candidate_is_inconsistent() {
    let u = u_matrix();
    let w = solve_w(&u, 2).unwrap();
    let gf = generating_function_expand(&u, 1, 3).unwrap();
    for n in 0..3 {
        let good = generate_partner_from(&w, 1, n, PartnerBase::Consistent).unwrap();
        let bad = generate_partner_from(&w, 1, n, PartnerBase::WithKappa).unwrap();
        assert_eq!(good, gf[n]);
        assert_ne!(bad, gf[n]);
    }
}

#[test]
fn partners_are_traceless_symmetric_graded() {
    for n in 0..=4 {
        let v = v_matrix(n).unwrap();
        assert!(v.trace_zero() && v.sigma_symmetric(false) && v.graded(), "level {n}");
    }
    for m in 0..=3 {
        let d = dual_hierarchy(2, m).unwrap();
        assert!(d.trace_zero() && d.sigma_symmetric(false) && d.graded(), "dual level {m}");
    }
}

#[test]
fn translation_flow() {
    let rules = evolution_rules(1).unwrap();
    let psi_t1 = crate::ringcore::JetVar::psi().derived(Direction::T(1), 1);
    assert_eq!(rules[&psi_t1], -&DiffPoly::psi_x(1));
}

#[test]
fn evolution_form_failure_is_reported() {
    // A constant partner leaves d_x U unbalanced.
    let y = LaxMatrix::constant(Mat2::sigma1()).with_xi(Direction::T(5));
    assert!(matches!(solve_evolution(&u_matrix(), &y), Err(HierarchyError::NotEvolutionForm(_))));
}

#[test]
fn on_shell_eliminates_time_jets() {
    let rules = evolution_rules(2).unwrap();
    let d3 = dual_hierarchy(2, 3).unwrap();
    let shell = on_shell(&d3, &rules).unwrap();
    assert!(shell.coeffs().all(|(_, m)| m.0.iter().flatten().all(|p| p.variables().iter().all(|v| !v.has_t()))));
    let _ = Field::Psi;
}
