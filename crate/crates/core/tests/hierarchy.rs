mod common;

use common::*;
use nls_dual::hierarchy::*;
use nls_dual::ringcore::{Direction, Field, JetVar};

#[test]
fn reference_hierarchy_levels_0_to_3() {
    for n in 0..=3 {
        assert_eq!(v_matrix(n).unwrap(), reference_v(n), "level {n}:\n{}", v_matrix(n).unwrap().to_text());
    }
    assert_eq!(v_matrix(1).unwrap(), -&u_matrix());
}

#[test]
fn reference_dual_table_raw() {
    for m in 0..=2 {
        let d = dual_hierarchy(2, m).unwrap();
        assert_eq!(d, reference_dual(m), "dual level {m}:\n{}", d.to_text());
    }
    let d3 = dual_hierarchy(2, 3).unwrap();
    assert_eq!(d3, dual_with_omega(3, &omega_generated()));
    // The reference Omega carries an extra -2 kappa^{3/2} |psi|^2 psi.
    assert_ne!(d3, reference_dual(3));
}

#[test]
fn dual_table_on_shell() {
    let rules = evolution_rules(2).unwrap();
    for m in 0..=2 {
        let d = on_shell(&dual_hierarchy(2, m).unwrap(), &rules).unwrap();
        assert_eq!(d, reference_dual(m).substitute(&rules).unwrap(), "dual level {m}");
    }
    // On shell every generated dual matrix is minus the hierarchy matrix.
    for m in 0..=4 {
        let d = on_shell(&dual_hierarchy(2, m).unwrap(), &rules).unwrap();
        assert_eq!(d, -&v_matrix(m).unwrap(), "dual level {m}");
    }
    let omega_on_shell = omega_generated().substitute(&rules).unwrap();
    assert_eq!(omega_on_shell, y_block());
}

#[test]
fn nls_and_cmkdv_rules() {
    let r2 = evolution_rules(2).unwrap();
    let nls = &psi(2).scale(&q(0, 1, 1, 0)) - &(&mod2() * &psi(0)).scale(&q(0, 2, 1, 2));
    assert_eq!(r2[&JetVar::psi().derived(t2(), 1)], nls);
    assert_eq!(r2[&JetVar::psibar().derived(t2(), 1)], nls.conjugate());
    let r3 = evolution_rules(3).unwrap();
    let cmkdv = &psi(3) - &(&mod2() * &psi(1)).scale(&q(6, 0, 1, 2));
    assert_eq!(r3[&JetVar::psi().derived(Direction::T(3), 1)], cmkdv);
    let _ = Field::Psi;
}
