//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the test
//! harness so the report is always shown.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use nls_dual::brackets::*;
use nls_dual::hierarchy::*;
use nls_dual::numlab::*;
use nls_dual::ringcore::*;

// Pinned tolerances.
const TRACE_REL_TOL: f64 = 1e-6;
const DET_TOL: f64 = 1e-8;
const CONVERGENCE_TARGET: f64 = 16.0;
const CONVERGENCE_SLACK: f64 = 3.0;
const RANDOM_TRIPLES: usize = 100;
const SEED: u64 = 20_241_015;

/// Sub-checks expected to fail, with the recorded reason and a check that
/// the failure is exactly the documented one.
struct Deviation {
    criterion: usize,
    check: &'static str,
    reason: &'static str,
    confirm: fn() -> bool,
}

const KNOWN_DEVIATIONS: &[Deviation] = &[
    Deviation {
        criterion: 2,
        check: "m=3 equals reference table on shell",
        reason: "generated Omega is -i sqrt(kappa) psi_t2; the extra reference term -2 kappa^{3/2} |psi|^2 psi is absent",
        confirm: confirm_dual_omega,
    },
    Deviation {
        criterion: 5,
        check: "level 3 constraint matrix equals reference",
        reason: "{C3,C5} = {C4,C6} = -1 under {p,q} = 1; reference +1",
        confirm: confirm_level3_m,
    },
];

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Criterion {
    checks: Vec<Check>,
}

impl Criterion {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }

    fn within(&mut self, elapsed: Duration, limit_s: f64) {
        let s = elapsed.as_secs_f64();
        self.check(format!("runtime < {limit_s} s"), s < limit_s, format!("{s:.2} s"));
    }

    fn failing(&self) -> BTreeSet<&str> {
        self.checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect()
    }
}

fn rules2() -> Rules {
    evolution_rules(2).unwrap()
}

fn pipeline(n: u32, evolution: Direction, slice: Direction) -> LegendreResult {
    let l = build_level_lagrangian(n).unwrap();
    dirac_pipeline(&l.lagrangian, evolution, slice).unwrap()
}

fn constant(c: Coefficient) -> DiffPoly {
    DiffPoly::constant(c)
}

fn c1() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    for n in 0..=3 {
        let v = generate_partner(&u_matrix(), 1, n).unwrap();
        c.check(format!("V({n}) equals reference"), v == reference_v(n), v.to_text());
    }
    c.within(start.elapsed(), 5.0);
    c
}

fn c2() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let rules = rules2();
    for m in 0..=3 {
        let d = on_shell(&dual_hierarchy(2, m).unwrap(), &rules).unwrap();
        let reference = reference_dual(m).substitute(&rules).unwrap();
        let name = if m == 3 { "m=3 equals reference table on shell".to_string() } else { format!("m={m} equals reference table on shell") };
        c.check(name, d == reference, d.to_text());
    }
    c.within(start.elapsed(), 10.0);
    c
}

fn confirm_dual_omega() -> bool {
    let d3 = dual_hierarchy(2, 3).unwrap();
    d3 == dual_with_omega(3, &omega_generated()) && omega_generated().substitute(&rules2()).unwrap() == y_block()
}

fn c3() -> Criterion {
    let mut c = Criterion::default();
    let nls = &psi(2).scale(&q(0, 1, 1, 0)) - &(&mod2() * &psi(0)).scale(&q(0, 2, 1, 2));
    let cmkdv = &psi(3) - &(&mod2() * &psi(1)).scale(&q(6, 0, 1, 2));
    for (n, expected) in [(2u32, nls), (3, cmkdv)] {
        let v = v_matrix(n as usize).unwrap();
        let rules = solve_evolution(&u_matrix(), &v).unwrap();
        let key = JetVar::psi().derived(Direction::T(n), 1);
        c.check(format!("level {n} evolution rule"), rules.get(&key) == Some(&expected), format!("{:?}", rules.get(&key).map(|p| p.to_string())));
        let residual = zero_curvature_residual(&u_matrix(), &v).substitute(&rules).unwrap();
        c.check(format!("level {n} residual vanishes"), residual.is_zero(), residual.to_text());
    }
    c
}

fn c4() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let s = pipeline(2, Direction::T(2), Direction::X).table;
    let rep = verify_rmatrix(&u_matrix(), &s, 1).unwrap();
    c.check("U under S, gamma=+1", rep.status, format!("{} residual entries", rep.residuals.len()));
    for n in 2..=3u32 {
        let t = pipeline(n, Direction::X, Direction::T(n)).table;
        let rep = verify_rmatrix(&v_matrix(n as usize).unwrap(), &t, -1).unwrap();
        c.check(format!("V({n}) under T{n}, gamma=-1"), rep.status, format!("{} residual entries", rep.residuals.len()));
    }
    c.within(start.elapsed(), 30.0);
    c
}

fn reference_level3_m() -> Vec<Vec<Coefficient>> {
    let (z, i, one) = (Coefficient::zero(), Coefficient::i(), Coefficient::one());
    let mut m = vec![vec![z; 6]; 6];
    m[0][1] = i.clone();
    m[1][0] = -&i;
    m[2][4] = one.clone();
    m[3][5] = one.clone();
    m[4][2] = -&one;
    m[5][3] = -&one;
    m
}

fn confirm_level3_m() -> bool {
    let m = pipeline(3, Direction::X, Direction::T(3)).system.m;
    let reference = reference_level3_m();
    let mut differing = BTreeSet::new();
    for r in 0..6 {
        for k in 0..6 {
            if m[r][k] != reference[r][k] {
                if m[r][k] != -&reference[r][k] {
                    return false;
                }
                differing.insert((r, k));
            }
        }
    }
    differing == BTreeSet::from([(2, 4), (3, 5), (4, 2), (5, 3)])
}

fn c5() -> Criterion {
    let mut c = Criterion::default();
    let i = Coefficient::i();
    let half = Coefficient::frac(1, 2);

    let t2 = pipeline(2, Direction::T(2), Direction::X);
    let d = &t2.system.dirac;
    let (phi1, phi2) = (JetVar::psi(), JetVar::psibar());
    let (p1, p2) = (JetVar::aux(AuxKind::MomField, 1, 0), JetVar::aux(AuxKind::MomField, 2, 0));
    let g = |a: &JetVar, b: &JetVar| d.get(a, b).unwrap();
    let nls1 = g(&phi1, &phi2) == constant(i.clone())
        && g(&p1, &phi1) == constant(half.clone())
        && g(&p2, &phi2) == constant(half.clone())
        && g(&p1, &phi2).is_zero()
        && g(&p2, &phi1).is_zero()
        && g(&p1, &p2) == constant(&Coefficient::frac(-1, 4) * &i);
    c.check("level 2 time Dirac brackets", nls1, d.to_string());
    c.check("level 2 time reduces to {psi, psibar} = i", t2.table.get(&phi1, &phi2).unwrap() == constant(i.clone()), t2.table.to_string());
    let hs = &(&psi(1) * &psibar(1)) + &mod2().pow(2).scale(&Coefficient::kappa());
    c.check("level 2 time density", t2.hamiltonian == hs, t2.hamiltonian.to_string());

    let s2 = pipeline(2, Direction::X, Direction::T(2));
    let jt = |k: u32, bar: bool| if bar { JetVar::psibar().derived(Direction::X, k) } else { JetVar::psi().derived(Direction::X, k) };
    let tb = &s2.table;
    let ok = tb.get(&jt(0, false), &jt(1, true)).unwrap() == DiffPoly::one()
        && tb.get(&jt(0, false), &jt(0, true)).unwrap().is_zero()
        && tb.get(&jt(1, false), &jt(1, true)).unwrap().is_zero();
    c.check("level 2 space table", ok, tb.to_string());
    let kin = |n: u32| {
        let pt = jet(Field::Psi, 0, &[(n, 1)]);
        let pbt = jet(Field::PsiBar, 0, &[(n, 1)]);
        &(&psi(0) * &pbt) - &(&psibar(0) * &pt)
    };
    let ht2 = &(&kin(2).scale(&q(0, 1, 2, 0)) - &(&psibar(1) * &psi(1))) + &mod2().pow(2).scale(&Coefficient::kappa());
    c.check("level 2 space density", s2.hamiltonian == ht2, s2.hamiltonian.to_string());

    let s3 = pipeline(3, Direction::X, Direction::T(3));
    c.check("level 3 constraint matrix equals reference", s3.system.m == reference_level3_m(), format!("{:?}", s3.system.m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()));
    let tb = &s3.table;
    let e = |a: JetVar, b: JetVar| tb.get(&a, &b).unwrap();
    let bra = e(jt(0, false), jt(0, true)).is_zero()
        && e(jt(0, false), jt(1, false)).is_zero()
        && e(jt(0, false), jt(1, true)).is_zero()
        && e(jt(1, false), jt(2, false)).is_zero()
        && e(jt(1, false), jt(2, true)).is_zero()
        && e(jt(1, false), jt(1, true)) == constant(i.clone())
        && e(jt(0, true), jt(2, false)) == constant(i.clone())
        && e(jt(0, false), jt(2, false)).is_zero()
        && e(jt(2, false), jt(2, true)) == mod2().scale(&q(0, -6, 1, 2));
    c.check("level 3 equal-space table", bra, tb.to_string());
    let ht3 = &(&(&psibar(1) * &psi(2)) - &(&psi(1) * &psibar(2))).scale(&i) + &kin(3).scale(&q(0, 1, 2, 0));
    c.check("level 3 space density", s3.hamiltonian == ht3, s3.hamiltonian.to_string());
    c
}

fn c6() -> Criterion {
    let mut c = Criterion::default();
    let expanded = generating_function_expand(&u_matrix(), 1, 5).unwrap();
    for n in 0..=4 {
        let g = generate_partner(&u_matrix(), 1, n).unwrap();
        c.check(format!("routes agree at n={n}"), g == expanded[n], g.to_text());
    }
    for (name, x) in [("U", u_matrix()), ("V(2)", dual_base(2).unwrap())] {
        let w = solve_w(&x, 6).unwrap();
        let res = riccati_residual(&x, &w).unwrap();
        c.check(format!("Riccati residual for {name} to order 6"), res.len() == 7 && res.iter().all(|m| m.is_zero()), format!("{} orders", res.len()));
    }
    c
}

fn c7() -> Criterion {
    let mut c = Criterion::default();
    for n in [2u32, 3] {
        let rules = evolution_rules(n as usize).unwrap();
        for k in 1..=4 {
            let h = conserved_density(&u_matrix(), k).unwrap();
            let flux = h.d_t(n).substitute(&rules).unwrap();
            let ok = flux.is_total_x_derivative().unwrap();
            c.check(format!("d_t{n} h({k}) is a total x-derivative"), ok, String::new());
        }
    }
    c
}

fn c8() -> Criterion {
    let mut c = Criterion::default();
    let r = pipeline(4, Direction::X, Direction::T(4));
    let rep = verify_rmatrix(&v_matrix(4).unwrap(), &r.table, -1).unwrap();
    c.check("V(4) under T4, gamma=-1", rep.status, format!("{} residual entries", rep.residuals.len()));
    c
}

fn spread(values: &[Complex64]) -> f64 {
    let v0 = values[0];
    values.iter().map(|v| (v - v0).norm() / v0.norm()).fold(0.0, f64::max)
}

fn c9() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let wave = PlaneWave { amplitude: 1.0, mode: 1, kappa: 1.0, half_length: PI };
    let traj = evolve_nls(&wave.grid(256, 0.0).unwrap(), (0.0, 1.0), 100).unwrap();
    let rules = rules2();
    let lambdas: Vec<Complex64> = (0..8).map(|k| Complex64::new(-1.3 + 0.4 * k as f64, 0.2)).collect();
    let along_x: Vec<MonodromySample> = [0, 25, 50, 75, 100]
        .iter()
        .map(|&s| transfer_matrix(&u_matrix(), &traj, &rules, &lambdas, Path::AlongX { snapshot: s }, 2).unwrap())
        .collect();
    let v2 = v_matrix(2).unwrap();
    let along_t: Vec<MonodromySample> = [0, 37, 64, 128, 200]
        .iter()
        .map(|&s| transfer_matrix(&v2, &traj, &rules, &lambdas, Path::AlongT { station: s, level: 2 }, 2).unwrap())
        .collect();
    for (name, samples) in [("tr T_U across snapshots", &along_x), ("tr T_V2 across x-stations", &along_t)] {
        let worst = (0..lambdas.len())
            .map(|k| spread(&samples.iter().map(|m| m.traces()[k]).collect::<Vec<_>>()))
            .fold(0.0, f64::max);
        c.check(name, worst < TRACE_REL_TOL, format!("max relative spread {worst:.2e}"));
    }
    let det = along_x.iter().chain(&along_t).map(MonodromySample::max_det_error).fold(0.0, f64::max);
    c.check("det T = 1", det < DET_TOL, format!("max |det - 1| {det:.2e}"));
    let rows = convergence_table(&wave, 256, 1.0, &[10, 20, 40]).unwrap();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let ok = ratios.iter().all(|r| (r - CONVERGENCE_TARGET).abs() < CONVERGENCE_SLACK);
    let table: Vec<String> = rows.iter().map(|r| format!("dt={:.4} err={:.3e} ratio={:?}", r.dt, r.max_error, r.ratio.map(|x| (x * 100.0).round() / 100.0))).collect();
    c.check("fourth-order convergence", ok, table.join("; "));
    c.within(start.elapsed(), 60.0);
    c
}

fn random_poly(rng: &mut ChaCha8Rng, coords: &[JetVar]) -> DiffPoly {
    let mut p = DiffPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let c = &Coefficient::from_int(rng.gen_range(-3..=3)) + &(&Coefficient::from_int(rng.gen_range(-3..=3)) * &Coefficient::i());
        let m = Monomial::from_factors((0..rng.gen_range(0..=2)).map(|_| (coords[rng.gen_range(0..coords.len())].clone(), 1)));
        p += &DiffPoly::term(c, m);
    }
    p
}

fn c10() -> Criterion {
    let mut c = Criterion::default();
    let tables: Vec<BracketTable> = vec![
        pipeline(2, Direction::T(2), Direction::X).table,
        pipeline(2, Direction::X, Direction::T(2)).table,
        pipeline(3, Direction::X, Direction::T(3)).table,
        pipeline(4, Direction::X, Direction::T(4)).table,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in &tables {
        let structural = t.is_closed() && t.jacobi_violations().unwrap().is_empty();
        let mut failures = 0;
        for _ in 0..RANDOM_TRIPLES {
            let (f, g, h) = (random_poly(&mut rng, t.coords()), random_poly(&mut rng, t.coords()), random_poly(&mut rng, t.coords()));
            let br = |a: &DiffPoly, b: &DiffPoly| t.bracket(a, b).unwrap();
            let anti = br(&f, &g) == -br(&g, &f);
            let leibniz = br(&f, &(&g * &h)) == &(&br(&f, &g) * &h) + &(&g * &br(&f, &h));
            let jacobi = (&(&br(&f, &br(&g, &h)) + &br(&g, &br(&h, &f))) + &br(&h, &br(&f, &g))).is_zero();
            if !(anti && leibniz && jacobi) {
                failures += 1;
            }
        }
        c.check(format!("{} table", t.label), structural && failures == 0, format!("{failures} failing triples of {RANDOM_TRIPLES}"));
    }
    c
}

fn main() -> ExitCode {
    let suite: [(usize, &str, fn() -> Criterion); 10] = [
        (1, "hierarchy reproduction", c1),
        (2, "dual hierarchy reproduction", c2),
        (3, "zero-curvature extraction", c3),
        (4, "r-matrix identities", c4),
        (5, "Dirac pipeline reproduction", c5),
        (6, "Riccati and generating-function cross-check", c6),
        (7, "conservation laws", c7),
        (8, "level-4 r-matrix probe (non-blocking)", c8),
        (9, "numerical duality check", c9),
        (10, "bracket-engine properties", c10),
    ];
    let mut unexpected = Vec::new();
    for (k, title, run) in suite {
        let crit = run();
        let failing = crit.failing();
        let status = if failing.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {k}: {title}");
        for ch in &crit.checks {
            if !ch.ok {
                println!("    failed: {} [{}]", ch.name, ch.detail);
            } else if !ch.detail.is_empty() && ch.detail.len() < 160 && !ch.detail.contains('\n') {
                println!("    ok: {} [{}]", ch.name, ch.detail);
            }
        }
        let expected: BTreeSet<&str> = KNOWN_DEVIATIONS.iter().filter(|d| d.criterion == k).map(|d| d.check).collect();
        for d in KNOWN_DEVIATIONS.iter().filter(|d| d.criterion == k) {
            let confirmed = (d.confirm)();
            println!("    known deviation: {} ({}){}", d.check, d.reason, if confirmed { "" } else { " NOT CONFIRMED" });
            if !confirmed {
                unexpected.push(format!("criterion {k}: deviation reason not confirmed for '{}'", d.check));
            }
        }
        if failing != expected {
            if k == 8 {
                println!("    criterion 8 is non-blocking");
            } else {
                unexpected.push(format!("criterion {k}: failing {failing:?}, expected {expected:?}"));
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all outcomes as expected ({} documented deviations)", KNOWN_DEVIATIONS.len());
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("UNEXPECTED {u}");
        }
        ExitCode::FAILURE
    }
}
