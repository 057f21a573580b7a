use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use nls_dual::brackets::{build_level_lagrangian, dirac_pipeline, hamilton_check, verify_rmatrix, BracketError, LegendreResult};
use nls_dual::hierarchy::{
    conserved_density, dual_hierarchy, evolution_rules, generate_partner, on_shell, solve_evolution, u_matrix, v_matrix,
    zero_curvature_residual, HierarchyError,
};
use nls_dual::laxalg::LaxMatrix;
use nls_dual::numlab::{charge_evaluate, evolve_nls, relative_drift, transfer_matrix, GridState, NumError, Path, PlaneWave, Trajectory};
use nls_dual::ringcore::{Direction, RingError, Rules};

use crate::args::{Command, LaxChoice, Picture, RunConfig, SimArgs, SimCase, SimCheck};
use crate::report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Numerics(#[from] NumError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Hierarchy(_) => "hierarchy",
            CliError::Bracket(_) => "brackets",
            CliError::Numerics(_) => "numerics",
            CliError::Ring(_) => "algebra",
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match &cfg.command {
        Command::GenV { level, gamma } => gen_v(*level, *gamma),
        Command::GenDual { base, level } => gen_dual(*base, *level),
        Command::Charges { count } => charges(*count),
        Command::VerifyZc { level } => verify_zc(*level),
        Command::VerifyRmatrix { matrix, gamma } => verify_r(*matrix, *gamma),
        Command::Dirac { lagrangian, direction } => dirac(lagrangian.level(), *direction),
        Command::Sim(args) => sim(args, cfg.seed),
    }
}

fn matrix_report(m: &LaxMatrix) -> Report {
    Report {
        result: json!({ "matrix": m.to_json(), "text": m.to_text(), "latex": m.to_latex() }),
        text: m.to_text(),
        latex: Some(m.to_latex()),
        ..Report::default()
    }
}

fn gen_v(level: usize, gamma: i32) -> Result<Report, CliError> {
    Ok(matrix_report(&generate_partner(&u_matrix(), gamma, level)?))
}

fn gen_dual(base: usize, level: usize) -> Result<Report, CliError> {
    let raw = dual_hierarchy(base, level)?;
    let rules = evolution_rules(base)?;
    let reduced = on_shell(&raw, &rules);
    let mut r = match &reduced {
        Ok(m) => matrix_report(m),
        Err(_) => matrix_report(&raw),
    };
    r.check("on-shell elimination", reduced.is_ok(), reduced.as_ref().err().map(|e| e.to_string()).unwrap_or_default());
    r.result["raw"] = raw.to_json();
    r.result["raw_text"] = raw.to_text().into();
    r.result["rules"] = rules_json(&rules);
    Ok(r)
}

fn rules_json(rules: &Rules) -> Value {
    Value::Array(rules.iter().map(|(k, v)| json!({ "lhs": k.name(), "rhs": v.to_string(), "rhs_latex": v.to_latex() })).collect())
}

fn rules_text(rules: &Rules) -> String {
    rules.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join("\n")
}

fn charges(count: usize) -> Result<Report, CliError> {
    let mut r = Report::default();
    let flows = [(2u32, evolution_rules(2)?), (3, evolution_rules(3)?)];
    let mut densities = Vec::new();
    let (mut text, mut latex) = (Vec::new(), Vec::new());
    for k in 1..=count {
        let h = conserved_density(&u_matrix(), k)?;
        for (n, rules) in &flows {
            let conserved = h.d_t(*n).substitute(rules)?.is_total_x_derivative()?;
            r.check(format!("h{k} conserved under t{n}"), conserved, "");
        }
        text.push(format!("h{k} = {h}"));
        latex.push(format!("h^{{({k})}} = {}", h.to_latex()));
        densities.push(json!({ "k": k, "density": h.to_string(), "latex": h.to_latex(), "terms": h.to_json() }));
    }
    r.result = json!({ "densities": densities });
    r.text = text.join("\n");
    r.latex = Some(latex.join("\n"));
    Ok(r)
}

fn verify_zc(level: usize) -> Result<Report, CliError> {
    let v = v_matrix(level)?;
    let mut r = Report::default();
    match solve_evolution(&u_matrix(), &v) {
        Ok(rules) => {
            let left = zero_curvature_residual(&u_matrix(), &v).substitute(&rules)?;
            r.check("residual vanishes after substitution", left.is_zero(), "");
            r.text = rules_text(&rules);
            r.latex = Some(rules.iter().map(|(k, p)| format!("{} = {}", k.to_latex(), p.to_latex())).collect::<Vec<_>>().join("\n"));
            r.result = json!({ "rules": rules_json(&rules) });
        }
        Err(HierarchyError::NotEvolutionForm(msg)) => r.check("residual vanishes after substitution", false, msg),
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

fn pipeline(level: u32, picture: Picture) -> Result<LegendreResult, CliError> {
    let l = build_level_lagrangian(level)?;
    let (evolution, slice) = match picture {
        Picture::Time => (Direction::T(level), Direction::X),
        Picture::Space => (Direction::X, Direction::T(level)),
    };
    Ok(dirac_pipeline(&l.lagrangian, evolution, slice)?)
}

fn verify_r(choice: LaxChoice, gamma: Option<i32>) -> Result<Report, CliError> {
    let (a, table, default_gamma) = match choice {
        LaxChoice::U => (u_matrix(), pipeline(2, Picture::Time)?.table, 1),
        LaxChoice::V2 => (v_matrix(2)?, pipeline(2, Picture::Space)?.table, -1),
        LaxChoice::V3 => (v_matrix(3)?, pipeline(3, Picture::Space)?.table, -1),
        LaxChoice::V4 => (v_matrix(4)?, pipeline(4, Picture::Space)?.table, -1),
    };
    let gamma = gamma.unwrap_or(default_gamma);
    let rep = verify_rmatrix(&a, &table, gamma)?;
    let mut r = Report::default();
    r.check(rep.identity.clone(), rep.status, format!("gamma = {gamma:+}, {} nonzero residual entries", rep.residuals.len()));
    r.result = rep.to_json();
    r.result["table"] = table.to_json();
    Ok(r)
}

fn dirac(level: u32, picture: Picture) -> Result<Report, CliError> {
    let res = pipeline(level, picture)?;
    let sys = &res.system;
    let mut r = Report::default();
    let mut pairs = Vec::new();
    for (j, row) in sys.m.iter().enumerate() {
        for (k, c) in row.iter().enumerate().skip(j + 1) {
            if !c.is_zero() {
                pairs.push(format!("{{C{},C{}}} = {c}", j + 1, k + 1));
            }
        }
    }
    r.check("constraints are second class", sys.second_class(), "");
    r.check("no secondary constraints", sys.no_secondary(), "");
    r.check("reduced table is closed", res.table.is_closed(), "");
    let jac = res.table.jacobi_violations()?;
    r.check("Jacobi identity on reduced table", jac.is_empty(), format!("{} violations", jac.len()));
    let rules = evolution_rules(level as usize)?;
    let bad: Vec<String> = hamilton_check(&res, &rules)?.into_iter().filter(|(_, d)| !d.is_zero()).map(|(v, _)| v.name()).collect();
    r.check("Hamilton equations reproduce the flow", bad.is_empty(), bad.join(", "));

    let mut text = vec![format!("evolution {}, slice {}", res.evolution.label(), res.slice.label())];
    text.extend(sys.constraints.iter().enumerate().map(|(j, c)| format!("C{} = {c}", j + 1)));
    text.extend(pairs.iter().cloned());
    text.push(res.table.to_string());
    text.push(format!("H = {}", res.hamiltonian));
    r.text = text.join("\n");
    r.result = res.to_json();
    r.result["constraint_brackets"] = pairs.into();
    Ok(r)
}

fn initial_state(args: &SimArgs, seed: u64) -> Result<(GridState, Option<PlaneWave>), CliError> {
    match args.case {
        SimCase::Planewave => {
            let wave = PlaneWave { amplitude: args.amplitude, mode: args.mode, kappa: args.kappa, half_length: args.half_length };
            Ok((wave.grid(args.n, 0.0)?, Some(wave)))
        }
        SimCase::Custom => {
            // Smooth random data: modes |m| <= 3 with decaying amplitudes.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let modes: Vec<(f64, Complex64)> = (-3..=3)
                .map(|m: i32| {
                    let c = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                    (m as f64, c * args.amplitude / (1.0 + (m * m) as f64))
                })
                .collect();
            let k0 = std::f64::consts::PI / args.half_length;
            let f = |x: f64| modes.iter().map(|(m, c)| c * Complex64::from_polar(1.0, m * k0 * x)).sum();
            Ok((GridState::from_fn(args.n, args.half_length, Direction::X, args.kappa, f)?, None))
        }
    }
}

fn sim(args: &SimArgs, seed: u64) -> Result<Report, CliError> {
    let (init, wave) = initial_state(args, seed)?;
    let traj = evolve_nls(&init, (0.0, args.t_end), args.steps)?;
    let mut r = Report::default();
    let mut result = json!({ "times": traj.times.len(), "dt": args.t_end / args.steps as f64 });
    if let Some(w) = &wave {
        let err = w.max_error(&traj);
        r.check("plane wave tracks the exact solution", err < args.tol, format!("max error {err:.3e}"));
        result["plane_wave"] = json!({ "wave": w, "max_error": err });
    }
    match args.check {
        SimCheck::Charges => sim_charges(args, &traj, &mut r, &mut result)?,
        SimCheck::Monodromy => sim_monodromy(args, &traj, wave.is_some(), &mut r, &mut result)?,
    }
    r.result = result;
    Ok(r)
}

fn sim_charges(args: &SimArgs, traj: &Trajectory, r: &mut Report, out: &mut Value) -> Result<(), CliError> {
    let mut series = Vec::new();
    for k in 1..=args.charges {
        let h = conserved_density(&u_matrix(), k)?;
        let q = charge_evaluate(&h, traj)?;
        let drift = relative_drift(&q);
        r.check(format!("charge h{k} conserved"), drift < args.tol, format!("relative drift {drift:.3e}"));
        series.push(json!({ "k": k, "initial": q[0], "final": q[q.len() - 1], "relative_drift": drift }));
    }
    out["charges"] = series.into();
    Ok(())
}

fn spread(values: &[Complex64]) -> f64 {
    let v0 = values[0];
    let scale = if v0.norm() > 0.0 { v0.norm() } else { 1.0 };
    values.iter().map(|v| (v - v0).norm() / scale).fold(0.0, f64::max)
}

fn sim_monodromy(args: &SimArgs, traj: &Trajectory, time_periodic: bool, r: &mut Report, out: &mut Value) -> Result<(), CliError> {
    let rules = evolution_rules(2)?;
    let lambdas: Vec<Complex64> = (0..8).map(|k| Complex64::new(-1.3 + 0.4 * k as f64, 0.2)).collect();
    let last = traj.len() - 1;
    let snapshots = [0, last / 4, last / 2, last];
    let stations = [0, args.n / 7, args.n / 2, args.n - 1];
    let v2 = v_matrix(2)?;
    let mut families = Vec::new();
    let mut det_err: f64 = 0.0;
    let mut jobs = vec![("trace of T_U across snapshots", u_matrix(), snapshots.map(|s| Path::AlongX { snapshot: s }))];
    // Traces along t agree between stations only for time-periodic data.
    if time_periodic {
        jobs.push(("trace of T_V2 across x-stations", v2, stations.map(|s| Path::AlongT { station: s, level: 2 })));
    } else {
        out["skipped"] = json!(["trace of T_V2 across x-stations: data is not periodic in t"]);
    }
    for (name, a, paths) in jobs {
        let samples = paths
            .iter()
            .map(|p| transfer_matrix(&a, traj, &rules, &lambdas, *p, args.substeps))
            .collect::<Result<Vec<_>, _>>()?;
        let worst = (0..lambdas.len())
            .map(|k| spread(&samples.iter().map(|s| s.traces()[k]).collect::<Vec<_>>()))
            .fold(0.0, f64::max);
        det_err = samples.iter().map(|s| s.max_det_error()).fold(det_err, f64::max);
        r.check(name, worst < args.tol, format!("max relative spread {worst:.3e}"));
        families.push(json!({ "name": name, "max_relative_spread": worst, "samples": samples.iter().map(|s| s.to_json()).collect::<Vec<_>>() }));
    }
    r.check("det T = 1", det_err < args.det_tol, format!("max |det - 1| {det_err:.3e}"));
    out["monodromy"] = families.into();
    Ok(())
}
