use num_complex::Complex64;
use serde_json::json;

use super::{NumError, Trajectory};
use crate::laxalg::LaxMatrix;
use crate::ringcore::{Direction, JetVar, Rules};

pub type C2 = [[Complex64; 2]; 2];

/// Where the auxiliary problem is integrated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    /// Across the spatial cell at one snapshot.
    AlongX { snapshot: usize },
    /// Across the recorded time window at one grid station, for the level-`level` time.
    AlongT { station: usize, level: u32 },
}

#[derive(Clone, Debug)]
pub struct MonodromySample {
    pub lambdas: Vec<Complex64>,
    pub matrices: Vec<C2>,
    pub direction: Direction,
    pub period: f64,
}

impl MonodromySample {
    pub fn traces(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m[0][0] + m[1][1]).collect()
    }

    pub fn dets(&self) -> Vec<Complex64> {
        self.matrices.iter().map(det).collect()
    }

    pub fn max_det_error(&self) -> f64 {
        self.dets().iter().map(|d| (d - 1.0).norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "direction": self.direction.label(),
            "period": self.period,
            "samples": self.lambdas.iter().zip(&self.matrices).map(|(l, m)| {
                let tr = m[0][0] + m[1][1];
                json!({ "lambda": [l.re, l.im], "trace": [tr.re, tr.im], "det_error": (det(m) - 1.0).norm() })
            }).collect::<Vec<_>>(),
        })
    }
}

fn det(m: &C2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn mul(a: &C2, b: &C2) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn lin(terms: &[(Complex64, &C2)]) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (s, m) in terms {
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += s * m[i][j];
            }
        }
    }
    out
}

/// Exact exponential of a 2x2 matrix via `exp(A) = e^{tr/2} (cosh s + sinh(s)/s (A - tr/2))`, `s^2 = -det(A - tr/2)`.
pub fn expm2(a: &C2) -> C2 {
    let half = (a[0][0] + a[1][1]) / 2.0;
    let b = [[a[0][0] - half, a[0][1]], [a[1][0], a[1][1] - half]];
    let s = (-det(&b)).sqrt();
    let (ch, sh) = if s.norm() < 1e-6 {
        let s2 = s * s;
        (1.0 + s2 / 2.0 + s2 * s2 / 24.0, 1.0 + s2 / 6.0 + s2 * s2 / 120.0)
    } else {
        (s.cosh(), s.sinh() / s)
    };
    let e = half.exp();
    [[e * (ch + sh * b[0][0]), e * sh * b[0][1]], [e * sh * b[1][0], e * (ch + sh * b[1][1])]]
}

/// Node data: per node, the lambda-coefficients of the matrix and of its derivative.
struct Nodes {
    positions: Vec<f64>,
    m: Vec<Vec<(i32, C2)>>,
    dm: Vec<Vec<(i32, C2)>>,
}

fn at_lambda(coeffs: &[(i32, C2)], lambda: Complex64) -> C2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (j, c) in coeffs {
        let p = lambda.powi(*j);
        for r in 0..2 {
            for s in 0..2 {
                out[r][s] += p * c[r][s];
            }
        }
    }
    out
}

fn eval_coeffs(a: &LaxMatrix, kappa: f64, value: &dyn Fn(&JetVar) -> Complex64) -> Vec<(i32, C2)> {
    a.coeffs()
        .map(|(j, m)| {
            let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
            for r in 0..2 {
                for s in 0..2 {
                    c[r][s] = m.get(r, s).eval(kappa, |v| value(v));
                }
            }
            (j, c)
        })
        .collect()
}

/// Fundamental solution of `d Psi = M Psi` across one period along `path`, for each `lambda`.
///
/// Jets along the other variable are removed with `rules`; what remains
/// must be `x`-jets, taken spectrally from the snapshots. Between sample
/// nodes `M` is cubic-Hermite interpolated from its values and its
/// symbolic derivative, and each of `substeps` sub-intervals takes one
/// fourth-order Magnus step.
pub fn transfer_matrix(
    m: &LaxMatrix,
    traj: &Trajectory,
    rules: &Rules,
    lambdas: &[Complex64],
    path: Path,
    substeps: usize,
) -> Result<MonodromySample, NumError> {
    let dir = match path {
        Path::AlongX { .. } => Direction::X,
        Path::AlongT { level, .. } => Direction::T(level),
    };
    let me = m.substitute(rules)?;
    let dme = me.total_derivative(dir).substitute(rules)?;
    let mut vars: Vec<JetVar> = Vec::new();
    for a in [&me, &dme] {
        for (_, c) in a.coeffs() {
            for r in 0..2 {
                for s in 0..2 {
                    vars.extend(c.get(r, s).variables());
                }
            }
        }
    }
    vars.sort();
    vars.dedup();
    let kappa = traj.kappa();

    let nodes = match path {
        Path::AlongX { snapshot } => {
            let state = traj.states.get(snapshot).ok_or(NumError::OutOfRange(snapshot))?;
            let jets = state.jets(&vars)?;
            let n = state.len();
            let mut nodes = Nodes { positions: Vec::new(), m: Vec::new(), dm: Vec::new() };
            for j in 0..=n {
                let value = |v: &JetVar| jets[v][j % n];
                nodes.positions.push(state.point(0) + j as f64 * state.step());
                nodes.m.push(eval_coeffs(&me, kappa, &value));
                nodes.dm.push(eval_coeffs(&dme, kappa, &value));
            }
            nodes
        }
        Path::AlongT { station, .. } => {
            let mut nodes = Nodes { positions: traj.times.clone(), m: Vec::new(), dm: Vec::new() };
            for state in &traj.states {
                if station >= state.len() {
                    return Err(NumError::OutOfRange(station));
                }
                let jets = state.jets(&vars)?;
                let value = |v: &JetVar| jets[v][station];
                nodes.m.push(eval_coeffs(&me, kappa, &value));
                nodes.dm.push(eval_coeffs(&dme, kappa, &value));
            }
            nodes
        }
    };
    if nodes.positions.len() < 2 {
        return Err(NumError::BadParameter("need at least two nodes".into()));
    }
    let sub = substeps.max(1);
    let mut matrices = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut t = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
        for i in 0..nodes.positions.len() - 1 {
            let h = nodes.positions[i + 1] - nodes.positions[i];
            let (m0, d0) = (at_lambda(&nodes.m[i], lambda), at_lambda(&nodes.dm[i], lambda));
            let (m1, d1) = (at_lambda(&nodes.m[i + 1], lambda), at_lambda(&nodes.dm[i + 1], lambda));
            let hermite = |s: f64| -> C2 {
                let (s2, s3) = (s * s, s * s * s);
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                lin(&[
                    (Complex64::from(h00), &m0),
                    (Complex64::from(h10 * h), &d0),
                    (Complex64::from(h01), &m1),
                    (Complex64::from(h11 * h), &d1),
                ])
            };
            let hs = h / sub as f64;
            for k in 0..sub {
                let s0 = k as f64 / sub as f64;
                let s1 = (k + 1) as f64 / sub as f64;
                let (a0, am, a1) = (hermite(s0), hermite((s0 + s1) / 2.0), hermite(s1));
                // Omega = a1 - [a1, a2] / 12 with a1 ~ integral of M, a2 ~ h^2 M'.
                let alpha1 = lin(&[(Complex64::from(hs / 6.0), &a0), (Complex64::from(4.0 * hs / 6.0), &am), (Complex64::from(hs / 6.0), &a1)]);
                let alpha2 = lin(&[(Complex64::from(hs), &a1), (Complex64::from(-hs), &a0)]);
                let comm = lin(&[(Complex64::from(1.0), &mul(&alpha1, &alpha2)), (Complex64::from(-1.0), &mul(&alpha2, &alpha1))]);
                let omega = lin(&[(Complex64::from(1.0), &alpha1), (Complex64::from(-1.0 / 12.0), &comm)]);
                t = mul(&expm2(&omega), &t);
            }
        }
        matrices.push(t);
    }
    let period = nodes.positions[nodes.positions.len() - 1] - nodes.positions[0];
    Ok(MonodromySample { lambdas: lambdas.to_vec(), matrices, direction: dir, period })
}
