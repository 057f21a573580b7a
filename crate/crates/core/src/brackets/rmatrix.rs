use serde_json::json;

use super::{BracketError, BracketTable};
use crate::laxalg::{rmatrix_bracket_rhs, LaxMatrix, TensorMatrix};
use crate::ringcore::DiffPoly;

/// `{A(lambda) (x) B(mu)}`: entry `(2i+k, 2j+l)` is `{A_ij(lambda), B_kl(mu)}`,
/// graded by the powers of `lambda` and `mu`.
pub fn matrix_bracket(a: &LaxMatrix, b: &LaxMatrix, table: &BracketTable) -> Result<TensorMatrix, BracketError> {
    let mut out = TensorMatrix::zero();
    for (p, ap) in a.coeffs() {
        for (q, bq) in b.coeffs() {
            for i in 0..2 {
                for j in 0..2 {
                    let f = ap.get(i, j);
                    if f.is_zero() {
                        continue;
                    }
                    for k in 0..2 {
                        for l in 0..2 {
                            let g = bq.get(k, l);
                            if g.is_zero() {
                                continue;
                            }
                            let v = table.bracket(f, g)?;
                            if !v.is_zero() {
                                out.add_entry((p, q), 2 * i + k, 2 * j + l, &v);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryResidual {
    pub row: usize,
    pub col: usize,
    pub lambda_pow: i32,
    pub mu_pow: i32,
    pub residual: DiffPoly,
}

/// Outcome of checking the linear r-matrix bracket for one Lax matrix.
#[derive(Clone, Debug)]
pub struct RMatrixReport {
    pub identity: String,
    pub gamma: i32,
    pub status: bool,
    pub residuals: Vec<EntryResidual>,
}

impl RMatrixReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "identity": self.identity,
            "gamma": self.gamma,
            "status": if self.status { "pass" } else { "fail" },
            "per_entry_residuals": self.residuals.iter().map(|r| json!({
                "row": r.row, "col": r.col, "lambda_pow": r.lambda_pow, "mu_pow": r.mu_pow,
                "residual": r.residual.to_json(), "text": r.residual.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Compare `{A(lambda) (x) A(mu)}` under `table` with the r-matrix form of
/// the bracket at sign `gamma`; every nonzero residual entry is reported.
pub fn verify_rmatrix(a: &LaxMatrix, table: &BracketTable, gamma: i32) -> Result<RMatrixReport, BracketError> {
    let lhs = matrix_bracket(a, a, table)?;
    let rhs = rmatrix_bracket_rhs(a, gamma)?;
    let diff = &lhs - &rhs;
    let mut residuals = Vec::new();
    for (&(lp, mp), m) in diff.coeffs() {
        for row in 0..4 {
            for col in 0..4 {
                let r = &m.0[row][col];
                if !r.is_zero() {
                    residuals.push(EntryResidual { row, col, lambda_pow: lp, mu_pow: mp, residual: r.clone() });
                }
            }
        }
    }
    let name = match a.level {
        Some(n) => format!("{{A(lambda) (x) A(mu)}}_{} for level {n}", table.label),
        None => format!("{{A(lambda) (x) A(mu)}}_{}", table.label),
    };
    Ok(RMatrixReport { identity: name, gamma, status: residuals.is_empty(), residuals })
}
