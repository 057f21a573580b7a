use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exact and numerical verification runs for the NLS hierarchy and its space-time dual.
#[derive(Debug, Parser, Serialize)]
#[command(name = "nlsdual", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Directory for reports when --out is absent.
    #[arg(long, env = "NLSDUAL_OUT_DIR", global = true)]
    pub out_dir: Option<PathBuf>,

    /// Seed for randomized initial data.
    #[arg(long, default_value_t = 20241015, global = true)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Partner matrix V(n) of U.
    GenV {
        #[arg(long)]
        level: usize,
        /// Sign of the partner construction.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        gamma: i32,
    },
    /// Dual hierarchy built on V(base) along t_base.
    GenDual {
        #[arg(long, default_value_t = 2)]
        base: usize,
        #[arg(long)]
        level: usize,
    },
    /// Conserved densities h(1)..h(count), checked against the t2 and t3 flows.
    Charges {
        #[arg(long)]
        count: usize,
    },
    /// Evolution equation from the zero-curvature condition of (U, V(n)).
    VerifyZc {
        #[arg(long)]
        level: usize,
    },
    /// Classical r-matrix identity for a Lax matrix and its bracket table.
    VerifyRmatrix {
        #[arg(long, value_enum)]
        matrix: LaxChoice,
        /// Override the sign of the r-matrix (default +1 for u, -1 otherwise).
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<i32>,
    },
    /// Constraint analysis of a level Lagrangian.
    Dirac {
        #[arg(long, value_enum)]
        lagrangian: LagrangianChoice,
        #[arg(long, value_enum)]
        direction: Picture,
    },
    /// Spectral evolution with charge or transfer-matrix diagnostics.
    Sim(SimArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaxChoice {
    U,
    V2,
    V3,
    V4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LagrangianChoice {
    L2,
    L3,
    L4,
}

impl LagrangianChoice {
    pub fn level(self) -> u32 {
        match self {
            LagrangianChoice::L2 => 2,
            LagrangianChoice::L3 => 3,
            LagrangianChoice::L4 => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Time,
    Space,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimCase {
    Planewave,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimCheck {
    Charges,
    Monodromy,
}

#[derive(Debug, Args, Serialize)]
pub struct SimArgs {
    #[arg(long, value_enum)]
    pub case: SimCase,
    #[arg(long, value_enum)]
    pub check: SimCheck,
    /// Grid points.
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Half period of the spatial cell.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub half_length: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Plane-wave mode number.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub mode: i32,
    /// Number of conserved densities tracked by the charge check.
    #[arg(long, default_value_t = 3)]
    pub charges: usize,
    /// Relative drift allowed for charges and traces.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Allowed |det T - 1|.
    #[arg(long, default_value_t = 1e-8)]
    pub det_tol: f64,
    /// Magnus substeps per grid cell or time step.
    #[arg(long, default_value_t = 2)]
    pub substeps: usize,
}

impl RunConfig {
    /// Range checks clap cannot express.
    pub fn validate(&self) -> Result<(), String> {
        let bad = |msg: String| Err(msg);
        match &self.command {
            Command::GenV { level, gamma } => {
                if *level > 8 {
                    return bad(format!("--level {level} exceeds 8"));
                }
                if gamma.abs() != 1 {
                    return bad(format!("--gamma must be 1 or -1, got {gamma}"));
                }
            }
            Command::GenDual { base, level } => {
                if !(2..=3).contains(base) {
                    return bad(format!("--base must be 2 or 3, got {base}"));
                }
                if *level > 4 {
                    return bad(format!("--level {level} exceeds 4"));
                }
            }
            Command::Charges { count } => {
                if !(1..=6).contains(count) {
                    return bad(format!("--count must be in 1..=6, got {count}"));
                }
            }
            Command::VerifyZc { level } => {
                if !(1..=6).contains(level) {
                    return bad(format!("--level must be in 1..=6, got {level}"));
                }
            }
            Command::VerifyRmatrix { gamma: Some(g), .. } if g.abs() != 1 => {
                return bad(format!("--gamma must be 1 or -1, got {g}"));
            }
            Command::Sim(s) => {
                if s.n < 16 {
                    return bad(format!("--n must be at least 16, got {}", s.n));
                }
                if s.steps == 0 || s.substeps == 0 {
                    return bad("--steps and --substeps must be positive".into());
                }
                if !(s.half_length > 0.0 && s.t_end > 0.0) {
                    return bad("--half-length and --t-end must be positive".into());
                }
                if !(1..=4).contains(&s.charges) {
                    return bad(format!("--charges must be in 1..=4, got {}", s.charges));
                }
                if !(s.tol > 0.0 && s.det_tol > 0.0) {
                    return bad("tolerances must be positive".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn command_name(&self) -> &'static str {
        match self.command {
            Command::GenV { .. } => "gen-v",
            Command::GenDual { .. } => "gen-dual",
            Command::Charges { .. } => "charges",
            Command::VerifyZc { .. } => "verify-zc",
            Command::VerifyRmatrix { .. } => "verify-rmatrix",
            Command::Dirac { .. } => "dirac",
            Command::Sim(_) => "sim",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("nlsdual").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults_and_ranges() {
        let cfg = parse(&["sim", "--case", "planewave", "--check", "charges"]);
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.format, Format::Json);
        assert!(parse(&["gen-v", "--level", "2", "--gamma", "-1"]).validate().is_ok());
        assert!(parse(&["gen-v", "--level", "2", "--gamma", "3"]).validate().is_err());
        assert!(parse(&["gen-dual", "--base", "1", "--level", "0"]).validate().is_err());
        assert!(parse(&["sim", "--case", "custom", "--check", "charges", "--n", "8"]).validate().is_err());
        assert!(RunConfig::try_parse_from(["nlsdual", "verify-rmatrix", "--matrix", "v9"]).is_err());
    }

    #[test]
    fn config_serializes_with_command_name() {
        let cfg = parse(&["dirac", "--lagrangian", "l3", "--direction", "space"]);
        let v = serde_json::to_value(&cfg).unwrap();
        assert_eq!(v["command"]["name"], "dirac");
        assert_eq!(v["command"]["lagrangian"], "l3");
        assert_eq!(cfg.command_name(), "dirac");
    }
}
