//! `expderiv`: command-line front-end for exponential differential algebra.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "expderiv",
    version,
    about = "Exponential polynomials, E-derivations and jet search"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Real,
    Padic,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = BackendKind::Real)]
    pub backend: BackendKind,
    /// Prime of the p-adic backend.
    #[arg(long, global = true, default_value_t = 5)]
    pub p: u64,
    /// p-adic precision N (digits).
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: u32,
    #[arg(long, global = true)]
    pub eps_res: Option<f64>,
    #[arg(long, global = true)]
    pub eps_reg: Option<f64>,
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Seed for pseudo-random perturbations.
    #[arg(long, global = true, env = "EXPDERIV_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Print the report as a JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Read the main input (expression or instance file) from FILE.
    #[arg(long = "in", global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Write the report (or, for dle-build, the instance file) to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Equations separated by `;`.
    #[arg(long)]
    pub system: String,
    /// Comma-separated unknowns (default: every variable that is not a parameter).
    #[arg(long)]
    pub unknowns: Option<String>,
    /// Comma-separated parameters (default: every variable that is not an unknown).
    #[arg(long)]
    pub params: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal form of a term.
    Normalize { expr: Option<String> },
    /// Ordinal complexity of an E-polynomial.
    Ord { expr: Option<String> },
    /// Partial derivative with respect to a variable.
    Diff {
        expr: Option<String>,
        #[arg(long)]
        var: String,
    },
    /// Total δ-lift `Σ ∂_v p · succ(v)`.
    DeltaShift { expr: Option<String> },
    /// Symbolic Jacobian matrix and determinant.
    Jacobian {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Validates a Khovanskii system and prints its determinant.
    KhovBuild {
        #[command(flatten)]
        sys: SystemArgs,
    },
    /// Checks residuals and regularity of a Khovanskii system at a point.
    KhovCheck {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        point: String,
    },
    /// Jet of the unknowns by numeric propagation.
    Propagate {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        point: String,
        /// Parameter successors, e.g. `c:1=1, c:2=0`.
        #[arg(long, default_value = "")]
        jet: String,
        #[arg(long, default_value_t = 1)]
        levels: u32,
    },
    /// Torsor residuals of a tangent at a point.
    Torsor {
        /// Generators separated by `;` (any number).
        #[arg(long)]
        system: String,
        #[arg(long)]
        unknowns: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        tangent: String,
        #[arg(long, default_value = "")]
        jet: String,
    },
    /// Tangents of dependent unknowns from free tangents.
    SolveJet {
        #[arg(long)]
        system: String,
        #[arg(long)]
        free: String,
        #[arg(long)]
        dependent: String,
        #[arg(long)]
        point: String,
        /// Tangents of the free unknowns.
        #[arg(long)]
        tangent: String,
        #[arg(long, default_value = "")]
        jet: String,
    },
    /// Real Newton solve from a seed point.
    Newton {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        point: String,
    },
    /// p-adic Hensel lift from a seed point.
    Hensel {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        point: String,
    },
    /// Star transform of a differential formula.
    Star { formula: Option<String> },
    /// Builds an instance file from `[PHI]` and `[H]` (or a demo case).
    DleBuild {
        #[arg(long)]
        demo: Option<String>,
    },
    /// Renders an instance as a formula.
    DleRender {
        #[arg(long)]
        demo: Option<String>,
    },
    /// Searches a jet satisfying `φ*_H` near a target.
    DleSolve {
        #[arg(long)]
        demo: Option<String>,
        /// Target jet, e.g. `x:0=2, x:1=1`.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        constants: Option<String>,
        /// Seeds for witness variables.
        #[arg(long)]
        witness: Option<String>,
        /// Scale of the perturbation of free coordinates.
        #[arg(long, default_value_t = 1e-4)]
        magnitude: f64,
    },
    /// Evaluates an E-polynomial at a point.
    Eval {
        expr: Option<String>,
        #[arg(long)]
        point: String,
    },
}

fn emit(report: &Report, json: bool, out: Option<&PathBuf>) -> std::io::Result<()> {
    let text = if json {
        report.to_json()
    } else {
        report.to_lines()
    };
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.global.json;
    match commands::run(&cli) {
        Ok(outcome) => {
            let out = match outcome {
                commands::Outcome::Report(r) => Some(r),
                commands::Outcome::Raw(text) => {
                    print!("{text}");
                    None
                }
            };
            let Some(report) = out else {
                return ExitCode::SUCCESS;
            };
            // dle-build uses --out for the instance file itself.
            let target = match cli.command {
                Command::DleBuild { .. } => None,
                _ => cli.global.out.as_ref(),
            };
            if let Err(e) = emit(&report, json, target) {
                eprintln!("expderiv: cannot write report: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if report.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("expderiv: {e}");
            let mut r = Report::new();
            r.text("error", e.kind()).text("message", &e);
            let _ = emit(&r, json, None);
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
