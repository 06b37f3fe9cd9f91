use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "fracvar",
    version,
    about = "Fractional operators and fractional isoperimetric problems on rectangles",
    after_help = "Expressions (--fn, --u, --eta, --h, --k) use x, y, numbers, + - * / ^, sin, cos, exp and parentheses.\n\
                  Fields are read and written as CSV (x,y,value) or, for paths ending in .json, as JSON.\n\
                  Run `fracvar catalog` for the built-in problems, integrands and Green cases.\n\
                  FRACVAR_THREADS=<n> caps the worker threads."
)]
pub struct Cli {
    /// TOML file with default values for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional derivative of f(x) on [a,b]; writes x,value rows.
    Fracdiff(FracdiffArgs),
    /// Fractional partial derivative of f(x,y) along one axis.
    Partial(PartialArgs),
    /// Fractional volume integral of f(x,y) over the rectangle.
    Integrate(FieldArgs),
    /// Fractional line integral of f(x,y) around the rectangle.
    LineIntegrate(FieldArgs),
    /// Residual of the fractional Green formula for (h, k, eta).
    GreenCheck(GreenArgs),
    /// Euler-Lagrange residual field of a problem at a given u.
    ElResidual(ResidualArgs),
    /// Natural boundary residuals on the four edges.
    NatbcCheck(ResidualArgs),
    /// Compare a Gateaux derivative with the pairing of the EL residual.
    GateauxCheck(GateauxArgs),
    /// Sample the (u,v,w)-Hessian of H for positive semidefiniteness.
    Convexity(ConvexityArgs),
    /// Solve a fixed-boundary isoperimetric problem.
    Solve(SolveArgs),
    /// Solve a free-boundary isoperimetric problem.
    SolveFree(SolveArgs),
    /// List the built-in catalog.
    Catalog,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GridArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Nodes along x (default 33).
    #[arg(long)]
    pub nx: Option<usize>,
    /// Nodes along y (default 33).
    #[arg(long)]
    pub ny: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FracdiffArgs {
    /// Order in (0,1).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "fn", value_name = "EXPR")]
    pub function: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Nodes (default 129).
    #[arg(long)]
    pub n: Option<usize>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartialArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "fn", value_name = "EXPR")]
    pub function: Option<String>,
    /// x or y.
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "fn", value_name = "EXPR")]
    pub function: Option<String>,
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Built-in case name; alternatively give --h, --k and --eta.
    #[arg(long)]
    pub case: Option<String>,
    #[arg(long, value_name = "EXPR")]
    pub h: Option<String>,
    #[arg(long, value_name = "EXPR")]
    pub k: Option<String>,
    #[arg(long, value_name = "EXPR")]
    pub eta: Option<String>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ProblemArgs {
    /// Built-in problem preset.
    #[arg(long)]
    pub problem: Option<String>,
    /// JSON problem description with keys f, g, K, psi, target.
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct StateArgs {
    /// u as an expression.
    #[arg(long, value_name = "EXPR")]
    pub u: Option<String>,
    /// u read from a field file.
    #[arg(long, value_name = "FILE")]
    pub field: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct MultiplierArgs {
    /// Cost multiplier (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda0: Option<f64>,
    /// Constraint multiplier (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub multipliers: MultiplierArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateauxArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Direction as an expression.
    #[arg(long, value_name = "EXPR")]
    pub eta: Option<String>,
    /// J (cost, default) or G (constraint).
    #[arg(long)]
    pub functional: Option<String>,
    /// Central-difference step; default 1e-5 (1 + max|u|).
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConvexityArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub multipliers: MultiplierArgs,
    /// Sample count (default 1000).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Half-width of the (u,v,w) sampling box (default 10).
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Starting field file; boundary values are replaced by psi when prescribed.
    #[arg(long, value_name = "FILE")]
    pub init: Option<PathBuf>,
    /// Field file for the computed u.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report file; the report is also printed to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub max_outer_iters: Option<usize>,
    #[arg(long)]
    pub max_inner_iters: Option<usize>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long)]
    pub constraint_tol: Option<f64>,
    #[arg(long)]
    pub penalty_init: Option<f64>,
    #[arg(long)]
    pub penalty_growth: Option<f64>,
    #[arg(long)]
    pub penalty_max: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}
