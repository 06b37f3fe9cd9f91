use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use fracvar_core::catalog::{BoundaryKind, Catalog};
use fracvar_core::fields::fmt_float;
use fracvar_core::fracops::{green_residual, line_integral_parts, partial_frac, volume_integral, jumarie_derivative};
use fracvar_core::solver::{solve_fixed_boundary, solve_free_boundary, SolveOptions, SolveStatus};
use fracvar_core::variational::{
    convexity_probe_in_box, default_gateaux_step, el_residual, gateaux_derivative, natural_bc_residuals,
    weighted_pairing, ConvexityVerdict, Functional, IsoperimetricProblem, MultiplierPair, DEFAULT_PROBE_RADIUS,
};
use fracvar_core::{make_grid, Axis, Field1D, Field2D, FractionalOrder, Grid2D};

use crate::args::*;
use crate::config::RunConfig;
use crate::expr::Expr;
use crate::problem_file::ProblemFile;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// What a successful command leaves behind.
#[derive(Default)]
pub struct Outcome {
    stdout: String,
    files: Vec<(PathBuf, String)>,
    failure: Option<String>,
}

impl Outcome {
    fn line(&mut self, key: &str, v: f64) {
        let _ = writeln!(self.stdout, "{key}={}", fmt_float(v));
    }

    pub fn finish(self, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
        for (path, text) in &self.files {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        let _ = stdout.write_all(self.stdout.as_bytes());
        match self.failure {
            Some(msg) => {
                let _ = writeln!(stderr, "error: {msg}");
                2
            }
            None => 0,
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    catalog: Catalog,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Validation(msg.into()))
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Validation(format!("missing --{flag}")))
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let ctx = Ctx {
        cfg,
        catalog: Catalog::builtin(),
    };
    match cli.command {
        Command::Fracdiff(a) => ctx.fracdiff(a),
        Command::Partial(a) => ctx.partial(a),
        Command::Integrate(a) => ctx.integrate(a),
        Command::LineIntegrate(a) => ctx.line_integrate(a),
        Command::GreenCheck(a) => ctx.green_check(a),
        Command::ElResidual(a) => ctx.el_residual(a),
        Command::NatbcCheck(a) => ctx.natbc_check(a),
        Command::GateauxCheck(a) => ctx.gateaux_check(a),
        Command::Convexity(a) => ctx.convexity(a),
        Command::Solve(a) => ctx.solve(a, BoundaryKind::Fixed),
        Command::SolveFree(a) => ctx.solve(a, BoundaryKind::Free),
        Command::Catalog => Ok(ctx.list_catalog()),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn read_field(path: &Path) -> Result<Field2D> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if is_json(path) {
        Field2D::from_json(&text)
    } else {
        Field2D::from_csv(&text)
    };
    parsed.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn render_field(path: &Path, f: &Field2D) -> String {
    if is_json(path) {
        f.to_json()
    } else {
        f.to_csv()
    }
}

/// Rejects duplicate or unwritable output paths before any work is done.
fn check_outputs(paths: &[Option<&PathBuf>]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in paths.iter().flatten() {
        if !seen.insert(p.as_path()) {
            return invalid(format!("output path {} given twice", p.display()));
        }
        if p.is_dir() {
            return invalid(format!("output path {} is a directory", p.display()));
        }
        let parent = p.parent().filter(|d| !d.as_os_str().is_empty());
        if let Some(dir) = parent {
            if !dir.is_dir() {
                return invalid(format!("directory {} does not exist", dir.display()));
            }
        }
    }
    Ok(())
}

impl Ctx {
    fn order(&self, flag: Option<f64>) -> Result<FractionalOrder> {
        let alpha = required(flag.or(self.cfg.alpha), "alpha")?;
        Ok(FractionalOrder::new(alpha)?)
    }

    fn grid_given(&self, g: &GridArgs) -> bool {
        let c = &self.cfg;
        [g.a, g.b, g.c, g.d, c.a, c.b, c.c, c.d].iter().any(Option::is_some)
            || [g.nx, g.ny, c.nx, c.ny].iter().any(Option::is_some)
    }

    fn grid(&self, g: &GridArgs) -> Result<Grid2D> {
        let c = &self.cfg;
        Ok(make_grid(
            g.a.or(c.a).unwrap_or(0.0),
            g.b.or(c.b).unwrap_or(1.0),
            g.c.or(c.c).unwrap_or(0.0),
            g.d.or(c.d).unwrap_or(1.0),
            g.nx.or(c.nx).unwrap_or(33),
            g.ny.or(c.ny).unwrap_or(33),
        )?)
    }

    fn expr(&self, flag: Option<String>, cfg: &Option<String>, name: &str) -> Result<Expr> {
        let src = required(flag.or_else(|| cfg.clone()), name)?;
        Expr::parse(&src).map_err(|e| CliError::Validation(format!("--{name} '{src}': {e}")))
    }

    fn sample(&self, e: &Expr, grid: &Grid2D, name: &str) -> Result<Field2D> {
        Field2D::sample(grid, |x, y| e.eval(x, y))
            .map_err(|err| CliError::Numerical(format!("--{name} '{}': {err}", e.source())))
    }

    /// Builds the problem from a preset or spec file. A spec file with psi
    /// supplies the grid unless one was given explicitly.
    fn problem(
        &self,
        pa: &ProblemArgs,
        ga: &GridArgs,
        order: FractionalOrder,
    ) -> Result<(IsoperimetricProblem, Option<BoundaryKind>)> {
        let preset = pa.problem.clone().or_else(|| self.cfg.problem.clone());
        let spec = pa.spec.clone().or_else(|| self.cfg.spec.clone());
        match (preset, spec) {
            (Some(_), Some(_)) => invalid("--problem and --spec are mutually exclusive"),
            (None, None) => invalid("missing --problem or --spec"),
            (Some(name), None) => {
                let preset = self.catalog.problem_preset(&name)?;
                let grid = self.grid(ga)?;
                Ok((preset.build(&grid, order)?, Some(preset.boundary())))
            }
            (None, Some(path)) => {
                let file = ProblemFile::load(&path)?;
                let grid = match &file.psi {
                    Some(psi) if !self.grid_given(ga) => *psi.grid(),
                    _ => self.grid(ga)?,
                };
                Ok((file.build(&self.catalog, &grid, order)?, None))
            }
        }
    }

    fn state(&self, s: &StateArgs, grid: &Grid2D) -> Result<Field2D> {
        let expr = s.u.clone().or_else(|| self.cfg.u.clone());
        let file = s.field.clone().or_else(|| self.cfg.field.clone());
        let u = match (expr, file) {
            (Some(_), Some(_)) => return invalid("--u and --field are mutually exclusive"),
            (None, None) => return invalid("missing --u or --field"),
            (Some(src), None) => {
                let e = Expr::parse(&src).map_err(|e| CliError::Validation(format!("--u '{src}': {e}")))?;
                self.sample(&e, grid, "u")?
            }
            (None, Some(path)) => read_field(&path)?,
        };
        if u.grid() != grid {
            return invalid("the field's grid differs from the problem grid");
        }
        Ok(u)
    }

    fn multipliers(&self, m: &MultiplierArgs) -> Result<MultiplierPair> {
        Ok(MultiplierPair::new(
            m.lambda0.or(self.cfg.lambda0).unwrap_or(1.0),
            m.lambda.or(self.cfg.lambda).unwrap_or(0.0),
        )?)
    }

    fn fracdiff(&self, a: FracdiffArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let e = self.expr(a.function, &self.cfg.function, "fn")?;
        if e.uses_y() {
            return invalid("--fn for fracdiff may only use x");
        }
        let out = a.out.or_else(|| self.cfg.out.clone());
        check_outputs(&[out.as_ref()])?;
        let lo = a.a.or(self.cfg.a).unwrap_or(0.0);
        let hi = a.b.or(self.cfg.b).unwrap_or(1.0);
        let n = a.n.or(self.cfg.n).unwrap_or(129);
        let f = Field1D::sample(lo, hi, n, |x| e.eval(x, 0.0))?;
        let csv = jumarie_derivative(&f, order)?.to_csv();
        let mut o = Outcome::default();
        match out {
            Some(path) => o.files.push((path, csv)),
            None => o.stdout = csv,
        }
        Ok(o)
    }

    fn partial(&self, a: PartialArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let grid = self.grid(&a.grid)?;
        let e = self.expr(a.function, &self.cfg.function, "fn")?;
        let axis = match required(a.axis.or_else(|| self.cfg.axis.clone()), "axis")?.as_str() {
            "x" => Axis::X,
            "y" => Axis::Y,
            other => return invalid(format!("--axis must be x or y, got '{other}'")),
        };
        let out = a.out.or_else(|| self.cfg.out.clone());
        check_outputs(&[out.as_ref()])?;
        let d = partial_frac(&self.sample(&e, &grid, "fn")?, axis, order)?;
        let mut o = Outcome::default();
        match out {
            Some(path) => {
                let text = render_field(&path, &d);
                o.files.push((path, text));
            }
            None => o.stdout = d.to_csv(),
        }
        Ok(o)
    }

    fn integrate(&self, a: FieldArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let grid = self.grid(&a.grid)?;
        let e = self.expr(a.function, &self.cfg.function, "fn")?;
        let mut o = Outcome::default();
        o.line("value", volume_integral(&self.sample(&e, &grid, "fn")?, order));
        Ok(o)
    }

    fn line_integrate(&self, a: FieldArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let grid = self.grid(&a.grid)?;
        let e = self.expr(a.function, &self.cfg.function, "fn")?;
        let parts = line_integral_parts(&self.sample(&e, &grid, "fn")?, order);
        let mut o = Outcome::default();
        o.line("value", parts.total());
        o.line("horizontal", parts.horizontal);
        o.line("vertical", parts.vertical);
        Ok(o)
    }

    fn green_check(&self, a: GreenArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let grid = self.grid(&a.grid)?;
        let case = a.case.or_else(|| self.cfg.case.clone());
        let h = a.h.or_else(|| self.cfg.h.clone());
        let k = a.k.or_else(|| self.cfg.k.clone());
        let eta = a.eta.or_else(|| self.cfg.eta.clone());
        let (hf, kf, ef) = match (case, h.is_some() || k.is_some() || eta.is_some()) {
            (Some(_), true) => return invalid("--case excludes --h, --k and --eta"),
            (Some(name), false) => self.catalog.green_case(&name)?.fields(&grid)?,
            (None, _) => {
                let he = self.expr(h, &None, "h")?;
                let ke = self.expr(k, &None, "k")?;
                let ee = self.expr(eta, &None, "eta")?;
                (
                    self.sample(&he, &grid, "h")?,
                    self.sample(&ke, &grid, "k")?,
                    self.sample(&ee, &grid, "eta")?,
                )
            }
        };
        let r = green_residual(&hf, &kf, &ef, order)?;
        let mut o = Outcome::default();
        o.line("residual", r.residual);
        o.line("lhs", r.lhs);
        o.line("rhs_volume", r.rhs_volume);
        o.line("rhs_boundary", r.rhs_boundary);
        Ok(o)
    }

    fn el_residual(&self, a: ResidualArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let (p, _) = self.problem(&a.problem, &a.grid, order)?;
        let u = self.state(&a.state, &p.grid)?;
        let m = self.multipliers(&a.multipliers)?;
        let out = a.out.or_else(|| self.cfg.out.clone());
        check_outputs(&[out.as_ref()])?;
        let r = el_residual(&p, &u, m)?;
        let g = p.grid;
        let interior = (1..g.nx() - 1)
            .flat_map(|i| (1..g.ny() - 1).map(move |j| (i, j)))
            .fold(0.0_f64, |acc, (i, j)| acc.max(r.get(i, j).abs()));
        let mut o = Outcome::default();
        o.line("max_abs", r.max_abs());
        o.line("interior_max_abs", interior);
        if let Some(path) = out {
            let text = render_field(&path, &r);
            o.files.push((path, text));
        }
        Ok(o)
    }

    fn natbc_check(&self, a: ResidualArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let (p, _) = self.problem(&a.problem, &a.grid, order)?;
        let u = self.state(&a.state, &p.grid)?;
        let m = self.multipliers(&a.multipliers)?;
        let out = a.out.or_else(|| self.cfg.out.clone());
        check_outputs(&[out.as_ref()])?;
        let r = natural_bc_residuals(&p, &u, m)?;
        let edge_max = |e: &[f64]| e.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let mut o = Outcome::default();
        o.line("at_x_a", edge_max(&r.at_x_a));
        o.line("at_x_b", edge_max(&r.at_x_b));
        o.line("at_y_c", edge_max(&r.at_y_c));
        o.line("at_y_d", edge_max(&r.at_y_d));
        o.line("max_abs", r.max_abs());
        if let Some(path) = out {
            let text = serde_json::to_string(&r).map_err(|e| CliError::Numerical(e.to_string()))?;
            o.files.push((path, text));
        }
        Ok(o)
    }

    fn gateaux_check(&self, a: GateauxArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let (p, _) = self.problem(&a.problem, &a.grid, order)?;
        let u = self.state(&a.state, &p.grid)?;
        let eta_expr = self.expr(a.eta, &self.cfg.eta, "eta")?;
        let eta = self.sample(&eta_expr, &p.grid, "eta")?;
        let (which, m) = match a.functional.or_else(|| self.cfg.functional.clone()).as_deref() {
            None | Some("J") => (Functional::Cost, MultiplierPair::cost_only()),
            Some("G") => (Functional::Constraint, MultiplierPair::constraint_only()),
            Some(other) => return invalid(format!("--functional must be J or G, got '{other}'")),
        };
        let eps = a.eps.or(self.cfg.eps).unwrap_or_else(|| default_gateaux_step(&u));
        let gd = gateaux_derivative(&p, which, &u, &eta, eps)?;
        let pairing = weighted_pairing(&p, &el_residual(&p, &u, m)?, &eta)?;
        let mut o = Outcome::default();
        o.line("gateaux", gd);
        o.line("pairing", pairing);
        o.line("difference", gd - pairing);
        o.line("eps", eps);
        Ok(o)
    }

    fn convexity(&self, a: ConvexityArgs) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let (p, _) = self.problem(&a.problem, &a.grid, order)?;
        let m = self.multipliers(&a.multipliers)?;
        let samples = a.samples.or(self.cfg.samples).unwrap_or(1000);
        if samples == 0 {
            return invalid("--samples must be at least 1");
        }
        let radius = a.radius.or(self.cfg.radius).unwrap_or(DEFAULT_PROBE_RADIUS);
        if !(radius > 0.0 && radius.is_finite()) {
            return invalid("--radius must be positive");
        }
        let seed = a.seed.or(self.cfg.seed).unwrap_or(0);
        let mut o = Outcome::default();
        match convexity_probe_in_box(&p, m, samples, seed, radius) {
            ConvexityVerdict::ConvexOnSamples => o.stdout.push_str("verdict=ConvexOnSamples\n"),
            ConvexityVerdict::NotConvex(w) => {
                o.stdout.push_str("verdict=NotConvex\n");
                o.line("x", w.point.x);
                o.line("y", w.point.y);
                o.line("u", w.point.u);
                o.line("v", w.point.v);
                o.line("w", w.point.w);
                o.line("min_eigenvalue", w.min_eigenvalue);
            }
        }
        Ok(o)
    }

    fn solve(&self, a: SolveArgs, boundary: BoundaryKind) -> Result<Outcome> {
        let order = self.order(a.alpha)?;
        let (p, kind) = self.problem(&a.problem, &a.grid, order)?;
        let kind = kind.unwrap_or(if p.psi.is_some() { BoundaryKind::Fixed } else { BoundaryKind::Free });
        match (boundary, kind) {
            (BoundaryKind::Fixed, BoundaryKind::Free) => {
                return invalid("problem has a free boundary; use solve-free")
            }
            (BoundaryKind::Free, BoundaryKind::Fixed) => return invalid("problem prescribes psi; use solve"),
            _ => {}
        }
        let c = &self.cfg;
        let d = SolveOptions::default();
        let init = a.init.or_else(|| c.init.clone()).map(|path| read_field(&path)).transpose()?;
        let opts = SolveOptions {
            max_outer_iters: a.max_outer_iters.or(c.max_outer_iters).unwrap_or(d.max_outer_iters),
            max_inner_iters: a.max_inner_iters.or(c.max_inner_iters).unwrap_or(d.max_inner_iters),
            grad_tol: a.grad_tol.or(c.grad_tol).unwrap_or(d.grad_tol),
            constraint_tol: a.constraint_tol.or(c.constraint_tol).unwrap_or(d.constraint_tol),
            penalty_init: a.penalty_init.or(c.penalty_init).unwrap_or(d.penalty_init),
            penalty_growth: a.penalty_growth.or(c.penalty_growth).unwrap_or(d.penalty_growth),
            penalty_max: a.penalty_max.or(c.penalty_max).unwrap_or(d.penalty_max),
            seed: a.seed.or(c.seed).unwrap_or(d.seed),
            initial_guess: init,
        };
        opts.validate()?;
        if let Some(u0) = &opts.initial_guess {
            p.ensure_on_grid(u0)?;
        }
        let out = a.out.or_else(|| c.out.clone());
        let report_path = a.report.or_else(|| c.report.clone());
        check_outputs(&[out.as_ref(), report_path.as_ref()])?;

        let report = match boundary {
            BoundaryKind::Fixed => solve_fixed_boundary(&p, &opts)?,
            BoundaryKind::Free => solve_free_boundary(&p, &opts)?,
        };
        let field_name = out.as_ref().map(|p| p.to_string_lossy().into_owned());
        let json = report.to_json(field_name.as_deref());
        let mut o = Outcome::default();
        if let Some(path) = out {
            let text = render_field(&path, &report.u);
            o.files.push((path, text));
        }
        if let Some(path) = report_path {
            o.files.push((path, json.clone()));
        }
        o.stdout = json + "\n";
        if matches!(report.status, SolveStatus::MaxIters | SolveStatus::Infeasible) {
            o.failure = Some(format!("solver stopped with status {}", report.status.as_str()));
        }
        Ok(o)
    }

    fn list_catalog(&self) -> Outcome {
        let mut o = Outcome::default();
        let mut section = |title: &str, rows: Vec<(&str, &str)>| {
            let _ = writeln!(o.stdout, "{title}:");
            for (name, desc) in rows {
                let _ = writeln!(o.stdout, "  {name:<30}{desc}");
            }
        };
        section("problems", self.catalog.problem_names().collect());
        section("integrands", self.catalog.integrand_names().collect());
        section("green cases", self.catalog.green_case_names().collect());
        o
    }
}
