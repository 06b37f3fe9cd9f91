//! Named built-ins selectable at runtime: integrands, whole problem presets
//! and Green-formula test cases.
//!
//! Each family sits behind a trait object in a [`Catalog`]; `Catalog::builtin()`
//! registers the stock entries and callers may register more.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{FracError, Result};
use crate::fields::{Axis, Field2D, FractionalOrder, Grid2D};
use crate::fracops::{partial_frac, volume_integral};
use crate::variational::{
    eval_constraint, zero_integrand, BoundaryTrace, Integrand, IsoperimetricProblem, LagrangianSpec, Point,
};

/// Data an integrand factory may draw on.
#[derive(Debug, Clone, Copy)]
pub struct IntegrandContext<'a> {
    pub grid: &'a Grid2D,
    pub order: FractionalOrder,
    /// Target field for manufactured integrands.
    pub target: Option<&'a Field2D>,
}

pub trait IntegrandFactory: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self, ctx: &IntegrandContext<'_>) -> Result<LagrangianSpec>;
}

/// Whether a preset prescribes ψ on ∂R.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Fixed,
    Free,
}

pub trait ProblemPreset: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn boundary(&self) -> BoundaryKind;
    fn build(&self, grid: &Grid2D, order: FractionalOrder) -> Result<IsoperimetricProblem>;
}

/// (h, k, η) triple for the Green-formula check.
pub trait GreenCase: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn fields(&self, grid: &Grid2D) -> Result<(Field2D, Field2D, Field2D)>;
}

// ---------------------------------------------------------------------------
// integrands

macro_rules! quadratic_integrand {
    ($ty:ident, $name:literal, value = |$p:ident| $value:expr, du = |$q:ident| $du:expr) => {
        #[derive(Debug, Default)]
        pub struct $ty;
        impl Integrand for $ty {
            fn name(&self) -> &str {
                $name
            }
            fn value(&self, $p: &Point) -> f64 {
                $value
            }
            fn du(&self, $q: &Point) -> f64 {
                $du
            }
            fn dv(&self, p: &Point) -> f64 {
                2.0 * p.v
            }
            fn dw(&self, p: &Point) -> f64 {
                2.0 * p.w
            }
        }
    };
}

quadratic_integrand!(DirichletQuadratic, "dirichlet-quadratic", value = |p| p.v * p.v + p.w * p.w, du = |_p| 0.0);
quadratic_integrand!(
    MassQuadratic,
    "mass-quadratic",
    value = |p| p.v * p.v + p.w * p.w + p.u * p.u,
    du = |p| 2.0 * p.u
);
quadratic_integrand!(
    ShiftedQuadratic,
    "shifted-quadratic",
    value = |p| p.v * p.v + p.w * p.w + (p.u - 1.0) * (p.u - 1.0),
    du = |p| 2.0 * (p.u - 1.0)
);

/// g = u.
#[derive(Debug, Default)]
pub struct LinearG;

impl Integrand for LinearG {
    fn name(&self) -> &str {
        "linear-g"
    }
    fn value(&self, p: &Point) -> f64 {
        p.u
    }
    fn du(&self, _: &Point) -> f64 {
        1.0
    }
    fn dv(&self, _: &Point) -> f64 {
        0.0
    }
    fn dw(&self, _: &Point) -> f64 {
        0.0
    }
}

/// f = (v − p₀)² + (w − q₀)² with p₀, q₀ the discrete fractional partials of a
/// target field. Off-node positions read the nearest node.
#[derive(Debug)]
pub struct Manufactured {
    p0: Field2D,
    q0: Field2D,
}

impl Manufactured {
    pub fn new(target: &Field2D, order: FractionalOrder) -> Result<Self> {
        Ok(Self {
            p0: partial_frac(target, Axis::X, order)?,
            q0: partial_frac(target, Axis::Y, order)?,
        })
    }

    fn targets(&self, p: &Point) -> (f64, f64) {
        let (i, j) = self.p0.grid().nearest(p.x, p.y);
        (self.p0.get(i, j), self.q0.get(i, j))
    }
}

impl Integrand for Manufactured {
    fn name(&self) -> &str {
        "manufactured"
    }
    fn value(&self, p: &Point) -> f64 {
        let (p0, q0) = self.targets(p);
        (p.v - p0).powi(2) + (p.w - q0).powi(2)
    }
    fn du(&self, _: &Point) -> f64 {
        0.0
    }
    fn dv(&self, p: &Point) -> f64 {
        2.0 * (p.v - self.targets(p).0)
    }
    fn dw(&self, p: &Point) -> f64 {
        2.0 * (p.w - self.targets(p).1)
    }
}

struct Stateless<F: Fn() -> LagrangianSpec + Send + Sync> {
    name: &'static str,
    description: &'static str,
    make: F,
}

impl<F: Fn() -> LagrangianSpec + Send + Sync> IntegrandFactory for Stateless<F> {
    fn name(&self) -> &'static str {
        self.name
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn build(&self, _: &IntegrandContext<'_>) -> Result<LagrangianSpec> {
        Ok((self.make)())
    }
}

struct ManufacturedFactory;

impl IntegrandFactory for ManufacturedFactory {
    fn name(&self) -> &'static str {
        "manufactured"
    }
    fn description(&self) -> &'static str {
        "(v - p0)^2 + (w - q0)^2 with p0, q0 the fractional partials of a target field"
    }
    fn build(&self, ctx: &IntegrandContext<'_>) -> Result<LagrangianSpec> {
        let target = ctx
            .target
            .ok_or_else(|| FracError::InvalidProblem("`manufactured` needs a target field".into()))?;
        if target.grid() != ctx.grid {
            return Err(FracError::GridMismatch);
        }
        Ok(Arc::new(Manufactured::new(target, ctx.order)?))
    }
}

// ---------------------------------------------------------------------------
// problem presets

/// u*(x, y) = x·y, the target of the manufactured presets.
pub fn manufactured_target(grid: &Grid2D) -> Result<Field2D> {
    Field2D::sample(grid, |x, y| x * y)
}

struct ManufacturedPreset {
    constrained: bool,
}

impl ProblemPreset for ManufacturedPreset {
    fn name(&self) -> &'static str {
        if self.constrained {
            "manufactured"
        } else {
            "manufactured-unconstrained"
        }
    }
    fn description(&self) -> &'static str {
        if self.constrained {
            "fixed boundary, f manufactured from u* = xy, g = u, K = G[u*], psi = u* on the boundary"
        } else {
            "fixed boundary, f manufactured from u* = xy, no constraint, psi = u* on the boundary"
        }
    }
    fn boundary(&self) -> BoundaryKind {
        BoundaryKind::Fixed
    }
    fn build(&self, grid: &Grid2D, order: FractionalOrder) -> Result<IsoperimetricProblem> {
        let target = manufactured_target(grid)?;
        let f: LagrangianSpec = Arc::new(Manufactured::new(&target, order)?);
        let psi = BoundaryTrace::from_field(&target);
        let p = if self.constrained {
            let mut p = IsoperimetricProblem::new(*grid, order, f, Arc::new(LinearG), 0.0)?;
            p.level = eval_constraint(&p, &target)?;
            p
        } else {
            IsoperimetricProblem::unconstrained(*grid, order, f)
        };
        p.with_boundary(psi)
    }
}

struct DirichletPreset;

impl ProblemPreset for DirichletPreset {
    fn name(&self) -> &'static str {
        "dirichlet-quadratic"
    }
    fn description(&self) -> &'static str {
        "fixed boundary psi = x + y, f = v^2 + w^2, g = u, K = G[x + y] + 0.1"
    }
    fn boundary(&self) -> BoundaryKind {
        BoundaryKind::Fixed
    }
    fn build(&self, grid: &Grid2D, order: FractionalOrder) -> Result<IsoperimetricProblem> {
        let plane = Field2D::sample(grid, |x, y| x + y)?;
        let mut p = IsoperimetricProblem::new(*grid, order, Arc::new(DirichletQuadratic), Arc::new(LinearG), 0.0)?;
        p.level = eval_constraint(&p, &plane)? + 0.1;
        p.with_boundary(BoundaryTrace::from_field(&plane))
    }
}

struct InfeasiblePreset;

impl ProblemPreset for InfeasiblePreset {
    fn name(&self) -> &'static str {
        "infeasible"
    }
    fn description(&self) -> &'static str {
        "fixed boundary psi = 0, f = v^2 + w^2, g = u, K = 1e6 (unreachable on a small budget)"
    }
    fn boundary(&self) -> BoundaryKind {
        BoundaryKind::Fixed
    }
    fn build(&self, grid: &Grid2D, order: FractionalOrder) -> Result<IsoperimetricProblem> {
        let p = IsoperimetricProblem::new(*grid, order, Arc::new(DirichletQuadratic), Arc::new(LinearG), 1e6)?;
        p.with_boundary(BoundaryTrace::from_field(&Field2D::zeros(grid)))
    }
}

struct NaturalPreset {
    name: &'static str,
    description: &'static str,
    shifted: bool,
    constrained: bool,
}

impl ProblemPreset for NaturalPreset {
    fn name(&self) -> &'static str {
        self.name
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn boundary(&self) -> BoundaryKind {
        BoundaryKind::Free
    }
    fn build(&self, grid: &Grid2D, order: FractionalOrder) -> Result<IsoperimetricProblem> {
        let f: LagrangianSpec = if self.shifted {
            Arc::new(ShiftedQuadratic)
        } else {
            Arc::new(MassQuadratic)
        };
        if !self.constrained {
            return Ok(IsoperimetricProblem::unconstrained(*grid, order, f));
        }
        // K = G[1], the fractional volume of R
        let level = volume_integral(&Field2D::constant(grid, 1.0)?, order);
        IsoperimetricProblem::new(*grid, order, f, Arc::new(LinearG), level)
    }
}

// ---------------------------------------------------------------------------
// Green cases

struct FnGreenCase {
    name: &'static str,
    description: &'static str,
    h: fn(f64, f64) -> f64,
    k: fn(f64, f64) -> f64,
    eta: fn(f64, f64) -> f64,
}

impl GreenCase for FnGreenCase {
    fn name(&self) -> &'static str {
        self.name
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn fields(&self, grid: &Grid2D) -> Result<(Field2D, Field2D, Field2D)> {
        Ok((
            Field2D::sample(grid, self.h)?,
            Field2D::sample(grid, self.k)?,
            Field2D::sample(grid, self.eta)?,
        ))
    }
}

/// Bubble (x−a)(b−x)(y−c)(d−y) normalised to the unit square.
fn bubble(grid: &Grid2D) -> impl Fn(f64, f64) -> f64 {
    let (a, b, c, d) = (grid.a(), grid.b(), grid.c(), grid.d());
    move |x, y| (x - a) * (b - x) * (y - c) * (d - y) / ((b - a) * (b - a) * (d - c) * (d - c))
}

struct BubbleCase {
    name: &'static str,
    description: &'static str,
    h: fn(f64, f64) -> f64,
    k: fn(f64, f64) -> f64,
}

impl GreenCase for BubbleCase {
    fn name(&self) -> &'static str {
        self.name
    }
    fn description(&self) -> &'static str {
        self.description
    }
    fn fields(&self, grid: &Grid2D) -> Result<(Field2D, Field2D, Field2D)> {
        Ok((
            Field2D::sample(grid, self.h)?,
            Field2D::sample(grid, self.k)?,
            Field2D::sample(grid, bubble(grid))?,
        ))
    }
}

// ---------------------------------------------------------------------------

/// Name-keyed registries of the three strategy families.
pub struct Catalog {
    integrands: BTreeMap<&'static str, Box<dyn IntegrandFactory>>,
    problems: BTreeMap<&'static str, Box<dyn ProblemPreset>>,
    green_cases: BTreeMap<&'static str, Box<dyn GreenCase>>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Catalog {
    pub fn empty() -> Self {
        Self {
            integrands: BTreeMap::new(),
            problems: BTreeMap::new(),
            green_cases: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut c = Self::empty();
        c.register_integrand(Box::new(Stateless {
            name: "dirichlet-quadratic",
            description: "v^2 + w^2",
            make: || Arc::new(DirichletQuadratic) as LagrangianSpec,
        }));
        c.register_integrand(Box::new(Stateless {
            name: "mass-quadratic",
            description: "v^2 + w^2 + u^2",
            make: || Arc::new(MassQuadratic) as LagrangianSpec,
        }));
        c.register_integrand(Box::new(Stateless {
            name: "shifted-quadratic",
            description: "v^2 + w^2 + (u - 1)^2",
            make: || Arc::new(ShiftedQuadratic) as LagrangianSpec,
        }));
        c.register_integrand(Box::new(Stateless {
            name: "linear-g",
            description: "u",
            make: || Arc::new(LinearG) as LagrangianSpec,
        }));
        c.register_integrand(Box::new(Stateless {
            name: "zero",
            description: "0",
            make: zero_integrand,
        }));
        c.register_integrand(Box::new(ManufacturedFactory));

        c.register_problem(Box::new(ManufacturedPreset { constrained: true }));
        c.register_problem(Box::new(ManufacturedPreset { constrained: false }));
        c.register_problem(Box::new(DirichletPreset));
        c.register_problem(Box::new(InfeasiblePreset));
        c.register_problem(Box::new(NaturalPreset {
            name: "natural-quadratic",
            description: "free boundary, f = v^2 + w^2 + u^2, g = u, K = G[1]",
            shifted: false,
            constrained: true,
        }));
        c.register_problem(Box::new(NaturalPreset {
            name: "natural-shifted",
            description: "free boundary, f = v^2 + w^2 + (u - 1)^2, no constraint",
            shifted: true,
            constrained: false,
        }));
        c.register_problem(Box::new(NaturalPreset {
            name: "natural-shifted-constrained",
            description: "free boundary, f = v^2 + w^2 + (u - 1)^2, g = u, K = G[1]",
            shifted: true,
            constrained: true,
        }));

        c.register_green_case(Box::new(FnGreenCase {
            name: "poly",
            description: "h = x, k = y^2, eta = x(1-x)y(1-y)",
            h: |x, _| x,
            k: |_, y| y * y,
            eta: |x, y| x * (1.0 - x) * y * (1.0 - y),
        }));
        c.register_green_case(Box::new(FnGreenCase {
            name: "constant",
            description: "h = k = eta = 1",
            h: |_, _| 1.0,
            k: |_, _| 1.0,
            eta: |_, _| 1.0,
        }));
        c.register_green_case(Box::new(BubbleCase {
            name: "bubble",
            description: "h = k = 1, eta = boundary-vanishing bubble",
            h: |_, _| 1.0,
            k: |_, _| 1.0,
        }));
        c
    }

    pub fn register_integrand(&mut self, f: Box<dyn IntegrandFactory>) {
        self.integrands.insert(f.name(), f);
    }

    pub fn register_problem(&mut self, p: Box<dyn ProblemPreset>) {
        self.problems.insert(p.name(), p);
    }

    pub fn register_green_case(&mut self, g: Box<dyn GreenCase>) {
        self.green_cases.insert(g.name(), g);
    }

    pub fn integrand(&self, name: &str, ctx: &IntegrandContext<'_>) -> Result<LagrangianSpec> {
        self.integrands
            .get(name)
            .ok_or_else(|| FracError::UnknownEntry(name.to_string()))?
            .build(ctx)
    }

    pub fn problem_preset(&self, name: &str) -> Result<&dyn ProblemPreset> {
        self.problems
            .get(name)
            .map(|p| p.as_ref())
            .ok_or_else(|| FracError::UnknownEntry(name.to_string()))
    }

    pub fn problem(&self, name: &str, grid: &Grid2D, order: FractionalOrder) -> Result<IsoperimetricProblem> {
        self.problem_preset(name)?.build(grid, order)
    }

    pub fn green_case(&self, name: &str) -> Result<&dyn GreenCase> {
        self.green_cases
            .get(name)
            .map(|g| g.as_ref())
            .ok_or_else(|| FracError::UnknownEntry(name.to_string()))
    }

    pub fn integrand_names(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.integrands.values().map(|f| (f.name(), f.description()))
    }

    pub fn problem_names(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.problems.values().map(|p| (p.name(), p.description()))
    }

    pub fn green_case_names(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.green_cases.values().map(|g| (g.name(), g.description()))
    }
}
