//! Command execution. Samples run on a rayon pool; results are collected in
//! input order, so the output does not depend on the thread count.

use anyhow::{bail, Context as _};
use rayon::prelude::*;

use cfs_core::elastic::{self, WavyPerturbation};
use cfs_core::lifshitz::{self, QuadratureSpec};
use cfs_core::roots::{self, RootSearch};
use cfs_core::smalld;
use cfs_core::stability::{self, CriticalThickness, Method, Verdict};
use cfs_core::{Error, LayerStack};

use crate::config::{Axis, Command, DiagramMode, Material, RunConfig, Spacing, Sweep};
use crate::table::{Cell, Table};
use crate::validate::{has_errors, validate};

/// Samples used by thickness-scan when no `[sweep]` table is given.
pub const DEFAULT_SCAN_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    /// One message per sample that could not be computed.
    pub failures: Vec<String>,
}

/// Layer models and thickness for one sample.
#[derive(Debug, Clone, Copy)]
struct Setup {
    film: Material,
    substrate: Material,
    ambient: Material,
    thickness: Option<f64>,
}

impl Setup {
    fn from_config(config: &RunConfig) -> Self {
        Setup {
            film: config.film,
            substrate: config.substrate,
            ambient: config.ambient,
            thickness: config.geometry.thickness,
        }
    }

    fn with(mut self, axis: Axis, v: f64) -> Self {
        // Axis applicability is checked by `validate`.
        let set_p = |m: Material| m.with_omega_p(v).unwrap_or(m);
        let set_tau = |m: Material| m.with_omega_tau(v).unwrap_or(m);
        match axis {
            Axis::FilmOmegaP => self.film = set_p(self.film),
            Axis::FilmOmegaTau => self.film = set_tau(self.film),
            Axis::SubstrateOmegaP => self.substrate = set_p(self.substrate),
            Axis::SubstrateOmegaTau => self.substrate = set_tau(self.substrate),
            Axis::OmegaTau => {
                self.film = set_tau(self.film);
                self.substrate = set_tau(self.substrate);
            }
            Axis::Thickness => self.thickness = Some(v),
        }
        self
    }

    fn stack_at(&self, d: f64) -> Result<LayerStack, Error> {
        LayerStack::new(self.substrate.model()?, self.ambient.model()?, self.film.model()?, d)
    }

    fn stack(&self) -> Result<LayerStack, Error> {
        self.stack_at(self.thickness.ok_or(Error::Usage("thickness is not set"))?)
    }
}

/// Sample points of a sweep, endpoints included.
pub fn sample_points(range: [f64; 2], samples: usize, spacing: Spacing) -> Vec<f64> {
    let [lo, hi] = range;
    match spacing {
        Spacing::Log => roots::log_grid(lo, hi, samples).expect("range checked by validate"),
        Spacing::Linear => (0..samples)
            .map(|i| {
                if i + 1 == samples {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (samples - 1) as f64
                }
            })
            .collect(),
    }
}

fn sweep_points(s: &Sweep) -> Vec<f64> {
    sample_points(s.range, s.samples, s.spacing)
}

struct Run<'a> {
    config: &'a RunConfig,
    method: Method,
    quad: QuadratureSpec,
    pool: rayon::ThreadPool,
}

impl Run<'_> {
    /// Maps `f` over `items` on the pool, keeping input order.
    fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

/// Validates and runs `config` with `threads` workers (`None` or 0: rayon's
/// default).
pub fn execute(config: &RunConfig, threads: Option<usize>) -> anyhow::Result<Outcome> {
    let diagnostics = validate(config, None);
    if has_errors(&diagnostics) {
        let text: Vec<String> = diagnostics.iter().map(ToString::to_string).collect();
        bail!("invalid configuration:\n{}", text.join("\n"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .context("building the worker pool")?;
    let ctx = Run {
        config,
        method: config.method.into(),
        quad: config.quadrature.spec(),
        pool,
    };
    let mut failures = Vec::new();
    let table = match config.command {
        Command::ForceSweep => force_sweep(&ctx, &mut failures),
        Command::ThicknessScan => thickness_scan(&ctx, &mut failures),
        Command::StabilityCheck => stability_check(&ctx, &mut failures),
        Command::CriticalThickness => critical_thickness(&ctx, &mut failures),
        Command::StabilityDiagram => match config.diagram.expect("checked by validate").mode {
            DiagramMode::Boundary => diagram_boundary(&ctx, &mut failures),
            DiagramMode::Grid => diagram_grid(&ctx, &mut failures),
        },
        Command::ElasticReport => elastic_report(&ctx, &mut failures),
    };
    for f in &failures {
        log::warn!("{f}");
    }
    Ok(Outcome { table, failures })
}

/// Pressure and its error estimate; small-d has no error estimate.
fn pressure(ctx: &Run, stack: &LayerStack) -> Result<(f64, Option<f64>), Error> {
    match ctx.method {
        Method::FullRetarded => lifshitz::pressure(stack, &ctx.quad).map(|e| (e.value, Some(e.error))),
        Method::SmallD => smalld::small_d_pressure(stack).map(|r| (r.pressure, None)),
    }
}

fn describe(axis: Option<(Axis, f64)>, e: &Error) -> String {
    match axis {
        Some((a, v)) => format!("{} = {v:e}: {e}", a.column()),
        None => e.to_string(),
    }
}

fn force_sweep(ctx: &Run, failures: &mut Vec<String>) -> Table {
    let sweep = ctx.config.sweep.expect("checked by validate");
    let base = Setup::from_config(ctx.config);
    let points = sweep_points(&sweep);
    let results = ctx.map(&points, |&v| {
        let setup = base.with(sweep.axis, v);
        let stack = setup.stack()?;
        let (p, err) = pressure(ctx, &stack)?;
        Ok((p, err, smalld::small_d_valid(&stack.film, stack.thickness)))
    });
    let mut table = Table::new([
        sweep.axis.column(),
        "pressure_N_m2",
        "pressure_error_N_m2",
        "small_d_valid",
        "status",
    ]);
    for (&v, r) in points.iter().zip(results) {
        match r {
            Ok((p, err, valid)) => table.push(vec![
                Cell::Num(v),
                Cell::Num(p),
                Cell::opt(err),
                Cell::Bool(valid),
                Cell::text("ok"),
            ]),
            Err(e) => {
                failures.push(describe(Some((sweep.axis, v)), &e));
                table.push(vec![Cell::Num(v), Cell::Na, Cell::Na, Cell::Na, Cell::text("failed")]);
            }
        }
    }
    table
}

/// Least-squares slope of `ln|y|` against `ln x` over the usable points.
pub fn log_log_slope(x: &[f64], y: &[Option<f64>]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter_map(|(&x, y)| match y {
            Some(y) if *y != 0.0 && x > 0.0 => Some((x.ln(), y.abs().ln())),
            _ => None,
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

fn thickness_scan(ctx: &Run, failures: &mut Vec<String>) -> Table {
    let sweep = ctx.config.sweep.unwrap_or_else(|| Sweep {
        axis: Axis::Thickness,
        range: ctx.config.geometry.thickness_range.expect("checked by validate"),
        spacing: Spacing::Log,
        samples: DEFAULT_SCAN_SAMPLES,
    });
    let base = Setup::from_config(ctx.config);
    let points = sweep_points(&sweep);
    let results = ctx.map(&points, |&d| pressure(ctx, &base.stack_at(d)?));
    let mut values = Vec::with_capacity(points.len());
    for (&d, r) in points.iter().zip(&results) {
        match r {
            Ok((p, _)) => values.push(Some(*p)),
            Err(e) => {
                failures.push(describe(Some((Axis::Thickness, d)), e));
                values.push(None);
            }
        }
    }
    let fitted = log_log_slope(&points, &values);
    let mut table = Table::new([
        "thickness_m",
        "pressure_N_m2",
        "pressure_error_N_m2",
        "local_slope",
        "fitted_slope",
        "status",
    ]);
    for (i, (&d, r)) in points.iter().zip(&results).enumerate() {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(points.len() - 1);
        let local = log_log_slope(&[points[lo], points[hi]], &[values[lo], values[hi]]);
        match r {
            Ok((p, err)) => table.push(vec![
                Cell::Num(d),
                Cell::Num(*p),
                Cell::opt(*err),
                Cell::opt(local),
                Cell::opt(fitted),
                Cell::text("ok"),
            ]),
            Err(_) => table.push(vec![
                Cell::Num(d),
                Cell::Na,
                Cell::Na,
                Cell::Na,
                Cell::opt(fitted),
                Cell::text("failed"),
            ]),
        }
    }
    table
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "stable",
        Verdict::BelowThreshold => "below-threshold",
        Verdict::Attractive => "attractive",
    }
}

fn outcome_cells(ct: &Result<CriticalThickness, Error>) -> [Cell; 4] {
    match ct {
        Ok(CriticalThickness::Root { d_c, bracket }) => [
            Cell::Num(*d_c),
            Cell::Num(bracket.0),
            Cell::Num(bracket.1),
            Cell::text("root"),
        ],
        Ok(CriticalThickness::StableThroughout) => [Cell::Na, Cell::Na, Cell::Na, Cell::text("stable-throughout")],
        Ok(CriticalThickness::UnstableThroughout) => [Cell::Na, Cell::Na, Cell::Na, Cell::text("unstable-throughout")],
        Err(_) => [Cell::Na, Cell::Na, Cell::Na, Cell::text("failed")],
    }
}

fn stability_check(ctx: &Run, failures: &mut Vec<String>) -> Table {
    let config = ctx.config;
    let params = config.elastic.params();
    let dim = config.elastic.dimensionality();
    let setup = Setup::from_config(config);
    let mut table = Table::new([
        "thickness_m",
        "threshold_N_m3",
        "second_derivative_N_m3",
        "second_derivative_error_N_m3",
        "stable",
        "verdict",
        "critical_thickness_m",
        "bracket_lo_m",
        "bracket_hi_m",
        "critical_outcome",
    ]);
    let d = setup.thickness.expect("checked by validate");
    let check = setup
        .stack()
        .and_then(|s| stability::is_stable(&s, &params, dim, ctx.method, &ctx.quad).map(|r| (s, r)));
    let (stack, result) = match check {
        Ok(v) => v,
        Err(e) => {
            failures.push(describe(None, &e));
            let mut row = vec![Cell::Num(d), Cell::Num(stability::stability_threshold(&params, dim))];
            row.extend([
                Cell::Na,
                Cell::Na,
                Cell::Na,
                Cell::text("failed"),
                Cell::Na,
                Cell::Na,
                Cell::Na,
                Cell::text("failed"),
            ]);
            table.push(row);
            return table;
        }
    };
    let critical = match config.geometry.thickness_range {
        Some([lo, hi]) => {
            let ct = stability::critical_thickness(
                &stack,
                &params,
                dim,
                ctx.method,
                &ctx.quad,
                (lo, hi),
                &RootSearch::default(),
            );
            if let Err(e) = &ct {
                failures.push(format!("critical thickness: {e}"));
            }
            outcome_cells(&ct)
        }
        None => [Cell::Na, Cell::Na, Cell::Na, Cell::text("not-searched")],
    };
    let mut row = vec![
        Cell::Num(d),
        Cell::Num(result.threshold),
        Cell::Num(result.second_derivative.value),
        Cell::Num(result.second_derivative.error),
        Cell::Bool(result.stable),
        Cell::text(verdict_name(result.verdict)),
    ];
    row.extend(critical);
    table.push(row);
    table
}

fn critical_thickness(ctx: &Run, failures: &mut Vec<String>) -> Table {
    let config = ctx.config;
    let params = config.elastic.params();
    let dim = config.elastic.dimensionality();
    let [lo, hi] = config.geometry.thickness_range.expect("checked by validate");
    let base = Setup::from_config(config);
    let solve = |setup: Setup| -> Result<CriticalThickness, Error> {
        let template = setup.stack_at(lo)?;
        stability::critical_thickness(
            &template,
            &params,
            dim,
            ctx.method,
            &ctx.quad,
            (lo, hi),
            &RootSearch::default(),
        )
    };
    let mut columns = vec!["critical_thickness_m", "bracket_lo_m", "bracket_hi_m", "outcome"];
    match config.sweep {
        None => {
            let mut table = Table::new(columns);
            let ct = solve(base);
            if let Err(e) = &ct {
                failures.push(describe(None, e));
            }
            table.push(outcome_cells(&ct).to_vec());
            table
        }
        Some(sweep) => {
            columns.insert(0, sweep.axis.column());
            let mut table = Table::new(columns);
            let points = sweep_points(&sweep);
            let results = ctx.map(&points, |&v| solve(base.with(sweep.axis, v)));
            for (&v, ct) in points.iter().zip(&results) {
                if let Err(e) = ct {
                    failures.push(describe(Some((sweep.axis, v)), e));
                }
                let mut row = vec![Cell::Num(v)];
                row.extend(outcome_cells(ct));
                table.push(row);
            }
            table
        }
    }
}

fn diagram_boundary(ctx: &Run, failures: &mut Vec<String>) -> Table {
    let config = ctx.config;
    let diagram = config.diagram.expect("checked by validate");
    let params = config.elastic.params();
    let dim = config.elastic.dimensionality();
    let omega3 = sample_points(diagram.omega3_range, diagram.omega3_samples, Spacing::Log);
    let search = RootSearch {
        grid_points: diagram.omega1_samples,
        ..RootSearch::default()
    };
    let setup = Setup::from_config(config);
    let results = ctx.map(&omega3, |&w3| {
        let template = setup.stack()?;
        stability::boundary_at(
            &template,
            w3,
            (diagram.omega1_range[0], diagram.omega1_range[1]),
            &params,
            dim,
            ctx.method,
            &ctx.quad,
            &search,
        )
    });
    let mut table = Table::new(["omega3_rad_s", "omega1_rad_s", "branch", "status"]);
    for (&w3, r) in omega3.iter().zip(results) {
        match r {
            Ok(points) if points.is_empty() => {
                table.push(vec![Cell::Num(w3), Cell::Na, Cell::Na, Cell::text("absent")])
            }
            Ok(points) => {
                for b in points {
                    let branch = match b.branch {
                        stability::Branch::Lower => "lower",
                        stability::Branch::Upper => "upper",
                    };
                    table.push(vec![
                        Cell::Num(w3),
                        Cell::Num(b.omega1),
                        Cell::text(branch),
                        Cell::text("ok"),
                    ]);
                }
            }
            Err(e) => {
                failures.push(format!("omega3_rad_s = {w3:e}: {e}"));
                table.push(vec![Cell::Num(w3), Cell::Na, Cell::Na, Cell::text("failed")]);
            }
        }
    }
    table
}

fn diagram_grid(ctx: &Run, failures: &mut Vec<String>) -> Table {
    let config = ctx.config;
    let diagram = config.diagram.expect("checked by validate");
    let params = config.elastic.params();
    let dim = config.elastic.dimensionality();
    let threshold = stability::stability_threshold(&params, dim);
    let quad = stability::comparison_quadrature(&ctx.quad, threshold);
    let omega3 = sample_points(diagram.omega3_range, diagram.omega3_samples, Spacing::Log);
    let omega1 = sample_points(diagram.omega1_range, diagram.omega1_samples, Spacing::Log);
    let cells: Vec<(f64, f64)> = omega3
        .iter()
        .flat_map(|&a| omega1.iter().map(move |&b| (a, b)))
        .collect();
    let setup = Setup::from_config(config);
    let results = ctx.map(&cells, |&(w3, w1)| {
        let s = setup
            .with(Axis::FilmOmegaP, w3)
            .with(Axis::SubstrateOmegaP, w1)
            .stack()?;
        stability::second_derivative(&s, ctx.method, &quad)
    });
    let mut table = Table::new([
        "omega3_rad_s",
        "omega1_rad_s",
        "second_derivative_N_m3",
        "threshold_N_m3",
        "stable",
        "status",
    ]);
    for (&(w3, w1), r) in cells.iter().zip(results) {
        match r {
            Ok(e2) => table.push(vec![
                Cell::Num(w3),
                Cell::Num(w1),
                Cell::Num(e2.value),
                Cell::Num(threshold),
                Cell::Bool(e2.value > threshold),
                Cell::text("ok"),
            ]),
            Err(e) => {
                failures.push(format!("omega3_rad_s = {w3:e}, omega1_rad_s = {w1:e}: {e}"));
                table.push(vec![
                    Cell::Num(w3),
                    Cell::Num(w1),
                    Cell::Na,
                    Cell::Num(threshold),
                    Cell::Na,
                    Cell::text("failed"),
                ]);
            }
        }
    }
    table
}

fn elastic_report(ctx: &Run, failures: &mut Vec<String>) -> Table {
    let config = ctx.config;
    let params = config.elastic.params();
    let dim = config.elastic.dimensionality();
    let mut table = Table::new(["quantity", "value", "unit"]);
    let mut row = |name: &str, v: Option<f64>, unit: &str| {
        table.push(vec![Cell::text(name), Cell::opt(v), Cell::text(unit)]);
    };
    let biaxial = elastic::biaxial_strains(params.mismatch_stress, &params);
    row("threshold", Some(stability::stability_threshold(&params, dim)), "N/m3");
    row(
        "critical_wavelength",
        Some(elastic::critical_wavelength(&params, dim)),
        "m",
    );
    row("biaxial_eps_parallel", Some(biaxial.eps_parallel), "1");
    row("biaxial_eps_perp", Some(biaxial.eps_perp), "1");
    row(
        "hamaker_critical_thickness",
        elastic::hamaker_critical_thickness(&params, dim).ok(),
        "m",
    );
    let Some(d) = config.geometry.thickness else {
        return table;
    };
    let surface = elastic::strains_from_surface_stress(&params, d);
    row("surface_eps_parallel", Some(surface.eps_parallel), "1");
    row("surface_eps_perp", Some(surface.eps_perp), "1");
    let stack = Setup::from_config(config).stack();
    let vacuum = stack.and_then(|s| {
        let e2 = stability::second_derivative(&s, ctx.method, &ctx.quad)?.value;
        Ok((pressure(ctx, &s)?.0, e2))
    });
    match vacuum {
        Ok((force, e2)) => {
            let with_vacuum = elastic::strains_with_vacuum(&params, d, force);
            row("vacuum_pressure", Some(force), "N/m2");
            row("vacuum_eps_parallel", Some(with_vacuum.eps_parallel), "1");
            row("vacuum_eps_perp", Some(with_vacuum.eps_perp), "1");
            row("second_derivative", Some(e2), "N/m3");
            let optimal = elastic::optimal_wavelength(&params, e2).ok();
            row("optimal_wavelength", optimal, "m");
            let min_energy = optimal.and_then(|l| {
                let pert = WavyPerturbation::new(1e-10, l, d).ok()?;
                Some(elastic::delta_u_total(&params, e2, &pert, dim))
            });
            row("min_delta_u_per_0.1nm_amplitude", min_energy, "J/m");
        }
        Err(e) => {
            failures.push(format!("vacuum terms: {e}"));
            for (name, unit) in [
                ("vacuum_pressure", "N/m2"),
                ("vacuum_eps_parallel", "1"),
                ("vacuum_eps_perp", "1"),
                ("second_derivative", "N/m3"),
                ("optimal_wavelength", "m"),
                ("min_delta_u_per_0.1nm_amplitude", "J/m"),
            ] {
                row(name, None, unit);
            }
        }
    }
    table
}
