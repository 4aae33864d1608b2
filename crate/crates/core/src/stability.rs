//! Flat-film stability: the vacuum energy curvature `E''(d)` against the
//! elastic threshold `σ⁴/(Y²γ)`.
//!
//! A flat film is stable against every sinusoidal perturbation when
//! `E'' > σ⁴/(Y²γ)`. The critical thickness is the largest `d` where the two
//! meet with the film stable just below it.

use alloc::vec::Vec;

use crate::dielectric::{DielectricModel, LayerStack};
use crate::elastic::{Dimensionality, FilmElasticParams};
use crate::error::{Error, Result};
use crate::lifshitz::{self, Estimate, QuadratureSpec};
use crate::roots::{self, Bracket, RootSearch};
use crate::smalld;

/// How `E''` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Full retarded Lifshitz integral.
    #[default]
    FullRetarded,
    /// Non-retarded (van der Waals) limit.
    SmallD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    /// Repulsive vacuum term, but too weak to beat the elastic threshold.
    BelowThreshold,
    /// `E'' ≤ 0`: the vacuum term itself destabilizes the film.
    Attractive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityResult {
    /// `σ⁴/(Y²γ)`, N/m³.
    pub threshold: f64,
    /// `E''` at the stack thickness, N/m³.
    pub second_derivative: Estimate,
    pub stable: bool,
    pub verdict: Verdict,
    pub critical_thickness: Option<f64>,
    /// Final bisection bracket around `critical_thickness`.
    pub bracket: Option<(f64, f64)>,
    pub method: Method,
}

/// Outcome of a critical-thickness search over a thickness range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalThickness {
    Root {
        d_c: f64,
        bracket: (f64, f64),
    },
    /// `E'' ≥ threshold` at every grid thickness: `d_c` lies above the range.
    StableThroughout,
    /// `E'' < threshold` at every grid thickness: no stable flat film.
    UnstableThroughout,
}

impl CriticalThickness {
    pub fn value(&self) -> Option<f64> {
        match *self {
            CriticalThickness::Root { d_c, .. } => Some(d_c),
            _ => None,
        }
    }
}

/// Which side of a diagram boundary point is stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Stable for larger substrate plasma frequency.
    Lower,
    /// Stable for smaller substrate plasma frequency.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub omega3: f64,
    pub omega1: f64,
    pub branch: Branch,
}

/// Stability boundary in the `(Ω₃, Ω₁)` plane at fixed thickness.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramCurve {
    pub thickness: f64,
    pub omega_tau_film: f64,
    pub omega_tau_substrate: f64,
    pub method: Method,
    pub points: Vec<BoundaryPoint>,
    /// Ω₃ samples with no boundary in the Ω₁ range.
    pub absent: Vec<f64>,
    /// Ω₃ samples whose solve failed.
    pub failed: Vec<(f64, Error)>,
}

/// `σ⁴/(Y²γ)` with `Y` or `Y/(1−ν²)`.
pub fn stability_threshold(params: &FilmElasticParams, dim: Dimensionality) -> f64 {
    let s2 = params.mismatch_stress * params.mismatch_stress;
    let y = params.effective_young(dim);
    s2 * s2 / (y * y * params.surface_energy)
}

/// Quadrature settings for comparisons against `threshold`: only
/// `E'' − threshold` matters, so an absolute floor tied to the threshold
/// keeps near-matched layers (where `E'' ≈ 0`) from failing.
pub fn comparison_quadrature(quad: &QuadratureSpec, threshold: f64) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: quad.abs_tol.max(1e-9 * threshold),
        ..*quad
    }
}

/// `E''` at the stack thickness.
pub fn second_derivative(stack: &LayerStack, method: Method, quad: &QuadratureSpec) -> Result<Estimate> {
    match method {
        Method::FullRetarded => lifshitz::energy_second_derivative(stack, quad),
        Method::SmallD => {
            let value = smalld::small_d_second_derivative(stack)?;
            Ok(Estimate {
                value,
                error: 1e-10 * libm::fabs(value),
            })
        }
    }
}

/// Compares `E''` with the elastic threshold at the stack thickness.
pub fn is_stable(
    stack: &LayerStack,
    params: &FilmElasticParams,
    dim: Dimensionality,
    method: Method,
    quad: &QuadratureSpec,
) -> Result<StabilityResult> {
    params.validate()?;
    let threshold = stability_threshold(params, dim);
    let e2 = second_derivative(stack, method, &comparison_quadrature(quad, threshold))?;
    let stable = e2.value > threshold;
    let verdict = if stable {
        Verdict::Stable
    } else if e2.value <= 0.0 {
        Verdict::Attractive
    } else {
        Verdict::BelowThreshold
    };
    Ok(StabilityResult {
        threshold,
        second_derivative: e2,
        stable,
        verdict,
        critical_thickness: None,
        bracket: None,
        method,
    })
}

/// [`is_stable`] plus the critical thickness searched over `d_range`.
pub fn assess(
    stack: &LayerStack,
    params: &FilmElasticParams,
    dim: Dimensionality,
    method: Method,
    quad: &QuadratureSpec,
    d_range: (f64, f64),
    search: &RootSearch,
) -> Result<StabilityResult> {
    let mut result = is_stable(stack, params, dim, method, quad)?;
    if let CriticalThickness::Root { d_c, bracket } =
        critical_thickness(stack, params, dim, method, quad, d_range, search)?
    {
        result.critical_thickness = Some(d_c);
        result.bracket = Some(bracket);
    }
    Ok(result)
}

/// Largest thickness in `d_range` at which `E''(d) = threshold` with the film
/// stable just below it. The stack thickness itself is ignored.
pub fn critical_thickness(
    template: &LayerStack,
    params: &FilmElasticParams,
    dim: Dimensionality,
    method: Method,
    quad: &QuadratureSpec,
    d_range: (f64, f64),
    search: &RootSearch,
) -> Result<CriticalThickness> {
    params.validate()?;
    let threshold = stability_threshold(params, dim);
    let quad = comparison_quadrature(quad, threshold);
    let excess = |d: f64| -> Result<f64> {
        let stack = template.with_thickness(d)?;
        Ok(second_derivative(&stack, method, &quad)?.value - threshold)
    };
    largest_stable_crossing(excess, d_range, search)
}

/// Generic form of [`critical_thickness`] for any curvature excess
/// `h(d) = E''(d) − threshold`.
pub fn largest_stable_crossing<F>(mut excess: F, d_range: (f64, f64), search: &RootSearch) -> Result<CriticalThickness>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = roots::log_grid(d_range.0, d_range.1, search.grid_points)?;
    let values = roots::sample(&grid, &mut excess)?;
    if values.iter().all(|&v| v >= 0.0) {
        return Ok(CriticalThickness::StableThroughout);
    }
    // Stable below, unstable above: the last falling crossing.
    let falling = roots::brackets(&grid, &values).into_iter().rev().find(|b| !b.rising());
    let Some(bracket) = falling else {
        return Ok(CriticalThickness::UnstableThroughout);
    };
    let b = roots::bisect(bracket, search, &mut excess)?;
    Ok(CriticalThickness::Root {
        d_c: roots::nonnegative_end(&b),
        bracket: (b.lo, b.hi),
    })
}

/// Replaces the plasma frequency of a plasma or Drude model.
pub fn with_plasma_frequency(model: &DielectricModel, omega_p: f64) -> Result<DielectricModel> {
    match *model {
        DielectricModel::Plasma { .. } => DielectricModel::plasma(omega_p),
        DielectricModel::Drude { omega_tau, .. } => DielectricModel::drude(omega_p, omega_tau),
        _ => Err(Error::Usage("only plasma and Drude models have a plasma frequency")),
    }
}

fn with_frequencies(template: &LayerStack, omega3: f64, omega1: Option<f64>) -> Result<LayerStack> {
    let film = with_plasma_frequency(&template.film, omega3)?;
    let substrate = match omega1 {
        Some(w) => with_plasma_frequency(&template.substrate, w)?,
        None => template.substrate,
    };
    LayerStack::new(substrate, template.ambient, film, template.thickness)
}

/// Boundary points at one film plasma frequency: every `Ω₁` in
/// `omega1_range` where `E''` crosses the threshold. The template fixes the
/// model kinds, relaxation frequencies and thickness.
#[allow(clippy::too_many_arguments)]
pub fn boundary_at(
    template: &LayerStack,
    omega3: f64,
    omega1_range: (f64, f64),
    params: &FilmElasticParams,
    dim: Dimensionality,
    method: Method,
    quad: &QuadratureSpec,
    search: &RootSearch,
) -> Result<Vec<BoundaryPoint>> {
    params.validate()?;
    let threshold = stability_threshold(params, dim);
    let quad = comparison_quadrature(quad, threshold);
    let mut excess = |omega1: f64| -> Result<f64> {
        let stack = with_frequencies(template, omega3, Some(omega1))?;
        Ok(second_derivative(&stack, method, &quad)?.value - threshold)
    };
    let grid = roots::log_grid(omega1_range.0, omega1_range.1, search.grid_points)?;
    let values = roots::sample(&grid, &mut excess)?;
    roots::brackets(&grid, &values)
        .into_iter()
        .map(|b: Bracket| {
            let branch = if b.rising() { Branch::Lower } else { Branch::Upper };
            let done = roots::bisect(b, search, &mut excess)?;
            Ok(BoundaryPoint {
                omega3,
                omega1: roots::nonnegative_end(&done),
                branch,
            })
        })
        .collect()
}

/// Stability boundary over a set of film plasma frequencies, in sample order.
#[allow(clippy::too_many_arguments)]
pub fn stability_boundary(
    template: &LayerStack,
    omega3_samples: &[f64],
    omega1_range: (f64, f64),
    params: &FilmElasticParams,
    dim: Dimensionality,
    method: Method,
    quad: &QuadratureSpec,
    search: &RootSearch,
) -> DiagramCurve {
    let per_sample = omega3_samples.iter().map(|&w3| {
        (
            w3,
            boundary_at(template, w3, omega1_range, params, dim, method, quad, search),
        )
    });
    assemble_curve(template, method, per_sample)
}

/// Merges per-sample boundary solves (already in sample order) into a curve.
pub fn assemble_curve<I>(template: &LayerStack, method: Method, per_sample: I) -> DiagramCurve
where
    I: IntoIterator<Item = (f64, Result<Vec<BoundaryPoint>>)>,
{
    let mut curve = DiagramCurve {
        thickness: template.thickness,
        omega_tau_film: template.film.omega_tau().unwrap_or(0.0),
        omega_tau_substrate: template.substrate.omega_tau().unwrap_or(0.0),
        method,
        points: Vec::new(),
        absent: Vec::new(),
        failed: Vec::new(),
    };
    for (w3, outcome) in per_sample {
        match outcome {
            Ok(points) if points.is_empty() => curve.absent.push(w3),
            Ok(points) => curve.points.extend(points),
            Err(e) => curve.failed.push((w3, e)),
        }
    }
    curve
}

/// Critical thickness of a film on the template's substrate at one film
/// plasma frequency.
#[allow(clippy::too_many_arguments)]
pub fn critical_thickness_at(
    template: &LayerStack,
    omega3: f64,
    params: &FilmElasticParams,
    dim: Dimensionality,
    method: Method,
    quad: &QuadratureSpec,
    d_range: (f64, f64),
    search: &RootSearch,
) -> Result<CriticalThickness> {
    let stack = with_frequencies(template, omega3, None)?;
    critical_thickness(&stack, params, dim, method, quad, d_range, search)
}

/// [`critical_thickness_at`] for each sample, in sample order.
#[allow(clippy::too_many_arguments)]
pub fn critical_thickness_curve(
    template: &LayerStack,
    omega3_samples: &[f64],
    params: &FilmElasticParams,
    dim: Dimensionality,
    method: Method,
    quad: &QuadratureSpec,
    d_range: (f64, f64),
    search: &RootSearch,
) -> Vec<(f64, Result<CriticalThickness>)> {
    omega3_samples
        .iter()
        .map(|&w3| {
            (
                w3,
                critical_thickness_at(template, w3, params, dim, method, quad, d_range, search),
            )
        })
        .collect()
}
