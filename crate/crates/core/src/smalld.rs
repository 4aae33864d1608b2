//! Non-retarded (van der Waals) limits of the film force.
//!
//! When `d` is much smaller than the plasma and relaxation wavelengths only
//! TM modes with `k ≫ ξ/c` matter, and to first order in the reflection
//! products the pressure becomes
//!
//! ```text
//! F = −ħ/(8π²d³) ∫₀^∞ Δ₃₁Δ₃₂ dξ,   Δ₃ᵢ = (ε₃ − εᵢ)/(ε₃ + εᵢ)
//! ```
//!
//! The closed forms below are this integral evaluated for plasma and Drude
//! films; the quadrature versions are kept as their oracles.

use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::constants::HBAR;
use crate::dielectric::{DielectricModel, LayerStack};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, Tolerance};

const TOL: Tolerance = Tolerance::new(1e-10, 0.0, 200);

/// Ratio `d / min(λ_p, λ_τ)` below which the small-distance forms are
/// considered applicable.
pub const VALIDITY_RATIO: f64 = 1.0 / 20.0;

/// Small-distance pressure together with its applicability flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallDResult {
    /// N/m², positive when repulsive.
    pub pressure: f64,
    /// `d < min(λ_p, λ_τ)/20` for the film.
    pub valid: bool,
    /// `ω_τ/Ω₃` of the film.
    pub x: f64,
}

/// Surface plasmon frequency and the film/substrate mean frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFrequencies {
    /// `Ω₃/√2`
    pub omega_s: f64,
    /// `√((Ω₁² + Ω₃²)/2)`
    pub omega_bar: f64,
}

impl DerivedFrequencies {
    pub fn new(omega3: f64, omega1: f64) -> Self {
        DerivedFrequencies {
            omega_s: omega3 / SQRT_2,
            omega_bar: libm::sqrt(0.5 * (omega1 * omega1 + omega3 * omega3)),
        }
    }
}

/// Plasma-model free-standing force `F_P1 = −ħΩ_s/(32πd³)`.
pub fn fp1(omega3: f64, d: f64) -> f64 {
    -HBAR * omega3 / (SQRT_2 * 32.0 * PI * d * d * d)
}

/// Plasma-model force on a film over an ideal mirror, `F_P2 = −2F_P1`.
pub fn fp2(omega3: f64, d: f64) -> f64 {
    -2.0 * fp1(omega3, d)
}

/// `Δ = (ε₃ − εᵢ)/(ε₃ + εᵢ)` from the excesses `ε − 1`; an ideal mirror gives −1.
#[inline]
fn delta(film_excess: f64, side: &DielectricModel, xi: f64) -> f64 {
    if side.is_perfect_reflector() {
        return -1.0;
    }
    let ei = side.excess(xi);
    (film_excess - ei) / (2.0 + film_excess + ei)
}

/// Free-standing small-d force by direct quadrature of the Δ² integral.
pub fn vdw_force_free_standing_integral(film: &DielectricModel, d: f64) -> Result<f64> {
    let stack = LayerStack::free_standing(*film, d)?;
    vdw_force_three_layer_integral(&stack)
}

/// Small-d force for arbitrary bounding media by quadrature of `Δ₃₁Δ₃₂`.
pub fn vdw_force_three_layer_integral(stack: &LayerStack) -> Result<f64> {
    let scale = stack
        .layers()
        .iter()
        .filter_map(|m| m.omega_p())
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        // Every non-mirror layer is vacuum, so one of the Δ factors vanishes
        // unless the film sits between two mirrors.
        if stack.substrate.is_perfect_reflector() && stack.ambient.is_perfect_reflector() {
            return Err(Error::Domain("small-d limit needs a finite plasma frequency"));
        }
        return Ok(0.0);
    }
    // |Δ₃₁Δ₃₂| ≤ 1, so the integral is naturally measured against `scale`.
    // The absolute floor keeps near-matched layers (integral ≈ 0) solvable.
    let tol = Tolerance::new(TOL.rel, 1e-3 * TOL.rel * scale, TOL.max_subdivisions);
    let integral = integrate_to_infinity(
        |xi| {
            let e3 = stack.film.excess(xi);
            delta(e3, &stack.substrate, xi) * delta(e3, &stack.ambient, xi)
        },
        scale,
        &tol,
    )
    .into_result(&tol)?;
    let d = stack.thickness;
    Ok(-HBAR / (8.0 * PI * PI * d * d * d) * integral.value)
}

/// Small-d pressure with its applicability flag.
pub fn small_d_pressure(stack: &LayerStack) -> Result<SmallDResult> {
    let pressure = vdw_force_three_layer_integral(stack)?;
    Ok(SmallDResult {
        pressure,
        valid: small_d_valid(&stack.film, stack.thickness),
        x: relaxation_ratio(&stack.film),
    })
}

/// `∂²E/∂d²` in the small-d regime. Since `F ∝ d⁻³`, this is `3F/d`.
pub fn small_d_second_derivative(stack: &LayerStack) -> Result<f64> {
    Ok(3.0 * vdw_force_three_layer_integral(stack)? / stack.thickness)
}

/// Whether `d < min(λ_p, λ_τ)/20` holds for the film.
pub fn small_d_valid(film: &DielectricModel, d: f64) -> bool {
    let lp = film.plasma_wavelength().unwrap_or(f64::INFINITY);
    let lt = film.relaxation_wavelength().unwrap_or(f64::INFINITY);
    d < lp.min(lt) * VALIDITY_RATIO
}

fn relaxation_ratio(film: &DielectricModel) -> f64 {
    match (film.omega_p(), film.omega_tau()) {
        (Some(wp), Some(wt)) if wp > 0.0 => wt / wp,
        _ => 0.0,
    }
}

/// The free-standing relaxation factor in its closed form, as it is usually
/// printed:
///
/// ```text
/// g(x) = (√2/π)·[ (2(1−x²)−2)/(x(1−x²)) − (ArcTan(x/√(2−x²)) − π/2)/(1−x²)^{3/2} ]
/// ```
///
/// Defined on `0 ≤ x < 1`. Its `x → 0` limit is `√2/2`, not 1, so it does
/// not reproduce the plasma force; [`g_factor`] is the one to use. At `x → 1`
/// the second term grows like `(π/4)(1−x²)^{−3/2}`, a genuine pole.
pub fn g_factor_closed(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain("printed g(x) needs 0 <= x < 1"));
    }
    let one_m = 1.0 - x * x;
    // (2(1−x²)−2)/(x(1−x²)) = −2x/(1−x²), finite at x = 0.
    let first = -2.0 * x / one_m;
    let second = (libm::atan(x / libm::sqrt(2.0 - x * x)) - FRAC_PI_2) / libm::pow(one_m, 1.5);
    Ok(SQRT_2 / PI * (first - second))
}

/// Free-standing relaxation factor `g(ω_τ/Ω₃) = F_Drude / F_P1`, from the
/// small-d integral with `Ω₃` scaled out:
/// `g(x) = (4√2/π) ∫₀^∞ du / (1 + 2u(u+x))²`.
pub fn g_factor(x: f64) -> Result<f64> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Domain("g(x) needs finite x >= 0"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let integral = integrate_to_infinity(
        |u| {
            let den = 1.0 + 2.0 * u * (u + x);
            1.0 / (den * den)
        },
        1.0 / (SQRT_2 + x),
        &TOL,
    )
    .into_result(&TOL)?;
    Ok(4.0 * SQRT_2 / PI * integral.value)
}

/// Ideal-mirror relaxation factor
/// `f(x) = [1 − (2/π)·ArcTan(x/√(2−x²))] / √(1 − x²/2)`, for `0 ≤ x < √2`.
pub fn f_factor(x: f64) -> Result<f64> {
    if !(0.0..SQRT_2).contains(&x) {
        return Err(Error::Domain("f(x) needs 0 <= x < sqrt(2)"));
    }
    let root = libm::sqrt(2.0 - x * x);
    Ok((1.0 - 2.0 / PI * libm::atan(x / root)) / libm::sqrt(1.0 - 0.5 * x * x))
}

/// Small-d force on a Drude film over an ideal mirror, `F_P2·f(ω_τ/Ω₃)`.
pub fn vdw_force_perfect_reflector(omega3: f64, omega_tau: f64, d: f64) -> Result<f64> {
    if omega3 == 0.0 {
        return Ok(0.0);
    }
    Ok(fp2(omega3, d) * f_factor(omega_tau / omega3)?)
}

/// `∂²E/∂d² = (3√2ħΩ₃/32πd⁴)·f(ω_τ/Ω₃)` for a film over an ideal mirror.
pub fn vdw_second_derivative_perfect_reflector(omega3: f64, omega_tau: f64, d: f64) -> Result<f64> {
    if omega3 == 0.0 {
        return Ok(0.0);
    }
    let f = f_factor(omega_tau / omega3)?;
    Ok(3.0 * SQRT_2 * HBAR * omega3 / (32.0 * PI * d * d * d * d) * f)
}

/// `(π/2 − ArcTan(ω_τ/√(4Ω²−ω_τ²)))/√(4Ω²−ω_τ²)`
fn resonance_term(omega_sq: f64, omega_tau: f64, which: &'static str) -> Result<f64> {
    let rad = 4.0 * omega_sq - omega_tau * omega_tau;
    if !(rad > 0.0) {
        return Err(Error::Domain(which));
    }
    let root = libm::sqrt(rad);
    Ok((FRAC_PI_2 - libm::atan(omega_tau / root)) / root)
}

/// Small-d force on a Drude film over a Drude substrate sharing the same
/// relaxation frequency. Repulsive iff `Ω₃ < Ω₁`.
pub fn vdw_force_drude_substrate(omega3: f64, omega1: f64, omega_tau: f64, d: f64) -> Result<f64> {
    if !(omega1 > 0.0) {
        return Err(Error::Domain("substrate plasma frequency must be > 0"));
    }
    if omega3 == 0.0 || omega3 == omega1 {
        return Ok(0.0);
    }
    let freq = DerivedFrequencies::new(omega3, omega1);
    let ws2 = freq.omega_s * freq.omega_s;
    let wb2 = freq.omega_bar * freq.omega_bar;
    let bar = resonance_term(wb2, omega_tau, "sqrt(4*omega_bar^2 - omega_tau^2) is not real")?;
    let surf = resonance_term(ws2, omega_tau, "sqrt(4*omega_s^2 - omega_tau^2) is not real")?;
    let w3sq = omega3 * omega3;
    let factor = w3sq * (omega1 * omega1 - w3sq) / (ws2 - wb2);
    Ok(HBAR / (16.0 * PI * PI * d * d * d) * factor * (bar - surf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        libm::fabs(a / b - 1.0)
    }

    #[test]
    fn fp_values() {
        assert!(rel(fp1(2e15, 1e-8), -1.4835e3) < 1e-4);
        assert_eq!(fp1(0.0, 1e-8), 0.0);
        assert_eq!(fp2(2e15, 1e-8), -2.0 * fp1(2e15, 1e-8));
    }

    #[test]
    fn f_factor_values() {
        assert_eq!(f_factor(0.0).unwrap(), 1.0);
        assert!(rel(f_factor(1.0).unwrap(), SQRT_2 / 2.0) < 1e-15);
        let edge = f_factor(1.4).unwrap();
        assert!(edge > 0.0 && edge.is_finite());
        assert!(f_factor(SQRT_2).is_err());
        assert!(f_factor(-0.1).is_err());
    }

    #[test]
    fn g_closed_values() {
        assert!(rel(g_factor_closed(0.0).unwrap(), SQRT_2 / 2.0) < 1e-15);
        assert!(rel(g_factor_closed(1e-9).unwrap(), SQRT_2 / 2.0) < 1e-8);
        assert!(g_factor_closed(0.99).unwrap().is_finite());
        assert!(g_factor_closed(1.0).is_err());
    }

    #[test]
    fn g_normative_values() {
        assert_eq!(g_factor(0.0).unwrap(), 1.0);
        let g1 = g_factor(1.0).unwrap();
        assert!(g1 > 0.0 && g1 < 1.0);
        assert!(g_factor(10.0).unwrap() < g1);
        assert!(g_factor(-1.0).is_err());
    }

    #[test]
    fn perfect_reflector_forms() {
        assert_eq!(vdw_force_perfect_reflector(1e16, 0.0, 6e-9).unwrap(), fp2(1e16, 6e-9));
        assert_eq!(vdw_force_perfect_reflector(0.0, 1e15, 6e-9).unwrap(), 0.0);
        let e2 = vdw_second_derivative_perfect_reflector(1e16, 0.0, 6e-9).unwrap();
        assert!(rel(e2, 3.43e13) < 2e-3);
        assert_eq!(vdw_second_derivative_perfect_reflector(0.0, 0.0, 6e-9).unwrap(), 0.0);
    }

    #[test]
    fn drude_substrate_domain() {
        assert_eq!(vdw_force_drude_substrate(1e16, 1e16, 1e15, 6e-9).unwrap(), 0.0);
        assert!(vdw_force_drude_substrate(1e16, 5e16, 1e15, 6e-9).unwrap() > 0.0);
        assert!(vdw_force_drude_substrate(5e16, 1e16, 1e15, 6e-9).unwrap() < 0.0);
        assert!(matches!(
            vdw_force_drude_substrate(1e15, 1e16, 1.5e15, 6e-9),
            Err(Error::Domain(_))
        ));
        assert!(vdw_force_drude_substrate(1e15, 0.0, 0.0, 6e-9).is_err());
    }

    #[test]
    fn validity_flag() {
        let film = DielectricModel::drude(2e15, 1e14).unwrap();
        // λ_p ≈ 942 nm
        assert!(small_d_valid(&film, 40e-9));
        assert!(!small_d_valid(&film, 60e-9));
        let r = small_d_pressure(&LayerStack::free_standing(film, 1e-9).unwrap()).unwrap();
        assert!(r.valid);
        assert!(rel(r.x, 0.05) < 1e-15);
        assert!(r.pressure < 0.0);
    }

    #[test]
    fn mirror_gap_has_no_small_d_limit() {
        let s = LayerStack::new(
            DielectricModel::PerfectReflector,
            DielectricModel::PerfectReflector,
            DielectricModel::Vacuum,
            1e-8,
        )
        .unwrap();
        assert!(vdw_force_three_layer_integral(&s).is_err());
        let s = LayerStack::free_standing(DielectricModel::Vacuum, 1e-8).unwrap();
        assert_eq!(vdw_force_three_layer_integral(&s).unwrap(), 0.0);
    }
}
