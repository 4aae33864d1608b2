//! Continuum elasticity of a strained film: biaxial strains, surface stress
//! equilibrium, and the energetics of a sinusoidal surface perturbation.
//!
//! The wavy-surface energies are per wavelength and per unit transverse
//! length of the two-dimensional model (J/m).

use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Elastic and surface parameters of the film.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilmElasticParams {
    /// Young modulus `Y`, Pa.
    pub young: f64,
    /// Poisson ratio `ν`.
    pub poisson: f64,
    /// Surface energy `γ`, J/m².
    pub surface_energy: f64,
    /// In-plane mismatch stress `σ` of the flat film, Pa.
    pub mismatch_stress: f64,
    /// Surface stress `σ⁽ˢ⁾`, N/m.
    pub surface_stress: f64,
    /// Hamaker constant `H`, J. Negative means repulsive.
    pub hamaker: Option<f64>,
}

impl Default for FilmElasticParams {
    /// σ = 500 MPa, γ = 1 J/m², Y = 76 GPa, ν = 0.3.
    fn default() -> Self {
        FilmElasticParams {
            young: 76e9,
            poisson: 0.3,
            surface_energy: 1.0,
            mismatch_stress: 500e6,
            surface_stress: 0.0,
            hamaker: None,
        }
    }
}

impl FilmElasticParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.young > 0.0 && self.young.is_finite()) {
            return Err(Error::Domain("Young modulus must be finite and > 0"));
        }
        if !(self.poisson > -1.0 && self.poisson < 0.5) {
            return Err(Error::Domain("Poisson ratio must lie in (-1, 0.5)"));
        }
        if !(self.surface_energy > 0.0 && self.surface_energy.is_finite()) {
            return Err(Error::Domain("surface energy must be finite and > 0"));
        }
        if !self.mismatch_stress.is_finite() || !self.surface_stress.is_finite() {
            return Err(Error::Domain("stresses must be finite"));
        }
        if let Some(h) = self.hamaker {
            if !h.is_finite() {
                return Err(Error::Domain("Hamaker constant must be finite"));
            }
        }
        Ok(())
    }

    /// Young modulus for the chosen model dimension.
    pub fn effective_young(&self, dim: Dimensionality) -> f64 {
        match dim {
            Dimensionality::TwoD => self.young,
            Dimensionality::ThreeD => effective_young_3d(self.young, self.poisson),
        }
    }
}

/// Plane-strain (2-D) model or its single-wave 3-D extension, which only
/// swaps `Y` for `Y/(1−ν²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dimensionality {
    #[default]
    TwoD,
    ThreeD,
}

/// `z = d − q·cos(2πx/λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavyPerturbation {
    pub amplitude: f64,
    pub wavelength: f64,
    pub thickness: f64,
}

impl WavyPerturbation {
    pub fn new(amplitude: f64, wavelength: f64, thickness: f64) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::Domain("amplitude must be finite and >= 0"));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::Domain("wavelength must be finite and > 0"));
        }
        if !(thickness >= 0.0 && thickness.is_finite()) {
            return Err(Error::Domain("thickness must be finite and >= 0"));
        }
        Ok(WavyPerturbation {
            amplitude,
            wavelength,
            thickness,
        })
    }

    /// `q/λ > 1/10`: outside the small-amplitude regime.
    pub fn large_amplitude(&self) -> bool {
        self.amplitude / self.wavelength > 0.1
    }

    /// `d/λ > 1/10`: the thin-film reduction to tangential stress is doubtful.
    pub fn thick_film(&self) -> bool {
        self.thickness / self.wavelength > 0.1
    }

    fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainState {
    pub eps_parallel: f64,
    pub eps_perp: f64,
}

impl StrainState {
    /// Magnitudes at or above 5 % are outside linear elasticity.
    pub fn beyond_linear_range(&self) -> bool {
        libm::fabs(self.eps_parallel) >= 0.05 || libm::fabs(self.eps_perp) >= 0.05
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressField {
    pub xx: f64,
    pub zz: f64,
    pub xz: f64,
}

/// Equilibrium strains under biaxial stress `σ`.
pub fn biaxial_strains(sigma: f64, params: &FilmElasticParams) -> StrainState {
    let (y, nu) = (params.young, params.poisson);
    StrainState {
        eps_parallel: sigma * (1.0 - nu) / y,
        eps_perp: -2.0 * sigma * nu / y,
    }
}

/// Strains of a free film balanced by its surface stress, `σ⁽ˢ⁾ = −dσ/2`.
pub fn strains_from_surface_stress(params: &FilmElasticParams, d: f64) -> StrainState {
    biaxial_strains(-2.0 * params.surface_stress / d, params)
}

/// Surface-stress strains plus the linear response to the vacuum pressure `F`.
pub fn strains_with_vacuum(params: &FilmElasticParams, d: f64, force: f64) -> StrainState {
    let base = strains_from_surface_stress(params, d);
    StrainState {
        eps_parallel: base.eps_parallel - params.poisson * force / params.young,
        eps_perp: base.eps_perp + force / params.young,
    }
}

/// Stress in the film under the wavy surface at position `x`.
pub fn wavy_stress_field(sigma: f64, pert: &WavyPerturbation, x: f64) -> StressField {
    let (q, lambda, d) = (pert.amplitude, pert.wavelength, pert.thickness);
    let phase = pert.wavenumber() * x;
    let decay = libm::exp(-2.0 * PI * d / lambda);
    StressField {
        xx: sigma * (1.0 + 4.0 * PI * q / lambda * (1.0 - PI * d / lambda) * decay * libm::cos(phase)),
        zz: sigma * 4.0 * PI * d * q / (lambda * lambda) * decay * libm::cos(phase),
        xz: sigma * 2.0 * PI * q / lambda * (1.0 - 2.0 * PI * d / lambda) * decay * libm::sin(phase),
    }
}

/// Thin-film (`d ≪ λ`) tangential stress at the surface.
pub fn tangential_surface_stress(sigma: f64, pert: &WavyPerturbation, x: f64) -> f64 {
    sigma * (1.0 + 4.0 * PI * pert.amplitude / pert.wavelength * libm::cos(pert.wavenumber() * x))
}

/// `ΔU_el = −πσ²q²/Y`, independent of the wavelength.
pub fn delta_u_elastic(sigma: f64, q: f64, young: f64) -> f64 {
    -sigma * sigma * q * q * PI / young
}

/// `ΔU_surf = γq²π²/λ`.
pub fn delta_u_surface(gamma: f64, q: f64, lambda: f64) -> f64 {
    gamma * q * q * PI * PI / lambda
}

/// `ΔU_vac = E''·q²λ/4`.
pub fn delta_u_vacuum(e2: f64, q: f64, lambda: f64) -> f64 {
    e2 * q * q * lambda / 4.0
}

/// Sum of the three contributions for the perturbation `pert`.
pub fn delta_u_total(params: &FilmElasticParams, e2: f64, pert: &WavyPerturbation, dim: Dimensionality) -> f64 {
    let q = pert.amplitude;
    delta_u_elastic(params.mismatch_stress, q, params.effective_young(dim))
        + delta_u_surface(params.surface_energy, q, pert.wavelength)
        + delta_u_vacuum(e2, q, pert.wavelength)
}

/// Wavelength `πYγ/σ²` above which a flat film without vacuum term is unstable.
pub fn critical_wavelength(params: &FilmElasticParams, dim: Dimensionality) -> f64 {
    let s = params.mismatch_stress;
    PI * params.effective_young(dim) * params.surface_energy / (s * s)
}

/// Wavelength minimizing the total energy change when `E'' > 0`:
/// `λ* = 2π√(γ/E'')`.
pub fn optimal_wavelength(params: &FilmElasticParams, e2: f64) -> Result<f64> {
    if !(e2 > 0.0) {
        return Err(Error::Attractive);
    }
    Ok(2.0 * PI * libm::sqrt(params.surface_energy / e2))
}

/// Critical thickness for a van der Waals term `ΔU_vac = −Hq²λ/(8πd⁴)`:
/// `d_c = (−HY²γ/(2πσ⁴))^{1/4}`. Needs `H < 0`.
pub fn hamaker_critical_thickness(params: &FilmElasticParams, dim: Dimensionality) -> Result<f64> {
    let h = params.hamaker.ok_or(Error::Usage("no Hamaker constant given"))?;
    if !(h < 0.0) {
        return Err(Error::Attractive);
    }
    let y = params.effective_young(dim);
    let s2 = params.mismatch_stress * params.mismatch_stress;
    Ok(libm::pow(
        -h * y * y * params.surface_energy / (2.0 * PI * s2 * s2),
        0.25,
    ))
}

/// `E''(d) = −H/(2πd⁴)` implied by the Hamaker form of `ΔU_vac`.
pub fn hamaker_second_derivative(hamaker: f64, d: f64) -> f64 {
    -hamaker / (2.0 * PI * d * d * d * d)
}

/// `Y/(1−ν²)`.
pub fn effective_young_3d(young: f64, poisson: f64) -> f64 {
    young / (1.0 - poisson * poisson)
}
