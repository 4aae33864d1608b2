//! Dielectric response on the imaginary frequency axis and the three-layer
//! geometry built from it.

use core::f64::consts::PI;

use crate::constants::C;
use crate::error::{Error, Result};

/// Permittivity model evaluated at imaginary frequency `iξ`.
///
/// All frequencies are angular, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DielectricModel {
    Vacuum,
    Plasma {
        omega_p: f64,
    },
    Drude {
        omega_p: f64,
        omega_tau: f64,
    },
    /// Ideal mirror. Never has a numeric permittivity; the Lifshitz code
    /// substitutes the exact unit-reflectivity limits instead.
    PerfectReflector,
}

impl DielectricModel {
    pub fn plasma(omega_p: f64) -> Result<Self> {
        check_frequency(omega_p, "plasma frequency must be finite and >= 0")?;
        Ok(DielectricModel::Plasma { omega_p })
    }

    pub fn drude(omega_p: f64, omega_tau: f64) -> Result<Self> {
        check_frequency(omega_p, "plasma frequency must be finite and >= 0")?;
        check_frequency(omega_tau, "relaxation frequency must be finite and >= 0")?;
        Ok(DielectricModel::Drude { omega_p, omega_tau })
    }

    /// Plasma frequency, or `None` for vacuum and the ideal mirror.
    pub fn omega_p(&self) -> Option<f64> {
        match *self {
            DielectricModel::Plasma { omega_p } | DielectricModel::Drude { omega_p, .. } => Some(omega_p),
            _ => None,
        }
    }

    /// Relaxation frequency; zero for the plasma model.
    pub fn omega_tau(&self) -> Option<f64> {
        match *self {
            DielectricModel::Plasma { .. } => Some(0.0),
            DielectricModel::Drude { omega_tau, .. } => Some(omega_tau),
            _ => None,
        }
    }

    /// Plasma wavelength `2πc/Ω_p`; infinite when `Ω_p = 0`.
    pub fn plasma_wavelength(&self) -> Option<f64> {
        self.omega_p().map(wavelength)
    }

    /// Relaxation wavelength `2πc/ω_τ`; infinite for the plasma model.
    pub fn relaxation_wavelength(&self) -> Option<f64> {
        self.omega_tau().map(wavelength)
    }

    pub fn is_perfect_reflector(&self) -> bool {
        matches!(self, DielectricModel::PerfectReflector)
    }

    /// `ε(iξ)`.
    pub fn epsilon(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::Domain("imaginary frequency must be finite and > 0"));
        }
        match *self {
            DielectricModel::PerfectReflector => Err(Error::Usage(
                "perfect reflector has no finite permittivity; use the reflection limit",
            )),
            _ => Ok(self.epsilon_unchecked(xi)),
        }
    }

    /// `ε(iξ)` without argument checks. Perfect reflectors report infinity.
    #[inline]
    pub(crate) fn epsilon_unchecked(&self, xi: f64) -> f64 {
        match *self {
            DielectricModel::Vacuum => 1.0,
            DielectricModel::Plasma { omega_p } => 1.0 + omega_p * omega_p / (xi * (xi + 0.0)),
            DielectricModel::Drude { omega_p, omega_tau } => 1.0 + omega_p * omega_p / (xi * (xi + omega_tau)),
            DielectricModel::PerfectReflector => f64::INFINITY,
        }
    }

    /// `ε(iξ) − 1`, computed without forming `ε` first.
    #[inline]
    pub(crate) fn excess(&self, xi: f64) -> f64 {
        match *self {
            DielectricModel::Vacuum => 0.0,
            DielectricModel::Plasma { omega_p } => omega_p * omega_p / (xi * (xi + 0.0)),
            DielectricModel::Drude { omega_p, omega_tau } => omega_p * omega_p / (xi * (xi + omega_tau)),
            DielectricModel::PerfectReflector => f64::INFINITY,
        }
    }

    /// `ξ²(ε(iξ) − 1)`, finite even where `ε` itself would overflow.
    #[inline]
    pub(crate) fn xi_sq_excess(&self, xi: f64) -> f64 {
        match *self {
            DielectricModel::Vacuum => 0.0,
            DielectricModel::Plasma { omega_p } => omega_p * omega_p,
            DielectricModel::Drude { omega_p, omega_tau } => omega_p * omega_p * xi / (xi + omega_tau),
            DielectricModel::PerfectReflector => f64::INFINITY,
        }
    }
}

/// `ε(iξ)` for any model; see [`DielectricModel::epsilon`].
pub fn eval_epsilon(model: &DielectricModel, xi: f64) -> Result<f64> {
    model.epsilon(xi)
}

fn check_frequency(w: f64, msg: &'static str) -> Result<()> {
    if w >= 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(msg))
    }
}

fn wavelength(omega: f64) -> f64 {
    if omega == 0.0 {
        f64::INFINITY
    } else {
        2.0 * PI * C / omega
    }
}

/// Substrate (ε₁) | film (ε₃) of thickness `d` | ambient (ε₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerStack {
    pub substrate: DielectricModel,
    pub ambient: DielectricModel,
    pub film: DielectricModel,
    pub thickness: f64,
}

impl LayerStack {
    pub fn new(
        substrate: DielectricModel,
        ambient: DielectricModel,
        film: DielectricModel,
        thickness: f64,
    ) -> Result<Self> {
        if !(thickness > 0.0 && thickness.is_finite()) {
            return Err(Error::Domain("film thickness must be finite and > 0"));
        }
        if film.is_perfect_reflector() {
            return Err(Error::Usage("the film cannot be a perfect reflector"));
        }
        Ok(LayerStack {
            substrate,
            ambient,
            film,
            thickness,
        })
    }

    /// Film in vacuum on both sides.
    pub fn free_standing(film: DielectricModel, thickness: f64) -> Result<Self> {
        Self::new(DielectricModel::Vacuum, DielectricModel::Vacuum, film, thickness)
    }

    /// Film on `substrate`, vacuum above.
    pub fn deposited(substrate: DielectricModel, film: DielectricModel, thickness: f64) -> Result<Self> {
        Self::new(substrate, DielectricModel::Vacuum, film, thickness)
    }

    /// Same materials, different thickness.
    pub fn with_thickness(&self, thickness: f64) -> Result<Self> {
        Self::new(self.substrate, self.ambient, self.film, thickness)
    }

    pub(crate) fn layers(&self) -> [&DielectricModel; 3] {
        [&self.substrate, &self.ambient, &self.film]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_examples() {
        let m = DielectricModel::drude(1e16, 0.0).unwrap();
        assert_eq!(m.epsilon(1e16).unwrap(), 2.0);
        let m = DielectricModel::drude(0.0, 1e15).unwrap();
        assert_eq!(m.epsilon(1e15).unwrap(), 1.0);
        let m = DielectricModel::drude(1e16, 1e15).unwrap();
        assert!((m.epsilon(1e15).unwrap() - 51.0).abs() < 1e-12);
        assert_eq!(DielectricModel::Vacuum.epsilon(3.0).unwrap(), 1.0);
    }

    #[test]
    fn epsilon_errors() {
        let m = DielectricModel::plasma(1e15).unwrap();
        assert!(matches!(m.epsilon(0.0), Err(Error::Domain(_))));
        assert!(matches!(m.epsilon(-1.0), Err(Error::Domain(_))));
        assert!(matches!(m.epsilon(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(
            DielectricModel::PerfectReflector.epsilon(1e15),
            Err(Error::Usage(_))
        ));
        assert!(DielectricModel::drude(-1.0, 0.0).is_err());
        assert!(DielectricModel::drude(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn wavelengths() {
        let m = DielectricModel::drude(2e15, 0.0).unwrap();
        let lp = m.plasma_wavelength().unwrap();
        assert!((lp - 2.0 * PI * C / 2e15).abs() < 1e-20);
        assert!((lp - 9.42e-7).abs() < 1e-9);
        assert_eq!(m.relaxation_wavelength(), Some(f64::INFINITY));
        assert_eq!(DielectricModel::Vacuum.plasma_wavelength(), None);
    }

    #[test]
    fn stack_invariants() {
        let film = DielectricModel::plasma(1e16).unwrap();
        assert!(LayerStack::free_standing(film, 0.0).is_err());
        assert!(LayerStack::free_standing(film, -1e-9).is_err());
        assert!(LayerStack::free_standing(DielectricModel::PerfectReflector, 1e-9).is_err());
        let s = LayerStack::deposited(DielectricModel::PerfectReflector, film, 6e-9).unwrap();
        assert_eq!(s.with_thickness(1e-8).unwrap().thickness, 1e-8);
    }
}
