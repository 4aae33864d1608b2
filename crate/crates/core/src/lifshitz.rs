//! Zero-temperature Lifshitz energy of a three-layer stack and its first two
//! thickness derivatives.
//!
//! With `k` the in-plane wave vector and `γᵢ = √(k² + ξ²εᵢ/c²)`, the energy per
//! area is
//!
//! ```text
//! E/L² = ħ/(4π²) ∫₀^∞ dξ ∫₀^∞ k dk [ln Q_TM + ln Q_TE],   Q = 1 − r e^{−2γ₃d}
//! ```
//!
//! which is the `(p, ξ)` form with `k² = ξ²(p²−1)/c²`. Internally the inner
//! integral runs over `y = 2γ₃d` (so `k dk = y dy / 4d²`), starting at
//! `y_min = 2dξ√ε₃/c`. The thickness then only enters through `e^{−y}` and the
//! prefactor, and the derivatives are taken analytically under the integral.

use crate::constants::{C, HBAR};
use crate::dielectric::{DielectricModel, LayerStack};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, Tolerance};
use core::f64::consts::PI;

/// Quadrature controls for the double integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute floor, in the units of the requested quantity.
    pub abs_tol: f64,
    /// Panel budget for each one-dimensional adaptive integral.
    pub max_subdivisions: usize,
    /// Frequency scale of the `ξ = s·t/(1−t)` map. `None` picks
    /// `min(c/2d, max Ω_p)` from the stack.
    pub xi_scale: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-20,
            max_subdivisions: 200,
            xi_scale: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-2) {
            return Err(Error::Domain("rel_tol must lie in (0, 1e-2)"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Domain("abs_tol must be finite and >= 0"));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::Domain("max_subdivisions must be >= 10"));
        }
        if let Some(s) = self.xi_scale {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Domain("xi_scale must be finite and > 0"));
            }
        }
        Ok(())
    }

    fn resolved_xi_scale(&self, stack: &LayerStack) -> f64 {
        if let Some(s) = self.xi_scale {
            return s;
        }
        let cutoff = C / (2.0 * stack.thickness);
        let omega_max = stack
            .layers()
            .iter()
            .filter_map(|m| m.omega_p())
            .fold(0.0_f64, f64::max);
        if omega_max > 0.0 {
            omega_max.min(cutoff)
        } else {
            cutoff
        }
    }
}

/// A value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Energy, pressure and curvature of the energy for one stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumQuantities {
    /// J/m².
    pub energy_per_area: Estimate,
    /// N/m², positive when the film boundaries are pushed apart.
    pub pressure: Estimate,
    /// ∂²E/∂d², N/m³.
    pub energy_second_derivative: Estimate,
}

/// One point of the `(p, ξ)` integration domain together with the per-layer
/// kernels `Kᵢ = √(p²−1+εᵢ)` and decay constants `γᵢ = ξKᵢ/c`, ordered
/// substrate, ambient, film. Perfect reflectors carry infinite kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandPoint {
    pub p: f64,
    pub xi: f64,
    /// In-plane wave vector, 1/m.
    pub k: f64,
    pub kernels: [f64; 3],
    pub gammas: [f64; 3],
}

impl IntegrandPoint {
    pub fn new(stack: &LayerStack, p: f64, xi: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Domain("p must be finite and >= 1"));
        }
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::Domain("imaginary frequency must be finite and > 0"));
        }
        let p2m1 = (p - 1.0) * (p + 1.0);
        let mut kernels = [0.0; 3];
        let mut gammas = [0.0; 3];
        for (i, m) in stack.layers().iter().enumerate() {
            let eps = m.epsilon_unchecked(xi);
            kernels[i] = libm::sqrt(p2m1 + eps);
            gammas[i] = xi * kernels[i] / C;
        }
        Ok(IntegrandPoint {
            p,
            xi,
            k: xi / C * libm::sqrt(p2m1),
            kernels,
            gammas,
        })
    }
}

/// Reflection product `r` carried together with `1 − r`, which stays accurate
/// when `r → 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Reflection {
    r: f64,
    one_minus_r: f64,
}

impl Reflection {
    fn product(a: Reflection, b: Reflection) -> Reflection {
        Reflection {
            r: a.r * b.r,
            one_minus_r: a.one_minus_r + a.r * b.one_minus_r,
        }
    }

    /// `1 − r e^{−y}`.
    #[inline]
    fn q(&self, y: f64) -> f64 {
        let x = self.r * libm::exp(-y);
        if libm::fabs(x) < 0.5 {
            1.0 - x
        } else {
            self.one_minus_r - self.r * libm::expm1(-y)
        }
    }

    /// `ln(1 − r e^{−y})`.
    #[inline]
    fn ln_q(&self, y: f64) -> f64 {
        let x = self.r * libm::exp(-y);
        if libm::fabs(x) < 0.5 {
            libm::log1p(-x)
        } else {
            libm::log(self.q(y))
        }
    }
}

/// Interface fractions between the film and a bounding medium.
///
/// `e3`, `ei` are `ε − 1` of film and medium, `k3`, `ki` their kernels (any
/// common multiple of `Kᵢ`), and `dk2 = K₃² − Kᵢ²` in the same units. Using
/// the exact differences keeps the fractions accurate when `ε₃ → εᵢ`.
#[inline]
fn interface(side: &DielectricModel, e3: f64, k3: f64, ei: f64, ki: f64, dk2: f64) -> (Reflection, Reflection) {
    if side.is_perfect_reflector() {
        // ε_i → ∞: TM fraction → 1, TE fraction (K₃−Kᵢ)/(K₃+Kᵢ) → −1.
        return (
            Reflection {
                r: 1.0,
                one_minus_r: 0.0,
            },
            Reflection {
                r: -1.0,
                one_minus_r: 2.0,
            },
        );
    }
    let sum = k3 + ki;
    let diff = dk2 / sum;
    let eps3 = 1.0 + e3;
    let eps_i = 1.0 + ei;
    let tm_den = eps_i * k3 + eps3 * ki;
    (
        Reflection {
            r: (eps_i * diff + (ei - e3) * ki) / tm_den,
            one_minus_r: 2.0 * eps3 * ki / tm_den,
        },
        Reflection {
            r: diff / sum,
            one_minus_r: 2.0 * ki / sum,
        },
    )
}

/// `(Q_TM, Q_TE)` at one integration point.
pub fn q_factors(stack: &LayerStack, point: &IntegrandPoint) -> (f64, f64) {
    let [k1, k2, k3] = point.kernels;
    let e = |m: &DielectricModel| m.excess(point.xi);
    let e3 = e(&stack.film);
    let (e1, e2) = (e(&stack.substrate), e(&stack.ambient));
    let (tm1, te1) = interface(&stack.substrate, e3, k3, e1, k1, e3 - e1);
    let (tm2, te2) = interface(&stack.ambient, e3, k3, e2, k2, e3 - e2);
    let y = 2.0 * point.xi * k3 * stack.thickness / C;
    (Reflection::product(tm1, tm2).q(y), Reflection::product(te1, te2).q(y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Energy,
    FirstDerivative,
    SecondDerivative,
}

/// Everything about one frequency slice that does not depend on `y`.
struct Slice<'a> {
    stack: &'a LayerStack,
    y_min: f64,
    // εᵢ − 1
    excess: [f64; 3],
    // (2d/c)²·ξ²εᵢ and (2d/c)²·ξ²(ε₃ − εᵢ)
    u: [f64; 3],
    du: [f64; 2],
}

impl<'a> Slice<'a> {
    fn new(stack: &'a LayerStack, xi: f64) -> Self {
        let scale = 2.0 * stack.thickness / C;
        let scale2 = scale * scale;
        let mut excess = [0.0; 3];
        let mut u = [0.0; 3];
        let mut w = [0.0; 3];
        for (i, m) in stack.layers().iter().enumerate() {
            excess[i] = m.excess(xi);
            w[i] = m.xi_sq_excess(xi);
            u[i] = scale2 * (xi * xi + w[i]);
        }
        Slice {
            stack,
            y_min: libm::sqrt(u[2]),
            excess,
            u,
            du: [scale2 * (w[2] - w[0]), scale2 * (w[2] - w[1])],
        }
    }

    /// Inner integrand at `y = y_min + s`.
    #[inline]
    fn eval(&self, s: f64, kernel: Kernel) -> f64 {
        let k2 = s * (s + 2.0 * self.y_min);
        let y = libm::sqrt(k2 + self.u[2]);
        let ki = |i: usize| libm::sqrt(k2 + self.u[i]);
        let e3 = self.excess[2];
        let (tm1, te1) = interface(&self.stack.substrate, e3, y, self.excess[0], ki(0), self.du[0]);
        let (tm2, te2) = interface(&self.stack.ambient, e3, y, self.excess[1], ki(1), self.du[1]);
        let tm = Reflection::product(tm1, tm2);
        let te = Reflection::product(te1, te2);
        match kernel {
            Kernel::Energy => y * (tm.ln_q(y) + te.ln_q(y)),
            Kernel::FirstDerivative => {
                let e = libm::exp(-y);
                y * y * (tm.r * e / tm.q(y) + te.r * e / te.q(y))
            }
            Kernel::SecondDerivative => {
                let e = libm::exp(-y);
                let qtm = tm.q(y);
                let qte = te.q(y);
                -y * y * y * (tm.r * e / (qtm * qtm) + te.r * e / (qte * qte))
            }
        }
    }
}

// Beyond this e^{−y} is subnormal or zero; the slice contributes nothing
// and its relative accuracy is meaningless.
const Y_CUTOFF: f64 = 700.0;
const SUBNORMAL_FLOOR: f64 = 1e-290;

fn integrate_kernel(stack: &LayerStack, quad: &QuadratureSpec, kernel: Kernel) -> Result<Estimate> {
    quad.validate()?;
    let d = stack.thickness;
    let power = match kernel {
        Kernel::Energy => 2,
        Kernel::FirstDerivative => 3,
        Kernel::SecondDerivative => 4,
    };
    let prefactor = HBAR / (16.0 * PI * PI * libm::pow(d, power as f64));

    let inner_rel = 0.1 * quad.rel_tol;
    // Inner values this small are dominated by subnormal rounding.
    let inner_tol = Tolerance::new(inner_rel, SUBNORMAL_FLOOR, quad.max_subdivisions);
    // Leaves room for the inner error inside the overall budget.
    let outer_tol = Tolerance::new(0.5 * quad.rel_tol, quad.abs_tol / prefactor, quad.max_subdivisions);
    let mut worst_inner = inner_rel;
    let outer = integrate_to_infinity(
        |xi| {
            let slice = Slice::new(stack, xi);
            if slice.y_min > Y_CUTOFF {
                return 0.0;
            }
            let inner = integrate_to_infinity(|s| slice.eval(s, kernel), 2.0, &inner_tol);
            if !inner.converged && inner.abs_value > 0.0 {
                worst_inner = worst_inner.max(inner.error / inner.abs_value);
            }
            inner.value
        },
        quad.resolved_xi_scale(stack),
        &outer_tol,
    );
    let error = outer.error + worst_inner * outer.abs_value;
    let target = quad.abs_tol / prefactor + quad.rel_tol * libm::fabs(outer.value);
    let acceptable = error <= target || error <= quad.rel_tol * outer.abs_value;
    let sign = if kernel == Kernel::FirstDerivative { -1.0 } else { 1.0 };
    let value = sign * prefactor * outer.value;
    let error = prefactor * error;
    if acceptable {
        Ok(Estimate { value, error })
    } else {
        Err(Error::NonConvergence { estimate: value, error })
    }
}

/// Vacuum energy per unit area, J/m².
pub fn energy_per_area(stack: &LayerStack, quad: &QuadratureSpec) -> Result<Estimate> {
    integrate_kernel(stack, quad, Kernel::Energy)
}

/// Force per unit area `−∂E/∂d`, N/m². Positive pushes the boundaries apart.
pub fn pressure(stack: &LayerStack, quad: &QuadratureSpec) -> Result<Estimate> {
    integrate_kernel(stack, quad, Kernel::FirstDerivative)
}

/// `∂²E/∂d²`, N/m³.
pub fn energy_second_derivative(stack: &LayerStack, quad: &QuadratureSpec) -> Result<Estimate> {
    integrate_kernel(stack, quad, Kernel::SecondDerivative)
}

pub fn vacuum_quantities(stack: &LayerStack, quad: &QuadratureSpec) -> Result<VacuumQuantities> {
    Ok(VacuumQuantities {
        energy_per_area: energy_per_area(stack, quad)?,
        pressure: pressure(stack, quad)?,
        energy_second_derivative: energy_second_derivative(stack, quad)?,
    })
}
