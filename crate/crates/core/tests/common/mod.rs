#![allow(dead_code)]

use std::f64::consts::PI;

use cfs_core::quadrature::{integrate_to_infinity, Tolerance};
use cfs_core::DielectricModel;

pub const ZETA3: f64 = 1.202_056_903_159_594_3;

pub fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// Trilogarithm on [−1, 1].
pub fn li3(x: f64) -> f64 {
    assert!((-1.0..=1.0).contains(&x));
    if x < 0.0 {
        return li3(x * x) / 4.0 - li3(-x);
    }
    if x <= 0.5 {
        let mut sum = 0.0;
        let mut p = x;
        for n in 1..200 {
            let term = p / (n as f64).powi(3);
            sum += term;
            if term < 1e-18 {
                break;
            }
            p *= x;
        }
        return sum;
    }
    // Expansion in μ = ln x around x = 1.
    let mu = x.ln();
    if mu == 0.0 {
        return ZETA3;
    }
    let zeta_neg = [
        (3, -0.5),
        (4, -1.0 / 12.0),
        (6, 1.0 / 120.0),
        (8, -1.0 / 252.0),
        (10, 1.0 / 240.0),
        (12, -1.0 / 132.0),
        (14, 691.0 / 32760.0),
    ];
    let mut sum = ZETA3 + PI * PI / 6.0 * mu + 0.5 * mu * mu * (1.5 - (-mu).ln());
    for (k, z) in zeta_neg {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        sum += z * mu.powi(k) / fact;
    }
    sum
}

/// Exact non-retarded pressure `−ħ/(8π²d³) ∫ Li₃(Δ₃₁Δ₃₂) dξ` for a film
/// between two media.
pub fn nonretarded_pressure(
    substrate: &DielectricModel,
    ambient: &DielectricModel,
    film: &DielectricModel,
    d: f64,
) -> f64 {
    let delta = |side: &DielectricModel, xi: f64| {
        if side.is_perfect_reflector() {
            return -1.0;
        }
        let e3 = film.epsilon(xi).unwrap();
        let ei = side.epsilon(xi).unwrap();
        (e3 - ei) / (e3 + ei)
    };
    let scale = [substrate, ambient, film]
        .iter()
        .filter_map(|m| m.omega_p())
        .fold(0.0_f64, f64::max);
    let tol = Tolerance::new(1e-11, 0.0, 400);
    let r = integrate_to_infinity(|xi| li3(delta(substrate, xi) * delta(ambient, xi)), scale, &tol);
    assert!(r.converged);
    -cfs_core::constants::HBAR / (8.0 * PI * PI * d.powi(3)) * r.value
}
