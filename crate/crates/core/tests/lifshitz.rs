mod common;

use std::f64::consts::PI;

use cfs_core::constants::{C, HBAR};
use cfs_core::dielectric::DielectricModel::{self, PerfectReflector, Vacuum};
use cfs_core::lifshitz::{energy_per_area, energy_second_derivative, pressure, vacuum_quantities, QuadratureSpec};
use cfs_core::LayerStack;
use common::*;
use proptest::prelude::*;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn mirrors(d: f64) -> LayerStack {
    LayerStack::new(PerfectReflector, PerfectReflector, Vacuum, d).unwrap()
}

#[test]
fn trilogarithm_reference_values() {
    // mpmath polylog(3, x)
    let reference = [
        (0.1, 0.101_288_684_479_223),
        (0.5, 0.537_213_193_608_040_2),
        (0.51, 0.548_880_299_737_212_4),
        (0.9, 1.049_658_950_186_44),
        (0.999, 1.200_415_353_995_464_3),
        (1.0, 1.202_056_903_159_594_2),
        (-0.3, -0.289_640_034_141_831),
        (-0.9, -0.818_638_201_544_363_8),
        (-1.0, -0.901_542_677_369_695_7),
    ];
    for (x, v) in reference {
        assert!(rel(li3(x), v) < 1e-14, "{x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ideal_mirrors_match_casimir(log_d in -8.0f64..-5.0) {
        let d = 10f64.powf(log_d);
        let k = PI * PI * HBAR * C / 720.0;
        let v = vacuum_quantities(&mirrors(d), &quad()).unwrap();
        prop_assert!(rel(v.energy_per_area.value, -k / d.powi(3)) < 1e-6);
        prop_assert!(rel(v.pressure.value, -3.0 * k / d.powi(4)) < 1e-6);
        prop_assert!(rel(v.energy_second_derivative.value, -12.0 * k / d.powi(5)) < 1e-6);
    }

    #[test]
    fn pressure_is_minus_energy_slope(log_d in -8.5f64..-7.0, log_w in 15.0f64..16.7, x in 0.0f64..0.6) {
        let d = 10f64.powf(log_d);
        let w = 10f64.powf(log_w);
        let film = DielectricModel::drude(w, x * w).unwrap();
        let stack = LayerStack::deposited(DielectricModel::plasma(3.0 * w).unwrap(), film, d).unwrap();
        let h = d * 1e-4;
        let at = |t: f64| stack.with_thickness(t).unwrap();
        let e_plus = energy_per_area(&at(d + h), &quad()).unwrap().value;
        let e_minus = energy_per_area(&at(d - h), &quad()).unwrap().value;
        let p = pressure(&stack, &quad()).unwrap().value;
        prop_assert!(rel(-(e_plus - e_minus) / (2.0 * h), p) < 1e-4);

        let p_plus = pressure(&at(d + h), &quad()).unwrap().value;
        let p_minus = pressure(&at(d - h), &quad()).unwrap().value;
        let e2 = energy_second_derivative(&stack, &quad()).unwrap().value;
        prop_assert!(rel(-(p_plus - p_minus) / (2.0 * h), e2) < 1e-4);
    }

    #[test]
    fn free_standing_is_attractive(log_d in -9.0f64..-6.5, log_w in 14.0f64..17.5, x in 0.0f64..2.0) {
        let d = 10f64.powf(log_d);
        let w = 10f64.powf(log_w);
        let film = DielectricModel::drude(w, x * w).unwrap();
        let v = vacuum_quantities(&LayerStack::free_standing(film, d).unwrap(), &quad()).unwrap();
        prop_assert!(v.energy_per_area.value < 0.0);
        prop_assert!(v.pressure.value < 0.0);
        prop_assert!(v.energy_second_derivative.value < 0.0);
    }

    #[test]
    fn film_on_mirror_is_repulsive(log_d in -9.0f64..-6.5, log_w in 14.0f64..17.5, x in 0.0f64..2.0) {
        let d = 10f64.powf(log_d);
        let w = 10f64.powf(log_w);
        let film = DielectricModel::drude(w, x * w).unwrap();
        let v = vacuum_quantities(&LayerStack::deposited(PerfectReflector, film, d).unwrap(), &quad()).unwrap();
        prop_assert!(v.energy_per_area.value > 0.0);
        prop_assert!(v.pressure.value > 0.0);
        prop_assert!(v.energy_second_derivative.value > 0.0);
    }
}

#[test]
fn thin_films_approach_the_nonretarded_limit() {
    let plasma = DielectricModel::plasma(2e15).unwrap();
    let film = DielectricModel::drude(1e16, 3e15).unwrap();
    let substrate = DielectricModel::drude(4e16, 3e15).unwrap();
    let cases = [
        (Vacuum, Vacuum, plasma, 2e15),
        (PerfectReflector, Vacuum, plasma, 2e15),
        (substrate, Vacuum, film, 4e16),
    ];
    for (sub, amb, f, w_max) in cases {
        let mut previous = 0.0;
        for d in [1e-10, 3e-10, 1e-9] {
            let stack = LayerStack::new(sub, amb, f, d).unwrap();
            let full = pressure(&stack, &quad()).unwrap().value;
            let oracle = nonretarded_pressure(&sub, &amb, &f, d);
            let dev = full / oracle - 1.0;
            // Retardation only weakens the force, by O(dΩ/c).
            assert!(dev < 0.0, "{sub:?} {d}");
            assert!(-dev < d * w_max / C, "{sub:?} {d}: {dev}");
            assert!(-dev > previous);
            previous = -dev;
        }
    }
}

#[test]
fn exact_zero_cases() {
    let film = DielectricModel::plasma(1e16).unwrap();
    for stack in [
        LayerStack::new(film, film, film, 1e-8).unwrap(),
        LayerStack::free_standing(Vacuum, 1e-8).unwrap(),
    ] {
        let v = vacuum_quantities(&stack, &quad()).unwrap();
        assert_eq!(v.energy_per_area.value, 0.0);
        assert_eq!(v.pressure.value, 0.0);
        assert_eq!(v.energy_second_derivative.value, 0.0);
    }
}

#[test]
fn thick_films_decouple() {
    let film = DielectricModel::plasma(1e16).unwrap();
    let thin = pressure(&LayerStack::free_standing(film, 1e-8).unwrap(), &quad()).unwrap();
    let thick = pressure(&LayerStack::free_standing(film, 1e-6).unwrap(), &quad()).unwrap();
    assert!(thick.value.abs() < 1e-20 * thin.value.abs());
}

#[test]
fn tolerance_is_honoured() {
    let film = DielectricModel::drude(5e15, 1e15).unwrap();
    let stack = LayerStack::deposited(DielectricModel::plasma(2e16).unwrap(), film, 2e-8).unwrap();
    let tight = pressure(&stack, &quad().with_rel_tol(1e-11)).unwrap();
    let loose = pressure(&stack, &quad().with_rel_tol(1e-5)).unwrap();
    assert!(loose.error <= 1e-5 * loose.value.abs());
    assert!((loose.value - tight.value).abs() <= 1e-5 * tight.value.abs());
    let scaled = QuadratureSpec {
        xi_scale: Some(3e16),
        ..quad()
    };
    let other = pressure(&stack, &scaled).unwrap();
    assert!(rel(other.value, tight.value) < 1e-7);
}

#[test]
fn drude_regression_anchor() {
    let film = DielectricModel::drude(2e15, 1e14).unwrap();
    let p = pressure(&LayerStack::free_standing(film, 5e-8).unwrap(), &quad()).unwrap();
    // Frozen from the first validated run.
    assert!(rel(p.value, -1.138_036_485_924e1) < 1e-7);
    assert!(p.error <= 1e-8 * p.value.abs());
}
