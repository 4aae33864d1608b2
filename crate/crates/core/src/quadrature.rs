//! Adaptive 21-point Gauss–Kronrod quadrature on finite and semi-infinite
//! intervals.
//!
//! Panels are kept in a max-heap keyed on their local error estimate and the
//! worst one is bisected until the global error meets the tolerance or the
//! subdivision budget runs out. The local error estimate follows QUADPACK's
//! `qk21` rescaling.

// Nodes and weights are quoted as published.
#![allow(clippy::excessive_precision)]

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and budget for one adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64, max_subdivisions: usize) -> Self {
        Tolerance {
            rel,
            abs,
            max_subdivisions,
        }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    /// Integral of `|f|`, used to judge cancellation.
    pub abs_value: f64,
    pub subdivisions: usize,
    /// Whether `error <= max(abs, rel * |value|)` was reached.
    pub converged: bool,
}

impl Integral {
    /// Accepts cancellation-limited results whose error is still small
    /// relative to `∫|f|`; anything else becomes [`Error::NonConvergence`].
    pub fn into_result(self, tol: &Tolerance) -> Result<Integral> {
        if self.converged || self.error <= tol.rel * self.abs_value {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                estimate: self.value,
                error: self.error,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = libm::fabs(kronrod);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (libm::fabs(f1) + libm::fabs(f2));
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * libm::fabs(fc - mean);
    for j in 0..10 {
        asc += WGK[j] * (libm::fabs(fv1[j] - mean) + libm::fabs(fv2[j] - mean));
    }
    let abs_half = libm::fabs(half);
    let value = kronrod * half;
    let abs_value = abs_sum * abs_half;
    let asc = asc * abs_half;
    let mut error = libm::fabs((kronrod - gauss) * half);
    if asc != 0.0 && error != 0.0 {
        let scale = libm::pow(200.0 * error / asc, 1.5);
        error = if scale < 1.0 { asc * scale } else { asc };
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * abs_value;
        if floor > error {
            error = floor;
        }
    }
    Panel {
        a,
        b,
        value,
        error,
        abs_value,
    }
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
///
/// Always returns the best estimate; check [`Integral::converged`] or call
/// [`Integral::into_result`].
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Integral {
    let first = gauss_kronrod(&mut f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    let target = |v: f64| libm::fmax(tol.abs, tol.rel * libm::fabs(v));
    while error > target(value) && subdivisions < tol.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // Interval exhausted at machine resolution: nothing more to gain.
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) {
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(&mut f, worst.a, mid);
        let right = gauss_kronrod(&mut f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Re-sum periodically so the running totals do not drift.
        if subdivisions % 32 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    value = heap.iter().map(|p| p.value).sum();
    error = heap.iter().map(|p| p.error).sum();
    let abs_value = heap.iter().map(|p| p.abs_value).sum();
    Integral {
        value,
        error,
        abs_value,
        subdivisions,
        converged: error <= target(value),
    }
}

/// Adaptive integral of `f` over `[0, ∞)` using `x = scale·t/(1−t)`.
///
/// `scale` should sit near the abscissa where `f` does most of its work.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, scale: f64, tol: &Tolerance) -> Integral {
    integrate(
        |t| {
            let one_minus = 1.0 - t;
            let x = scale * t / one_minus;
            if !x.is_finite() {
                return 0.0;
            }
            let v = f(x) * scale / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}
