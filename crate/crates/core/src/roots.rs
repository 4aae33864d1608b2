//! Sign bracketing on a logarithmic grid followed by geometric bisection.
//!
//! The functions searched here (energy curvature against thickness or
//! substrate plasma frequency) are positive-valued in their argument and may
//! be non-monotone, so no derivative information is used.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Grid density and bisection tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    pub grid_points: usize,
    /// Stop when `hi/lo − 1` falls below this.
    pub rel_tol: f64,
    pub max_iterations: usize,
}

impl Default for RootSearch {
    fn default() -> Self {
        RootSearch {
            grid_points: 64,
            rel_tol: 1e-9,
            max_iterations: 200,
        }
    }
}

/// A sign change of `f` between two neighbouring grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// `f` goes from negative to non-negative with increasing argument.
    pub fn rising(&self) -> bool {
        self.f_lo < 0.0
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Domain("log grid needs 0 < lo < hi"));
    }
    if n < 2 {
        return Err(Error::Domain("log grid needs at least two points"));
    }
    let (a, b) = (libm::log(lo), libm::log(hi));
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => libm::exp(a + step * i as f64),
        })
        .collect())
}

/// Samples `f` on `grid` and returns its values.
pub fn sample<F>(grid: &[f64], mut f: F) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    grid.iter().map(|&x| f(x)).collect()
}

/// Brackets between consecutive samples where `f ≥ 0` flips to `f < 0` or back.
pub fn brackets(grid: &[f64], values: &[f64]) -> Vec<Bracket> {
    grid.windows(2)
        .zip(values.windows(2))
        .filter(|(_, v)| (v[0] >= 0.0) != (v[1] >= 0.0))
        .map(|(x, v)| Bracket {
            lo: x[0],
            hi: x[1],
            f_lo: v[0],
            f_hi: v[1],
        })
        .collect()
}

/// Bisects `bracket` at geometric midpoints down to `search.rel_tol`.
/// Returns the end of the final bracket where `f ≥ 0`.
pub fn bisect<F>(bracket: Bracket, search: &RootSearch, mut f: F) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut b = bracket;
    for _ in 0..search.max_iterations {
        if b.hi / b.lo - 1.0 <= search.rel_tol {
            return Ok(b);
        }
        let mid = libm::sqrt(b.lo * b.hi);
        let fm = f(mid)?;
        if (fm >= 0.0) == (b.f_lo >= 0.0) {
            b.lo = mid;
            b.f_lo = fm;
        } else {
            b.hi = mid;
            b.f_hi = fm;
        }
    }
    Err(Error::NonConvergence {
        estimate: libm::sqrt(b.lo * b.hi),
        error: b.hi - b.lo,
    })
}

/// The point of a converged bracket on the `f ≥ 0` side.
pub fn nonnegative_end(b: &Bracket) -> f64 {
    if b.f_lo >= 0.0 {
        b.lo
    } else {
        b.hi
    }
}
