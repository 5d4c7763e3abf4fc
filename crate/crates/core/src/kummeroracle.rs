//! Eigenvalues as roots of a boundary determinant in Kummer's function.
//!
//! The solution of `H_{m,b} u = λu` regular at the origin is
//! `r^m e^{-br²/4} M(a, m+1, br²/2)` with `a = (1 - λ/b)/2`. Imposing the
//! boundary condition at `r = 1` with `z = b/2` gives
//!
//! ```text
//! Dirichlet  M(a, m+1, z)
//! Neumann    2b M'(a, m+1, z) - (b - 2m) M(a, m+1, z)
//! Robin      2b M'(a, m+1, z) - (b - 2m + 2γ) M(a, m+1, z)
//! ```
//!
//! The series for `M` loses about `z / ln 10` digits, so `b` is capped at 40.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::specfun::{kummer_m, kummer_m_dz};
use crate::trialstate::{BoundaryCondition, FiberSpec};

pub const MIN_B_DETERMINANT: f64 = 1.0;
pub const MIN_B_EIGENVALUE: f64 = 10.0;
pub const MAX_B: f64 = 40.0;
pub const SAMPLES_PER_WINDOW: usize = 64;
pub const MIN_TOL: f64 = 1e-12;

/// A reduced fiber `m >= 0` as seen by the determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantSpec {
    pub m: u32,
    pub b: f64,
    pub bc: BoundaryCondition,
}

impl DeterminantSpec {
    pub fn new(m: u32, b: f64, bc: BoundaryCondition) -> Result<Self> {
        if !(MIN_B_DETERMINANT..=MAX_B).contains(&b) {
            return Err(Error::InvalidArgument("determinant needs 1 <= b <= 40"));
        }
        Ok(Self { m, b, bc })
    }

    /// The reduced problem of a fiber; the caller adds [`FiberSpec::shift`].
    pub fn from_fiber(spec: &FiberSpec) -> Result<Self> {
        Self::new(spec.reduced_m(), spec.b, spec.bc)
    }
}

/// Boundary determinant at `lambda`.
pub fn boundary_determinant(spec: &DeterminantSpec, lambda: f64) -> Result<f64> {
    let b = spec.b;
    let a = 0.5 * (1.0 - lambda / b);
    let c = spec.m as f64 + 1.0;
    let z = 0.5 * b;
    let m = kummer_m(a, c, z)?;
    let Some(gamma) = spec.bc.robin_gamma() else {
        return Ok(m);
    };
    let dm = kummer_m_dz(a, c, z)?;
    Ok(2.0 * b * dm - (b - 2.0 * spec.m as f64 + 2.0 * gamma) * m)
}

/// Scan window `k`: `[(2k-1)b - b/2, (2k-1)b + b/2]`.
pub fn window(k: u32, b: f64) -> (f64, f64) {
    let centre = (2 * k - 1) as f64 * b;
    (centre - 0.5 * b, centre + 0.5 * b)
}

fn scan(spec: &DeterminantSpec, k: u32) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = window(k, spec.b);
    let xs: Vec<f64> = (0..=SAMPLES_PER_WINDOW)
        .map(|i| lo + (hi - lo) * i as f64 / SAMPLES_PER_WINDOW as f64)
        .collect();
    let ys = xs
        .iter()
        .map(|&x| boundary_determinant(spec, x))
        .collect::<Result<Vec<_>>>()?;
    Ok((xs, ys))
}

fn sign_changes(ys: &[f64]) -> usize {
    ys.windows(2)
        .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .count()
}

/// Number of sign changes of the determinant in window `k`.
pub fn window_sign_changes(spec: &DeterminantSpec, k: u32) -> Result<usize> {
    Ok(sign_changes(&scan(spec, k)?.1))
}

/// Start of the ordered scan: below every eigenvalue of the fiber.
fn scan_start(spec: &DeterminantSpec) -> f64 {
    let g = spec.bc.robin_gamma().unwrap_or(0.0).max(0.0);
    -0.5 * spec.b - g * g - 2.0 * g
}

/// End of the ordered scan for the `n`-th root.
fn scan_cap(spec: &DeterminantSpec, n: u32) -> f64 {
    let m = spec.m as f64;
    (2 * n + 1) as f64 * spec.b + 2.0 * m * spec.b + m * m
}

/// `n`-th root of the determinant in `λ`.
///
/// `λ` is scanned upward from below the spectrum in consecutive windows of
/// width `b`, each sampled at 64 points; the `n`-th sign change is then
/// bisected until the bracket is narrower than `tol · (1 + |λ|)`. Roots of
/// the determinant are exactly the (simple) eigenvalues, so counting sign
/// changes in order gives the branch index even where the root has left
/// its Landau window `(2n-1)b ± b/2`.
pub fn eigenvalue(spec: &DeterminantSpec, n: u32, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("branch index n must be >= 1"));
    }
    if !(MIN_B_EIGENVALUE..=MAX_B).contains(&spec.b) {
        return Err(Error::InvalidArgument(
            "eigenvalue search needs 10 <= b <= 40",
        ));
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::InvalidArgument("tolerance must be >= 1e-12"));
    }
    let b = spec.b;
    let start = scan_start(spec);
    let cap = scan_cap(spec, n);
    let step = b / SAMPLES_PER_WINDOW as f64;
    let mut found = 0usize;
    let mut x0 = start;
    let mut f0 = boundary_determinant(spec, x0)?;
    let mut profile = Vec::with_capacity(SAMPLES_PER_WINDOW + 1);
    let mut w = 0u32;
    while x0 < cap {
        profile.clear();
        profile.push(f0);
        for i in 1..=SAMPLES_PER_WINDOW {
            let x1 = start + (w as usize * SAMPLES_PER_WINDOW + i) as f64 * step;
            let f1 = boundary_determinant(spec, x1)?;
            profile.push(f1);
            if (f0 < 0.0) != (f1 < 0.0) {
                found += 1;
                if found == n as usize {
                    return bisect(spec, x0, x1, f0, tol);
                }
            }
            x0 = x1;
            f0 = f1;
        }
        w += 1;
    }
    Err(Error::RootNotIsolated {
        window: w,
        sign_changes: found,
        profile,
    })
}

fn bisect(spec: &DeterminantSpec, mut lo: f64, mut hi: f64, flo: f64, tol: f64) -> Result<f64> {
    let lo_negative = flo < 0.0;
    while hi - lo > tol * (1.0 + hi.abs().max(lo.abs())) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = boundary_determinant(spec, mid)?;
        if f == 0.0 {
            return Ok(mid);
        }
        if (f < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// [`eigenvalue`] for a fiber of any sign of `m`, shift included.
pub fn fiber_eigenvalue(spec: &FiberSpec, n: u32, tol: f64) -> Result<f64> {
    Ok(eigenvalue(&DeterminantSpec::from_fiber(spec)?, n, tol)? + spec.shift())
}
