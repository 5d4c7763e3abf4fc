//! Closed-form inner products of trial states and the eigenvalue bounds
//! built from them.
//!
//! With `s = br²/2` and `Z = b/2` every inner product of trial states (and
//! of their residuals) reduces to integrals of `s^k` against `e^{Z-s}`,
//! `e^{s-Z}` or `1` over `[0, Z]`, times `2^m / b^{m+1}`. Those are summed
//! exactly; nothing here is asymptotic except [`asymptotic_eig`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, Side};
use crate::linalg::{cholesky, generalized_eigenvalues};
use crate::math::{exp, ln, ln_factorial, ln_gamma, powi, sum_descending};
use crate::specfun::{exp_lower_int_scaled, gamma_upper_int_scaled, LaguerreSpec};
use crate::trialstate::{BoundaryCondition, FiberSpec, TrialCoeffs, TrialState};

/// Default `C` in the Landau floor `(2n-1)b - C`.
pub const DEFAULT_FLOOR_CONSTANT: f64 = 2.0;

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `Q(s) = 2s L'(s) + (m+1) L(s)`.
fn residual_poly(m: u32, lag: &[f64]) -> Vec<f64> {
    lag.iter()
        .enumerate()
        .map(|(l, a)| (2 * l as u32 + m + 1) as f64 * a)
        .collect()
}

/// The three integrals over `[0, Z]` of `s^m P(s)` against the three
/// envelopes, each as a list of terms to be summed by the caller.
struct Moments {
    m: u32,
    z: f64,
}

impl Moments {
    /// `∫ s^m P(s) e^{Z-s} ds`, with `orth` the full-line value
    /// `∫_0^∞ s^m P e^{-s}` supplied exactly.
    fn decay(&self, p: &[f64], orth: f64, out: &mut Vec<f64>) {
        if orth != 0.0 {
            out.push(exp(self.z) * orth);
        }
        for (i, c) in p.iter().enumerate() {
            out.push(-c * gamma_upper_int_scaled(self.m + i as u32, self.z));
        }
    }

    /// `∫ s^m P(s) e^{s-Z} ds`.
    fn growth(&self, p: &[f64], out: &mut Vec<f64>, scale: f64) {
        for (i, c) in p.iter().enumerate() {
            out.push(scale * c * exp_lower_int_scaled(self.m + i as u32, self.z));
        }
    }

    /// `∫ s^m P(s) ds`.
    fn flat(&self, p: &[f64], out: &mut Vec<f64>, scale: f64) {
        for (i, c) in p.iter().enumerate() {
            let k = self.m + i as u32;
            out.push(scale * c * powi(self.z, k + 1) / (k + 1) as f64);
        }
    }
}

/// `2^m / b^{m+1}`, the Jacobian of `r ↦ s` including `r^{2m}`.
fn prefactor(m: u32, b: f64) -> f64 {
    powi(2.0 / b, m) / b
}

/// `∫_0^∞ s^m L^m_{i-1} L^m_{j-1} e^{-s} ds`.
fn laguerre_orthogonality(m: u32, i: u32, j: u32) -> f64 {
    if i != j {
        0.0
    } else {
        exp(ln_gamma((m + i) as f64) - ln_factorial(i - 1))
    }
}

/// `⟨u_i, u_j⟩` for trial states sharing `m` and `b`.
fn gram_entry(m: u32, b: f64, i: u32, ci: TrialCoeffs, j: u32, cj: TrialCoeffs) -> f64 {
    let li = LaguerreSpec::new(m, i - 1).coefficients();
    let lj = LaguerreSpec::new(m, j - 1).coefficients();
    let p = poly_mul(&li, &lj);
    let mo = Moments { m, z: 0.5 * b };
    let mut terms = Vec::new();
    let mut dec = Vec::new();
    mo.decay(&p, laguerre_orthogonality(m, i, j), &mut dec);
    terms.extend(dec.into_iter().map(|t| ci.c1 * cj.c1 * t));
    mo.growth(&p, &mut terms, ci.c2 * cj.c2);
    mo.flat(&p, &mut terms, ci.c1 * cj.c2 + ci.c2 * cj.c1);
    prefactor(m, b) * sum_descending(terms)
}

/// `⟨R_i, u_j⟩`.
fn residual_entry(m: u32, b: f64, i: u32, ci: TrialCoeffs, j: u32, cj: TrialCoeffs) -> f64 {
    if ci.c2 == 0.0 {
        return 0.0;
    }
    let q = residual_poly(m, &LaguerreSpec::new(m, i - 1).coefficients());
    let lj = LaguerreSpec::new(m, j - 1).coefficients();
    let p = poly_mul(&q, &lj);
    let mo = Moments { m, z: 0.5 * b };
    let mut terms = Vec::new();
    mo.flat(&p, &mut terms, cj.c1);
    mo.growth(&p, &mut terms, cj.c2);
    -2.0 * b * ci.c2 * prefactor(m, b) * sum_descending(terms)
}

/// `⟨R_i, R_j⟩`.
fn residual_residual(m: u32, b: f64, i: u32, ci: TrialCoeffs, j: u32, cj: TrialCoeffs) -> f64 {
    if ci.c2 == 0.0 || cj.c2 == 0.0 {
        return 0.0;
    }
    let qi = residual_poly(m, &LaguerreSpec::new(m, i - 1).coefficients());
    let qj = residual_poly(m, &LaguerreSpec::new(m, j - 1).coefficients());
    let p = poly_mul(&qi, &qj);
    let mo = Moments { m, z: 0.5 * b };
    let mut terms = Vec::new();
    mo.growth(&p, &mut terms, 1.0);
    4.0 * b * b * ci.c2 * cj.c2 * prefactor(m, b) * sum_descending(terms)
}

/// `‖u_{m,n}‖²` with the given coefficients, as an exact finite sum.
pub fn norm_sq_closed(m: u32, n: u32, b: f64, coeffs: TrialCoeffs) -> f64 {
    gram_entry(m, b, n, coeffs, n, coeffs)
}

/// Closed-form quantities of a single trial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMoments {
    /// `‖u‖²`
    pub norm_sq: f64,
    /// `⟨u, R⟩`
    pub u_r: f64,
    /// `⟨R, R⟩`
    pub r_r: f64,
    /// `(2n-1) b`
    pub level: f64,
}

impl StateMoments {
    pub fn of(state: &TrialState) -> Self {
        let (m, n, b, c) = (state.m, state.n, state.b, state.coeffs);
        Self {
            norm_sq: gram_entry(m, b, n, c, n, c),
            u_r: residual_entry(m, b, n, c, n, c),
            r_r: residual_residual(m, b, n, c, n, c),
            level: state.landau_level(),
        }
    }

    /// `⟨Hu, u⟩`
    pub fn hu_u(&self) -> f64 {
        self.level * self.norm_sq + self.u_r
    }

    /// `⟨Hu, Hu⟩ = (2n-1)b ⟨Hu, u⟩ + ⟨Hu, R⟩`
    pub fn hu_hu(&self) -> f64 {
        sum_descending(vec![
            self.level * self.level * self.norm_sq,
            2.0 * self.level * self.u_r,
            self.r_r,
        ])
    }

    /// Rayleigh quotient `⟨Hu, u⟩ / ‖u‖²`.
    pub fn rayleigh(&self) -> f64 {
        self.level + self.u_r / self.norm_sq
    }

    /// Temple quotient `(ν⟨Hu,u⟩ - ⟨Hu,Hu⟩) / (ν‖u‖² - ⟨Hu,u⟩)`, written
    /// around `(2n-1) b` so the leading parts cancel analytically.
    pub fn temple(&self, nu: f64) -> f64 {
        let delta = nu - self.level;
        self.level + (delta * self.u_r - self.r_r) / (delta * self.norm_sq - self.u_r)
    }
}

/// Gram and H-Gram matrices of `u_{m,1}, …, u_{m,n}` (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct GramPair {
    pub n: usize,
    pub gram: Vec<f64>,
    pub hgram: Vec<f64>,
}

impl GramPair {
    pub fn gram(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.n + j]
    }

    pub fn hgram(&self, i: usize, j: usize) -> f64 {
        self.hgram[i * self.n + j]
    }

    /// Largest `|h_ij - h_ji| / max(|h_ij|, |h_ji|)`.
    pub fn hgram_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let (a, c) = (self.hgram(i, j), self.hgram(j, i));
                let scale = a.abs().max(c.abs());
                if scale > 0.0 {
                    worst = worst.max((a - c).abs() / scale);
                }
            }
        }
        worst
    }
}

/// Gram pair of the first `n_max` trial states of the reduced fiber `m >= 0`.
///
/// `hgram[i][j] = ⟨H u_i, u_j⟩` is computed one-sidedly, so it is symmetric
/// only up to rounding.
pub fn gram_pair(m: u32, n_max: u32, b: f64, bc: BoundaryCondition) -> Result<GramPair> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("need at least one trial state"));
    }
    let states = (1..=n_max)
        .map(|n| TrialState::new(m, n, b, bc))
        .collect::<Result<Vec<_>>>()?;
    let n = n_max as usize;
    let mut gram = vec![0.0; n * n];
    let mut hgram = vec![0.0; n * n];
    for (i, si) in states.iter().enumerate() {
        for (j, sj) in states.iter().enumerate() {
            let g = if j < i {
                gram[j * n + i]
            } else {
                gram_entry(m, b, si.n, si.coeffs, sj.n, sj.coeffs)
            };
            gram[i * n + j] = g;
            let r = residual_entry(m, b, si.n, si.coeffs, sj.n, sj.coeffs);
            hgram[i * n + j] = sum_descending(vec![si.landau_level() * g, r]);
        }
    }
    cholesky(&gram, n)?;
    Ok(GramPair { n, gram, hgram })
}

/// Rayleigh–Ritz upper bounds for the lowest `n` eigenvalues of the fiber,
/// ascending. Negative `m` is handled through the shift identity.
pub fn rayleigh_ritz_upper(spec: &FiberSpec, n: u32) -> Result<Vec<f64>> {
    let pair = gram_pair(spec.reduced_m(), n, spec.b, spec.bc)?;
    let mut h = pair.hgram.clone();
    let k = pair.n;
    for i in 0..k {
        for j in i + 1..k {
            let avg = 0.5 * (h[i * k + j] + h[j * k + i]);
            h[i * k + j] = avg;
            h[j * k + i] = avg;
        }
    }
    let shift = spec.shift();
    Ok(generalized_eigenvalues(&h, &pair.gram, k)?
        .into_iter()
        .map(|e| e + shift)
        .collect())
}

/// `(2n-1) b - C`.
pub fn landau_floor(n: u32, b: f64, c: f64) -> f64 {
    (2 * n - 1) as f64 * b - c
}

/// Lower neighbour bound `μ_{n-1}`: `(2n-3) b + 1`, or `-∞` for `n = 1`.
pub fn temple_mu(n: u32, b: f64) -> f64 {
    if n <= 1 {
        f64::NEG_INFINITY
    } else {
        (2 * n - 3) as f64 * b + 1.0
    }
}

/// Two-sided enclosure of one eigenvalue branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketResult {
    pub m: i32,
    pub n: u32,
    pub b: f64,
    pub bc: BoundaryCondition,
    /// Temple lower bound; `-∞` when the preconditions fail.
    pub lower: f64,
    /// Rayleigh–Ritz upper bound from the span of `u_{m,1..n}`.
    pub upper: f64,
    /// `ν_{n+1}`
    pub floor_used: f64,
    /// `μ_{n-1}`
    pub mu_used: f64,
    /// Rayleigh quotient of `u_{m,n}` alone.
    pub rho: f64,
    pub preconditions_ok: bool,
}

/// Temple lower bound from the single state `u_{m,n}`, with
/// `ν_{n+1} = (2n+1) b - floor_constant` and `μ_{n-1} = (2n-3) b + 1`.
///
/// All reported values include the shift `2|m|b` for negative `m`.
pub fn temple_lower(spec: &FiberSpec, n: u32, floor_constant: f64) -> Result<BracketResult> {
    let r = bracket(spec, n, floor_constant)?;
    if !r.preconditions_ok {
        let (side, bound) = if r.rho >= r.floor_used {
            (Side::Nu, r.floor_used)
        } else {
            (Side::Mu, r.mu_used)
        };
        return Err(Error::PreconditionViolated {
            side,
            rho: r.rho,
            bound,
        });
    }
    Ok(r)
}

/// Like [`temple_lower`] but reports a failed precondition in the result
/// (`preconditions_ok = false`, `lower = -∞`) instead of as an error.
pub fn bracket(spec: &FiberSpec, n: u32, floor_constant: f64) -> Result<BracketResult> {
    let m = spec.reduced_m();
    let b = spec.b;
    let state = TrialState::new(m, n, b, spec.bc)?;
    let mom = StateMoments::of(&state);
    let rho = mom.rayleigh();
    let nu = landau_floor(n + 1, b, floor_constant);
    let mu = temple_mu(n, b);
    let ok = mu < rho && rho < nu;
    let lower = if ok {
        mom.temple(nu)
    } else {
        f64::NEG_INFINITY
    };
    let upper = rayleigh_ritz_upper(&spec.reduced(), n)?[n as usize - 1];
    let shift = spec.shift();
    Ok(BracketResult {
        m: spec.m,
        n,
        b,
        bc: spec.bc,
        lower: lower + shift,
        upper: upper + shift,
        floor_used: nu + shift,
        mu_used: mu + shift,
        rho: rho + shift,
        preconditions_ok: ok,
    })
}

/// Two-term large-`b` asymptotics of the `n`-th eigenvalue on fiber `m`:
///
/// ```text
/// (2n-1+|m|-m) b ± e^{-b/2} b^{2n+m} / ((n-1)! (m+n-1)! 2^{2(n-1)+m})
/// ```
///
/// `+` for Dirichlet, `-` for Neumann and Robin. For `m < 0` the correction
/// is evaluated at `|m|` and the level is shifted by `2|m| b`; the literal
/// formula with a negative exponent `2n+m` does not follow from the shift
/// identity and is not used.
pub fn asymptotic_eig(m: i32, n: u32, b: f64, bc: BoundaryCondition) -> f64 {
    let k = m.unsigned_abs();
    let level = (2 * n - 1 + k) as f64 * b - m as f64 * b;
    level + bc.correction_sign() * asymptotic_correction(k, n, b)
}

/// `e^{-b/2} b^{2n+m} / ((n-1)! (m+n-1)! 2^{2(n-1)+m})` for `m >= 0`,
/// evaluated in logarithms.
pub fn asymptotic_correction(m: u32, n: u32, b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    let log = -0.5 * b + (2 * n + m) as f64 * ln(b)
        - ln_factorial(n - 1)
        - ln_factorial(m + n - 1)
        - (2 * (n - 1) + m) as f64 * core::f64::consts::LN_2;
    exp(log)
}
