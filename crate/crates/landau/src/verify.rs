//! Invariant suites behind `landau verify`.

use std::fmt;

use rayon::prelude::*;

use landau_core::fibersolver::{assemble, solve_lowest, Mesh, MeshPolicy, RESIDUAL_TOL};
use landau_core::kummeroracle::{self, DeterminantSpec};
use landau_core::math::{binomial, factorial};
use landau_core::quadrature::GaussLegendre;
use landau_core::specfun::{gamma_upper_int, kummer_m, laguerre, LaguerreSpec};
use landau_core::trialstate::{ode_residual_appendix, ode_residual_scale, OdeKind};
use landau_core::variational::{self, gram_pair};
use landau_core::{BoundaryCondition, Error, FiberSpec, TrialState};

use crate::method::{fem_eigenvalues, KUMMER_TOL};
use crate::oracles;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Specfun,
    Trial,
    Variational,
    Fiber,
    Kummer,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Trial => "trial",
            Suite::Variational => "variational",
            Suite::Fiber => "fiber",
            Suite::Kummer => "kummer",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Specfun,
                Suite::Trial,
                Suite::Variational,
                Suite::Fiber,
                Suite::Kummer,
            ],
            s => vec![s],
        }
    }
}

/// How `measured` is compared with `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub measured: f64,
    pub bound: Bound,
    pub threshold: f64,
    /// Set when the check could not be evaluated; the check then fails.
    pub error: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: &'static str, measured: f64, bound: Bound, threshold: f64) -> Self {
        Check {
            suite: suite.name(),
            name,
            measured,
            bound,
            threshold,
            error: None,
        }
    }

    fn at_most(suite: Suite, name: &'static str, measured: f64, threshold: f64) -> Self {
        Self::new(suite, name, measured, Bound::AtMost, threshold)
    }

    fn from_result(
        suite: Suite,
        name: &'static str,
        bound: Bound,
        threshold: f64,
        measured: Result<f64, Error>,
    ) -> Self {
        match measured {
            Ok(v) => Self::new(suite, name, v, bound, threshold),
            Err(e) => Check {
                error: Some(format!("{e:?}")),
                ..Self::new(suite, name, f64::NAN, bound, threshold)
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none()
            && match self.bound {
                Bound::AtMost => self.measured <= self.threshold,
                Bound::AtLeast => self.measured >= self.threshold,
            }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        write!(
            f,
            "{status} {}/{}: measured {:.3e} {op} {:.3e}",
            self.suite, self.name, self.measured, self.threshold
        )?;
        if let Some(e) = &self.error {
            write!(f, " ({e})")?;
        }
        Ok(())
    }
}

/// Options that can perturb the suites, used for fault injection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub floor_c: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            floor_c: variational::DEFAULT_FLOOR_CONSTANT,
        }
    }
}

pub fn run(pool: &rayon::ThreadPool, suite: Suite, opts: VerifyOptions) -> Vec<Check> {
    let members = suite.members();
    let mut checks: Vec<(usize, Vec<Check>)> = pool.install(|| {
        members
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let c = match s {
                    Suite::Specfun => specfun_suite(),
                    Suite::Trial => trial_suite(),
                    Suite::Variational => variational_suite(opts),
                    Suite::Fiber => fiber_suite(),
                    Suite::Kummer => kummer_suite(),
                    Suite::All => unreachable!("expanded above"),
                };
                (i, c)
            })
            .collect()
    });
    checks.sort_by_key(|(i, _)| *i);
    checks.into_iter().flat_map(|(_, c)| c).collect()
}

pub fn report(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    out.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    out
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

fn abs_horner(spec: LaguerreSpec, s: f64) -> f64 {
    let abs: Vec<f64> = spec.coefficients().iter().map(|c| c.abs()).collect();
    horner(&abs, s)
}

const S_GRID: [f64; 6] = [0.0, 0.5, 2.0, 7.5, 15.0, 25.0];

fn specfun_suite() -> Vec<Check> {
    let suite = Suite::Specfun;
    let mut bridge = 0.0f64;
    let mut bridge_err = None;
    let mut recur = 0.0f64;
    for m in 0..6 {
        for k in 0..8 {
            let spec = LaguerreSpec::new(m, k);
            let binom = binomial(k + m, k);
            for &s in &S_GRID {
                let scale = (abs_horner(spec, s) / binom).max(1.0);
                match kummer_m(-f64::from(k), f64::from(m) + 1.0, s) {
                    Ok(v) => bridge = bridge.max((v - laguerre(spec, s) / binom).abs() / scale),
                    Err(e) => bridge_err = Some(e),
                }
                let mono = horner(&spec.coefficients(), s);
                recur = recur.max((laguerre(spec, s) - mono).abs() / (scale * binom));
            }
        }
    }
    let gl = GaussLegendre::new(16);
    let mut complement = 0.0f64;
    for k in 0..10 {
        for &z in &[0.0, 0.3, 1.0, 4.0, 12.0, 30.0] {
            let lower = gl.integrate_composite(0.0, z, 64, |s| (-s).exp() * s.powi(k as i32));
            let total = factorial(k);
            complement = complement.max((lower + gamma_upper_int(k, z) - total).abs() / total);
        }
    }
    let mut ortho = 0.0f64;
    for m in 0..4 {
        for i in 1..=4 {
            for j in 1..=4 {
                let exact_ii = |d: u32| factorial(m + d - 1) / factorial(d - 1);
                let got = laguerre_inner(m, i - 1, j - 1);
                let expect = if i == j { exact_ii(i) } else { 0.0 };
                let scale = (exact_ii(i) * exact_ii(j)).sqrt();
                ortho = ortho.max((got - expect).abs() / scale);
            }
        }
    }
    vec![
        Check::from_result(
            suite,
            "kummer-laguerre bridge",
            Bound::AtMost,
            1e-12,
            bridge_err.map_or(Ok(bridge), Err),
        ),
        Check::at_most(suite, "laguerre recurrence vs monomials", recur, 1e-12),
        Check::at_most(suite, "upper gamma plus lower integral", complement, 1e-12),
        Check::at_most(suite, "laguerre orthogonality", ortho, 1e-10),
    ]
}

/// `∫_0^∞ s^m L^m_i L^m_j e^{-s} ds` from the monomial product and
/// `Γ(m+k+1, 0)`.
pub fn laguerre_inner(m: u32, i: u32, j: u32) -> f64 {
    let a = LaguerreSpec::new(m, i).coefficients();
    let c = LaguerreSpec::new(m, j).coefficients();
    let mut sum = 0.0;
    for (p, x) in a.iter().enumerate() {
        for (q, y) in c.iter().enumerate() {
            sum += x * y * gamma_upper_int(m + (p + q) as u32, 0.0);
        }
    }
    sum
}

fn trial_suite() -> Vec<Check> {
    let suite = Suite::Trial;
    let mut defect = 0.0f64;
    for m in 0..=5 {
        for n in 1..=4 {
            for b in [10.0, 20.0, 30.0, 40.0] {
                for bc in [
                    BoundaryCondition::Dirichlet,
                    BoundaryCondition::Neumann,
                    BoundaryCondition::Robin { gamma: 1.0 },
                ] {
                    // A vanishing coefficient denominator has no trial state to check.
                    if let Ok(t) = TrialState::new(m, n, b, bc) {
                        defect = defect.max(t.boundary_defect());
                    }
                }
            }
        }
    }
    vec![
        Check::at_most(suite, "boundary condition defect", defect, 1e-9),
        Check::at_most(suite, "appendix identities", appendix_worst(), 1e-8),
    ]
}

/// Worst relative residual of the four differential identities at 20
/// points for `m <= 3`, `n <= 3`, `b` in {8, 20}.
pub fn appendix_worst() -> f64 {
    let mut worst = 0.0f64;
    for m in 0..=3 {
        for n in 1..=3 {
            for b in [8.0, 20.0] {
                for i in 0..20 {
                    let r = 0.05 * f64::from(i + 1);
                    for kind in [OdeKind::F, OdeKind::V, OdeKind::Laguerre, OdeKind::G] {
                        let point = if kind == OdeKind::Laguerre {
                            0.5 * b * r * r
                        } else {
                            r
                        };
                        let res = ode_residual_appendix(kind, m, n, b, point);
                        let scale = ode_residual_scale(kind, m, n, b, point).max(f64::MIN_POSITIVE);
                        worst = worst.max(res.abs() / scale);
                    }
                }
            }
        }
    }
    worst
}

/// Worst relative mismatch between the closed-form Gram pair and
/// quadrature, each entry measured against its own magnitude.
pub fn gram_quadrature_worst(
    m: u32,
    n_max: u32,
    b: f64,
    bc: BoundaryCondition,
) -> Result<f64, Error> {
    let pair = gram_pair(m, n_max, b, bc)?;
    let mut worst = 0.0f64;
    for i in 0..pair.n {
        for j in 0..pair.n {
            let (g, h) = oracles::gram_by_quadrature(m, i as u32 + 1, j as u32 + 1, b, bc)?;
            worst = worst.max((pair.gram(i, j) - g).abs() / g.abs());
            worst = worst.max((pair.hgram(i, j) - h).abs() / h.abs());
        }
    }
    Ok(worst)
}

fn variational_suite(opts: VerifyOptions) -> Vec<Check> {
    let suite = Suite::Variational;
    // Off-diagonal entries are orders of magnitude below the diagonal, so
    // this suite compares diagonals only.
    let mut diag = 0.0f64;
    let mut diag_err = None;
    let mut asym = 0.0f64;
    for m in 0..=3 {
        for b in [10.0, 20.0, 30.0] {
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
                match gram_pair(m, 3, b, bc) {
                    Ok(pair) => {
                        asym = asym.max(pair.hgram_asymmetry());
                        for i in 0..3 {
                            let n = i as u32 + 1;
                            match oracles::gram_by_quadrature(m, n, n, b, bc) {
                                Ok((g, h)) => {
                                    diag = diag.max((pair.gram(i, i) - g).abs() / g.abs());
                                    diag = diag.max((pair.hgram(i, i) - h).abs() / h.abs());
                                }
                                Err(e) => diag_err = Some(e),
                            }
                        }
                    }
                    Err(e) => diag_err = Some(e),
                }
            }
        }
    }
    vec![
        Check::from_result(
            suite,
            "gram diagonal vs quadrature",
            Bound::AtMost,
            1e-9,
            diag_err.map_or(Ok(diag), Err),
        ),
        Check::at_most(suite, "h-gram asymmetry", asym, 1e-6),
        Check::from_result(
            suite,
            "bracket encloses fem",
            Bound::AtMost,
            0.0,
            bracket_violation(opts.floor_c),
        ),
    ]
}

/// Largest amount by which a Temple/Rayleigh–Ritz bracket misses the
/// finite-element value, over a grid deep in the asymptotic regime.
/// Any failed Temple precondition is returned as the error.
fn bracket_violation(floor_c: f64) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for m in 0..=1 {
        for n in 1..=2 {
            for b in [25.0, 30.0] {
                for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
                    let spec = FiberSpec::new(m, b, bc)?;
                    let r = variational::temple_lower(&spec, n, floor_c)?;
                    let fem = fem_eigenvalues(&spec, n)?[n as usize - 1];
                    let slack = 1e-9 * (1.0 + fem);
                    worst = worst.max(r.lower - fem - slack).max(fem - r.upper - slack);
                }
            }
        }
    }
    Ok(worst)
}

fn fem_uniform(bc: BoundaryCondition, k: usize, elements: usize) -> Result<f64, Error> {
    let spec = FiberSpec::new(0, 0.0, bc)?;
    let op = assemble(&spec, &Mesh::uniform(elements)?, 2)?;
    Ok(solve_lowest(&op, k)?.eigenvalues[k - 1])
}

/// Observed orders of convergence of the field-free Dirichlet ground state
/// on uniform meshes of 16, 32 and 64 elements; the smaller one.
pub fn fem_rate() -> Result<f64, Error> {
    let exact = oracles::dirichlet_free_ground_state();
    let errs = [16, 32, 64]
        .iter()
        .map(|&e| Ok((fem_uniform(BoundaryCondition::Dirichlet, 1, e)? - exact).abs() / exact))
        .collect::<Result<Vec<f64>, Error>>()?;
    Ok(errs
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .fold(f64::INFINITY, f64::min))
}

/// Largest entry of `K(-m) - K(m) - 2mb M` over a few fibers; zero when the
/// shift is applied exactly.
pub fn shift_identity_defect() -> Result<f64, Error> {
    let b = 20.0;
    let mesh = MeshPolicy::default().mesh(b)?;
    let mut worst = 0.0f64;
    for m in 1..4 {
        let pos = assemble(&FiberSpec::new(m, b, BoundaryCondition::Neumann)?, &mesh, 2)?;
        let neg = assemble(
            &FiberSpec::new(-m, b, BoundaryCondition::Neumann)?,
            &mesh,
            2,
        )?;
        let expect = pos.stiffness.axpy(2.0 * f64::from(m) * b, &pos.mass);
        worst = worst.max(neg.stiffness.axpy(-1.0, &expect).max_abs());
    }
    Ok(worst)
}

/// `|R² λ(b, radius R) - λ(bR², unit disc)| / (1 + λ)` for `R` in {1/2, 2}.
pub fn scaling_defect() -> Result<f64, Error> {
    let b = 20.0;
    let mut worst = 0.0f64;
    for radius in [0.5, 2.0] {
        let unit = MeshPolicy::default().mesh(b * radius * radius)?;
        let big = assemble(
            &FiberSpec::new(1, b, BoundaryCondition::Neumann)?,
            &unit.scaled(radius),
            2,
        )?;
        let small = assemble(
            &FiberSpec::new(1, b * radius * radius, BoundaryCondition::Neumann)?,
            &unit,
            2,
        )?;
        let x = solve_lowest(&big, 2)?.eigenvalues;
        let y = solve_lowest(&small, 2)?.eigenvalues;
        for (p, q) in x.iter().zip(&y) {
            worst = worst.max((p * radius * radius - q).abs() / (1.0 + q));
        }
    }
    Ok(worst)
}

fn fiber_suite() -> Vec<Check> {
    let suite = Suite::Fiber;
    let dir = fem_uniform(BoundaryCondition::Dirichlet, 1, 128).map(|v| {
        let exact = oracles::dirichlet_free_ground_state();
        (v - exact).abs() / exact
    });
    let neu = fem_uniform(BoundaryCondition::Neumann, 2, 128).map(|v| {
        let exact = oracles::neumann_free_second_eigenvalue();
        (v - exact).abs() / exact
    });
    let residual = (|| {
        let mut worst = 0.0f64;
        for m in [0, 2, 5] {
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
                let spec = FiberSpec::new(m, 30.0, bc)?;
                let policy = MeshPolicy::default();
                let op = assemble(&spec, &policy.mesh(30.0)?, policy.order)?;
                let r = solve_lowest(&op, 3)?;
                worst = r.residuals.iter().fold(worst, |a, &x| a.max(x));
            }
        }
        Ok(worst)
    })();
    vec![
        Check::from_result(
            suite,
            "dirichlet field-free limit",
            Bound::AtMost,
            1e-6,
            dir,
        ),
        Check::from_result(suite, "neumann field-free limit", Bound::AtMost, 1e-6, neu),
        Check::from_result(suite, "convergence rate", Bound::AtLeast, 3.5, fem_rate()),
        Check::from_result(
            suite,
            "shift identity",
            Bound::AtMost,
            0.0,
            shift_identity_defect(),
        ),
        Check::from_result(suite, "scaling law", Bound::AtMost, 1e-9, scaling_defect()),
        Check::from_result(
            suite,
            "eigenpair residual",
            Bound::AtMost,
            RESIDUAL_TOL,
            residual,
        ),
    ]
}

pub const AGREEMENT_GRID_B: [f64; 4] = [15.0, 20.0, 25.0, 30.0];

pub fn agreement_bcs() -> [BoundaryCondition; 3] {
    [
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Neumann,
        BoundaryCondition::Robin { gamma: 1.0 },
    ]
}

/// Worst `|fem - kummer| / (1 + λ)` over `m <= 3`, `n <= 3`, the agreement
/// grid of `b` and the three boundary conditions.
pub fn fem_kummer_agreement() -> Result<f64, Error> {
    let mut points = Vec::new();
    for m in 0..=3 {
        for b in AGREEMENT_GRID_B {
            for bc in agreement_bcs() {
                points.push(FiberSpec::new(m, b, bc)?);
            }
        }
    }
    let per_point = points
        .par_iter()
        .map(|spec| {
            let fem = fem_eigenvalues(spec, 3)?;
            let mut worst = 0.0f64;
            for (i, f) in fem.iter().enumerate() {
                let k = kummeroracle::fiber_eigenvalue(spec, i as u32 + 1, KUMMER_TOL)?;
                worst = worst.max((f - k).abs() / (1.0 + k));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    Ok(per_point.into_iter().fold(0.0, f64::max))
}

fn kummer_suite() -> Vec<Check> {
    let suite = Suite::Kummer;
    // Neumann roots stay inside their Landau windows once b >= 20.
    let windows = (|| {
        let mut bad = 0usize;
        for m in 0..=3 {
            for b in [20.0, 25.0, 30.0] {
                let spec = DeterminantSpec::new(m, b, BoundaryCondition::Neumann)?;
                for k in 1..=3 {
                    if kummeroracle::window_sign_changes(&spec, k)? != 1 {
                        bad += 1;
                    }
                }
            }
        }
        Ok(bad as f64)
    })();
    vec![
        Check::from_result(
            suite,
            "fem agreement",
            Bound::AtMost,
            1e-6,
            fem_kummer_agreement(),
        ),
        Check::from_result(
            suite,
            "neumann window isolation failures",
            Bound::AtMost,
            0.0,
            windows,
        ),
    ]
}
