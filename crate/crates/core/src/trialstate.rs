//! Laguerre trial states for the radial fiber operator
//!
//! ```text
//! u_{m,n}(r) = r^m L^m_{n-1}(br²/2) (c1 e^{b(1-r²)/4} + c2 e^{-b(1-r²)/4})
//! ```
//!
//! The `c1` part solves `H_{m,b} f = (2n-1) b f` on the whole plane; the
//! `c2` part is added so the combination meets the boundary condition at
//! `r = 1`. Applying the operator leaves `(2n-1) b u + R_{m,n}` with an
//! explicit residual `R_{m,n}` carried entirely by `c2`.

use crate::error::{Error, Result};
use crate::math::{exp, powi};
use crate::specfun::{laguerre, laguerre_deriv, laguerre_second_deriv, LaguerreSpec};

/// Boundary condition at `r = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    /// `u'(1) = γ u(1)`.
    Robin {
        gamma: f64,
    },
}

impl BoundaryCondition {
    /// Robin parameter, with Neumann read as `γ = 0`. `None` for Dirichlet.
    pub fn robin_gamma(&self) -> Option<f64> {
        match *self {
            BoundaryCondition::Dirichlet => None,
            BoundaryCondition::Neumann => Some(0.0),
            BoundaryCondition::Robin { gamma } => Some(gamma),
        }
    }

    /// Sign of the leading exponentially small correction: `+1` for
    /// Dirichlet, `-1` otherwise.
    pub fn correction_sign(&self) -> f64 {
        match self {
            BoundaryCondition::Dirichlet => 1.0,
            _ => -1.0,
        }
    }
}

/// One radial eigenproblem: angular momentum, field strength, boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberSpec {
    pub m: i32,
    pub b: f64,
    pub bc: BoundaryCondition,
}

impl FiberSpec {
    /// `b = 0` is accepted for the field-free limit of the finite-element
    /// solver; trial states require `b > 0`.
    pub fn new(m: i32, b: f64, bc: BoundaryCondition) -> Result<Self> {
        if !(b >= 0.0) || !b.is_finite() {
            return Err(Error::InvalidArgument(
                "field strength b must be finite and >= 0",
            ));
        }
        if let BoundaryCondition::Robin { gamma } = bc {
            if !gamma.is_finite() {
                return Err(Error::InvalidArgument("Robin parameter must be finite"));
            }
        }
        Ok(Self { m, b, bc })
    }

    /// `|m|`: the fiber actually solved.
    pub fn reduced_m(&self) -> u32 {
        self.m.unsigned_abs()
    }

    /// Eigenvalue offset from `H_{m,b} = H_{-m,b} + 2|m|b` for `m < 0`.
    pub fn shift(&self) -> f64 {
        if self.m < 0 {
            2.0 * self.m.unsigned_abs() as f64 * self.b
        } else {
            0.0
        }
    }

    /// The same problem with `m` replaced by `|m|`.
    pub fn reduced(&self) -> FiberSpec {
        FiberSpec {
            m: self.reduced_m() as i32,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialCoeffs {
    pub c1: f64,
    pub c2: f64,
}

/// Relative size below which the Neumann/Robin denominator counts as zero.
const DEGENERATE_REL: f64 = 1e-12;

/// Boundary-matched coefficients with `c1 = 1`.
pub fn coefficients(m: u32, n: u32, b: f64, bc: BoundaryCondition) -> Result<TrialCoeffs> {
    if n == 0 {
        return Err(Error::InvalidArgument("branch index n must be >= 1"));
    }
    if !(b > 0.0) {
        return Err(Error::InvalidArgument("trial states need b > 0"));
    }
    let Some(gamma) = bc.robin_gamma() else {
        return Ok(TrialCoeffs { c1: 1.0, c2: -1.0 });
    };
    let spec = LaguerreSpec::new(m, n - 1);
    let z = 0.5 * b;
    let l = laguerre(spec, z);
    let dl = laguerre_deriv(spec, z);
    let mf = m as f64;
    let num = (z - mf + gamma) * l - b * dl;
    let den = (z + mf - gamma) * l + b * dl;
    let scale = ((z + mf + gamma.abs()) * l.abs()).max((b * dl).abs());
    if den.abs() <= DEGENERATE_REL * scale || scale == 0.0 {
        return Err(Error::DegenerateDenominator { m, n, b });
    }
    Ok(TrialCoeffs {
        c1: 1.0,
        c2: num / den,
    })
}

/// `u_{m,n}` for `m >= 0` together with its boundary coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialState {
    pub m: u32,
    pub n: u32,
    pub b: f64,
    pub bc: BoundaryCondition,
    pub coeffs: TrialCoeffs,
}

impl TrialState {
    pub fn new(m: u32, n: u32, b: f64, bc: BoundaryCondition) -> Result<Self> {
        let coeffs = coefficients(m, n, b, bc)?;
        Ok(Self {
            m,
            n,
            b,
            bc,
            coeffs,
        })
    }

    /// Trial state for a (possibly negative `m`) fiber, after reduction to `|m|`.
    pub fn for_fiber(spec: &FiberSpec, n: u32) -> Result<Self> {
        Self::new(spec.reduced_m(), n, spec.b, spec.bc)
    }

    /// Same state with explicit coefficients, e.g. `c2 = 0`.
    pub fn with_coeffs(mut self, coeffs: TrialCoeffs) -> Self {
        self.coeffs = coeffs;
        self
    }

    pub fn laguerre_spec(&self) -> LaguerreSpec {
        LaguerreSpec::new(self.m, self.n - 1)
    }

    fn envelopes(&self, r: f64) -> (f64, f64) {
        let q = 0.25 * self.b * (1.0 - r * r);
        (exp(q), exp(-q))
    }

    /// `u_{m,n}(r)`.
    pub fn eval(&self, r: f64) -> f64 {
        let s = 0.5 * self.b * r * r;
        let (grow, decay) = self.envelopes(r);
        powi(r, self.m)
            * laguerre(self.laguerre_spec(), s)
            * (self.coeffs.c1 * grow + self.coeffs.c2 * decay)
    }

    /// `u'_{m,n}(r)`.
    pub fn deriv(&self, r: f64) -> f64 {
        let b = self.b;
        let s = 0.5 * b * r * r;
        let spec = self.laguerre_spec();
        let l = laguerre(spec, s);
        let dl = laguerre_deriv(spec, s);
        let (grow, decay) = self.envelopes(r);
        let TrialCoeffs { c1, c2 } = self.coeffs;
        let env = c1 * grow + c2 * decay;
        let denv = -0.5 * b * r * (c1 * grow - c2 * decay);
        let rm = powi(r, self.m);
        let drm = if self.m == 0 {
            0.0
        } else {
            self.m as f64 * powi(r, self.m - 1)
        };
        drm * l * env + rm * b * r * dl * env + rm * l * denv
    }

    /// `R_{m,n}(r) = -2b c2 r^m e^{-b(1-r²)/4} (br² L'(br²/2) + (m+1) L(br²/2))`.
    pub fn residual(&self, r: f64) -> f64 {
        let b = self.b;
        let s = 0.5 * b * r * r;
        let spec = self.laguerre_spec();
        let (_, decay) = self.envelopes(r);
        let bracket =
            b * r * r * laguerre_deriv(spec, s) + (self.m as f64 + 1.0) * laguerre(spec, s);
        -2.0 * b * self.coeffs.c2 * powi(r, self.m) * decay * bracket
    }

    /// `H_{m,b} u = (2n-1) b u + R`.
    pub fn apply_operator(&self, r: f64) -> f64 {
        self.landau_level() * self.eval(r) + self.residual(r)
    }

    /// `(2n-1) b`.
    pub fn landau_level(&self) -> f64 {
        (2 * self.n - 1) as f64 * self.b
    }

    /// `u(1)`, `u'(1)` and the boundary-condition defect normalized by
    /// `max(|u(1)|, |u'(1)|, 1)`.
    pub fn boundary_defect(&self) -> f64 {
        let u = self.eval(1.0);
        let du = self.deriv(1.0);
        let scale = u.abs().max(du.abs()).max(1.0);
        let defect = match self.bc.robin_gamma() {
            None => u,
            Some(gamma) => du - gamma * u,
        };
        defect.abs() / scale
    }
}

/// The four differential identities behind the trial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeKind {
    /// `H f - (2n-1) b f` with `f = r^m e^{-br²/4} v`.
    F,
    /// `-r v'' + (br² - 2m - 1) v' - (2n-2) b r v` with `v = L^m_{n-1}(br²/2)`.
    V,
    /// `s w'' + (m+1-s) w' + (n-1) w` with `w = L^m_{n-1}`.
    Laguerre,
    /// `H g - (2n-2m-3) b g + 2b r v' φ` with `g = r^m e^{br²/4} v = φ v`.
    G,
}

struct Profile {
    v: f64,
    dv: f64,
    d2v: f64,
}

fn profile(m: u32, n: u32, b: f64, r: f64) -> Profile {
    let spec = LaguerreSpec::new(m, n - 1);
    let s = 0.5 * b * r * r;
    let l1 = laguerre_deriv(spec, s);
    let l2 = laguerre_second_deriv(spec, s);
    Profile {
        v: laguerre(spec, s),
        dv: b * r * l1,
        d2v: b * l1 + b * b * r * r * l2,
    }
}

/// Terms of `H_{m,b} h = -h'' - h'/r + (m/r - br/2)² h` for `h = ρ v`
/// where `ρ = r^m e^{κ br²/4}`, `κ = ±1`. Returns the individual terms so
/// callers can form both the residual and a magnitude scale.
fn operator_terms(m: u32, b: f64, r: f64, kappa: f64, p: &Profile) -> [f64; 3] {
    let mf = m as f64;
    let rho = powi(r, m) * exp(kappa * 0.25 * b * r * r);
    // ρ'/ρ = m/r + κ br/2,  ρ''/ρ = (ρ'/ρ)² - m/r² + κ b/2
    let g1 = mf / r + kappa * 0.5 * b * r;
    let g2 = g1 * g1 - mf / (r * r) + kappa * 0.5 * b;
    let h = rho * p.v;
    let dh = rho * (g1 * p.v + p.dv);
    let d2h = rho * (g2 * p.v + 2.0 * g1 * p.dv + p.d2v);
    let pot = mf / r - 0.5 * b * r;
    [-d2h, -dh / r, pot * pot * h]
}

fn residual_and_scale(kind: OdeKind, m: u32, n: u32, b: f64, x: f64) -> (f64, f64) {
    let mf = m as f64;
    let nf = n as f64;
    match kind {
        OdeKind::Laguerre => {
            let spec = LaguerreSpec::new(m, n - 1);
            let terms = [
                x * laguerre_second_deriv(spec, x),
                (mf + 1.0 - x) * laguerre_deriv(spec, x),
                (nf - 1.0) * laguerre(spec, x),
            ];
            sum_and_scale(&terms)
        }
        OdeKind::V => {
            let p = profile(m, n, b, x);
            let terms = [
                -x * p.d2v,
                (b * x * x - 2.0 * mf - 1.0) * p.dv,
                -(2.0 * nf - 2.0) * b * x * p.v,
            ];
            sum_and_scale(&terms)
        }
        OdeKind::F => {
            let p = profile(m, n, b, x);
            let [a, c, d] = operator_terms(m, b, x, -1.0, &p);
            let f = powi(x, m) * exp(-0.25 * b * x * x) * p.v;
            sum_and_scale(&[a, c, d, -(2.0 * nf - 1.0) * b * f])
        }
        OdeKind::G => {
            let p = profile(m, n, b, x);
            let [a, c, d] = operator_terms(m, b, x, 1.0, &p);
            let phi = powi(x, m) * exp(0.25 * b * x * x);
            let g = phi * p.v;
            sum_and_scale(&[
                a,
                c,
                d,
                -(2.0 * nf - 2.0 * mf - 3.0) * b * g,
                2.0 * b * x * p.dv * phi,
            ])
        }
    }
}

fn sum_and_scale(terms: &[f64]) -> (f64, f64) {
    let sum = terms.iter().sum();
    let scale = terms.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    (sum, scale)
}

/// Left-minus-right side of the identity `kind` at `point` (`r` for the
/// radial identities, `s` for the Laguerre equation). Derivatives are
/// analytic.
pub fn ode_residual_appendix(kind: OdeKind, m: u32, n: u32, b: f64, point: f64) -> f64 {
    residual_and_scale(kind, m, n, b, point).0
}

/// Largest term magnitude in the same identity; relative residuals are
/// measured against this.
pub fn ode_residual_scale(kind: OdeKind, m: u32, n: u32, b: f64, point: f64) -> f64 {
    residual_and_scale(kind, m, n, b, point).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_deriv<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(
            coefficients(0, 1, 20.0, BoundaryCondition::Dirichlet).unwrap(),
            TrialCoeffs { c1: 1.0, c2: -1.0 }
        );
        let n = coefficients(0, 1, 20.0, BoundaryCondition::Neumann).unwrap();
        assert_eq!(n, TrialCoeffs { c1: 1.0, c2: 1.0 });
        let r = coefficients(0, 1, 20.0, BoundaryCondition::Robin { gamma: 1.0 }).unwrap();
        assert!((r.c2 - 11.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn robin_zero_is_neumann() {
        for m in 0..4 {
            for n in 1..4 {
                for &b in &[10.0, 17.5, 33.0] {
                    let a = coefficients(m, n, b, BoundaryCondition::Neumann).unwrap();
                    let c = coefficients(m, n, b, BoundaryCondition::Robin { gamma: 0.0 }).unwrap();
                    assert_eq!(a, c);
                }
            }
        }
    }

    #[test]
    fn degenerate_denominator_is_an_error() {
        // m=0, n=2: denominator (b/2)(1 - b/2) - b = -b²/4 - b/2 vanishes only at b=-2;
        // Robin with γ = b/2 + m kills the L term and leaves b L'(b/2) = -b ≠ 0.
        // Instead pick n=2, m=0 and solve (b/2 - γ)(1 - b/2) - b = 0 for γ at b = 8:
        // (4 - γ)(-3) - 8 = 0 → γ = 4 + 8/3.
        let gamma = 4.0 + 8.0 / 3.0;
        let e = coefficients(0, 2, 8.0, BoundaryCondition::Robin { gamma });
        assert_eq!(e, Err(Error::DegenerateDenominator { m: 0, n: 2, b: 8.0 }));
    }

    #[test]
    fn eval_examples() {
        let d = TrialState::new(0, 1, 20.0, BoundaryCondition::Dirichlet).unwrap();
        assert_eq!(d.eval(1.0), 0.0);
        let n = TrialState::new(0, 1, 20.0, BoundaryCondition::Neumann).unwrap();
        assert_eq!(n.eval(1.0), 2.0);
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let t = TrialState::new(2, 1, 13.0, bc).unwrap();
            assert_eq!(t.eval(0.0), 0.0);
        }
        // m = 0 at the origin: L(0) (c1 e^{b/4} + c2 e^{-b/4}).
        let t = TrialState::new(0, 2, 12.0, BoundaryCondition::Neumann).unwrap();
        let expect = 1.0 * (exp(3.0) + t.coeffs.c2 * exp(-3.0));
        assert!((t.eval(0.0) - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn deriv_examples() {
        let n = TrialState::new(0, 1, 20.0, BoundaryCondition::Neumann).unwrap();
        assert!(n.deriv(1.0).abs() < 1e-9);
        let gamma = 1.0;
        let r = TrialState::new(0, 1, 20.0, BoundaryCondition::Robin { gamma }).unwrap();
        assert!((r.deriv(1.0) - gamma * r.eval(1.0)).abs() < 1e-9);
        let d = TrialState::new(0, 1, 20.0, BoundaryCondition::Dirichlet).unwrap();
        let fd = fd_deriv(|x| d.eval(x), 1.0 - 1e-6, 1e-6);
        // u'(1) = L(10) · (-b/2)(c1 - c2) = -20
        assert!((d.deriv(1.0) + 20.0).abs() < 1e-12);
        assert!((fd - d.deriv(1.0 - 1e-6)).abs() < 1e-5);
    }

    #[test]
    fn deriv_matches_finite_differences() {
        for m in 0..4 {
            for n in 1..4 {
                for bc in [
                    BoundaryCondition::Dirichlet,
                    BoundaryCondition::Neumann,
                    BoundaryCondition::Robin { gamma: -1.0 },
                ] {
                    let t = TrialState::new(m, n, 14.0, bc).unwrap();
                    for i in 1..20 {
                        let r = i as f64 / 20.0;
                        let fd = fd_deriv(|x| t.eval(x), r, 1e-6);
                        let an = t.deriv(r);
                        let scale = t.eval(0.0).abs().max(an.abs()).max(1.0);
                        assert!((fd - an).abs() < 1e-6 * scale, "m={m} n={n} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn residual_examples() {
        let t = TrialState::new(0, 1, 20.0, BoundaryCondition::Neumann).unwrap();
        assert!((t.residual(1.0) + 40.0).abs() < 1e-12);
        let zero = t.with_coeffs(TrialCoeffs { c1: 1.0, c2: 0.0 });
        for &r in &[0.0, 0.3, 1.0] {
            assert_eq!(zero.residual(r), 0.0);
        }
        let t = TrialState::new(3, 2, 20.0, BoundaryCondition::Neumann).unwrap();
        assert_eq!(t.residual(0.0), 0.0);
    }

    #[test]
    fn apply_operator_matches_raw_differential_expression() {
        for (m, n, b) in [(0u32, 1u32, 10.0), (1, 2, 15.0), (2, 3, 20.0), (3, 1, 12.0)] {
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
                let t = TrialState::new(m, n, b, bc).unwrap();
                let scale = (1..=50)
                    .map(|i| t.apply_operator(i as f64 / 50.0).abs())
                    .fold(0.0, f64::max);
                for i in 1..=20 {
                    let r = 0.05 * i as f64 - 0.02;
                    let h = 1e-3;
                    let f = |x: f64| t.eval(x);
                    // fourth-order five-point stencils
                    let d1 = (f(r - 2.0 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2.0 * h))
                        / (12.0 * h);
                    let d2 = (-f(r - 2.0 * h) + 16.0 * f(r - h) - 30.0 * f(r) + 16.0 * f(r + h)
                        - f(r + 2.0 * h))
                        / (12.0 * h * h);
                    let pot = m as f64 / r - 0.5 * b * r;
                    let raw = -d2 - d1 / r + pot * pot * f(r);
                    let got = t.apply_operator(r);
                    assert!(
                        (raw - got).abs() < 1e-5 * scale,
                        "m={m} n={n} r={r} raw={raw} got={got}"
                    );
                }
            }
        }
    }

    #[test]
    fn c1_only_state_is_an_exact_eigenfunction() {
        let t = TrialState::new(1, 2, 11.0, BoundaryCondition::Neumann)
            .unwrap()
            .with_coeffs(TrialCoeffs { c1: 1.0, c2: 0.0 });
        for i in 1..10 {
            let r = i as f64 / 10.0;
            assert_eq!(t.apply_operator(r), t.landau_level() * t.eval(r));
        }
    }

    #[test]
    fn ode_examples() {
        assert_eq!(
            ode_residual_appendix(OdeKind::Laguerre, 0, 1, 1.0, 3.0),
            0.0
        );
        assert!(ode_residual_appendix(OdeKind::Laguerre, 1, 3, 1.0, 2.5).abs() < 1e-10);
        let g = ode_residual_appendix(OdeKind::G, 0, 2, 8.0, 0.7);
        let s = ode_residual_scale(OdeKind::G, 0, 2, 8.0, 0.7);
        assert!(g.abs() < 1e-8 * s);
    }

    #[test]
    fn laguerre_equation_symbolic_low_degree() {
        // L^1_2(s) = 3 - 3s + s²/2: s·1 + (2 - s)(-3 + s) + 2(3 - 3s + s²/2) = 0.
        let s = 2.5;
        let w = 3.0 - 3.0 * s + 0.5 * s * s;
        let dw = -3.0 + s;
        let d2w = 1.0;
        let by_hand: f64 = s * d2w + (2.0 - s) * dw + 2.0 * w;
        assert_eq!(by_hand, 0.0);
        assert!(ode_residual_appendix(OdeKind::Laguerre, 1, 3, 1.0, s).abs() < 1e-12);
    }

    #[test]
    fn shift_reduction() {
        let s = FiberSpec::new(-3, 12.0, BoundaryCondition::Neumann).unwrap();
        assert_eq!(s.reduced_m(), 3);
        assert_eq!(s.shift(), 72.0);
        assert_eq!(
            FiberSpec::new(3, 12.0, BoundaryCondition::Neumann)
                .unwrap()
                .shift(),
            0.0
        );
        assert!(FiberSpec::new(0, -1.0, BoundaryCondition::Neumann).is_err());
    }
}
