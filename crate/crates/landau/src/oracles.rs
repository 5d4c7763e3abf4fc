//! Reference values computed independently of the closed forms.

use landau_core::quadrature::GaussLegendre;
use landau_core::{BoundaryCondition, Result, TrialState};

/// `J_nu(x)` from its power series.
pub fn bessel_j(nu: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powi(nu as i32) / (1..=nu).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..300 {
        term *= -half * half / (f64::from(k) * f64::from(k + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Newton iteration for a zero of `J_nu` started at `x`.
pub fn bessel_zero(nu: u32, mut x: f64) -> f64 {
    for _ in 0..60 {
        let f = bessel_j(nu, x);
        let df = if nu == 0 {
            -bessel_j(1, x)
        } else {
            bessel_j(nu - 1, x) - f64::from(nu) * f / x
        };
        let dx = f / df;
        x -= dx;
        if dx.abs() < 1e-15 * x {
            break;
        }
    }
    x
}

/// First zero of `J_0` squared: the field-free Dirichlet ground state.
pub fn dirichlet_free_ground_state() -> f64 {
    bessel_zero(0, 2.4).powi(2)
}

/// First zero of `J_1` squared: the field-free Neumann second eigenvalue.
pub fn neumann_free_second_eigenvalue() -> f64 {
    bessel_zero(1, 3.8).powi(2)
}

/// Panels of the composite rule on `[0, 1]`.
pub const GL_PANELS: usize = 16;
/// Points per panel; 128 points in total.
pub const GL_POINTS: usize = 8;

/// 128-point composite Gauss–Legendre integral over `[0, 1]`.
pub fn integrate_unit(f: impl FnMut(f64) -> f64) -> f64 {
    GaussLegendre::new(GL_POINTS).integrate_composite(0.0, 1.0, GL_PANELS, f)
}

/// `⟨u_i, u_j⟩` and `⟨H u_i, u_j⟩` on `L²((0,1), r dr)` by quadrature.
pub fn gram_by_quadrature(
    m: u32,
    i: u32,
    j: u32,
    b: f64,
    bc: BoundaryCondition,
) -> Result<(f64, f64)> {
    let ui = TrialState::new(m, i, b, bc)?;
    let uj = TrialState::new(m, j, b, bc)?;
    let gram = integrate_unit(|r| ui.eval(r) * uj.eval(r) * r);
    let hgram = integrate_unit(|r| ui.apply_operator(r) * uj.eval(r) * r);
    Ok((gram, hgram))
}
