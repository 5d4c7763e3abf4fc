use landau_core::fibersolver::{assemble, eigenvalues, MeshPolicy};
use landau_core::math::binomial;
use landau_core::specfun::{
    exp_lower_int, gamma_upper_int, kummer_m, laguerre, laguerre_deriv, LaguerreSpec,
};
use landau_core::trialstate::{ode_residual_appendix, ode_residual_scale, OdeKind};
use landau_core::variational::{bracket, rayleigh_ritz_upper};
use landau_core::{BoundaryCondition, FiberSpec, TrialState};
use proptest::prelude::*;

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

/// Plain Gauss–Legendre-free oracle: composite Simpson with many panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kummer_laguerre_bridge(m in 0u32..6, k in 0u32..6, s in 0.0f64..20.0) {
        let lhs = kummer_m(-(k as f64), m as f64 + 1.0, s).unwrap();
        let rhs = laguerre(LaguerreSpec::new(m, k), s) / binomial(k + m, k);
        let scale = horner(
            &LaguerreSpec::new(m, k).coefficients().iter().map(|c| c.abs()).collect::<Vec<_>>(),
            s,
        ) / binomial(k + m, k);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn recurrence_matches_monomial_expansion(m in 0u32..8, deg in 0u32..9, s in 0.0f64..15.0) {
        let spec = LaguerreSpec::new(m, deg);
        let c = spec.coefficients();
        let abs: Vec<f64> = c.iter().map(|v| v.abs()).collect();
        let scale = horner(&abs, s).max(1.0);
        prop_assert!((laguerre(spec, s) - horner(&c, s)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn three_term_recurrence_holds(m in 0u32..6, k in 1u32..8, s in 0.0f64..12.0) {
        let l = |d| laguerre(LaguerreSpec::new(m, d), s);
        let mf = m as f64;
        let kf = k as f64;
        let lhs = (kf + 1.0) * l(k + 1);
        let rhs = (2.0 * kf + mf + 1.0 - s) * l(k) - (kf + mf) * l(k - 1);
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale * (1.0 + s).powi(k as i32));
    }

    #[test]
    fn derivative_matches_finite_difference(m in 0u32..5, deg in 1u32..6, s in 0.5f64..10.0) {
        let spec = LaguerreSpec::new(m, deg);
        let h = 1e-5;
        let fd = (laguerre(spec, s + h) - laguerre(spec, s - h)) / (2.0 * h);
        let an = laguerre_deriv(spec, s);
        prop_assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0) * (1.0 + s).powi(deg as i32));
    }

    #[test]
    fn exp_lower_matches_quadrature(k in 0u32..8, z in 0.05f64..20.0) {
        let q = simpson(|s| (s - z).exp() * s.powi(k as i32), 0.0, z, 4000);
        let got = exp_lower_int(k, z) * (-z).exp();
        prop_assert!((got - q).abs() <= 1e-9 * q.abs().max(1e-300), "{} {}", got, q);
    }

    #[test]
    fn upper_gamma_and_complement_sum_to_factorial(k in 0u32..10, z in 0.0f64..25.0) {
        let lower = simpson(|s| (-s).exp() * s.powi(k as i32), 0.0, z, 4000);
        let total: f64 = (1..=k).map(|j| j as f64).product();
        let upper = gamma_upper_int(k, z);
        prop_assert!((lower + upper - total).abs() <= 1e-9 * total);
    }

    #[test]
    fn trial_states_meet_their_boundary_condition(
        m in 0u32..5, n in 1u32..4, b in 8.0f64..35.0, gamma in -2.0f64..2.0,
    ) {
        for bc in [
            BoundaryCondition::Dirichlet,
            BoundaryCondition::Neumann,
            BoundaryCondition::Robin { gamma },
        ] {
            if let Ok(t) = TrialState::new(m, n, b, bc) {
                prop_assert!(t.boundary_defect() < 1e-10, "{:?} {}", bc, t.boundary_defect());
            }
        }
    }

    #[test]
    fn appendix_identities_vanish(
        m in 0u32..4, n in 1u32..4, b in 5.0f64..30.0, r in 0.02f64..1.0,
    ) {
        for kind in [OdeKind::F, OdeKind::V, OdeKind::G] {
            let res = ode_residual_appendix(kind, m, n, b, r);
            let scale = ode_residual_scale(kind, m, n, b, r);
            prop_assert!(res.abs() <= 1e-10 * scale, "{:?} {} {}", kind, res, scale);
        }
        let s = 0.5 * b * r * r;
        let res = ode_residual_appendix(OdeKind::Laguerre, m, n, b, s);
        let scale = ode_residual_scale(OdeKind::Laguerre, m, n, b, s);
        prop_assert!(res.abs() <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn temple_below_rayleigh_ritz(m in 0i32..4, n in 1u32..3, b in 18.0f64..32.0) {
        for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
            let spec = FiberSpec::new(m, b, bc).unwrap();
            let r = bracket(&spec, n, 2.0).unwrap();
            if r.preconditions_ok {
                prop_assert!(r.lower <= r.upper);
            }
            let up = rayleigh_ritz_upper(&spec, n).unwrap();
            prop_assert!(up.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn shift_identity_for_fem(m in 1i32..6, b in 0.0f64..40.0) {
        let policy = MeshPolicy { elements: 64, order: 2 };
        let pos = eigenvalues(&FiberSpec::new(m, b, BoundaryCondition::Neumann).unwrap(), 2, policy).unwrap();
        let neg = eigenvalues(&FiberSpec::new(-m, b, BoundaryCondition::Neumann).unwrap(), 2, policy).unwrap();
        for (p, q) in pos.iter().zip(&neg) {
            let expect = p + 2.0 * m as f64 * b;
            prop_assert!((q - expect).abs() <= 1e-9 * (1.0 + expect));
        }
        let mesh = policy.mesh(b).unwrap();
        let a = assemble(&FiberSpec::new(m, b, BoundaryCondition::Neumann).unwrap(), &mesh, 2).unwrap();
        let c = assemble(&FiberSpec::new(-m, b, BoundaryCondition::Neumann).unwrap(), &mesh, 2).unwrap();
        prop_assert_eq!(c.stiffness, a.stiffness.axpy(2.0 * m as f64 * b, &a.mass));
    }
}
