//! Double-precision special functions: associated Laguerre polynomials,
//! Kummer's confluent hypergeometric function, and the integer-order
//! incomplete gamma integrals that appear in the closed-form inner
//! products of trial states.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{binomial, exp, expm1, factorial, powi, CompensatedSum};

/// Associated Laguerre polynomial `L^m_deg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaguerreSpec {
    pub m: u32,
    pub deg: u32,
}

impl LaguerreSpec {
    pub fn new(m: u32, deg: u32) -> Self {
        Self { m, deg }
    }

    /// Monomial coefficients, lowest power first:
    /// `c_l = (-1)^l / l! · C(deg + m, deg - l)`.
    pub fn coefficients(&self) -> Vec<f64> {
        (0..=self.deg)
            .map(|l| {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                sign / factorial(l) * binomial(self.deg + self.m, self.deg - l)
            })
            .collect()
    }
}

/// `L^m_deg(s)` by the three-term recurrence in the degree.
pub fn laguerre(spec: LaguerreSpec, s: f64) -> f64 {
    let m = spec.m as f64;
    if spec.deg == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + m - s;
    for k in 1..spec.deg {
        let k = k as f64;
        let next = ((2.0 * k + m + 1.0 - s) * cur - (k + m) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/ds L^m_deg(s) = -L^{m+1}_{deg-1}(s)`.
pub fn laguerre_deriv(spec: LaguerreSpec, s: f64) -> f64 {
    if spec.deg == 0 {
        0.0
    } else {
        -laguerre(LaguerreSpec::new(spec.m + 1, spec.deg - 1), s)
    }
}

/// `d²/ds² L^m_deg(s) = L^{m+2}_{deg-2}(s)`.
pub fn laguerre_second_deriv(spec: LaguerreSpec, s: f64) -> f64 {
    if spec.deg < 2 {
        0.0
    } else {
        laguerre(LaguerreSpec::new(spec.m + 2, spec.deg - 2), s)
    }
}

/// `e^z Γ(k+1, z) = k! Σ_{t=0}^{k} z^t / t!`.
pub fn gamma_upper_int_scaled(k: u32, z: f64) -> f64 {
    let mut term = factorial(k);
    let mut acc = CompensatedSum::new();
    acc.add(term);
    for t in 1..=k {
        term *= z / t as f64;
        acc.add(term);
    }
    acc.value()
}

/// `Γ(k+1, z) = ∫_z^∞ s^k e^{-s} ds`.
pub fn gamma_upper_int(k: u32, z: f64) -> f64 {
    exp(-z) * gamma_upper_int_scaled(k, z)
}

/// `e^{-z} ∫_0^z e^s s^k ds`, bounded by `z^k` and free of overflow for
/// the ranges used here.
pub fn exp_lower_int_scaled(k: u32, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    if z >= 2.0 * (k as f64 + 1.0) {
        // I_j = z^j e^z - j I_{j-1}: each step amplifies error by about j/z.
        let mut acc = -expm1(-z);
        for j in 1..=k {
            acc = powi(z, j) - j as f64 * acc;
        }
        acc
    } else {
        // Σ_j z^{k+j+1} / (j! (k+j+1)), all terms positive.
        let lead = powi(z, k + 1);
        let mut power = 1.0;
        let mut acc = CompensatedSum::new();
        let mut j = 0u32;
        loop {
            let term = lead * power / (k + j + 1) as f64;
            acc.add(term);
            j += 1;
            if j as f64 > z && term < 1e-17 * acc.value() {
                break;
            }
            power *= z / j as f64;
        }
        exp(-z) * acc.value()
    }
}

/// `∫_0^z e^s s^k ds`.
pub fn exp_lower_int(k: u32, z: f64) -> f64 {
    exp(z) * exp_lower_int_scaled(k, z)
}

const KUMMER_MAX_TERMS: usize = 1_000_000;

fn check_c(c: f64) -> Result<()> {
    if c <= 0.0 && c == libm::floor(c) {
        Err(Error::InvalidC { c })
    } else {
        Ok(())
    }
}

/// Kummer's function `M(a, c, z) = Σ_k (a)_k / ((c)_k k!) z^k`.
///
/// Summed until a term falls below `1e-17` of the partial sum once the
/// terms are monotonically decaying.
pub fn kummer_m(a: f64, c: f64, z: f64) -> Result<f64> {
    check_c(c)?;
    let mut term = 1.0;
    let mut acc = CompensatedSum::new();
    acc.add(term);
    for k in 0..KUMMER_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / ((c + kf) * (kf + 1.0)) * z;
        if term == 0.0 {
            return Ok(acc.value());
        }
        acc.add(term);
        let decaying = kf + 1.0 > z && kf + 1.0 > -a;
        if decaying && (term.abs() < 1e-17 * acc.value().abs() || term.abs() < 1e-300) {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence {
        terms: KUMMER_MAX_TERMS,
    })
}

/// `∂M/∂z (a, c, z) = (a / c) M(a+1, c+1, z)`.
pub fn kummer_m_dz(a: f64, c: f64, z: f64) -> Result<f64> {
    check_c(c)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(a / c * kummer_m(a + 1.0, c + 1.0, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::integrate;
    use core::f64::consts::E;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(LaguerreSpec::new(0, 0), 7.3), 1.0);
        assert_eq!(laguerre(LaguerreSpec::new(0, 1), 2.0), -1.0);
        assert_eq!(laguerre(LaguerreSpec::new(1, 2), 0.0), 3.0);
    }

    #[test]
    fn laguerre_deriv_examples() {
        assert_eq!(laguerre_deriv(LaguerreSpec::new(0, 0), 5.0), 0.0);
        assert_eq!(laguerre_deriv(LaguerreSpec::new(0, 1), 2.0), -1.0);
        // L^1_2 = 3 - 3s + s²/2
        assert!((laguerre_deriv(LaguerreSpec::new(1, 2), 1.0) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn coefficients_have_leading_term_and_length() {
        for m in 0..4 {
            for deg in 0..6 {
                let c = LaguerreSpec::new(m, deg).coefficients();
                assert_eq!(c.len(), deg as usize + 1);
                let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
                assert!(rel(c[deg as usize], sign / factorial(deg)) < 1e-15);
            }
        }
    }

    #[test]
    fn gamma_upper_examples() {
        assert!(rel(gamma_upper_int(0, 2.0), exp(-2.0)) < 1e-15);
        assert_eq!(gamma_upper_int(3, 0.0), 6.0);
        let quad = integrate(|s| s * s * exp(-s), 1.0, 80.0, 1e-14);
        assert!(rel(gamma_upper_int(2, 1.0), quad) < 1e-11);
        assert!(rel(gamma_upper_int(2, 1.0), 5.0 / E) < 1e-15);
    }

    #[test]
    fn exp_lower_examples() {
        assert!(rel(exp_lower_int(0, 1.0), E - 1.0) < 1e-15);
        for k in 0..8 {
            assert_eq!(exp_lower_int(k, 0.0), 0.0);
        }
        assert!(rel(exp_lower_int(1, 1.0), 1.0) < 1e-14);
        let quad = integrate(|s| exp(s) * s, 0.0, 1.0, 1e-14);
        assert!(rel(exp_lower_int(1, 1.0), quad) < 1e-12);
    }

    #[test]
    fn exp_lower_closed_form_agrees_at_small_z() {
        // (-1)^k k! (e^z Σ_t (-z)^t/t! - 1), only usable where it does not cancel.
        for k in 0..6u32 {
            for &z in &[0.25, 0.5, 1.0, 2.0] {
                let mut s = 0.0;
                for t in 0..=k {
                    s += powi(-z, t) / factorial(t);
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let closed = sign * factorial(k) * (exp(z) * s - 1.0);
                assert!(rel(exp_lower_int(k, z), closed) < 1e-9, "k={k} z={z}");
            }
        }
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_m(3.7, 1.0, 0.0).unwrap(), 1.0);
        assert!(rel(kummer_m(1.0, 1.0, 1.0).unwrap(), E) < 1e-15);
        for &s in &[0.0, 0.5, 3.0, 17.0] {
            assert!((kummer_m(-1.0, 1.0, s).unwrap() - (1.0 - s)).abs() < 1e-14);
        }
    }

    #[test]
    fn kummer_dz_examples() {
        assert_eq!(kummer_m_dz(0.0, 1.0, 3.0).unwrap(), 0.0);
        assert!(rel(kummer_m_dz(1.0, 1.0, 1.0).unwrap(), E) < 1e-15);
        assert!((kummer_m_dz(-1.0, 1.0, 2.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn kummer_rejects_nonpositive_integer_c() {
        for c in [0.0, -1.0, -4.0] {
            assert_eq!(kummer_m(0.5, c, 1.0), Err(Error::InvalidC { c }));
        }
        assert!(kummer_m(0.5, -0.5, 1.0).is_ok());
    }

    #[test]
    fn kummer_matches_exponential_identity() {
        // M(a, a, z) = e^z
        for &z in &[0.5, 5.0, 15.0, 20.0] {
            assert!(rel(kummer_m(2.5, 2.5, z).unwrap(), exp(z)) < 1e-14);
        }
    }
}
