//! Scalar helpers that `core` does not provide: transcendental functions
//! (via `libm`), exact small factorials and binomials, and compensated
//! summation.

use alloc::vec::Vec;

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `x^k` by binary powering; exact for the small integer powers used here.
pub fn powi(mut x: f64, mut k: u32) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= x;
        }
        x *= x;
        k >>= 1;
    }
    acc
}

const FACTORIALS: [u64; 21] = {
    let mut t = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as u64;
        i += 1;
    }
    t
};

/// `k!`, exact up to `20!`, log-gamma beyond.
pub fn factorial(k: u32) -> f64 {
    if (k as usize) < FACTORIALS.len() {
        FACTORIALS[k as usize] as f64
    } else {
        exp(ln_gamma(k as f64 + 1.0))
    }
}

/// `ln k!`.
pub fn ln_factorial(k: u32) -> f64 {
    if (k as usize) < FACTORIALS.len() {
        ln(FACTORIALS[k as usize] as f64)
    } else {
        ln_gamma(k as f64 + 1.0)
    }
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 60 {
        // C(n, i) fits in u64 for n <= 60, and the running product is exact.
        let mut c: u128 = 1;
        for i in 0..k as u128 {
            c = c * (n as u128 - i) / (i + 1);
        }
        c as f64
    } else {
        exp(ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sums `terms` in descending magnitude with compensation.
pub fn sum_descending(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut acc = CompensatedSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}
