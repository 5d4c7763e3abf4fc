//! Small dense symmetric eigenproblems and banded symmetric factorizations.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Lower Cholesky factor of the row-major SPD matrix `a` (`n × n`).
pub fn cholesky(a: &[f64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { minor: j + 1 });
        }
        let d = sqrt(d);
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Ok(l)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut a = a.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut diag = 0.0;
        for i in 0..n {
            diag += a[i * n + i] * a[i * n + i];
            for j in i + 1..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off <= 1e-32 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of the pencil `(h, g)` with `g` SPD, ascending.
///
/// Reduces to `L⁻¹ h L⁻ᵀ` with `g = L Lᵀ`.
pub fn generalized_eigenvalues(h: &[f64], g: &[f64], n: usize) -> Result<Vec<f64>> {
    let l = cholesky(g, n)?;
    // Y = L⁻¹ h (forward substitution, column by column).
    let mut y = h.to_vec();
    for col in 0..n {
        for i in 0..n {
            let mut s = y[i * n + col];
            for k in 0..i {
                s -= l[i * n + k] * y[k * n + col];
            }
            y[i * n + col] = s / l[i * n + i];
        }
    }
    // C = Y L⁻ᵀ, i.e. solve L Cᵀ = Yᵀ row by row.
    let mut c = vec![0.0; n * n];
    for row in 0..n {
        for j in 0..n {
            let mut s = y[row * n + j];
            for k in 0..j {
                s -= l[j * n + k] * c[row * n + k];
            }
            c[row * n + j] = s / l[j * n + j];
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (c[i * n + j] + c[j * n + i]);
            c[i * n + j] = avg;
            c[j * n + i] = avg;
        }
    }
    Ok(jacobi_eigenvalues(&c, n))
}

/// Symmetric band matrix, lower band stored row-wise:
/// `data[i * (hbw + 1) + d] = A[i][i - d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    hbw: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, hbw: usize) -> Self {
        Self {
            n,
            hbw,
            data: vec![0.0; n * (hbw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.hbw
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        (d <= self.hbw).then_some(i * (self.hbw + 1) + d)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    /// Adds `v` to the symmetric pair `(i, j)`, `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self
            .slot(i, j)
            .expect("entry outside the declared bandwidth");
        self.data[s] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * (self.hbw + 1)..(i + 1) * (self.hbw + 1)];
            y[i] += row[0] * x[i];
            for d in 1..=self.hbw.min(i) {
                let a = row[d];
                y[i] += a * x[i - d];
                y[i - d] += a * x[i];
            }
        }
        y
    }

    /// `self + alpha · other` (same shape).
    pub fn axpy(&self, alpha: f64, other: &SymBand) -> SymBand {
        assert_eq!((self.n, self.hbw), (other.n, other.hbw));
        SymBand {
            n: self.n,
            hbw: self.hbw,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn is_symmetric_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `LDLᵀ` of `self - sigma · mass` without pivoting.
    pub fn ldlt_shifted(&self, mass: &SymBand, sigma: f64) -> BandLdlt {
        let shifted = self.axpy(-sigma, mass);
        BandLdlt::factor(&shifted)
    }
}

/// Unit-lower band factor `L` and diagonal `D` of a symmetric band matrix.
#[derive(Debug, Clone)]
pub struct BandLdlt {
    n: usize,
    hbw: usize,
    /// `l[i * hbw + (d - 1)] = L[i][i - d]` for `d = 1..=hbw`.
    l: Vec<f64>,
    d: Vec<f64>,
}

// Band index arithmetic reads more clearly with explicit ranges.
#[allow(clippy::needless_range_loop)]
impl BandLdlt {
    pub fn factor(a: &SymBand) -> Self {
        let n = a.n;
        let p = a.hbw;
        let mut l = vec![0.0; n * p.max(1)];
        let mut d = vec![0.0; n];
        let lget = |l: &Vec<f64>, i: usize, j: usize| -> f64 {
            if i == j {
                1.0
            } else {
                l[i * p + (i - j - 1)]
            }
        };
        for j in 0..n {
            let lo = j.saturating_sub(p);
            let mut dj = a.get(j, j);
            for k in lo..j {
                let ljk = lget(&l, j, k);
                dj -= ljk * ljk * d[k];
            }
            if dj == 0.0 {
                // Exact singularity: nudge so the inertia count stays defined.
                dj = 1e-150 * a.get(j, j).abs().max(1.0);
            }
            d[j] = dj;
            for i in j + 1..(j + p + 1).min(n) {
                let lo_i = i.saturating_sub(p);
                let mut s = a.get(i, j);
                for k in lo_i.max(lo)..j {
                    s -= lget(&l, i, k) * lget(&l, j, k) * d[k];
                }
                l[i * p + (i - j - 1)] = s / dj;
            }
        }
        Self { n, hbw: p, l, d }
    }

    /// Number of negative pivots, i.e. eigenvalues below the shift.
    pub fn negative_count(&self) -> usize {
        self.d.iter().filter(|&&v| v < 0.0).count()
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (n, p) = (self.n, self.hbw);
        let mut x = rhs.to_vec();
        for i in 0..n {
            let mut s = x[i];
            for j in i.saturating_sub(p)..i {
                s -= self.l[i * p + (i - j - 1)] * x[j];
            }
            x[i] = s;
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..(i + p + 1).min(n) {
                s -= self.l[k * p + (k - i - 1)] * x[k];
            }
            x[i] = s;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_reports_failing_minor() {
        let a = [1.0, 2.0, 2.0, 1.0];
        assert_eq!(
            cholesky(&a, 2),
            Err(Error::NotPositiveDefinite { minor: 2 })
        );
    }

    #[test]
    fn jacobi_on_known_spectrum() {
        // Tridiagonal 2,-1 of size 4: eigenvalues 2 - 2cos(kπ/5).
        let n = 4;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let ev = jacobi_eigenvalues(&a, n);
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * libm::cos((k + 1) as f64 * core::f64::consts::PI / 5.0);
            assert!((e - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn pencil_with_diagonal_metric() {
        let h = [2.0, 0.0, 0.0, 12.0];
        let g = [1.0, 0.0, 0.0, 4.0];
        let ev = generalized_eigenvalues(&h, &g, 2).unwrap();
        assert_eq!(ev, vec![2.0, 3.0]);
    }

    #[test]
    fn band_ldlt_solves_and_counts() {
        let n = 12;
        let mut a = SymBand::zeros(n, 2);
        let mut m = SymBand::zeros(n, 2);
        for i in 0..n {
            a.add(i, i, 6.0);
            m.add(i, i, 1.0);
            if i >= 1 {
                a.add(i, i - 1, -4.0);
            }
            if i >= 2 {
                a.add(i, i - 2, 1.0);
            }
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let b = a.matvec(&x);
        let f = BandLdlt::factor(&a);
        let y = f.solve(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-9);
        }
        // (δ²)² is positive definite with spectrum inside (0, 16).
        assert_eq!(a.ldlt_shifted(&m, 0.0).negative_count(), 0);
        assert_eq!(a.ldlt_shifted(&m, 16.0).negative_count(), n);
    }
}
