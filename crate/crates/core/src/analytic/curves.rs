//! Region boundaries and spectral scalars as functions of `β` for fixed `n`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Time cap for infimum scans and first-violation searches.
pub const T_CAP: usize = 100_000;

/// Default spectral decay tolerance for the `q_j` scan.
pub const Q_DECAY_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierCurves {
    pub n: usize,
    pub beta: f64,
}

impl ClassifierCurves {
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("need at least 2 agents, got {n}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Parameter(format!("beta must be positive, got {beta}")));
        }
        Ok(ClassifierCurves { n, beta })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    // complete graph

    pub fn lambda_c(&self) -> f64 {
        (self.beta - 1.0) / (self.beta + self.nf() - 1.0)
    }

    pub fn gamma1(&self) -> f64 {
        let n = self.nf();
        n / ((n - 1.0) * (self.beta + n - 1.0))
    }

    pub fn gamma2(&self) -> f64 {
        let n = self.nf();
        n * self.beta / ((n - 1.0) * (self.beta + n - 1.0))
    }

    pub fn gamma3(&self) -> f64 {
        1.0 / (self.beta + self.nf() - 2.0)
    }

    pub fn eta(&self) -> f64 {
        let n = self.nf();
        (self.beta + n - 1.0) / (n * (self.beta + n - 2.0))
    }

    // star graph

    pub fn r(&self) -> f64 {
        let n = self.nf();
        (n - 1.0) * (self.beta + 1.0) / (self.beta + n - 1.0)
    }

    pub fn lambda_s(&self) -> f64 {
        let (n, b) = (self.nf(), self.beta);
        b * (2.0 * b + n) / ((b + 1.0) * (b + n - 1.0)) - 1.0
    }

    pub fn delta1(&self) -> f64 {
        let (n, b) = (self.nf(), self.beta);
        (n * b + 2.0 * (n - 1.0)) / ((n - 1.0) * (b + 1.0) * (b + 1.0))
    }

    pub fn delta2(&self) -> f64 {
        let (n, b) = (self.nf(), self.beta);
        b * (b + 1.0) / (b + n - 1.0) * self.delta1()
    }

    pub fn delta3(&self) -> f64 {
        self.beta * self.delta1()
    }

    pub fn mu(&self) -> f64 {
        let (n, b) = (self.nf(), self.beta);
        (n * b + 2.0 * (n - 1.0)) / (2.0 * (n - 1.0) * (b + 1.0))
    }

    // ring graph

    pub fn h(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn hbar(&self) -> usize {
        self.h() / 2
    }

    /// `λ_k = (β + 2 cos(2πk/n)) / (β + 2)`, `k = 1..h`.
    pub fn ring_eigenvalues(&self) -> Vec<f64> {
        let n = self.nf();
        (1..=self.h())
            .map(|k| (self.beta + 2.0 * (2.0 * PI * k as f64 / n).cos()) / (self.beta + 2.0))
            .collect()
    }

    pub fn q(&self, j: usize) -> Result<f64> {
        compute_q(self.n, self.beta, j, Q_DECAY_TOL)
    }
}

pub(crate) fn check_ring(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::OutOfRange(format!("ring closed forms need odd n ≥ 3, got {n}")));
    }
    Ok(())
}

/// `q_0 = (n−1)/(nβ)`; for `j ≥ 1` the minimum over integer `t ≥ 0` of
/// `(n−1)/n − (2/n) Σ_k λ_k^t cos(jk·2π/n)`, capped by the limit `(n−1)/n`.
pub fn compute_q(n: usize, beta: f64, j: usize, decay_tol: f64) -> Result<f64> {
    check_ring(n)?;
    let c = ClassifierCurves::new(n, beta)?;
    if beta < 1.0 {
        return Err(Error::OutOfRange(format!("q_j is defined for beta ≥ 1, got {beta}")));
    }
    let h = c.h();
    if j > h {
        return Err(Error::OutOfRange(format!("q index {j} exceeds h = {h}")));
    }
    let nf = n as f64;
    if j == 0 {
        return Ok((nf - 1.0) / (nf * beta));
    }
    let lambdas = c.ring_eigenvalues();
    let weights: Vec<f64> = (1..=h)
        .map(|k| 2.0 / nf * (2.0 * PI * (j * k) as f64 / nf).cos())
        .collect();
    let limit = (nf - 1.0) / nf;
    let mut powers = vec![1.0; h];
    let mut best = limit;
    for _ in 0..=T_CAP {
        let value = limit - powers.iter().zip(&weights).map(|(p, w)| p * w).sum::<f64>();
        best = best.min(value);
        if powers.iter().all(|p| p.abs() < decay_tol) {
            break;
        }
        for (p, l) in powers.iter_mut().zip(&lambdas) {
            *p *= l;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gamma_values() {
        let c = ClassifierCurves::new(5, 2.0).unwrap();
        assert!(close(c.gamma1(), 5.0 / 24.0, 1e-15));
        assert!(close(c.gamma2(), 5.0 / 12.0, 1e-15));
        for n in [3, 5, 20] {
            let c = ClassifierCurves::new(n, 1.0).unwrap();
            let x = 1.0 / (n as f64 - 1.0);
            assert!(close(c.gamma1(), x, 1e-15) && close(c.gamma2(), x, 1e-15) && close(c.gamma3(), x, 1e-15));
            assert_eq!(c.lambda_c(), 0.0);
        }
    }

    #[test]
    fn curve_identities() {
        for n in [2, 5, 20, 53] {
            for k in 1..200 {
                let beta = k as f64 * 0.1;
                let c = ClassifierCurves::new(n, beta).unwrap();
                assert!(close(c.gamma2(), beta * c.gamma1(), 1e-14));
                assert!(close(c.delta3(), beta * c.delta1(), 1e-14));
                let ratio = beta * (beta + 1.0) / (beta + n as f64 - 1.0);
                assert!(close(c.delta2(), ratio * c.delta1(), 1e-14));
                assert!(c.lambda_c() > -1.0 && c.lambda_c() < 1.0);
                assert!(c.lambda_s() > -1.0 && c.lambda_s() < 1.0);
                assert!(c.r() > 0.0);
            }
        }
    }

    #[test]
    fn star_crossings() {
        for n in [5usize, 20] {
            let c = ClassifierCurves::new(n, ((n - 1) as f64).sqrt()).unwrap();
            assert!(close(c.delta1(), c.delta2(), 1e-14));
            assert!(c.lambda_s().abs() < 1e-15);
            let c = ClassifierCurves::new(n, 1.0).unwrap();
            assert!(close(c.delta1(), c.delta3(), 1e-15));
        }
        let c = ClassifierCurves::new(5, 0.5).unwrap();
        assert!(close(c.delta1(), 7.0 / 6.0, 1e-14));
        assert!(close(c.delta3(), 7.0 / 12.0, 1e-14));
    }

    #[test]
    fn q_zero() {
        assert!(close(compute_q(5, 2.0, 0, Q_DECAY_TOL).unwrap(), 0.4, 1e-16));
    }

    #[test]
    fn q_errors() {
        assert!(matches!(compute_q(5, 0.5, 1, Q_DECAY_TOL), Err(Error::OutOfRange(_))));
        assert!(compute_q(6, 2.0, 1, Q_DECAY_TOL).is_err());
        assert!(compute_q(5, 2.0, 3, Q_DECAY_TOL).is_err());
    }

    fn brute_q(n: usize, beta: f64, j: usize, tmax: usize) -> f64 {
        let c = ClassifierCurves::new(n, beta).unwrap();
        let nf = n as f64;
        let lam = c.ring_eigenvalues();
        (0..=tmax)
            .map(|t| {
                let s: f64 = lam
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        let k = (i + 1) as f64;
                        l.powi(t as i32) * 2.0 / nf * (j as f64 * k * 2.0 * PI / nf).cos()
                    })
                    .sum();
                (nf - 1.0) / nf - s
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn q_matches_brute_force() {
        for n in [5, 7, 21] {
            for beta in [1.0, 1.5, 2.0, 5.0, 12.0] {
                let c = ClassifierCurves::new(n, beta).unwrap();
                let limit = (n as f64 - 1.0) / n as f64;
                for j in 1..=c.h() {
                    let q = c.q(j).unwrap();
                    let brute = brute_q(n, beta, j, 10_000).min(limit);
                    assert!(close(q, brute, 1e-12), "n={n} beta={beta} j={j}: {q} vs {brute}");
                    assert!(q <= limit);
                    if j <= c.hbar() {
                        assert!(q < limit);
                    }
                }
            }
        }
        let c = ClassifierCurves::new(5, 2.0).unwrap();
        assert!(c.q(1).unwrap() < 0.8);
        assert!(close(c.q(2).unwrap(), 0.8, 1e-15));
    }
}
