use std::f64::consts::PI;

use super::curves::check_ring;
use super::{check_tau, compare, Cmp, ClassifierCurves, RegionLabel};
use crate::error::{Error, Result};
use crate::weights::ActivityMode;

/// Closed-form thresholds on the ring (radical = agent 0) at step `t`.
pub fn thresholds_ring(n: usize, beta: f64, tau: f64, t: usize) -> Result<Vec<f64>> {
    check_ring(n)?;
    let c = ClassifierCurves::new(n, beta)?;
    check_tau(tau)?;
    let nf = n as f64;
    let decays: Vec<f64> = c.ring_eigenvalues().iter().map(|l| l.powi(t as i32)).collect();
    Ok((0..n)
        .map(|l| {
            let s: f64 = decays
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let k = (i + 1) as f64;
                    d * 2.0 / nf * (l as f64 * k * 2.0 * PI / nf).cos()
                })
                .sum();
            (nf - 1.0) / nf * tau - tau * s
        })
        .collect())
}

/// `α_j`: `j+1` leading ones, zeros, `j` trailing ones.
pub fn alpha_pattern(n: usize, j: usize) -> Vec<bool> {
    (0..n).map(|i| i <= j || i + j >= n).collect()
}

/// Bracket edges `e_0..=e_{ħ+1}` with `e_j = 1 / (scale · q_j)`; `q_{ħ+1}`
/// is the limit `(n−1)/n`.
fn edges(c: &ClassifierCurves, scale: f64) -> Result<Vec<f64>> {
    let mut e = Vec::with_capacity(c.hbar() + 2);
    for j in 0..=c.hbar() {
        e.push(1.0 / (scale * c.q(j)?));
    }
    let nf = c.n as f64;
    e.push(nf / ((nf - 1.0) * scale));
    Ok(e)
}

/// Bracket edges for the given mode, as `(j, value)`; used for reporting.
pub fn ring_edges(n: usize, beta: f64, mode: ActivityMode) -> Result<Vec<(usize, f64)>> {
    check_ring(n)?;
    let c = ClassifierCurves::new(n, beta)?;
    let scale = match mode {
        ActivityMode::Wal => beta + 2.0,
        ActivityMode::Ual => 3.0,
    };
    let e = edges(&c, scale)?;
    let skip = usize::from(mode == ActivityMode::Ual);
    Ok(e.into_iter().enumerate().skip(skip).collect())
}

pub fn classify_ring(n: usize, beta: f64, tau: f64, mode: ActivityMode) -> Result<RegionLabel> {
    RingRegions::new(n, beta, mode)?.classify(tau)
}

/// Region brackets for one `(n, β, mode)`, reusable across many `τ`.
#[derive(Debug, Clone)]
pub struct RingRegions {
    n: usize,
    beta: f64,
    mode: ActivityMode,
    edges: Vec<f64>,
    first_j: usize,
}

impl RingRegions {
    pub fn new(n: usize, beta: f64, mode: ActivityMode) -> Result<Self> {
        check_ring(n)?;
        if n < 5 {
            return Err(Error::OutOfRange(format!("ring classifier needs n ≥ 5, got {n}")));
        }
        let c = ClassifierCurves::new(n, beta)?;
        if beta < 1.0 {
            return Err(Error::OutOfRange(format!("ring classifier needs beta ≥ 1, got {beta}")));
        }
        let (edges, first_j) = match mode {
            ActivityMode::Wal => (edges(&c, beta + 2.0)?, 0),
            ActivityMode::Ual => (edges(&c, 3.0)?, 1),
        };
        Ok(RingRegions {
            n,
            beta,
            mode,
            edges,
            first_j,
        })
    }

    pub fn classify(&self, tau: f64) -> Result<RegionLabel> {
        check_tau(tau)?;
        let e = &self.edges;
        let hbar = e.len() - 2;
        // e_0 bounds a real region only when its bracket is non-empty
        let relevant = |j: usize| j >= self.first_j && (j > 0 || e[0] >= e[1]);
        if (0..e.len()).any(|j| relevant(j) && compare(tau, e[j]) == Cmp::Near) {
            return Ok(RegionLabel::Boundary);
        }
        if tau <= e[hbar + 1] {
            return Ok(RegionLabel::AllActive);
        }
        for j in (self.first_j..=hbar).rev() {
            if e[j + 1] <= tau && tau <= e[j] {
                return Ok(if j == 0 { RegionLabel::Frozen } else { RegionLabel::Alpha(j) });
            }
        }
        let top = match self.mode {
            ActivityMode::Wal => e[0].max(e[1]),
            ActivityMode::Ual => e[1],
        };
        if tau > top {
            return Ok(RegionLabel::AllInactive);
        }
        Err(Error::Uncovered(format!(
            "ring n={} beta={} tau={tau} ({}) lies in no region",
            self.n, self.beta, self.mode
        )))
    }
}
