//! Threshold and activity-level matrices.
//!
//! Both matrices are row-stochastic with support on the closed
//! neighbourhood of each agent. Matrices are kept dense and row-major; the
//! products used by the dynamics skip the structural zeros, which leaves the
//! floating-point result identical to the dense sum.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// How agents weigh their neighbours' actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActivityMode {
    /// Weighted activity level: `G = F`.
    Wal,
    /// Uniform activity level: `g_ij = 1 / n_i` on the closed neighbourhood.
    Ual,
}

impl fmt::Display for ActivityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActivityMode::Wal => "wal",
            ActivityMode::Ual => "ual",
        })
    }
}

impl FromStr for ActivityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wal" => Ok(ActivityMode::Wal),
            "ual" => Ok(ActivityMode::Ual),
            other => Err(Error::Parameter(format!("unknown mode `{other}` (expected wal|ual)"))),
        }
    }
}

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("beta must be positive and finite, got {beta}")))
    }
}

/// Threshold weights: `β / (β + n_i − 1)` on the diagonal and
/// `1 / (β + n_i − 1)` for each neighbour.
pub fn build_f(graph: &Graph, beta: f64) -> Result<Matrix> {
    check_beta(beta)?;
    let n = graph.len();
    let mut f = Matrix::zeros(n);
    for i in 0..n {
        let denom = beta + graph.neighbors(i).len() as f64;
        f.set(i, i, beta / denom);
        for &j in graph.neighbors(i) {
            f.set(i, j, 1.0 / denom);
        }
    }
    Ok(f)
}

/// Activity weights for the given mode.
pub fn build_g(graph: &Graph, beta: f64, mode: ActivityMode) -> Result<Matrix> {
    match mode {
        ActivityMode::Wal => build_f(graph, beta),
        ActivityMode::Ual => {
            check_beta(beta)?;
            let n = graph.len();
            let mut g = Matrix::zeros(n);
            for i in 0..n {
                let w = 1.0 / graph.closed_degree(i) as f64;
                g.set(i, i, w);
                for &j in graph.neighbors(i) {
                    g.set(i, j, w);
                }
            }
            Ok(g)
        }
    }
}

/// The `(F, G)` pair driving the threshold and activity dynamics.
#[derive(Debug, Clone)]
pub struct InfluenceMatrices {
    f: Matrix,
    g: Matrix,
    beta: f64,
    mode: ActivityMode,
    // closed neighbourhoods, sorted, shared by both matrices
    support: Vec<Vec<usize>>,
}

impl InfluenceMatrices {
    pub fn new(graph: &Graph, beta: f64, mode: ActivityMode) -> Result<Self> {
        let f = build_f(graph, beta)?;
        let g = build_g(graph, beta, mode)?;
        let support = (0..graph.len())
            .map(|i| {
                let mut s = graph.neighbors(i).to_vec();
                s.push(i);
                s.sort_unstable();
                s
            })
            .collect();
        Ok(InfluenceMatrices {
            f,
            g,
            beta,
            mode,
            support,
        })
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mode(&self) -> ActivityMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.f.n
    }

    pub fn is_empty(&self) -> bool {
        self.f.n == 0
    }

    /// `F x`.
    pub fn apply_f(&self, x: &[f64]) -> Vec<f64> {
        Self::apply(&self.f, &self.support, x)
    }

    /// `G a` for a binary action vector.
    pub fn apply_g(&self, a: &[bool]) -> Vec<f64> {
        self.support
            .iter()
            .enumerate()
            .map(|(i, cols)| {
                let row = self.g.row(i);
                cols.iter().map(|&j| if a[j] { row[j] } else { 0.0 }).sum()
            })
            .collect()
    }

    fn apply(m: &Matrix, support: &[Vec<usize>], x: &[f64]) -> Vec<f64> {
        support
            .iter()
            .enumerate()
            .map(|(i, cols)| {
                let row = m.row(i);
                cols.iter().map(|&j| row[j] * x[j]).sum()
            })
            .collect()
    }

    /// Left Perron vector of `F` (`π' F = π'`, `Σ π = 1`), by power iteration
    /// on `F'` until the l1 residual drops below `1e-14`.
    pub fn perron_vector(&self) -> Result<Vec<f64>> {
        const TOL: f64 = 1e-14;
        const MAX_ITER: usize = 2_000_000;
        let n = self.len();
        let mut pi = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        for _ in 0..MAX_ITER {
            next.iter_mut().for_each(|v| *v = 0.0);
            for (i, cols) in self.support.iter().enumerate() {
                let row = self.f.row(i);
                for &j in cols {
                    next[j] += pi[i] * row[j];
                }
            }
            let total: f64 = next.iter().sum();
            next.iter_mut().for_each(|v| *v /= total);
            let residual: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
            std::mem::swap(&mut pi, &mut next);
            if residual < TOL {
                return Ok(pi);
            }
        }
        Err(Error::Numeric(format!(
            "Perron vector did not converge in {MAX_ITER} iterations"
        )))
    }
}
