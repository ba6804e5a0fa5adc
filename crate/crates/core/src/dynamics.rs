//! Coupled threshold / action dynamics.
//!
//! `θ(t+1) = F θ(t)`, `p(t+1) = G a(t)`, `a_i(t+1) = 1` iff
//! `p_i(t+1) ≥ θ_i(t+1)` and `p_i(t+1) > 0`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weights::{ActivityMode, InfluenceMatrices};

/// Parameters of one run.
#[derive(Debug, Clone)]
pub struct ModelConfig {
    pub graph: Arc<Graph>,
    pub beta: f64,
    pub tau: f64,
    pub mode: ActivityMode,
    /// Agents starting with threshold 0 and action 1. Sorted, no duplicates.
    pub radicals: Vec<usize>,
}

impl ModelConfig {
    /// Single radical at agent 0.
    pub fn new(graph: Arc<Graph>, beta: f64, tau: f64, mode: ActivityMode) -> Result<Self> {
        Self::with_radicals(graph, beta, tau, mode, vec![0])
    }

    pub fn with_radicals(
        graph: Arc<Graph>,
        beta: f64,
        tau: f64,
        mode: ActivityMode,
        mut radicals: Vec<usize>,
    ) -> Result<Self> {
        radicals.sort_unstable();
        radicals.dedup();
        let config = ModelConfig {
            graph,
            beta,
            tau,
            mode,
            radicals,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Parameter(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::Parameter(format!("tau must lie in (0, 1), got {}", self.tau)));
        }
        if self.radicals.is_empty() {
            return Err(Error::Parameter("radical set is empty".into()));
        }
        if let Some(&r) = self.radicals.iter().find(|&&r| r >= self.graph.len()) {
            return Err(Error::Parameter(format!(
                "radical {} out of range for {} agents",
                r + 1,
                self.graph.len()
            )));
        }
        Ok(())
    }

    pub fn matrices(&self) -> Result<InfluenceMatrices> {
        InfluenceMatrices::new(&self.graph, self.beta, self.mode)
    }

    pub fn initial_state(&self) -> SimState {
        let n = self.graph.len();
        let mut theta = vec![self.tau; n];
        let mut a = vec![false; n];
        for &r in &self.radicals {
            theta[r] = 0.0;
            a[r] = true;
        }
        SimState {
            t: 0,
            theta,
            p: vec![0.0; n],
            a,
        }
    }
}

/// State at one time step. `p` at `t = 0` is a placeholder.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: usize,
    pub theta: Vec<f64>,
    pub p: Vec<f64>,
    pub a: Vec<bool>,
}

impl SimState {
    pub fn active_count(&self) -> usize {
        self.a.iter().filter(|&&x| x).count()
    }
}

/// One synchronous update.
pub fn step(state: &SimState, m: &InfluenceMatrices) -> SimState {
    let theta = m.apply_f(&state.theta);
    let p = m.apply_g(&state.a);
    let a = p.iter().zip(&theta).map(|(&p, &th)| p > 0.0 && p >= th).collect();
    SimState {
        t: state.t + 1,
        theta,
        p,
        a,
    }
}

/// Consensus value of the thresholds, `(π' θ0) 𝟙`.
pub fn threshold_limit(m: &InfluenceMatrices, theta0: &[f64]) -> Result<Vec<f64>> {
    if theta0.len() != m.len() {
        return Err(Error::InvalidSize(format!(
            "theta0 has {} entries, expected {}",
            theta0.len(),
            m.len()
        )));
    }
    let pi = m.perron_vector()?;
    let c: f64 = pi.iter().zip(theta0).map(|(p, t)| p * t).sum();
    Ok(vec![c; m.len()])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub budget: usize,
    pub eps_theta: f64,
    pub eps_margin: f64,
    /// Keep every `SimState`; actions are always kept.
    pub record_states: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            budget: 100_000,
            eps_theta: 1e-12,
            eps_margin: 1e-9,
            record_states: true,
        }
    }
}

impl SimOptions {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Parameter("budget must be at least 1".into()));
        }
        if !(self.eps_theta > 0.0 && self.eps_margin > 0.0) {
            return Err(Error::Parameter("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The action vector is constant from step `at` on.
    Absorbed { at: usize },
    /// `a(t + period) = a(t)` for all `t ≥ start`.
    Periodic { start: usize, period: usize },
    BudgetExhausted,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Recorded states from `t = 0`; empty unless `record_states` was set.
    pub states: Vec<SimState>,
    /// `a(t)` for every computed step.
    pub actions: Vec<Vec<bool>>,
    pub termination: Termination,
    /// Smallest `|p_i − θ_i|` over decisions with `p_i > 0`.
    pub min_margin: f64,
    pub eps_margin: f64,
}

impl Trajectory {
    pub fn last_action(&self) -> &[bool] {
        self.actions.last().expect("trajectory holds a(0)")
    }

    pub fn margin_ok(&self) -> bool {
        self.min_margin >= self.eps_margin
    }
}

fn is_uniform(a: &[bool]) -> bool {
    a.iter().all(|&x| x) || a.iter().all(|&x| !x)
}

fn spread(theta: &[f64]) -> f64 {
    let (lo, hi) = theta
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    hi - lo
}

pub fn simulate(config: &ModelConfig, opts: &SimOptions) -> Result<Trajectory> {
    config.validate()?;
    let m = config.matrices()?;
    simulate_from(&m, config.initial_state(), opts)
}

/// Iterates from `init` until the outcome is certified or the budget runs out.
///
/// A row-stochastic `F` keeps every later threshold inside
/// `[min θ(t), max θ(t)]`, so a spread below `eps_theta` pins all future
/// thresholds to within `eps_theta` of the consensus value. From then on a
/// repeated action vector repeats the whole future.
pub fn simulate_from(m: &InfluenceMatrices, init: SimState, opts: &SimOptions) -> Result<Trajectory> {
    opts.validate()?;
    if init.theta.len() != m.len() || init.a.len() != m.len() {
        return Err(Error::InvalidSize(format!(
            "state has {} agents, matrices have {}",
            init.theta.len(),
            m.len()
        )));
    }
    let mut actions = vec![init.a.clone()];
    let mut states = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut in_band = false;
    let mut state = init;
    state.t = 0;

    let termination = loop {
        let t = state.t;
        if is_uniform(&state.a) {
            break Termination::Absorbed { at: t };
        }
        if !in_band && spread(&state.theta) < opts.eps_theta {
            in_band = true;
        }
        if in_band {
            if let Some(&first) = seen.get(&state.a) {
                break Termination::Periodic {
                    start: first,
                    period: t - first,
                };
            }
            seen.insert(state.a.clone(), t);
        }
        if t >= opts.budget {
            break Termination::BudgetExhausted;
        }
        let next = step(&state, m);
        for (&p, &th) in next.p.iter().zip(&next.theta) {
            if p > 0.0 {
                min_margin = min_margin.min((p - th).abs());
            }
        }
        actions.push(next.a.clone());
        if opts.record_states {
            states.push(std::mem::replace(&mut state, next));
        } else {
            state = next;
        }
    };
    if opts.record_states {
        states.push(state);
    }

    let termination = match termination {
        Termination::Absorbed { at } => Termination::Absorbed {
            at: rewind(&actions, at, 1),
        },
        Termination::Periodic { start, period } => {
            let start = rewind(&actions, start, period);
            if period == 1 {
                Termination::Absorbed { at: start }
            } else {
                Termination::Periodic { start, period }
            }
        }
        other => other,
    };

    Ok(Trajectory {
        states,
        actions,
        termination,
        min_margin,
        eps_margin: opts.eps_margin,
    })
}

// earliest s with a(u) = a(u + period) for all u ≥ s, given it holds from `from`
fn rewind(actions: &[Vec<bool>], from: usize, period: usize) -> usize {
    let mut s = from;
    while s > 0 && s - 1 + period < actions.len() && actions[s - 1] == actions[s - 1 + period] {
        s -= 1;
    }
    s
}

/// Asymptotic outcome of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeClass {
    AllActive,
    AllInactive,
    /// `a(t) = a(0)` for every `t ≥ 1`.
    Frozen,
    FixedPattern(Vec<bool>),
    Periodic { period: usize, patterns: Vec<Vec<bool>> },
    Indeterminate(String),
}

impl OutcomeClass {
    /// Pattern held from absorption on, if the outcome is a fixed point.
    pub fn fixed_pattern(&self, a0: &[bool]) -> Option<Vec<bool>> {
        match self {
            OutcomeClass::AllActive => Some(vec![true; a0.len()]),
            OutcomeClass::AllInactive => Some(vec![false; a0.len()]),
            OutcomeClass::Frozen => Some(a0.to_vec()),
            OutcomeClass::FixedPattern(a) => Some(a.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeClass::AllActive => f.write_str("AllActive"),
            OutcomeClass::AllInactive => f.write_str("AllInactive"),
            OutcomeClass::Frozen => f.write_str("Frozen"),
            OutcomeClass::FixedPattern(a) => write!(f, "FixedPattern({})", bits(a)),
            OutcomeClass::Periodic { period, patterns } => {
                let p: Vec<String> = patterns.iter().map(|a| bits(a)).collect();
                write!(f, "Periodic({period}: {})", p.join(" "))
            }
            OutcomeClass::Indeterminate(reason) => write!(f, "Indeterminate({reason})"),
        }
    }
}

pub fn bits(a: &[bool]) -> String {
    a.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

pub fn classify(traj: &Trajectory) -> OutcomeClass {
    let outcome = match traj.termination {
        Termination::BudgetExhausted => return OutcomeClass::Indeterminate("budget".into()),
        Termination::Absorbed { at } => {
            let a = &traj.actions[at];
            if a.iter().all(|&x| x) {
                OutcomeClass::AllActive
            } else if a.iter().all(|&x| !x) {
                OutcomeClass::AllInactive
            } else if at == 0 {
                OutcomeClass::Frozen
            } else {
                OutcomeClass::FixedPattern(a.clone())
            }
        }
        Termination::Periodic { start, period } => OutcomeClass::Periodic {
            period,
            patterns: traj.actions[start..start + period].to_vec(),
        },
    };
    if traj.margin_ok() {
        outcome
    } else {
        OutcomeClass::Indeterminate("margin".into())
    }
}
