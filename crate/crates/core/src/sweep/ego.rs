use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_grid, check_ranges, with_jobs};
use crate::dynamics::{self, OutcomeClass, SimOptions, SimState, Termination};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weights::{ActivityMode, InfluenceMatrices};

#[derive(Debug, Clone)]
pub struct EgoExperimentSpec {
    pub graph: Arc<Graph>,
    /// Index of the ego agent, always radical.
    pub ego: usize,
    pub mode: ActivityMode,
    /// Fraction of agents initially radical; `round(ξ n)` radicals per trial.
    pub xi: f64,
    pub trials: usize,
    pub seed: u64,
    pub beta_grid: Vec<f64>,
    pub tau_grid: Vec<f64>,
    pub options: SimOptions,
    pub jobs: Option<usize>,
}

impl EgoExperimentSpec {
    pub fn radical_count(&self) -> usize {
        (self.xi * self.graph.len() as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        check_grid("beta", &self.beta_grid)?;
        check_grid("tau", &self.tau_grid)?;
        check_ranges(&self.beta_grid, &self.tau_grid)?;
        self.options.validate()?;
        if self.ego >= self.graph.len() {
            return Err(Error::Parameter(format!("ego index {} out of range", self.ego)));
        }
        if !(0.0..=1.0).contains(&self.xi) {
            return Err(Error::Parameter(format!("xi must lie in [0, 1], got {}", self.xi)));
        }
        if self.radical_count() == 0 {
            return Err(Error::Parameter(format!(
                "round(xi * n) = 0 for xi = {} and n = {}",
                self.xi,
                self.graph.len()
            )));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EgoCell {
    pub beta: f64,
    pub tau: f64,
    pub mean_active: f64,
    /// Trials that ended uncertified.
    pub indeterminate: usize,
}

/// Radical sets per trial: the ego plus `round(ξn) − 1` agents drawn without
/// replacement. Trial `i` uses the ChaCha8 stream `i` of `seed`.
pub fn radical_sets(spec: &EgoExperimentSpec) -> Result<Vec<Vec<usize>>> {
    spec.validate()?;
    let n = spec.graph.len();
    let others: Vec<usize> = (0..n).filter(|&i| i != spec.ego).collect();
    let extra = spec.radical_count() - 1;
    Ok((0..spec.trials)
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(trial as u64);
            let mut set: Vec<usize> = sample(&mut rng, others.len(), extra)
                .into_iter()
                .map(|k| others[k])
                .collect();
            set.push(spec.ego);
            set.sort_unstable();
            set
        })
        .collect())
}

fn final_fraction(traj: &dynamics::Trajectory, outcome: &OutcomeClass) -> (f64, bool) {
    let n = traj.actions[0].len() as f64;
    let frac = |a: &[bool]| a.iter().filter(|&&x| x).count() as f64 / n;
    match (outcome, traj.termination) {
        (OutcomeClass::Indeterminate(_), _) | (_, Termination::BudgetExhausted) => (frac(traj.last_action()), true),
        (_, Termination::Absorbed { at }) => (frac(&traj.actions[at]), false),
        (_, Termination::Periodic { start, period }) => {
            let total: f64 = traj.actions[start..start + period].iter().map(|a| frac(a)).sum();
            (total / period as f64, false)
        }
    }
}

fn run_cell(spec: &EgoExperimentSpec, m: &InfluenceMatrices, sets: &[Vec<usize>], beta: f64, tau: f64) -> EgoCell {
    let n = spec.graph.len();
    let mut total = 0.0;
    let mut indeterminate = 0;
    for set in sets {
        let mut init = SimState {
            t: 0,
            theta: vec![tau; n],
            p: vec![0.0; n],
            a: vec![false; n],
        };
        for &r in set {
            init.theta[r] = 0.0;
            init.a[r] = true;
        }
        let traj = dynamics::simulate_from(m, init, &spec.options).expect("validated options and sizes");
        let outcome = dynamics::classify(&traj);
        let (frac, flagged) = final_fraction(&traj, &outcome);
        total += frac;
        indeterminate += usize::from(flagged);
    }
    EgoCell {
        beta,
        tau,
        mean_active: total / sets.len() as f64,
        indeterminate,
    }
}

/// Mean final active fraction per `(β, τ)`, β-major.
pub fn ego_experiment(spec: &EgoExperimentSpec) -> Result<Vec<EgoCell>> {
    let sets = radical_sets(spec)?;
    with_jobs(spec.jobs, || {
        let matrices = spec
            .beta_grid
            .par_iter()
            .map(|&b| InfluenceMatrices::new(&spec.graph, b, spec.mode))
            .collect::<Result<Vec<_>>>()?;
        let cells: Vec<(usize, f64)> = (0..spec.beta_grid.len())
            .flat_map(|b| spec.tau_grid.iter().map(move |&t| (b, t)))
            .collect();
        Ok(cells
            .par_iter()
            .map(|&(b, tau)| run_cell(spec, &matrices[b], &sets, spec.beta_grid[b], tau))
            .collect())
    })?
}
