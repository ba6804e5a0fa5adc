//! Phase-diagram grids, ego-network experiments and their CSV tables.

mod ego;
mod table;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

pub use ego::{ego_experiment, radical_sets, EgoCell, EgoExperimentSpec};
pub use table::{
    curves_csv, ego_csv, fmt17, phase_csv, write_curves_csv, write_ego_csv, write_phase_csv, write_text,
};

use crate::analytic::{self, alpha_pattern, Family, RegionLabel, RingRegions};
use crate::dynamics::{self, ModelConfig, OutcomeClass, SimOptions, Termination};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list_file, Graph};
use crate::weights::{ActivityMode, InfluenceMatrices};

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Parameter("grid needs at least one point".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Parameter("grid endpoints must be finite".into()));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    if hi <= lo {
        return Err(Error::Parameter(format!("grid must increase, got {lo}..{hi}")));
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

/// Parses `lo:hi:count`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Parameter(format!("grid `{text}` is not lo:hi:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    linspace(lo, hi, count)
}

pub(crate) fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Parameter(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Parameter(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

pub(crate) fn check_ranges(beta_grid: &[f64], tau_grid: &[f64]) -> Result<()> {
    if let Some(b) = beta_grid.iter().find(|&&b| !(b > 0.0)) {
        return Err(Error::Parameter(format!("beta must be positive, grid contains {b}")));
    }
    if let Some(t) = tau_grid.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::Parameter(format!("tau must lie in (0, 1), grid contains {t}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    Complete,
    Star,
    Ring,
    File(PathBuf),
}

impl Topology {
    pub fn family(&self) -> Option<Family> {
        match self {
            Topology::Complete => Some(Family::Complete),
            Topology::Star => Some(Family::Star),
            Topology::Ring => Some(Family::Ring),
            Topology::File(_) => None,
        }
    }

    pub fn build(&self, n: usize) -> Result<Graph> {
        match self {
            Topology::Complete => Graph::complete(n),
            Topology::Star => Graph::star(n),
            Topology::Ring => Graph::ring(n),
            Topology::File(path) => Ok(load_edge_list_file(path)?.graph),
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "complete" => Ok(Topology::Complete),
            "star" => Ok(Topology::Star),
            "ring" => Ok(Topology::Ring),
            "file" => Err(Error::Parameter("topology `file` needs a graph path".into())),
            other => Err(Error::Parameter(format!("unknown topology `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Simulate,
    Analytic,
    Both,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simulate" => Ok(Engine::Simulate),
            "analytic" => Ok(Engine::Analytic),
            "both" => Ok(Engine::Both),
            other => Err(Error::Parameter(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub topology: Topology,
    pub mode: ActivityMode,
    /// Agent count for generated topologies; ignored for files.
    pub n: usize,
    pub beta_grid: Vec<f64>,
    pub tau_grid: Vec<f64>,
    pub engine: Engine,
    pub options: SimOptions,
    /// Index of the single radical agent.
    pub radical: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl SweepSpec {
    pub fn new(topology: Topology, mode: ActivityMode, n: usize, beta_grid: Vec<f64>, tau_grid: Vec<f64>) -> Self {
        SweepSpec {
            topology,
            mode,
            n,
            beta_grid,
            tau_grid,
            engine: Engine::Both,
            options: SimOptions {
                record_states: false,
                ..SimOptions::default()
            },
            radical: 0,
            jobs: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_grid("beta", &self.beta_grid)?;
        check_grid("tau", &self.tau_grid)?;
        check_ranges(&self.beta_grid, &self.tau_grid)?;
        self.options.validate()?;
        if self.engine != Engine::Simulate && self.topology.family().is_none() {
            return Err(Error::Parameter(
                "analytic engine needs a complete, star or ring topology".into(),
            ));
        }
        Ok(())
    }
}

/// Label of one grid cell, from either engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellLabel {
    Region(RegionLabel),
    FixedPattern(Vec<bool>),
    Periodic(usize),
    Indeterminate(String),
    Unsupported(String),
}

impl CellLabel {
    /// Boundary, indeterminate and unsupported cells are not compared.
    pub fn is_flagged(&self) -> bool {
        matches!(
            self,
            CellLabel::Region(RegionLabel::Boundary) | CellLabel::Indeterminate(_) | CellLabel::Unsupported(_)
        )
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellLabel::Region(r) => r.fmt(f),
            CellLabel::FixedPattern(_) => f.write_str("FixedPattern"),
            CellLabel::Periodic(p) => write!(f, "Periodic({p})"),
            CellLabel::Indeterminate(_) => f.write_str("Indeterminate"),
            CellLabel::Unsupported(reason) => write!(f, "Unsupported({reason})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Match,
    Mismatch,
    NotApplicable,
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agreement::Match => "match",
            Agreement::Mismatch => "mismatch",
            Agreement::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCell {
    pub beta: f64,
    pub tau: f64,
    /// Simulated label when simulating, otherwise the analytic one.
    pub label: CellLabel,
    /// Analytic label when the engine is `Both`.
    pub analytic: Option<CellLabel>,
    /// Absorption step or cycle start; −1 when uncertified.
    pub steps: i64,
    /// Cycle length; 0 for fixed outcomes.
    pub period: usize,
    pub agreement: Agreement,
}

/// Maps a simulated outcome onto the region taxonomy where possible.
pub fn sim_label(
    outcome: &OutcomeClass,
    a0: &[bool],
    topology: Option<Family>,
) -> CellLabel {
    match outcome {
        OutcomeClass::AllActive => CellLabel::Region(RegionLabel::AllActive),
        OutcomeClass::AllInactive => CellLabel::Region(RegionLabel::AllInactive),
        OutcomeClass::Frozen => CellLabel::Region(RegionLabel::Frozen),
        OutcomeClass::FixedPattern(a) => {
            if topology == Some(Family::Ring) {
                let n = a.len();
                if let Some(j) = (1..n / 2).find(|&j| alpha_pattern(n, j) == *a) {
                    return CellLabel::Region(RegionLabel::Alpha(j));
                }
            }
            CellLabel::FixedPattern(a.clone())
        }
        OutcomeClass::Periodic { period, patterns } => {
            let complement: Vec<bool> = a0.iter().map(|&x| !x).collect();
            if *period == 2 && patterns.iter().any(|p| p == a0) && patterns.contains(&complement) {
                CellLabel::Region(RegionLabel::Oscillating2)
            } else {
                CellLabel::Periodic(*period)
            }
        }
        OutcomeClass::Indeterminate(reason) => CellLabel::Indeterminate(reason.clone()),
    }
}

fn unsupported(err: &Error) -> CellLabel {
    CellLabel::Unsupported(
        match err {
            Error::OutOfRange(_) => "out-of-range",
            Error::Uncovered(_) => "uncovered",
            Error::Parameter(_) => "parameter",
            _ => "error",
        }
        .into(),
    )
}

/// Per-β precomputation shared by all cells of a column.
struct Column {
    matrices: Option<Result<InfluenceMatrices>>,
    ring: Option<Result<RingRegions>>,
}

fn analytic_label(spec: &SweepSpec, family: Family, col: &Column, beta: f64, tau: f64) -> CellLabel {
    let result = match (&col.ring, family) {
        (Some(Ok(regions)), Family::Ring) => regions.classify(tau),
        (Some(Err(e)), Family::Ring) => return unsupported(e),
        _ => analytic::classify(family, spec.n, beta, tau, spec.mode),
    };
    match result {
        Ok(label) => CellLabel::Region(label),
        Err(e) => unsupported(&e),
    }
}

fn run_cell(spec: &SweepSpec, graph: &Arc<Graph>, col: &Column, beta: f64, tau: f64) -> Result<PhaseCell> {
    let family = spec.topology.family();
    let analytic = match (spec.engine, family) {
        (Engine::Simulate, _) | (_, None) => None,
        (_, Some(f)) => Some(analytic_label(spec, f, col, beta, tau)),
    };
    let mut cell = PhaseCell {
        beta,
        tau,
        label: CellLabel::Unsupported("none".into()),
        analytic: None,
        steps: -1,
        period: 0,
        agreement: Agreement::NotApplicable,
    };
    if spec.engine == Engine::Analytic {
        let label = analytic.expect("validated: analytic engine has a family");
        if label == CellLabel::Region(RegionLabel::Oscillating2) {
            cell.period = 2;
        }
        cell.label = label;
        return Ok(cell);
    }

    let m = match col.matrices.as_ref().expect("matrices built when simulating") {
        Ok(m) => m,
        Err(e) => return Err(Error::Parameter(e.to_string())),
    };
    let config = ModelConfig::with_radicals(graph.clone(), beta, tau, spec.mode, vec![spec.radical])?;
    let init = config.initial_state();
    let a0 = init.a.clone();
    let traj = dynamics::simulate_from(m, init, &spec.options)?;
    let outcome = dynamics::classify(&traj);
    cell.label = sim_label(&outcome, &a0, family);
    if !matches!(outcome, OutcomeClass::Indeterminate(_)) {
        match traj.termination {
            Termination::Absorbed { at } => cell.steps = at as i64,
            Termination::Periodic { start, period } => {
                cell.steps = start as i64;
                cell.period = period;
            }
            Termination::BudgetExhausted => {}
        }
    }
    if let Some(a) = analytic {
        cell.agreement = if a.is_flagged() || cell.label.is_flagged() {
            Agreement::NotApplicable
        } else if a == cell.label {
            Agreement::Match
        } else {
            Agreement::Mismatch
        };
        cell.analytic = Some(a);
    }
    Ok(cell)
}

pub(crate) fn with_jobs<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(work()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Parameter(format!("cannot start {k} workers: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

/// One cell per `(β, τ)`, β-major, in grid order.
pub fn phase_diagram(spec: &SweepSpec) -> Result<Vec<PhaseCell>> {
    spec.validate()?;
    let graph = Arc::new(spec.topology.build(spec.n)?);
    if spec.radical >= graph.len() {
        return Err(Error::Parameter(format!(
            "radical {} out of range for {} agents",
            spec.radical + 1,
            graph.len()
        )));
    }
    let family = spec.topology.family();
    with_jobs(spec.jobs, || {
        let columns: Vec<Column> = spec
            .beta_grid
            .par_iter()
            .map(|&beta| Column {
                matrices: (spec.engine != Engine::Analytic)
                    .then(|| InfluenceMatrices::new(&graph, beta, spec.mode)),
                ring: (family == Some(Family::Ring) && spec.engine != Engine::Simulate)
                    .then(|| RingRegions::new(spec.n, beta, spec.mode)),
            })
            .collect();
        let cells: Vec<(usize, f64)> = (0..spec.beta_grid.len())
            .flat_map(|b| spec.tau_grid.iter().map(move |&t| (b, t)))
            .collect();
        cells
            .par_iter()
            .map(|&(b, tau)| run_cell(spec, &graph, &columns[b], spec.beta_grid[b], tau))
            .collect::<Result<Vec<_>>>()
    })?
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(topology: Topology, mode: ActivityMode, n: usize, betas: &str, taus: &str) -> SweepSpec {
        SweepSpec::new(topology, mode, n, parse_grid(betas).unwrap(), parse_grid(taus).unwrap())
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.3:0.3:1").unwrap(), vec![0.3]);
        let g = parse_grid("0.1:20:50").unwrap();
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.1);
        assert!((g[49] - 20.0).abs() < 1e-12);
        for bad in ["1:0:3", "0:1", "a:1:2", "0:1:0", "0:1:-2"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn labels() {
        let a0 = vec![true, false, false, false, false];
        let osc = OutcomeClass::Periodic {
            period: 2,
            patterns: vec![vec![false, true, true, true, true], a0.clone()],
        };
        assert_eq!(sim_label(&osc, &a0, Some(Family::Star)), CellLabel::Region(RegionLabel::Oscillating2));
        let fixed = OutcomeClass::FixedPattern(vec![true, true, false, false, true]);
        assert_eq!(sim_label(&fixed, &a0, Some(Family::Ring)), CellLabel::Region(RegionLabel::Alpha(1)));
        assert_eq!(sim_label(&fixed, &a0, None).to_string(), "FixedPattern");
        assert_eq!(CellLabel::Periodic(4).to_string(), "Periodic(4)");
        assert_eq!(CellLabel::Unsupported("out-of-range".into()).to_string(), "Unsupported(out-of-range)");
    }

    #[test]
    fn complete_wal_column_is_ordered() {
        let spec = small(Topology::Complete, ActivityMode::Wal, 5, "1.5:20:12", "0.01:0.99:60");
        let cells = phase_diagram(&spec).unwrap();
        assert_eq!(cells.len(), 12 * 60);
        for col in cells.chunks(60) {
            let rank: Vec<u8> = col
                .iter()
                .filter_map(|c| match c.label {
                    CellLabel::Region(RegionLabel::AllActive) => Some(0),
                    CellLabel::Region(RegionLabel::Frozen) => Some(1),
                    CellLabel::Region(RegionLabel::AllInactive) => Some(2),
                    _ => None,
                })
                .collect();
            assert!(rank.windows(2).all(|w| w[0] <= w[1]), "{rank:?}");
            assert!(col.iter().all(|c| c.agreement != Agreement::Mismatch));
        }
    }

    #[test]
    fn permuted_grid_gives_same_cells() {
        let spec = small(Topology::Star, ActivityMode::Ual, 6, "0.5:6:5", "0.05:0.95:7");
        let cells = phase_diagram(&spec).unwrap();
        let mut rev = spec.clone();
        rev.beta_grid = vec![spec.beta_grid[3], spec.beta_grid[4]];
        rev.tau_grid = vec![spec.tau_grid[1], spec.tau_grid[5]];
        let sub = phase_diagram(&rev).unwrap();
        for c in sub {
            assert!(cells.contains(&c));
        }
    }

    #[test]
    fn jobs_do_not_change_output() {
        let mut spec = small(Topology::Ring, ActivityMode::Wal, 7, "1:8:6", "0.05:0.95:9");
        let a = phase_diagram(&spec).unwrap();
        spec.jobs = Some(1);
        let b = phase_diagram(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn analytic_engine_marks_unsupported() {
        let mut spec = small(Topology::Ring, ActivityMode::Wal, 5, "0.5:2:4", "0.2:0.8:3");
        spec.engine = Engine::Analytic;
        let cells = phase_diagram(&spec).unwrap();
        assert_eq!(cells[0].label, CellLabel::Unsupported("out-of-range".into()));
        assert!(cells.iter().all(|c| c.steps == -1 && c.agreement == Agreement::NotApplicable));
        assert!(!matches!(cells.last().unwrap().label, CellLabel::Unsupported(_)));
    }

    #[test]
    fn invalid_specs() {
        let mut spec = small(Topology::Complete, ActivityMode::Wal, 5, "1:2:2", "0.2:0.8:3");
        spec.tau_grid = vec![0.5, 0.4];
        assert!(phase_diagram(&spec).is_err());
        spec.tau_grid = vec![];
        assert!(phase_diagram(&spec).is_err());
        let spec = SweepSpec {
            engine: Engine::Both,
            ..small(Topology::File("x.edges".into()), ActivityMode::Wal, 5, "1:2:2", "0.2:0.8:3")
        };
        assert!(phase_diagram(&spec).is_err());
        assert!("file".parse::<Topology>().is_err());
    }
}
