//! `threshold-cascade`: simulate, classify and sweep threshold dynamics on
//! networks.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for runtime errors.

mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use threshold_cascade::analytic::{self, Family};
use threshold_cascade::dynamics::{self, bits, ModelConfig, SimOptions, Termination};
use threshold_cascade::graph::load_edge_list_file;
use threshold_cascade::sweep::{
    self, fmt17, parse_grid, write_curves_csv, write_ego_csv, write_phase_csv, write_text, Agreement, EgoExperimentSpec,
    Engine, SweepSpec, Topology,
};
use threshold_cascade::{ActivityMode, Error, Graph, InfluenceMatrices};

#[derive(Parser)]
#[command(name = "threshold-cascade", version, about = "Threshold dynamics of collective action on networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and report its certified outcome.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Closed-form region of a point on the complete, star or ring graph.
    #[command(args_override_self = true)]
    Classify(ClassifyArgs),
    /// Phase diagram over a (beta, tau) grid, written as CSV.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Ego-network experiment with random radical placement.
    #[command(args_override_self = true)]
    Ego(EgoArgs),
    /// Print the influence matrices F and G.
    #[command(args_override_self = true)]
    DumpWeights(DumpArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyKind {
    Complete,
    Star,
    Ring,
    File,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, value_enum)]
    topology: Option<TopologyKind>,
    /// Edge-list file; implies `--topology file`.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// Number of agents for generated topologies.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_parser = positive)]
    beta: f64,
    #[arg(long, value_parser = unit_open)]
    tau: f64,
    #[arg(long, default_value = "wal")]
    mode: ActivityMode,
    /// Initially radical agents, comma separated (node ids for files).
    #[arg(long, value_delimiter = ',')]
    radicals: Option<Vec<u64>>,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    /// Write t, theta, p, a per step, tab separated.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    topology: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = positive)]
    beta: f64,
    #[arg(long, value_parser = unit_open)]
    tau: f64,
    #[arg(long, default_value = "wal")]
    mode: ActivityMode,
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Clone)]
struct Grid(Vec<f64>);

fn grid(s: &str) -> Result<Grid, String> {
    parse_grid(s).map(Grid).map_err(|e| e.to_string())
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value = "wal")]
    mode: ActivityMode,
    /// lo:hi:count
    #[arg(long, value_parser = grid)]
    beta: Grid,
    /// lo:hi:count
    #[arg(long, value_parser = grid)]
    tau: Grid,
    #[arg(long, default_value = "both")]
    engine: Engine,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Also write the boundary curves sampled on the beta grid.
    #[arg(long, value_name = "PATH")]
    curves: Option<PathBuf>,
    /// Radical agent (node id for files).
    #[arg(long)]
    radical: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, env = "THRESHOLD_CASCADE_JOBS")]
    jobs: Option<NonZeroUsize>,
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EgoArgs {
    #[arg(long, value_name = "PATH")]
    graph: PathBuf,
    /// Ego node id; defaults to the highest-degree node.
    #[arg(long)]
    ego: Option<u64>,
    /// Connect the ego to every node, adding it if absent.
    #[arg(long)]
    attach_ego: bool,
    #[arg(long, default_value = "wal")]
    mode: ActivityMode,
    /// Fraction of initially radical agents.
    #[arg(long, default_value_t = 0.1)]
    xi: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// lo:hi:count
    #[arg(long, value_parser = grid)]
    beta: Grid,
    /// lo:hi:count
    #[arg(long, value_parser = grid)]
    tau: Grid,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    #[arg(long, env = "THRESHOLD_CASCADE_JOBS")]
    jobs: Option<NonZeroUsize>,
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_parser = positive)]
    beta: f64,
    #[arg(long, default_value = "wal")]
    mode: ActivityMode,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn unit_open(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x < 1.0 => Ok(x),
        _ => Err(format!("expected a number in (0, 1), got `{s}`")),
    }
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(format!("{}: {e}", e.origin()))
}

fn fail(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// A graph plus the mapping from user-facing node ids to agents.
struct Resolved {
    graph: Graph,
    ids: Option<Vec<u64>>,
}

impl Resolved {
    fn agent(&self, id: u64) -> Result<usize, Failure> {
        match &self.ids {
            Some(ids) => ids
                .iter()
                .position(|&x| x == id)
                .ok_or_else(|| fail(format!("node {id} is not in the graph"))),
            None if (id as usize) < self.graph.len() => Ok(id as usize),
            None => Err(fail(format!("agent {id} out of range for n = {}", self.graph.len()))),
        }
    }
}

impl GraphArgs {
    fn topology(&self) -> Result<Topology, Failure> {
        match (self.topology, &self.graph) {
            (None | Some(TopologyKind::File), Some(path)) => Ok(Topology::File(path.clone())),
            (Some(TopologyKind::File), None) => Err(fail("--topology file needs --graph")),
            (Some(_), Some(_)) => Err(fail("--graph only goes with --topology file")),
            (None, None) => Err(fail("give --topology or --graph")),
            (Some(kind), None) => Ok(match kind {
                TopologyKind::Complete => Topology::Complete,
                TopologyKind::Star => Topology::Star,
                _ => Topology::Ring,
            }),
        }
    }

    fn size(&self) -> Result<usize, Failure> {
        self.n.ok_or_else(|| fail("generated topologies need --n"))
    }

    fn resolve(&self) -> Result<Resolved, Failure> {
        let topology = self.topology()?;
        if let Topology::File(path) = &topology {
            let loaded = load_edge_list_file(path)?;
            return Ok(Resolved {
                graph: loaded.graph,
                ids: Some(loaded.ids),
            });
        }
        let graph = topology.build(self.size()?).map_err(usage)?;
        Ok(Resolved {
            graph,
            ids: None,
        })
    }
}

fn vector(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt17(x)).collect::<Vec<_>>().join(" ")
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let resolved = args.graph.resolve()?;
    let radicals = match &args.radicals {
        Some(ids) => ids.iter().map(|&id| resolved.agent(id)).collect::<Result<Vec<_>, _>>()?,
        None => vec![0],
    };
    let config = ModelConfig::with_radicals(Arc::new(resolved.graph), args.beta, args.tau, args.mode, radicals)
        .map_err(usage)?;
    config.validate().map_err(usage)?;
    let opts = SimOptions {
        budget: args.budget,
        record_states: args.trace.is_some(),
        ..SimOptions::default()
    };
    opts.validate().map_err(usage)?;

    let traj = dynamics::simulate(&config, &opts)?;
    if let Some(path) = &args.trace {
        let mut text = String::new();
        for s in &traj.states {
            let _ = writeln!(text, "{}\t{}\t{}\t{}", s.t, vector(&s.theta), vector(&s.p), bits(&s.a));
        }
        write_text(path, &text)?;
    }
    let outcome = dynamics::classify(&traj);
    match traj.termination {
        Termination::Absorbed { at } => println!("{outcome}, absorbed at t={at}"),
        Termination::Periodic { start, period } => println!("{outcome}, period {period} from t={start}"),
        Termination::BudgetExhausted => println!("{outcome}, budget of {} steps exhausted", opts.budget),
    }
    Ok(())
}

fn classify(args: ClassifyArgs) -> Result<(), Failure> {
    let label = analytic::classify(args.topology, args.n, args.beta, args.tau, args.mode)?;
    let curves = analytic::boundary_curves(args.topology, args.n, args.beta, args.mode)?;
    println!("topology: {}", args.topology);
    println!("mode: {}", args.mode);
    println!("n: {}", args.n);
    println!("beta: {}", args.beta);
    println!("tau: {}", args.tau);
    println!("label: {label}");
    for (name, value) in curves {
        println!("{name}: {}", fmt17(value));
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let topology = args.graph.topology()?;
    let (n, radical) = match &topology {
        Topology::File(path) => {
            let loaded = load_edge_list_file(path)?;
            let radical = match args.radical {
                Some(id) => loaded
                    .index_of(id)
                    .ok_or_else(|| fail(format!("node {id} is not in the graph")))?,
                None => 0,
            };
            (loaded.graph.len(), radical)
        }
        _ => {
            let n = args.graph.size()?;
            topology.build(n).map_err(usage)?;
            let radical = args.radical.unwrap_or(0) as usize;
            if radical >= n {
                return Err(fail(format!("agent {radical} out of range for n = {n}")));
            }
            (n, radical)
        }
    };
    if args.curves.is_some() && topology.family().is_none() {
        return Err(fail("--curves needs a complete, star or ring topology"));
    }
    let mut spec = SweepSpec::new(topology, args.mode, n, args.beta.0, args.tau.0);
    spec.engine = args.engine;
    spec.options.budget = args.budget;
    spec.radical = radical;
    spec.jobs = args.jobs.map(NonZeroUsize::get);
    spec.validate().map_err(usage)?;

    let cells = sweep::phase_diagram(&spec)?;
    write_phase_csv(&cells, &args.out)?;
    if let (Some(path), Some(family)) = (&args.curves, spec.topology.family()) {
        write_curves_csv(family, n, spec.mode, &spec.beta_grid, path)?;
    }

    let mut labels: BTreeMap<String, usize> = BTreeMap::new();
    for c in &cells {
        *labels.entry(c.label.to_string()).or_default() += 1;
    }
    let counts: Vec<String> = labels.iter().map(|(k, v)| format!("{k} {v}")).collect();
    println!("{} cells written to {}", cells.len(), args.out.display());
    println!("labels: {}", counts.join(", "));
    if spec.engine == Engine::Both {
        let count = |a| cells.iter().filter(|c| c.agreement == a).count();
        println!(
            "agreement: match {}, mismatch {}, n/a {}",
            count(Agreement::Match),
            count(Agreement::Mismatch),
            count(Agreement::NotApplicable)
        );
    }
    Ok(())
}

fn ego(args: EgoArgs) -> Result<(), Failure> {
    let mut loaded = load_edge_list_file(&args.graph)?;
    if args.attach_ego {
        let id = args.ego.ok_or_else(|| fail("--attach-ego needs --ego"))?;
        loaded = loaded.attach_hub(id)?;
    }
    let ego = match args.ego {
        Some(id) => loaded.index_of(id).ok_or_else(|| {
            fail(format!("node {id} is not in the graph; pass --attach-ego to add it as a hub"))
        })?,
        None => loaded.graph.max_degree_agent(),
    };
    let spec = EgoExperimentSpec {
        graph: Arc::new(loaded.graph),
        ego,
        mode: args.mode,
        xi: args.xi,
        trials: args.trials,
        seed: args.seed,
        beta_grid: args.beta.0,
        tau_grid: args.tau.0,
        options: SimOptions {
            budget: args.budget,
            record_states: false,
            ..SimOptions::default()
        },
        jobs: args.jobs.map(NonZeroUsize::get),
    };
    spec.validate().map_err(usage)?;

    let cells = sweep::ego_experiment(&spec)?;
    write_ego_csv(&cells, &args.out)?;
    let indeterminate: usize = cells.iter().map(|c| c.indeterminate).sum();
    println!(
        "{} cells x {} trials ({} radicals each, ego node {}) written to {}",
        cells.len(),
        spec.trials,
        spec.radical_count(),
        loaded.ids[ego],
        args.out.display()
    );
    println!("indeterminate runs: {indeterminate}");
    Ok(())
}

fn dump_weights(args: DumpArgs) -> Result<(), Failure> {
    let resolved = args.graph.resolve()?;
    let m = InfluenceMatrices::new(&resolved.graph, args.beta, args.mode).map_err(usage)?;
    let mut text = String::new();
    for (name, matrix) in [("F", m.f()), ("G", m.g())] {
        let _ = writeln!(text, "# {name}");
        for row in matrix.rows() {
            let _ = writeln!(text, "{}", vector(row));
        }
    }
    match &args.out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Classify(a) => classify(a),
        Command::Sweep(a) => sweep(a),
        Command::Ego(a) => ego(a),
        Command::DumpWeights(a) => dump_weights(a),
    }
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let argv = match config::expand(argv) {
        Ok(argv) => argv,
        Err(config::ConfigError::Read(msg)) => {
            eprintln!("io: {msg}");
            return ExitCode::from(2);
        }
        Err(config::ConfigError::Syntax(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("{}: {e}", e.origin());
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn value_parsers() {
        assert!(positive("0").is_err());
        assert!(positive("inf").is_err());
        assert_eq!(positive("2.5"), Ok(2.5));
        assert!(unit_open("1").is_err());
        assert_eq!(unit_open("0.25"), Ok(0.25));
        assert_eq!(grid("1:3:3").unwrap().0, vec![1.0, 2.0, 3.0]);
        assert!(grid("1:3").is_err());
    }

    #[test]
    fn file_topology_resolution() {
        let args = GraphArgs {
            topology: None,
            graph: Some(PathBuf::from("g.edges")),
            n: None,
        };
        assert_eq!(args.topology().ok(), Some(Topology::File("g.edges".into())));
        let args = GraphArgs {
            topology: Some(TopologyKind::File),
            graph: None,
            n: None,
        };
        assert!(args.topology().is_err());
    }
}
