use std::path::Path;
use std::sync::Arc;

use threshold_cascade::analytic::{self, Family, RegionLabel};
use threshold_cascade::dynamics::{self, ModelConfig, OutcomeClass, SimOptions};
use threshold_cascade::graph::load_edge_list_file;
use threshold_cascade::sweep::{linspace, phase_csv, phase_diagram, Agreement, Engine, SweepSpec, Topology};
use threshold_cascade::{ActivityMode, Graph, InfluenceMatrices};

fn bundled() -> threshold_cascade::LoadedGraph {
    load_edge_list_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ego53.edges")).unwrap()
}

#[test]
fn bundled_ego_graph_shape() {
    let g = bundled().graph;
    assert_eq!(g.len(), 53);
    assert_eq!(g.edge_count(), 198);
    let hub = g.max_degree_agent();
    assert_eq!(g.neighbors(hub).len(), 52);
}

#[test]
fn perron_vector_matches_degrees() {
    let g = bundled().graph;
    for beta in [0.5, 3.0, 12.0] {
        let m = InfluenceMatrices::new(&g, beta, ActivityMode::Wal).unwrap();
        let pi = m.perron_vector().unwrap();
        let w: Vec<f64> = (0..g.len()).map(|i| beta + g.closed_degree(i) as f64 - 1.0).collect();
        let total: f64 = w.iter().sum();
        for (p, wi) in pi.iter().zip(&w) {
            assert!((p - wi / total).abs() < 1e-12);
        }
    }
}

// Frozen outcomes of the complete WAL graph, n = 5, radical 0.
#[test]
fn complete_wal_frozen_values() {
    let graph = Arc::new(Graph::complete(5).unwrap());
    let cases = [
        (15.0, 0.99, OutcomeClass::AllInactive, 19),
        (118.0, 0.01, OutcomeClass::AllActive, 56),
        (2.0, 0.6, OutcomeClass::AllInactive, 1),
    ];
    for (beta, tau, expected, at) in cases {
        let config = ModelConfig::new(graph.clone(), beta, tau, ActivityMode::Wal).unwrap();
        let traj = dynamics::simulate(&config, &SimOptions::default()).unwrap();
        assert_eq!(dynamics::classify(&traj), expected, "beta={beta} tau={tau}");
        let uniform = traj.actions.iter().position(|a| a.iter().all(|&x| x == a[0]) && a != &traj.actions[0]);
        assert_eq!(uniform, Some(at), "beta={beta} tau={tau}");
    }
}

// brute force: simulate every cell of a small ring grid and compare labels
#[test]
fn ring_seven_simulation_matches_classifier() {
    let n = 7;
    let graph = Arc::new(Graph::ring(n).unwrap());
    let mut compared = 0;
    for mode in [ActivityMode::Wal, ActivityMode::Ual] {
        for beta in linspace(1.0, 12.0, 23).unwrap() {
            for tau in linspace(0.013, 0.987, 40).unwrap() {
                let label = match analytic::classify(Family::Ring, n, beta, tau, mode) {
                    Ok(RegionLabel::Boundary) | Err(_) => continue,
                    Ok(l) => l,
                };
                let config = ModelConfig::new(graph.clone(), beta, tau, mode).unwrap();
                let traj = dynamics::simulate(&config, &SimOptions::default()).unwrap();
                let outcome = dynamics::classify(&traj);
                let simulated = match &outcome {
                    OutcomeClass::AllActive => RegionLabel::AllActive,
                    OutcomeClass::AllInactive => RegionLabel::AllInactive,
                    OutcomeClass::Frozen => RegionLabel::Frozen,
                    OutcomeClass::FixedPattern(a) => {
                        let j = (1..=n / 2).find(|&j| &analytic::alpha_pattern(n, j) == a);
                        RegionLabel::Alpha(j.expect("fixed pattern is an alpha pattern"))
                    }
                    OutcomeClass::Indeterminate(_) => continue,
                    other => panic!("unexpected {other} at beta={beta} tau={tau}"),
                };
                assert_eq!(simulated, label, "{mode} beta={beta} tau={tau}");
                compared += 1;
            }
        }
    }
    assert!(compared > 1500, "only {compared} cells compared");
}

#[test]
fn phase_csv_independent_of_workers() {
    let make = |jobs| {
        let mut spec = SweepSpec::new(
            Topology::Star,
            ActivityMode::Wal,
            20,
            linspace(0.1, 20.0, 12).unwrap(),
            linspace(0.01, 0.99, 12).unwrap(),
        );
        spec.engine = Engine::Both;
        spec.jobs = jobs;
        phase_diagram(&spec).unwrap()
    };
    let one = make(Some(1));
    assert_eq!(phase_csv(&one), phase_csv(&make(Some(4))));
    assert!(one.iter().all(|c| c.agreement != Agreement::Mismatch));
}
