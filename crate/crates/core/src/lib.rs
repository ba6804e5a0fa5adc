//! Dynamic threshold models of collective action on social networks.
//!
//! Agents carry a threshold that evolves by DeGroot averaging and an on/off
//! action decided by comparing the (weighted) fraction of active neighbours
//! with that threshold. The crate provides:
//!
//! - [`graph`]: complete, star and ring generators plus an edge-list loader;
//! - [`weights`]: the threshold matrix `F` and activity matrix `G`;
//! - [`dynamics`]: the simulator with certified absorption / cycle detection;
//! - [`analytic`]: closed-form thresholds and outcome classifiers for the
//!   complete, star and ring graphs, used as an independent oracle;
//! - [`sweep`]: phase-diagram grids, ego-network experiments and CSV output.

pub mod analytic;
pub mod dynamics;
mod error;
pub mod graph;
pub mod sweep;
pub mod weights;

pub use analytic::RegionLabel;
pub use dynamics::{ModelConfig, OutcomeClass, SimOptions, SimState, Termination, Trajectory};
pub use error::{Error, Result};
pub use graph::{Graph, LoadedGraph};
pub use weights::{ActivityMode, InfluenceMatrices};
