//! Closed-form thresholds and outcome classifiers for the complete, star and
//! ring graphs.

mod complete;
mod curves;
mod ring;
mod star;

use std::fmt;
use std::str::FromStr;

pub use complete::{classify_complete, thresholds_complete};
pub use curves::{compute_q, ClassifierCurves, Q_DECAY_TOL, T_CAP};
pub use ring::{alpha_pattern, classify_ring, ring_edges, thresholds_ring, RingRegions};
pub use star::{classify_star, thresholds_star};

use crate::error::{Error, Result};
use crate::weights::ActivityMode;

/// Distance from a region boundary below which a point is labelled
/// [`RegionLabel::Boundary`].
pub const EPS_BOUNDARY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionLabel {
    AllActive,
    AllInactive,
    Frozen,
    Alpha(usize),
    Oscillating2,
    Boundary,
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionLabel::AllActive => f.write_str("AllActive"),
            RegionLabel::AllInactive => f.write_str("AllInactive"),
            RegionLabel::Frozen => f.write_str("Frozen"),
            RegionLabel::Alpha(j) => write!(f, "Alpha({j})"),
            RegionLabel::Oscillating2 => f.write_str("Oscillating2"),
            RegionLabel::Boundary => f.write_str("Boundary"),
        }
    }
}

/// Topologies with closed-form results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Complete,
    Star,
    Ring,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Complete => "complete",
            Family::Star => "star",
            Family::Ring => "ring",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "complete" => Ok(Family::Complete),
            "star" => Ok(Family::Star),
            "ring" => Ok(Family::Ring),
            other => Err(Error::Parameter(format!("unknown topology `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cmp {
    Below,
    Equal,
    Above,
    /// Within `EPS_BOUNDARY` but not equal.
    Near,
}

pub(crate) fn compare(tau: f64, curve: f64) -> Cmp {
    if tau == curve {
        Cmp::Equal
    } else if (tau - curve).abs() < EPS_BOUNDARY {
        Cmp::Near
    } else if tau < curve {
        Cmp::Below
    } else {
        Cmp::Above
    }
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tau must lie in (0, 1), got {tau}")))
    }
}

pub fn thresholds(family: Family, n: usize, beta: f64, tau: f64, t: usize) -> Result<Vec<f64>> {
    match family {
        Family::Complete => thresholds_complete(n, beta, tau, t),
        Family::Star => thresholds_star(n, beta, tau, t),
        Family::Ring => thresholds_ring(n, beta, tau, t),
    }
}

pub fn classify(family: Family, n: usize, beta: f64, tau: f64, mode: ActivityMode) -> Result<RegionLabel> {
    match family {
        Family::Complete => classify_complete(n, beta, tau, mode),
        Family::Star => classify_star(n, beta, tau, mode),
        Family::Ring => classify_ring(n, beta, tau, mode),
    }
}

/// The curves that bound the regions at this `β`, as `(name, τ-value)`.
pub fn boundary_curves(family: Family, n: usize, beta: f64, mode: ActivityMode) -> Result<Vec<(String, f64)>> {
    let c = ClassifierCurves::new(n, beta)?;
    let nf = n as f64;
    let named = |v: &[(&str, f64)]| v.iter().map(|(k, x)| (k.to_string(), *x)).collect();
    Ok(match (family, mode) {
        (Family::Complete, ActivityMode::Wal) => named(&[
            ("gamma1", c.gamma1()),
            ("gamma2", c.gamma2()),
            ("gamma3", c.gamma3()),
        ]),
        (Family::Complete, ActivityMode::Ual) => named(&[("inv_n_minus_1", 1.0 / (nf - 1.0)), ("eta", c.eta())]),
        (Family::Star, ActivityMode::Wal) => named(&[
            ("delta1", c.delta1()),
            ("delta2", c.delta2()),
            ("delta3", c.delta3()),
        ]),
        (Family::Star, ActivityMode::Ual) => named(&[("mu", c.mu())]),
        (Family::Ring, _) => ring_edges(n, beta, mode)?
            .into_iter()
            .map(|(j, v)| (format!("edge{j}"), v))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_bands() {
        assert_eq!(compare(0.25, 0.25), Cmp::Equal);
        assert_eq!(compare(0.25 + 1e-12, 0.25), Cmp::Near);
        assert_eq!(compare(0.2, 0.25), Cmp::Below);
        assert_eq!(compare(0.3, 0.25), Cmp::Above);
    }

    #[test]
    fn label_strings() {
        assert_eq!(RegionLabel::Alpha(3).to_string(), "Alpha(3)");
        assert_eq!(RegionLabel::Oscillating2.to_string(), "Oscillating2");
        assert_eq!("Ring".parse::<Family>().unwrap(), Family::Ring);
        assert!("file".parse::<Family>().is_err());
    }

    #[test]
    fn curve_listing() {
        let v = boundary_curves(Family::Complete, 5, 2.0, ActivityMode::Wal).unwrap();
        assert_eq!(v[0].0, "gamma1");
        assert!((v[0].1 - 5.0 / 24.0).abs() < 1e-15);
        let v = boundary_curves(Family::Ring, 21, 2.0, ActivityMode::Wal).unwrap();
        assert_eq!(v.len(), 7);
        assert!(boundary_curves(Family::Ring, 21, 0.5, ActivityMode::Wal).is_err());
    }
}
