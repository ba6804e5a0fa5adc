use std::fmt::Write as _;
use std::path::Path;

use super::{EgoCell, PhaseCell};
use crate::analytic::{boundary_curves, Family};
use crate::error::{Error, Result};
use crate::weights::ActivityMode;

/// 17 significant digits, positional unless the magnitude is extreme.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn phase_csv(cells: &[PhaseCell]) -> String {
    let mut out = String::from("beta,tau,label,steps,period,agreement\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt17(c.beta),
            fmt17(c.tau),
            c.label,
            c.steps,
            c.period,
            c.agreement
        );
    }
    out
}

pub fn ego_csv(cells: &[EgoCell]) -> String {
    let mut out = String::from("beta,tau,mean_active,indeterminate\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt17(c.beta),
            fmt17(c.tau),
            fmt17(c.mean_active),
            c.indeterminate
        );
    }
    out
}

/// Boundary curves sampled on a β grid, one `(beta, curve, value)` row per
/// sample. β values outside a curve's domain are skipped.
pub fn curves_csv(family: Family, n: usize, mode: ActivityMode, betas: &[f64]) -> Result<String> {
    let mut out = String::from("beta,curve,value\n");
    for &beta in betas {
        let curves = match boundary_curves(family, n, beta, mode) {
            Ok(c) => c,
            Err(Error::OutOfRange(_)) => continue,
            Err(e) => return Err(e),
        };
        for (name, value) in curves {
            let _ = writeln!(out, "{},{},{}", fmt17(beta), name, fmt17(value));
        }
    }
    Ok(out)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_phase_csv(cells: &[PhaseCell], path: &Path) -> Result<()> {
    write_text(path, &phase_csv(cells))
}

pub fn write_ego_csv(cells: &[EgoCell], path: &Path) -> Result<()> {
    write_text(path, &ego_csv(cells))
}

pub fn write_curves_csv(family: Family, n: usize, mode: ActivityMode, betas: &[f64], path: &Path) -> Result<()> {
    write_text(path, &curves_csv(family, n, mode, betas)?)
}
