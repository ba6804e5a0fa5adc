use super::{check_tau, compare, Cmp, ClassifierCurves, RegionLabel};
use crate::error::Result;
use crate::weights::ActivityMode;

/// Closed-form thresholds on the complete graph at step `t`.
pub fn thresholds_complete(n: usize, beta: f64, tau: f64, t: usize) -> Result<Vec<f64>> {
    let c = ClassifierCurves::new(n, beta)?;
    check_tau(tau)?;
    let nf = n as f64;
    let decay = c.lambda_c().powi(t as i32);
    let lim = (nf - 1.0) / nf * tau;
    let mut theta = vec![lim * (1.0 + decay / (nf - 1.0)); n];
    theta[0] = lim * (1.0 - decay);
    Ok(theta)
}

pub fn classify_complete(n: usize, beta: f64, tau: f64, mode: ActivityMode) -> Result<RegionLabel> {
    let c = ClassifierCurves::new(n, beta)?;
    check_tau(tau)?;
    use Cmp::*;
    use RegionLabel::*;
    let label = match (mode, beta > 1.0) {
        (ActivityMode::Wal, true) => match compare(tau, c.gamma1()) {
            Near => Boundary,
            Below => AllActive,
            _ => match compare(tau, c.gamma2()) {
                Near => Boundary,
                Above => AllInactive,
                _ => Frozen,
            },
        },
        (ActivityMode::Wal, false) => match compare(tau, c.gamma3()) {
            Near => Boundary,
            Below | Equal => AllActive,
            Above => AllInactive,
        },
        (ActivityMode::Ual, true) => match compare(tau, 1.0 / (n as f64 - 1.0)) {
            Near => Boundary,
            Below => AllActive,
            Equal => Frozen,
            Above => AllInactive,
        },
        (ActivityMode::Ual, false) => match compare(tau, c.eta()) {
            Near => Boundary,
            Below | Equal => AllActive,
            Above => AllInactive,
        },
    };
    Ok(label)
}
