use super::curves::T_CAP;
use super::{check_tau, compare, Cmp, ClassifierCurves, RegionLabel, EPS_BOUNDARY};
use crate::error::Result;
use crate::weights::ActivityMode;

/// Closed-form thresholds on the star graph (centre = agent 0) at step `t`.
pub fn thresholds_star(n: usize, beta: f64, tau: f64, t: usize) -> Result<Vec<f64>> {
    let c = ClassifierCurves::new(n, beta)?;
    check_tau(tau)?;
    let (th1, th2) = centre_leaf(&c, tau, t);
    let mut theta = vec![th2; n];
    theta[0] = th1;
    Ok(theta)
}

fn centre_leaf(c: &ClassifierCurves, tau: f64, t: usize) -> (f64, f64) {
    let r = c.r();
    let lim = r / (1.0 + r) * tau;
    let decay = c.lambda_s().powi(t as i32);
    (lim * (1.0 - decay), lim * (1.0 + decay / r))
}

pub fn classify_star(n: usize, beta: f64, tau: f64, mode: ActivityMode) -> Result<RegionLabel> {
    let c = ClassifierCurves::new(n, beta)?;
    check_tau(tau)?;
    let root = ((n - 1) as f64).sqrt();
    Ok(match mode {
        ActivityMode::Wal if beta > root => wal_trichotomy(&c, tau),
        ActivityMode::Wal if beta >= 1.0 => wal_race(&c, tau),
        ActivityMode::Wal => wal_oscillation(&c, tau),
        ActivityMode::Ual if beta >= root => ual_race(&c, tau),
        ActivityMode::Ual => match compare(tau, c.mu()) {
            Cmp::Near => RegionLabel::Boundary,
            Cmp::Below => RegionLabel::AllActive,
            Cmp::Equal => RegionLabel::Oscillating2,
            Cmp::Above => RegionLabel::AllInactive,
        },
    })
}

fn wal_trichotomy(c: &ClassifierCurves, tau: f64) -> RegionLabel {
    match compare(tau, c.delta1()) {
        Cmp::Near => RegionLabel::Boundary,
        Cmp::Below => RegionLabel::AllActive,
        _ => match compare(tau, c.delta2()) {
            Cmp::Near => RegionLabel::Boundary,
            Cmp::Above => RegionLabel::AllInactive,
            _ => RegionLabel::Frozen,
        },
    }
}

fn wal_oscillation(c: &ClassifierCurves, tau: f64) -> RegionLabel {
    match compare(tau, c.delta3()) {
        Cmp::Near => RegionLabel::Boundary,
        Cmp::Below | Cmp::Equal => RegionLabel::AllActive,
        Cmp::Above => match compare(tau, c.delta1()) {
            Cmp::Near => RegionLabel::Boundary,
            Cmp::Above => RegionLabel::AllInactive,
            _ => RegionLabel::Oscillating2,
        },
    }
}

/// `1 ≤ β ≤ √(n−1)`: after one step the actions alternate between the
/// centre and the leaves until the leaf threshold either drops to
/// `β/(β+1)` at an even step (all active) or exceeds `1/(β+1)` at an odd
/// step (all inactive).
fn wal_race(c: &ClassifierCurves, tau: f64) -> RegionLabel {
    let (n, beta) = (c.n as f64, c.beta);
    match compare(tau, beta / (n - 1.0)) {
        Cmp::Near => return RegionLabel::Boundary,
        Cmp::Below | Cmp::Equal => return RegionLabel::AllActive,
        Cmp::Above => {}
    }
    match compare(tau, 1.0 / beta) {
        Cmp::Near => return RegionLabel::Boundary,
        Cmp::Above => return RegionLabel::AllInactive,
        _ => {}
    }
    let (on, off) = (beta / (beta + 1.0), 1.0 / (beta + 1.0));
    let mut margin = f64::INFINITY;
    for t in 2..=T_CAP {
        let (_, th2) = centre_leaf(c, tau, t);
        let (level, violated, label) = if t % 2 == 0 {
            (on, th2 <= on, RegionLabel::AllActive)
        } else {
            (off, th2 > off, RegionLabel::AllInactive)
        };
        margin = margin.min((th2 - level).abs());
        if violated {
            return if margin < EPS_BOUNDARY { RegionLabel::Boundary } else { label };
        }
    }
    RegionLabel::Boundary
}

/// `β ≥ √(n−1)`: thresholds move monotonically; the outcome is decided by
/// whichever happens first, the centre's threshold exceeding `1/n` (all
/// inactive) or the leaves' threshold dropping to `1/2` (all active). A tie
/// resolves to all active.
fn ual_race(c: &ClassifierCurves, tau: f64) -> RegionLabel {
    let centre_level = 1.0 / c.n as f64;
    let mut margin = f64::INFINITY;
    for t in 1..=T_CAP {
        let (th1, th2) = centre_leaf(c, tau, t);
        let centre_off = th1 > centre_level;
        let leaves_on = th2 <= 0.5;
        margin = margin.min((th2 - 0.5).abs());
        // once the leaves switch on, the centre's comparison no longer matters
        if !leaves_on {
            margin = margin.min((th1 - centre_level).abs());
        }
        if centre_off || leaves_on {
            if margin < EPS_BOUNDARY {
                return RegionLabel::Boundary;
            }
            return if leaves_on { RegionLabel::AllActive } else { RegionLabel::AllInactive };
        }
    }
    RegionLabel::Boundary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let th = thresholds_star(5, 2.0, 0.5, 0).unwrap();
        assert_eq!(th, vec![0.0, 0.5, 0.5, 0.5, 0.5]);
        let th = thresholds_star(5, 2.0, 0.5, 1).unwrap();
        assert!((th[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!(th.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn wal_examples() {
        let wal = ActivityMode::Wal;
        assert_eq!(classify_star(5, 0.5, 0.8, wal).unwrap(), RegionLabel::Oscillating2);
        let c = ClassifierCurves::new(20, 10.0).unwrap();
        let mid = 0.5 * (c.delta1() + c.delta2());
        assert_eq!(classify_star(20, 10.0, mid, wal).unwrap(), RegionLabel::Frozen);
        assert_eq!(classify_star(20, 10.0, 0.5 * c.delta1(), wal).unwrap(), RegionLabel::AllActive);
        assert_eq!(classify_star(20, 10.0, 0.99, wal).unwrap(), RegionLabel::AllInactive);
        assert_eq!(classify_star(5, 0.5, 0.3, wal).unwrap(), RegionLabel::AllActive);
        assert_eq!(classify_star(20, 3.0, 0.1, wal).unwrap(), RegionLabel::AllActive);
        assert_eq!(classify_star(20, 3.0, 0.4, wal).unwrap(), RegionLabel::AllInactive);
    }

    #[test]
    fn ual_floor() {
        for n in [2, 5, 20, 53] {
            for k in 1..400 {
                let beta = k as f64 * 0.05;
                for tau in [0.01, 0.2, 0.4, 0.5] {
                    assert_eq!(
                        classify_star(n, beta, tau, ActivityMode::Ual).unwrap(),
                        RegionLabel::AllActive,
                        "n={n} beta={beta} tau={tau}"
                    );
                }
            }
        }
    }

    #[test]
    fn ual_mu_split() {
        let c = ClassifierCurves::new(20, 2.0).unwrap();
        let ual = ActivityMode::Ual;
        assert_eq!(classify_star(20, 2.0, c.mu() - 0.01, ual).unwrap(), RegionLabel::AllActive);
        assert_eq!(classify_star(20, 2.0, c.mu() + 0.01, ual).unwrap(), RegionLabel::AllInactive);
        assert_eq!(classify_star(20, 2.0, c.mu(), ual).unwrap(), RegionLabel::Oscillating2);
    }

    fn ceil_log(base: f64, x: f64) -> Option<i64> {
        let v = x.ln() / base.ln();
        // skip points where rounding could flip the ceiling
        if (v - v.round()).abs() < 1e-7 {
            None
        } else {
            Some(v.ceil() as i64)
        }
    }

    #[test]
    fn wal_race_matches_ceil_log() {
        let mut compared = 0;
        for n in [5usize, 10, 20, 40, 53] {
            let root = ((n - 1) as f64).sqrt();
            for bi in 0..=60 {
                let beta = 1.0 + bi as f64 / 60.0 * (root - 1.0);
                let c = ClassifierCurves::new(n, beta).unwrap();
                let (r, lam) = (c.r(), c.lambda_s());
                if lam >= 0.0 {
                    continue;
                }
                let (lo, hi) = (beta / (n as f64 - 1.0), (1.0 / beta).min(0.999));
                for ti in 1..200 {
                    let tau = lo + ti as f64 / 200.0 * (hi - lo);
                    let xe = beta * (1.0 + r) / (tau * (beta + 1.0)) - r;
                    let y = (1.0 + r) / (tau * (beta + 1.0)) - r;
                    if !(xe > 0.0 && y / lam > 0.0) {
                        continue;
                    }
                    let (Some(ke), Some(ko)) = (ceil_log(lam * lam, xe), ceil_log(lam * lam, y / lam)) else {
                        continue;
                    };
                    if ke < 1 || ko < 1 {
                        continue;
                    }
                    let label = classify_star(n, beta, tau, ActivityMode::Wal).unwrap();
                    if label == RegionLabel::Boundary {
                        continue;
                    }
                    let expected = if ko >= ke { RegionLabel::AllActive } else { RegionLabel::AllInactive };
                    assert_eq!(label, expected, "n={n} beta={beta} tau={tau}");
                    compared += 1;
                }
            }
        }
        assert!(compared > 1000, "only {compared} points compared");
    }

    #[test]
    fn ual_race_matches_ceil_log() {
        let mut compared = 0;
        for n in [3usize, 5, 10, 20, 53] {
            let root = ((n - 1) as f64).sqrt();
            for bi in 0..=80 {
                let beta = root + bi as f64 * 0.25;
                let c = ClassifierCurves::new(n, beta).unwrap();
                let (r, lam) = (c.r(), c.lambda_s());
                if lam <= 0.0 {
                    continue;
                }
                for ti in 1..100 {
                    let tau = ti as f64 / 100.0;
                    let x0 = 1.0 - (r + 1.0) / (r * n as f64 * tau);
                    let x1 = (1.0 + r) / (2.0 * tau) - r;
                    if !(x0 > 0.0 && x0 < 1.0 && x1 > 0.0 && x1 < 1.0) {
                        continue;
                    }
                    let (Some(t0), Some(t1)) = (ceil_log(lam, x0), ceil_log(lam, x1)) else {
                        continue;
                    };
                    let label = classify_star(n, beta, tau, ActivityMode::Ual).unwrap();
                    if label == RegionLabel::Boundary {
                        continue;
                    }
                    let expected = if t0 >= t1 { RegionLabel::AllActive } else { RegionLabel::AllInactive };
                    assert_eq!(label, expected, "n={n} beta={beta} tau={tau}");
                    compared += 1;
                }
            }
        }
        assert!(compared > 500, "only {compared} points compared");
    }
}
