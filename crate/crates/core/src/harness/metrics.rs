//! Error metrics against a reference run and energy series accessors.
//!
//! e(t) is the nodal sup-difference on the shared window normalized by the
//! space-time sup of the reference; E is its discrete L²-in-time norm via
//! the left-endpoint rectangle rule on the sampling grid.

use crate::error::{Error, Result};
use crate::harness::RunRecord;

#[derive(Debug, Clone)]
pub struct ErrorSeries {
    pub times: Vec<f64>,
    pub e_eta: Vec<f64>,
    pub e_phi: Vec<f64>,
    /// ‖e_η‖₂ over [0, T].
    pub norm_eta: f64,
    /// ‖e_φ‖₂ over [0, T].
    pub norm_phi: f64,
}

fn sup_abs(series: &[Vec<f64>]) -> f64 {
    series
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |a, &v| a.max(v.abs()))
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (&x, &y)| acc.max((x - y).abs()))
}

fn relative(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

fn l2_left_endpoint(times: &[f64], e: &[f64]) -> f64 {
    let mut acc = 0.0;
    for k in 0..times.len().saturating_sub(1) {
        acc += e[k] * e[k] * (times[k + 1] - times[k]);
    }
    acc.sqrt()
}

/// Compare a run against a reference with matching sampling and window.
pub fn compute_errors(run: &RunRecord, reference: &RunRecord) -> Result<ErrorSeries> {
    if run.times.len() != reference.times.len() {
        return Err(Error::config(format!(
            "mismatched sampling: {} vs {} samples",
            run.times.len(),
            reference.times.len()
        )));
    }
    for (a, b) in run.times.iter().zip(&reference.times) {
        if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
            return Err(Error::config(format!("mismatched sample times {a} vs {b}")));
        }
    }
    let check_window = |a: &[f64], b: &[f64], what: &str| -> Result<()> {
        if a.len() != b.len() {
            return Err(Error::config(format!(
                "mismatched {what} window: {} vs {} nodes",
                a.len(),
                b.len()
            )));
        }
        Ok(())
    };
    check_window(&run.eta_x, &reference.eta_x, "surface")?;
    for (a, b) in run.eta_x.iter().zip(&reference.eta_x) {
        if (a - b).abs() > 1e-9 {
            return Err(Error::config(format!("surface nodes misaligned: {a} vs {b}")));
        }
    }
    if run.phi_coords.len() != reference.phi_coords.len() {
        return Err(Error::config(format!(
            "mismatched basin window: {} vs {} nodes",
            run.phi_coords.len(),
            reference.phi_coords.len()
        )));
    }
    for (a, b) in run.phi_coords.iter().zip(&reference.phi_coords) {
        if (a.0 - b.0).abs() > 1e-9 || (a.1 - b.1).abs() > 1e-9 {
            return Err(Error::config("basin nodes misaligned"));
        }
    }

    let den_eta = sup_abs(&reference.eta);
    let den_phi = sup_abs(&reference.phi);
    let n = run.times.len();
    let mut e_eta = Vec::with_capacity(n);
    let mut e_phi = Vec::with_capacity(n);
    for k in 0..n {
        e_eta.push(relative(sup_diff(&run.eta[k], &reference.eta[k]), den_eta));
        e_phi.push(relative(sup_diff(&run.phi[k], &reference.phi[k]), den_phi));
    }
    let norm_eta = l2_left_endpoint(&run.times, &e_eta);
    let norm_phi = l2_left_endpoint(&run.times, &e_phi);
    Ok(ErrorSeries {
        times: run.times.clone(),
        e_eta,
        e_phi,
        norm_eta,
        norm_phi,
    })
}

/// Recorded energy series of a run.
pub fn compute_energies(run: &RunRecord) -> (&[f64], &[f64]) {
    (&run.e_surface, &run.e_basin)
}

/// Largest per-sample relative increase of a series after `t_start`
/// (0 when the series decays monotonically past that time).
pub fn worst_post_excitation_increase(times: &[f64], series: &[f64], t_start: f64) -> f64 {
    let peak = series.iter().fold(0.0_f64, |a, &v| a.max(v));
    if peak == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0_f64;
    for k in 0..series.len().saturating_sub(1) {
        if times[k] >= t_start {
            worst = worst.max((series[k + 1] - series[k]) / peak);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_record(values: Vec<Vec<f64>>) -> RunRecord {
        let n = values.len();
        RunRecord {
            case_id: "t".into(),
            times: (0..n).map(|k| k as f64 * 0.1).collect(),
            eta_x: vec![0.0, 1.0],
            eta: values.clone(),
            phi_coords: vec![(0.0, 0.0), (1.0, 0.0)],
            phi: values,
            e_surface: vec![0.0; n],
            e_basin: vec![0.0; n],
            t_excit: 0.0,
            snapshots: Vec::new(),
        }
    }

    #[test]
    fn self_comparison_is_zero() {
        let r = tiny_record(vec![vec![0.0, 0.0], vec![1.0, -2.0], vec![0.5, 0.25]]);
        let e = compute_errors(&r, &r).unwrap();
        assert!(e.e_eta.iter().all(|&v| v == 0.0));
        assert!(e.e_phi.iter().all(|&v| v == 0.0));
        assert_eq!(e.norm_eta, 0.0);
        assert_eq!(e.norm_phi, 0.0);
    }

    #[test]
    fn scaling_gives_proportional_error() {
        let base = tiny_record(vec![vec![0.0, 0.0], vec![1.0, -2.0], vec![0.5, 0.25]]);
        let delta = 1e-3;
        let scaled =
            tiny_record(base.eta.iter().map(|r| r.iter().map(|v| v * (1.0 + delta)).collect()).collect());
        let e = compute_errors(&scaled, &base).unwrap();
        // max|η_ref| per sample over global max, times δ
        assert!((e.e_eta[1] - delta).abs() < 1e-12);
        assert!((e.e_eta[2] - delta * 0.25).abs() < 1e-12);
    }

    #[test]
    fn mismatched_sampling_rejected() {
        let a = tiny_record(vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        let b = tiny_record(vec![vec![0.0, 0.0]]);
        assert!(compute_errors(&a, &b).is_err());
    }

    #[test]
    fn monotone_decay_has_no_increase() {
        let times = [0.0, 1.0, 2.0, 3.0];
        let series = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(worst_post_excitation_increase(&times, &series, 0.5), 0.0);
        let bumpy = [4.0, 3.0, 3.5, 1.0];
        assert!(worst_post_excitation_increase(&times, &bumpy, 0.5) > 0.1);
    }
}
