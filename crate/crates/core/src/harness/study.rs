//! Study drivers: mesh/order convergence tables and the compatibility
//! experiment (constrained coefficients versus a_s = a_f = 1).

use crate::assembly::CompatChoice;
use crate::error::Result;
use crate::harness::metrics::compute_errors;
use crate::harness::{run_case, run_reference, CaseSpec, RunRecord};

#[derive(Debug, Clone, Copy)]
pub struct StudyRow {
    pub h: f64,
    pub order: usize,
    pub norm_eta: f64,
    pub norm_phi: f64,
}

/// Errors against the case's reference for each (mesh, order) pair. One
/// reference run per mesh, reused across orders.
pub fn convergence_study(case: &CaseSpec, hs: &[f64], orders: &[usize]) -> Result<Vec<StudyRow>> {
    let mut rows = Vec::new();
    for &h in hs {
        let mut mesh_case = case.clone();
        mesh_case.h = h;
        let reference = run_reference(&mesh_case)?;
        for &order in orders {
            let mut c = mesh_case.clone();
            c.pade_order = order;
            let run = run_case(&c)?;
            let err = compute_errors(&run, &reference)?;
            rows.push(StudyRow {
                h,
                order,
                norm_eta: err.norm_eta,
                norm_phi: err.norm_phi,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug)]
pub struct IncompatibilityReport {
    pub compatible: RunRecord,
    pub incompatible: RunRecord,
    /// Largest post-excitation basin energy of the incompatible run over its
    /// value when the excitation stops.
    pub growth_ratio: f64,
    /// True when that ratio exceeds 10 (the diagnostic threshold; growth is
    /// documented, not asserted).
    pub growth_flagged: bool,
}

/// Run a case twice: with its compatibility coefficients and with both
/// coefficients forced to one. Reports basin-energy growth of the forced
/// run without asserting on it.
pub fn incompatibility_experiment(case: &CaseSpec) -> Result<IncompatibilityReport> {
    let compatible = run_case(case)?;
    let mut forced = case.clone();
    forced.compat = CompatChoice::ForceUnit { acknowledged: true };
    let incompatible = run_case(&forced)?;

    let t_excit = case.t_excit;
    let at_excit = incompatible
        .times
        .iter()
        .position(|&t| t >= t_excit)
        .unwrap_or(0);
    let base = incompatible.e_basin[at_excit].max(f64::MIN_POSITIVE);
    let peak_after = incompatible.e_basin[at_excit..]
        .iter()
        .fold(0.0_f64, |a, &v| a.max(v));
    let growth_ratio = peak_after / base;
    Ok(IncompatibilityReport {
        compatible,
        incompatible,
        growth_ratio,
        growth_flagged: growth_ratio > 10.0,
    })
}
