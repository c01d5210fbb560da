//! Experiment harness: the case catalog, truncated and reference runs,
//! recorded time series, and the error/energy metrics built on them.

pub mod benchmark;
pub mod excitation;
pub mod metrics;
pub mod study;

use crate::assembly::{
    assemble_chwm, AssembledSystem, BoundaryBc, ChwmConfig, CompatChoice, CornerClosure,
    SurfaceLoadSpec,
};
use crate::error::{Error, Result};
use crate::fem::grid2d::{EllipseMask, StructuredGrid2D};
use crate::newmark::{run as newmark_run, NewmarkParams, State};
use crate::pade::{CompatMode, PadeSet, PhysicalParams};
use serde::{Deserialize, Serialize};

/// One computational case: physics, geometry, discretization, boundary
/// treatment, and how its reference run is built.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub id: String,
    pub params: PhysicalParams,
    /// Domain half-length; the basin is [−l, l] × [−depth, 0].
    pub l: f64,
    pub depth: f64,
    /// Reference half-length; `None` when no reference run is defined.
    pub l_ref: Option<f64>,
    pub t_final: f64,
    pub t_e: f64,
    pub t_excit: f64,
    pub amplitude: f64,
    pub n_modes: usize,
    pub x0: f64,
    pub h: f64,
    pub dt: f64,
    pub p: usize,
    pub pade_order: usize,
    pub keep_fraction: f64,
    pub lateral: BoundaryBc,
    pub bottom: BoundaryBc,
    pub corner: CornerClosure,
    pub compat: CompatChoice,
    /// Obstacle characteristic lengths (x, y) and interpretation.
    pub obstacle: Option<EllipseMask>,
    pub obstacle_lengths_are_full_axes: bool,
    /// Reference lateral treatment: high-order condition at `ref_order`
    /// (large celerities) or unreachable walls (small celerities).
    pub ref_lateral_habc: bool,
    pub ref_order: usize,
    pub sample_stride: usize,
    pub snapshot_times: Vec<f64>,
    /// Restrict recorded energies to elements with centroid x in the window.
    pub energy_x_window: Option<(f64, f64)>,
}

impl CaseSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.t_excit <= self.t_final) {
            return Err(Error::config(format!(
                "t_excit = {} must not exceed t_final = {}",
                self.t_excit, self.t_final
            )));
        }
        if let Some(lr) = self.l_ref {
            if !(lr >= self.l) {
                return Err(Error::config(format!(
                    "l_ref = {lr} must be at least l = {}",
                    self.l
                )));
            }
        }
        if !(self.keep_fraction > 0.0 && self.keep_fraction <= 1.0) {
            return Err(Error::config(format!(
                "keep_fraction must lie in (0, 1], got {}",
                self.keep_fraction
            )));
        }
        if self.pade_order == 0 {
            return Err(Error::config("pade_order must be at least 1"));
        }
        if !(self.h > 0.0 && self.dt > 0.0) {
            return Err(Error::config("h and dt must be positive"));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Coarsened profile that keeps the full suite desk-sized: h = 0.01 m
    /// (0.005 m for the obstacle case, whose depth is l/4) and approximation
    /// orders capped so the reference stays tractable.
    pub fn desk(mut self) -> Self {
        self.h = if self.obstacle.is_some() { 0.005 } else { 0.01 };
        if self.pade_order > 4096 {
            self.pade_order = 4096;
            self.keep_fraction = self.keep_fraction.max(0.003);
        }
        self.ref_order = self.ref_order.min(1024);
        self
    }

    /// The obstacle mask with the configured axis interpretation applied.
    pub fn obstacle_mask(&self) -> Option<EllipseMask> {
        self.obstacle.map(|e| {
            if self.obstacle_lengths_are_full_axes {
                EllipseMask {
                    center: e.center,
                    semi_axes: (e.semi_axes.0 / 2.0, e.semi_axes.1 / 2.0),
                }
            } else {
                e
            }
        })
    }
}

fn water_like(sigma: f64, epsilon: f64, c_f: f64) -> PhysicalParams {
    PhysicalParams {
        rho: 1000.0,
        g: 9.81,
        sigma,
        epsilon,
        c_f,
    }
}

fn base_case(id: &str, params: PhysicalParams, t_final: f64, l_ref: Option<f64>) -> CaseSpec {
    CaseSpec {
        id: id.to_string(),
        params,
        l: 0.1,
        depth: 0.1,
        l_ref,
        t_final,
        t_e: 0.1,
        t_excit: 0.1,
        amplitude: 1000.0,
        n_modes: 20,
        x0: 0.0,
        h: 0.0025,
        dt: 0.002,
        p: 4,
        pade_order: 32,
        keep_fraction: 1.0,
        lateral: BoundaryBc::Habc,
        bottom: BoundaryBc::Habc,
        corner: CornerClosure::Ode,
        compat: CompatChoice::Mode(CompatMode::A),
        obstacle: None,
        obstacle_lengths_are_full_axes: false,
        ref_lateral_habc: false,
        ref_order: 32,
        sample_stride: 1,
        snapshot_times: Vec::new(),
        energy_x_window: None,
    }
}

/// Built-in cases. Geometry uses h = 0.0025 m and Δt = 0.002 s at paper
/// scale; `desk()` coarsens them.
pub fn case_catalog() -> Vec<CaseSpec> {
    let mut cases = Vec::new();
    cases.push(base_case("1", water_like(0.0, 0.0, 1.0), 1.5, Some(1.0)));

    cases.push(base_case("11", water_like(0.075, 1e-3, 1.0), 0.9, Some(0.5)));
    cases.push(base_case("12", water_like(0.075, 1e-9, 1.0), 0.9, Some(0.5)));

    let mut c211 = base_case("211", water_like(0.075, 1e-3, 100.0), 0.9, Some(0.5));
    c211.pade_order = 1024;
    c211.keep_fraction = 0.06;
    c211.ref_lateral_habc = true;
    c211.ref_order = 1024;
    cases.push(c211);

    let mut c311 = base_case("311", water_like(0.075, 1e-3, 1000.0), 0.9, None);
    c311.pade_order = 16384;
    c311.keep_fraction = 0.003;
    c311.ref_order = 1024;
    cases.push(c311);

    let mut special = base_case("special", water_like(0.075, 1e-3, 1500.0), 4.5, None);
    special.depth = 0.025;
    special.t_e = 0.2;
    special.t_excit = 2.4;
    special.x0 = -0.05;
    special.pade_order = 16384;
    special.keep_fraction = 0.0005;
    special.obstacle = Some(EllipseMask {
        center: (0.05, -0.01),
        semi_axes: (0.01, 0.005),
    });
    special.energy_x_window = Some((0.0, 0.1));
    cases.push(special);

    cases
}

pub fn case_by_id(id: &str) -> Result<CaseSpec> {
    case_catalog()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::config(format!("unknown case id '{id}'")))
}

/// Recorded time series of one run: surface and basin nodal values on the
/// comparison window plus the two energies per sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub case_id: String,
    pub times: Vec<f64>,
    pub eta_x: Vec<f64>,
    pub eta: Vec<Vec<f64>>,
    pub phi_coords: Vec<(f64, f64)>,
    pub phi: Vec<Vec<f64>>,
    pub e_surface: Vec<f64>,
    pub e_basin: Vec<f64>,
    pub t_excit: f64,
    /// (time, surface values, basin values) at requested snapshot times.
    pub snapshots: Vec<(f64, Vec<f64>, Vec<f64>)>,
}

impl RunRecord {
    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let data = serde_json::to_vec(self)
            .map_err(|e| Error::Numerical(format!("record serialization failed: {e}")))?;
        std::fs::write(path, data)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let data = std::fs::read(path)?;
        serde_json::from_slice(&data)
            .map_err(|e| Error::config(format!("record deserialization failed: {e}")))
    }
}

/// A grid plus its assembled system, ready to integrate.
pub struct PreparedRun {
    pub grid: StructuredGrid2D,
    pub assembled: AssembledSystem,
    /// Surface node indices recorded (window), into the full surface line.
    pub eta_window: Vec<usize>,
    /// Basin dofs recorded (window), y-major like a truncated grid.
    pub phi_window: Vec<usize>,
}

/// Build the truncated problem of a case.
pub fn prepare_truncated(case: &CaseSpec) -> Result<PreparedRun> {
    case.validate()?;
    let pade = PadeSet::reduced(case.pade_order, case.keep_fraction)?;
    prepare(case, case.l, case.lateral, case.bottom, case.corner, &pade, None)
}

/// Build the enlarged reference problem: same physics and discretization,
/// lateral boundaries either unreachable walls or the high-order condition
/// at `ref_order` with the full (unreduced) set, and the comparison window
/// restricted to [−l, l].
pub fn prepare_reference(case: &CaseSpec) -> Result<PreparedRun> {
    case.validate()?;
    let l_ref = case
        .l_ref
        .ok_or_else(|| Error::config(format!("case '{}' defines no reference domain", case.id)))?;
    let pade = PadeSet::full(case.ref_order)?;
    let lateral = if case.ref_lateral_habc {
        BoundaryBc::Habc
    } else {
        BoundaryBc::Wall
    };
    let bottom = case.bottom;
    let corner = if case.ref_lateral_habc {
        case.corner
    } else {
        CornerClosure::Neumann
    };
    prepare(case, l_ref, lateral, bottom, corner, &pade, Some(case.l))
}

fn prepare(
    case: &CaseSpec,
    half_len: f64,
    lateral: BoundaryBc,
    bottom: BoundaryBc,
    corner: CornerClosure,
    pade: &PadeSet,
    window_half_len: Option<f64>,
) -> Result<PreparedRun> {
    let grid = StructuredGrid2D::build(
        (-half_len, half_len, -case.depth, 0.0),
        case.h,
        case.p,
        case.obstacle_mask(),
    )?;
    let surface_xs = &grid.xs;
    let envelope: Vec<f64> = surface_xs
        .iter()
        .map(|&x| excitation::envelope(x, case.x0, case.l))
        .collect();
    let cfg = ChwmConfig {
        grid: &grid,
        params: case.params,
        pade: Some(pade),
        lateral,
        bottom,
        corner,
        compat: case.compat,
        surface_load: Some(SurfaceLoadSpec {
            envelope,
            time: excitation::time_signal(case.amplitude, case.n_modes, case.t_e, case.t_excit),
        }),
        energy_x_window: case.energy_x_window,
    };
    let assembled = assemble_chwm(&cfg)?;

    let tol = 0.5 * case.h / case.p as f64;
    let win = window_half_len.unwrap_or(half_len) + tol;
    let eta_window: Vec<usize> = (0..grid.xs.len())
        .filter(|&i| grid.xs[i].abs() <= win)
        .collect();
    let coords = grid.dof_coords();
    let phi_window: Vec<usize> = (0..coords.len())
        .filter(|&d| coords[d].0.abs() <= win)
        .collect();
    Ok(PreparedRun {
        grid,
        assembled,
        eta_window,
        phi_window,
    })
}

/// Integrate a prepared run and record the window series.
pub fn execute(case: &CaseSpec, prepared: &PreparedRun, initial: Option<State>) -> Result<RunRecord> {
    let sys = &prepared.assembled.sys;
    let layout = &prepared.assembled.layout;
    let energy = &prepared.assembled.energy;
    let params = NewmarkParams::average_acceleration(case.dt, case.n_steps());
    let state0 = initial.unwrap_or_else(|| State::zero(sys.dim));

    let coords = prepared.grid.dof_coords();
    let mut record = RunRecord {
        case_id: case.id.clone(),
        times: Vec::new(),
        eta_x: prepared.eta_window.iter().map(|&i| prepared.grid.xs[i]).collect(),
        eta: Vec::new(),
        phi_coords: prepared.phi_window.iter().map(|&d| coords[d]).collect(),
        phi: Vec::new(),
        e_surface: Vec::new(),
        e_basin: Vec::new(),
        t_excit: case.t_excit,
        snapshots: Vec::new(),
    };
    let mut snapshot_queue = case.snapshot_times.clone();
    snapshot_queue.sort_by(|a, b| a.partial_cmp(b).unwrap());

    newmark_run(sys, params, state0, case.sample_stride, |_, s| {
        record.times.push(s.t);
        record
            .eta
            .push(prepared.eta_window.iter().map(|&i| s.u[layout.eta(i)]).collect());
        record
            .phi
            .push(prepared.phi_window.iter().map(|&d| s.u[layout.phi(d)]).collect());
        let (es, eb) = energy.evaluate(layout, &s.u, &s.v);
        record.e_surface.push(es);
        record.e_basin.push(eb);
        while let Some(&t_want) = snapshot_queue.first() {
            if s.t + 0.5 * case.dt >= t_want {
                snapshot_queue.remove(0);
                let eta_full: Vec<f64> = (0..layout.n_eta()).map(|i| s.u[layout.eta(i)]).collect();
                let phi_full: Vec<f64> =
                    (0..layout.n_phi()).map(|d| s.u[layout.phi(d)]).collect();
                record.snapshots.push((s.t, eta_full, phi_full));
            } else {
                break;
            }
        }
        Ok(())
    })?;
    Ok(record)
}

/// Assemble and integrate the truncated problem.
pub fn run_case(case: &CaseSpec) -> Result<RunRecord> {
    let prepared = prepare_truncated(case)?;
    execute(case, &prepared, None)
}

/// Assemble and integrate the reference problem.
pub fn run_reference(case: &CaseSpec) -> Result<RunRecord> {
    let prepared = prepare_reference(case)?;
    execute(case, &prepared, None)
}
