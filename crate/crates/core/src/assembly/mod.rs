//! Monolithic assembly of M a″ + C a′ + K a = F(t) for the coupled
//! surface/basin model with its absorbing boundaries, and for the plain
//! wave-box benchmark.
//!
//! Row scaling: basin rows are multiplied by ρ/c_f² so that the undamped
//! closed system carries the quadratic energy
//! ½ v_φᵀ(ρ/c_f²)M v_φ + ½ u_φᵀ ρK u_φ + ½ v_ηᵀ ερM v_η + ½ u_ηᵀ(σK + ρg M)u_η,
//! which makes the surface/basin coupling blocks of C exactly antisymmetric.

mod habc;
pub mod layout;
pub mod loads;

pub use layout::{FieldLayout, Side, SIDES};
pub use loads::{Load, TimeSignal};

use crate::error::{Error, Result};
use crate::fem::assemble::{
    add_mass_1d, add_mass_2d, add_stiffness_1d, add_stiffness_2d, assemble_line_filtered,
    assemble_line_mass, assemble_mass_2d_filtered, assemble_stiffness_2d_filtered,
};
use crate::fem::grid1d::LineGrid1D;
use crate::fem::grid2d::{Boundary, StructuredGrid2D};
use crate::pade::{compatibility_coefficients, CompatMode, PadeSet, PhysicalParams};
use crate::sparse::{SparseMatrixCsr, TripletBuilder};
use habc::{
    add_aux_line_equations, add_classical_flux, add_corner_odes, add_flux_replacement,
    BoundaryScales,
};

/// Treatment of an artificial boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryBc {
    /// Homogeneous Neumann (rigid wall / nothing assembled).
    Wall,
    /// First-order condition ∂_t u + c ∂_ν u = 0; equivalently the rational
    /// condition with every auxiliary field pinned to the main field.
    ClassicalOrder1,
    /// Padé-type high-order condition with auxiliary line fields.
    Habc,
}

/// Closure of the auxiliary line endpoints at the two bottom corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerClosure {
    /// Corner ODEs coupling the lateral and bottom auxiliary families.
    Ode,
    /// Homogeneous Neumann line endpoints.
    Neumann,
}

/// Choice of the compatibility coefficients (a_s, a_f) when the surface
/// condition is active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompatChoice {
    Mode(CompatMode),
    /// a_s = a_f = 1 although σ > 0: deliberately violates the constraint
    /// c_s/a_s = c_f/a_f (the unstable configuration). Must be acknowledged.
    ForceUnit { acknowledged: bool },
}

/// Surface forcing: nodal envelope over the surface nodes and a time signal.
#[derive(Debug, Clone)]
pub struct SurfaceLoadSpec {
    pub envelope: Vec<f64>,
    pub time: TimeSignal,
}

#[derive(Debug, Clone)]
pub struct ChwmConfig<'a> {
    pub grid: &'a StructuredGrid2D,
    pub params: PhysicalParams,
    pub pade: Option<&'a PadeSet>,
    pub lateral: BoundaryBc,
    pub bottom: BoundaryBc,
    pub corner: CornerClosure,
    pub compat: CompatChoice,
    pub surface_load: Option<SurfaceLoadSpec>,
    /// Restrict the energy diagnostics to elements with centroid x inside.
    pub energy_x_window: Option<(f64, f64)>,
}

/// The assembled second-order system.
pub struct SystemMatrices {
    pub dim: usize,
    pub m: SparseMatrixCsr,
    pub c: SparseMatrixCsr,
    pub k: SparseMatrixCsr,
    pub load: Load,
}

/// Quadratic-form operators for the surface and basin energies, over the
/// block-local dofs.
pub struct EnergyOperators {
    pub m_phi: SparseMatrixCsr,
    pub k_phi: SparseMatrixCsr,
    pub m_eta: SparseMatrixCsr,
    pub k_eta: SparseMatrixCsr,
}

impl EnergyOperators {
    /// (E_surface, E_basin) of a state restricted to the physical blocks.
    pub fn evaluate(&self, layout: &FieldLayout, u: &[f64], v: &[f64]) -> (f64, f64) {
        let pr = layout.phi_range();
        let u_phi = &u[pr.clone()];
        let v_phi = &v[pr];
        let e_basin =
            0.5 * self.m_phi.bilinear(v_phi, v_phi) + 0.5 * self.k_phi.bilinear(u_phi, u_phi);
        let e_surface = if layout.n_eta() > 0 {
            let er = layout.eta_range();
            let u_eta = &u[er.clone()];
            let v_eta = &v[er];
            0.5 * self.m_eta.bilinear(v_eta, v_eta) + 0.5 * self.k_eta.bilinear(u_eta, u_eta)
        } else {
            0.0
        };
        (e_surface, e_basin)
    }
}

pub struct AssembledSystem {
    pub layout: FieldLayout,
    pub sys: SystemMatrices,
    pub energy: EnergyOperators,
    /// Basin dofs of the surface nodes, aligned with the η nodes.
    pub surface_trace: Vec<usize>,
}

struct Builders {
    m: TripletBuilder,
    c: TripletBuilder,
    k: TripletBuilder,
}

impl Builders {
    fn new(dim: usize) -> Self {
        Builders {
            m: TripletBuilder::new(dim),
            c: TripletBuilder::new(dim),
            k: TripletBuilder::new(dim),
        }
    }
}

fn resolve_compat(cfg: &ChwmConfig) -> Result<(f64, f64)> {
    let ste = cfg.params.sigma > 0.0 && cfg.lateral == BoundaryBc::Habc;
    if !ste {
        return Ok((1.0, 1.0));
    }
    match cfg.compat {
        CompatChoice::Mode(mode) => compatibility_coefficients(&cfg.params, mode),
        CompatChoice::ForceUnit { acknowledged } => {
            if !acknowledged {
                Err(Error::config(
                    "a_s = a_f = 1 with surface tension violates the compatibility \
                     constraint and is typically unstable; pass --allow-incompatible \
                     to run it anyway",
                ))
            } else {
                Ok((1.0, 1.0))
            }
        }
    }
}

fn validate_bcs(
    pade: Option<&PadeSet>,
    lateral: BoundaryBc,
    bottom: BoundaryBc,
    corner: CornerClosure,
) -> Result<CornerClosure> {
    let needs_pade = lateral == BoundaryBc::Habc || bottom == BoundaryBc::Habc;
    if needs_pade && pade.is_none() {
        return Err(Error::config("high-order boundary requested without a Padé set"));
    }
    if bottom == BoundaryBc::Habc && lateral != BoundaryBc::Habc && corner == CornerClosure::Ode {
        return Err(Error::config(
            "bottom high-order boundary with corner ODEs needs the lateral high-order \
             boundary (the corner system references the lateral auxiliary fields)",
        ));
    }
    Ok(if lateral == BoundaryBc::Habc && bottom == BoundaryBc::Habc {
        corner
    } else {
        CornerClosure::Neumann
    })
}

/// Assemble the coupled surface/basin system.
pub fn assemble_chwm(cfg: &ChwmConfig) -> Result<AssembledSystem> {
    cfg.params.validate()?;
    let corner = validate_bcs(cfg.pade, cfg.lateral, cfg.bottom, cfg.corner)?;
    let (a_s, a_f) = resolve_compat(cfg)?;
    let ste = cfg.params.sigma > 0.0 && cfg.lateral == BoundaryBc::Habc;
    if ste && a_s * a_f == 0.0 {
        return Err(Error::config("surface condition with vanishing a_s·a_f"));
    }

    let grid = cfg.grid;
    let p = cfg.params;
    let surface_trace = grid.boundary_dofs(Boundary::Surface);
    let surface_line = grid.boundary_line(Boundary::Surface)?;
    let lateral_line = grid.boundary_line(Boundary::Inflow)?;
    let bottom_line = grid.boundary_line(Boundary::Bottom)?;

    let n_phi = grid.n_dofs();
    let n_eta = surface_trace.len();
    let has_sides = cfg.lateral == BoundaryBc::Habc;
    let has_bottom = cfg.bottom == BoundaryBc::Habc;
    let n_active = cfg.pade.map_or(0, |s| s.n_active());
    let layout = FieldLayout::new(
        n_phi,
        n_eta,
        lateral_line.n_nodes(),
        bottom_line.n_nodes(),
        if has_sides || has_bottom { n_active } else { 0 },
        has_sides,
        has_bottom,
        has_sides, // surface auxiliary scalars accompany the lateral lines
    )?;
    let mut b = Builders::new(layout.dim());

    // basin interior, scaled by ρ/c_f²
    add_mass_2d(grid, p.rho / (p.c_f * p.c_f), &|d| layout.phi(d), &mut b.m)?;
    add_stiffness_2d(grid, p.rho, &|d| layout.phi(d), &mut b.k)?;
    // coupling ∂_ν φ = ∂_t η on the surface
    add_mass_1d(
        &surface_line,
        -p.rho,
        &|i| layout.phi(surface_trace[i]),
        &|i| layout.eta(i),
        &mut b.c,
    )?;

    // surface equation rows
    if p.epsilon > 0.0 {
        add_mass_1d(
            &surface_line,
            p.epsilon * p.rho,
            &|i| layout.eta(i),
            &|i| layout.eta(i),
            &mut b.m,
        )?;
    }
    if p.sigma > 0.0 {
        add_stiffness_1d(
            &surface_line,
            p.sigma,
            &|i| layout.eta(i),
            &|i| layout.eta(i),
            &mut b.k,
        )?;
    }
    add_mass_1d(
        &surface_line,
        p.rho * p.g,
        &|i| layout.eta(i),
        &|i| layout.eta(i),
        &mut b.k,
    )?;
    add_mass_1d(
        &surface_line,
        p.rho,
        &|i| layout.eta(i),
        &|i| layout.phi(surface_trace[i]),
        &mut b.c,
    )?;

    // surface forcing, mass-weighted
    let mut load = Load::zero(layout.dim());
    if let Some(spec) = &cfg.surface_load {
        if spec.envelope.len() != n_eta {
            return Err(Error::config(format!(
                "surface load envelope has {} values for {} surface nodes",
                spec.envelope.len(),
                n_eta
            )));
        }
        let mass_s = assemble_line_mass(&surface_line, 1.0)?;
        let mut weighted = vec![0.0; n_eta];
        mass_s.matvec(&spec.envelope, &mut weighted)?;
        for (i, w) in weighted.iter().enumerate() {
            load.spatial[layout.eta(i)] = *w;
        }
        load.time = spec.time.clone();
    }

    // lateral boundaries
    let lateral_traces: [Vec<usize>; 2] = [
        grid.boundary_dofs(Boundary::Inflow),
        grid.boundary_dofs(Boundary::Outflow),
    ];
    match cfg.lateral {
        BoundaryBc::Wall => {}
        BoundaryBc::ClassicalOrder1 => {
            for side in SIDES {
                let trace: Vec<usize> = lateral_traces[side as usize]
                    .iter()
                    .map(|&d| layout.phi(d))
                    .collect();
                add_classical_flux(
                    &lateral_line,
                    &trace,
                    BoundaryScales {
                        rho: p.rho,
                        c: p.c_f,
                        a: 1.0,
                    },
                    &mut b.c,
                )?;
            }
        }
        BoundaryBc::Habc => {
            let pade = cfg.pade.expect("validated");
            let top = lateral_line.n_nodes() - 1;
            for side in SIDES {
                let trace: Vec<usize> = lateral_traces[side as usize]
                    .iter()
                    .map(|&d| layout.phi(d))
                    .collect();
                let aux = |k: usize, node: usize| layout.side_line(side, k, node);
                add_flux_replacement(
                    &lateral_line,
                    &trace,
                    &aux,
                    pade,
                    BoundaryScales {
                        rho: p.rho,
                        c: p.c_f,
                        a: a_f,
                    },
                    &mut b.c,
                )?;
                add_aux_line_equations(
                    &lateral_line,
                    &trace,
                    &aux,
                    pade,
                    a_f,
                    p.c_f,
                    &mut b.m,
                    &mut b.k,
                )?;

                // top endpoint: c_f²∂_ν φ_n = c_f²∂_t η_n at the surface corner
                let eta_p = match side {
                    Side::In => layout.eta(0),
                    Side::Out => layout.eta(n_eta - 1),
                };
                for (k, &n) in pade.active().iter().enumerate() {
                    let cn = pade.coeff(n);
                    let phi_n_top = layout.side_line(side, k, top);
                    let eta_n = layout.side_eta_aux(side, k);
                    b.c.add(phi_n_top, eta_n, -p.c_f * p.c_f);

                    // auxiliary surface scalar at the corner
                    if ste {
                        b.m.add(eta_n, eta_n, p.epsilon * p.rho * (1.0 + a_s * a_s * cn));
                        b.m.add(eta_n, eta_p, -p.epsilon * p.rho * a_s * a_s * (1.0 + cn));
                    } else if p.epsilon > 0.0 {
                        b.m.add(eta_n, eta_n, p.epsilon * p.rho);
                    }
                    b.k.add(eta_n, eta_n, p.rho * p.g);
                    b.c.add(eta_n, phi_n_top, p.rho);
                }

                // σ∂_ν η replacement at the surface endpoint (σ/c_s = ερ c_s)
                if ste {
                    let c_s = p.c_s().expect("ste implies c_s");
                    let f = p.epsilon * p.rho * c_s * a_s;
                    let w = pade.two_over_m();
                    b.c.add(eta_p, eta_p, f * (1.0 + w * pade.sum_active()));
                    for (k, &n) in pade.active().iter().enumerate() {
                        b.c.add(eta_p, layout.side_eta_aux(side, k), -f * w * pade.coeff(n));
                    }
                }
            }
        }
    }

    // bottom boundary (a = 1 there; the compatibility coefficients belong to
    // the surface-coupled lateral condition)
    let bottom_trace: Vec<usize> = grid
        .boundary_dofs(Boundary::Bottom)
        .iter()
        .map(|&d| layout.phi(d))
        .collect();
    match cfg.bottom {
        BoundaryBc::Wall => {}
        BoundaryBc::ClassicalOrder1 => {
            add_classical_flux(
                &bottom_line,
                &bottom_trace,
                BoundaryScales {
                    rho: p.rho,
                    c: p.c_f,
                    a: 1.0,
                },
                &mut b.c,
            )?;
        }
        BoundaryBc::Habc => {
            let pade = cfg.pade.expect("validated");
            let aux = |k: usize, node: usize| layout.bottom_line(k, node);
            add_flux_replacement(
                &bottom_line,
                &bottom_trace,
                &aux,
                pade,
                BoundaryScales {
                    rho: p.rho,
                    c: p.c_f,
                    a: 1.0,
                },
                &mut b.c,
            )?;
            add_aux_line_equations(
                &bottom_line,
                &bottom_trace,
                &aux,
                pade,
                1.0,
                p.c_f,
                &mut b.m,
                &mut b.k,
            )?;
        }
    }

    if corner == CornerClosure::Ode {
        let pade = cfg.pade.expect("validated");
        let last_bottom = bottom_line.n_nodes() - 1;
        for side in SIDES {
            let bottom_corner_node = match side {
                Side::In => 0,
                Side::Out => last_bottom,
            };
            add_corner_odes(
                &|k| layout.side_line(side, k, 0),
                &|k| layout.bottom_line(k, bottom_corner_node),
                pade,
                p.c_f,
                &mut b.c,
            );
        }
    }

    let energy = chwm_energy_operators(grid, &surface_line, p, cfg.energy_x_window)?;
    Ok(AssembledSystem {
        sys: SystemMatrices {
            dim: layout.dim(),
            m: b.m.compile()?,
            c: b.c.compile()?,
            k: b.k.compile()?,
            load,
        },
        layout,
        energy,
        surface_trace,
    })
}

/// Energy operators of the coupled model, optionally windowed in x.
pub fn chwm_energy_operators(
    grid: &StructuredGrid2D,
    surface_line: &LineGrid1D,
    p: PhysicalParams,
    x_window: Option<(f64, f64)>,
) -> Result<EnergyOperators> {
    let keep2 = |cx: f64, _cy: f64| x_window.is_none_or(|(a, b)| cx >= a && cx <= b);
    let keep1 = |cx: f64| x_window.is_none_or(|(a, b)| cx >= a && cx <= b);
    Ok(EnergyOperators {
        m_phi: assemble_mass_2d_filtered(grid, p.rho / (p.c_f * p.c_f), &keep2)?,
        k_phi: assemble_stiffness_2d_filtered(grid, p.rho, &keep2)?,
        m_eta: assemble_line_filtered(surface_line, p.epsilon * p.rho, &keep1, true)?,
        k_eta: {
            let mut kb = TripletBuilder::new(surface_line.n_nodes());
            let gm = assemble_line_filtered(surface_line, p.rho * p.g, &keep1, true)?;
            let ks = assemble_line_filtered(surface_line, p.sigma, &keep1, false)?;
            for (r, c, v) in gm.entries().chain(ks.entries()) {
                kb.add(r, c, v);
            }
            kb.compile()?
        },
    })
}

#[derive(Debug, Clone)]
pub struct WaveBoxConfig<'a> {
    pub grid: &'a StructuredGrid2D,
    pub c: f64,
    pub pade: Option<&'a PadeSet>,
    pub lateral: BoundaryBc,
    pub bottom: BoundaryBc,
    pub corner: CornerClosure,
}

/// Assemble the plain wave equation on a box (no surface field): rows are
/// (1/c²)∂_t²u − Δu with the selected artificial boundaries on the lateral
/// and bottom edges and a wall on top.
pub fn assemble_wave_box(cfg: &WaveBoxConfig) -> Result<AssembledSystem> {
    if !(cfg.c > 0.0) {
        return Err(Error::config("wave speed must be positive"));
    }
    let corner = validate_bcs(cfg.pade, cfg.lateral, cfg.bottom, cfg.corner)?;
    let grid = cfg.grid;
    let lateral_line = grid.boundary_line(Boundary::Inflow)?;
    let bottom_line = grid.boundary_line(Boundary::Bottom)?;
    let has_sides = cfg.lateral == BoundaryBc::Habc;
    let has_bottom = cfg.bottom == BoundaryBc::Habc;
    let n_active = cfg.pade.map_or(0, |s| s.n_active());
    let layout = FieldLayout::new(
        grid.n_dofs(),
        0,
        lateral_line.n_nodes(),
        bottom_line.n_nodes(),
        if has_sides || has_bottom { n_active } else { 0 },
        has_sides,
        has_bottom,
        false,
    )?;
    let mut b = Builders::new(layout.dim());

    add_mass_2d(grid, 1.0 / (cfg.c * cfg.c), &|d| layout.phi(d), &mut b.m)?;
    add_stiffness_2d(grid, 1.0, &|d| layout.phi(d), &mut b.k)?;

    let scales = BoundaryScales {
        rho: 1.0,
        c: cfg.c,
        a: 1.0,
    };
    let lateral_traces: [Vec<usize>; 2] = [
        grid.boundary_dofs(Boundary::Inflow),
        grid.boundary_dofs(Boundary::Outflow),
    ];
    for side in SIDES {
        let trace: Vec<usize> = lateral_traces[side as usize]
            .iter()
            .map(|&d| layout.phi(d))
            .collect();
        match cfg.lateral {
            BoundaryBc::Wall => {}
            BoundaryBc::ClassicalOrder1 => {
                add_classical_flux(&lateral_line, &trace, scales, &mut b.c)?;
            }
            BoundaryBc::Habc => {
                let pade = cfg.pade.expect("validated");
                let aux = |k: usize, node: usize| layout.side_line(side, k, node);
                add_flux_replacement(&lateral_line, &trace, &aux, pade, scales, &mut b.c)?;
                add_aux_line_equations(
                    &lateral_line,
                    &trace,
                    &aux,
                    pade,
                    1.0,
                    cfg.c,
                    &mut b.m,
                    &mut b.k,
                )?;
                // top endpoints of the auxiliary lines: homogeneous Neumann
            }
        }
    }
    let bottom_trace: Vec<usize> = grid
        .boundary_dofs(Boundary::Bottom)
        .iter()
        .map(|&d| layout.phi(d))
        .collect();
    match cfg.bottom {
        BoundaryBc::Wall => {}
        BoundaryBc::ClassicalOrder1 => {
            add_classical_flux(&bottom_line, &bottom_trace, scales, &mut b.c)?;
        }
        BoundaryBc::Habc => {
            let pade = cfg.pade.expect("validated");
            let aux = |k: usize, node: usize| layout.bottom_line(k, node);
            add_flux_replacement(&bottom_line, &bottom_trace, &aux, pade, scales, &mut b.c)?;
            add_aux_line_equations(
                &bottom_line,
                &bottom_trace,
                &aux,
                pade,
                1.0,
                cfg.c,
                &mut b.m,
                &mut b.k,
            )?;
        }
    }
    if corner == CornerClosure::Ode {
        let pade = cfg.pade.expect("validated");
        let last_bottom = bottom_line.n_nodes() - 1;
        for side in SIDES {
            let bottom_corner_node = match side {
                Side::In => 0,
                Side::Out => last_bottom,
            };
            add_corner_odes(
                &|k| layout.side_line(side, k, 0),
                &|k| layout.bottom_line(k, bottom_corner_node),
                pade,
                cfg.c,
                &mut b.c,
            );
        }
    }

    let surface_line = grid.boundary_line(Boundary::Surface)?;
    let energy = EnergyOperators {
        m_phi: assemble_mass_2d_filtered(grid, 1.0 / (cfg.c * cfg.c), &|_, _| true)?,
        k_phi: assemble_stiffness_2d_filtered(grid, 1.0, &|_, _| true)?,
        m_eta: SparseMatrixCsr::zero(surface_line.n_nodes()),
        k_eta: SparseMatrixCsr::zero(surface_line.n_nodes()),
    };
    Ok(AssembledSystem {
        sys: SystemMatrices {
            dim: layout.dim(),
            m: b.m.compile()?,
            c: b.c.compile()?,
            k: b.k.compile()?,
            load: Load::zero(layout.dim()),
        },
        layout,
        energy,
        surface_trace: grid.boundary_dofs(Boundary::Surface),
    })
}
